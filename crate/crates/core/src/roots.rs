//! Zeros of complex polynomials.
//!
//! Aberth-Ehrlich simultaneous iteration is the primary method; a companion
//! matrix eigensolve is the fallback. Every returned root set is residual
//! checked, so a failed solve surfaces as an error rather than bad roots.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::PolyError;
use crate::poly::ComplexPoly;

/// Accepted residual `|P(z_i)|` relative to `sum |a_j| |z_i|^j`.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy)]
pub struct RootFinder {
    pub max_iterations: usize,
    /// Skip the companion-matrix fallback (used to exercise the failure path).
    pub allow_fallback: bool,
}

impl Default for RootFinder {
    fn default() -> Self {
        Self { max_iterations: 500, allow_fallback: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootMethod {
    Aberth,
    Companion,
}

#[derive(Debug, Clone)]
pub struct Roots {
    pub roots: Vec<Complex64>,
    pub method: RootMethod,
    pub iterations: usize,
    /// Worst `|P(z_i)| / sum |a_j||z_i|^j`.
    pub max_residual: f64,
}

impl RootFinder {
    pub fn find(&self, poly: &ComplexPoly) -> Result<Roots, PolyError> {
        if poly.degree() == 0 {
            return Err(PolyError::Constant);
        }
        // exact zero low-order coefficients are roots at the origin
        let coeffs = poly.coeffs();
        let origin = coeffs.iter().take_while(|c| c.norm() == 0.0).count();
        let reduced = ComplexPoly::new(coeffs[origin..].to_vec())?;
        let mut roots = vec![Complex64::new(0.0, 0.0); origin];
        if reduced.degree() == 0 {
            return Ok(Roots { roots, method: RootMethod::Aberth, iterations: 0, max_residual: 0.0 });
        }

        let (found, iterations) = aberth(&reduced, self.max_iterations);
        let residual = worst_residual(&reduced, &found);
        if residual <= RESIDUAL_TOLERANCE {
            roots.extend(found);
            return Ok(Roots { roots, method: RootMethod::Aberth, iterations, max_residual: residual });
        }
        if !self.allow_fallback {
            return Err(PolyError::RootsNotConverged { iterations, residual });
        }
        let found = companion_eigenvalues(&reduced).ok_or(PolyError::RootsNotConverged { iterations, residual })?;
        let fallback_residual = worst_residual(&reduced, &found);
        if fallback_residual <= RESIDUAL_TOLERANCE {
            roots.extend(found);
            Ok(Roots { roots, method: RootMethod::Companion, iterations, max_residual: fallback_residual })
        } else {
            Err(PolyError::RootsNotConverged { iterations, residual: fallback_residual.min(residual) })
        }
    }
}

fn worst_residual(poly: &ComplexPoly, roots: &[Complex64]) -> f64 {
    roots
        .iter()
        .map(|&z| {
            let value = poly.evaluate(z).norm();
            let scale = poly.scale_at(z.norm());
            if value.is_finite() && scale > 0.0 {
                value / scale
            } else {
                f64::INFINITY
            }
        })
        .fold(0.0, f64::max)
}

fn aberth(poly: &ComplexPoly, max_iterations: usize) -> (Vec<Complex64>, usize) {
    let n = poly.degree();
    let coeffs = poly.coeffs();
    let radius = (coeffs[0].norm() / coeffs[n].norm()).powf(1.0 / n as f64).max(f64::MIN_POSITIVE);
    let mut z: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(radius, std::f64::consts::TAU * j as f64 / n as f64 + 0.4))
        .collect();
    let mut done = vec![false; n];
    let eps = f64::EPSILON;

    for iteration in 1..=max_iterations {
        let mut all_done = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (value, deriv) = poly.evaluate_with_derivative(z[i]);
            // backward-stable stop: residual at rounding level
            if value.norm() <= 4.0 * n as f64 * eps * poly.scale_at(z[i].norm()) {
                done[i] = true;
                continue;
            }
            let ratio = value / deriv;
            let repulsion: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !(step.re.is_finite() && step.im.is_finite()) {
                all_done = false;
                continue;
            }
            z[i] -= step;
            if step.norm() <= eps * z[i].norm() {
                done[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            return (z, iteration);
        }
    }
    (z, max_iterations)
}

/// Eigenvalues of the companion matrix of `poly` via a complex Schur form.
pub fn companion_eigenvalues(poly: &ComplexPoly) -> Option<Vec<Complex64>> {
    let n = poly.degree();
    let coeffs = poly.coeffs();
    let lead = coeffs[n];
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -coeffs[i] / lead;
    }
    let schur = nalgebra::linalg::Schur::try_new(m, f64::EPSILON, 10_000)?;
    schur.eigenvalues().map(|v| v.iter().copied().collect())
}

/// `max |z_i|` over all zeros of `poly`.
pub fn max_zero_modulus(poly: &ComplexPoly) -> Result<f64, PolyError> {
    let roots = RootFinder::default().find(poly)?;
    Ok(roots.roots.iter().map(|z| z.norm()).fold(0.0, f64::max))
}
