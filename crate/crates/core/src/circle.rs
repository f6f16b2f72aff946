//! Integral means and extremal moduli on circles `|z| = r`.
//!
//! All integrals are raw, `int_0^{2 pi} |f(r e^{i theta})|^p d theta`, with
//! no `1/(2 pi)` normalization.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::CheckError;
use crate::eval::{FactoredPoly, ModulusSource, PolyEval};
use crate::poly::ComplexPoly;
use crate::quadrature::{
    integrate_power, CircleIntegrand, FnIntegrand, NodeScheme, PowerIntegral, QuadStatus, QuadratureSettings, Sample,
};
use crate::roots::max_zero_modulus;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleMeanResult {
    pub raw_integral: f64,
    /// `raw_integral^(1/p)`.
    pub mean: f64,
    pub p: f64,
    pub radius: f64,
    pub abs_error_estimate: f64,
    pub mean_error_estimate: f64,
    pub nodes_used: usize,
    pub status: QuadStatus,
}

impl CircleMeanResult {
    pub fn from_integral(integral: PowerIntegral, radius: f64) -> Self {
        Self {
            raw_integral: integral.raw,
            mean: integral.mean,
            p: integral.p,
            radius,
            abs_error_estimate: integral.abs_error,
            mean_error_estimate: integral.mean_error,
            nodes_used: integral.nodes,
            status: integral.status,
        }
    }

    pub fn converged(&self) -> bool {
        self.status == QuadStatus::Converged
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumKind {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremumResult {
    pub value: f64,
    pub arg_theta: f64,
    pub radius: f64,
    pub kind: ExtremumKind,
    /// Final bracket width of the golden-section refinement.
    pub refined_to: f64,
}

/// Refined minima below this fraction of the modulus bound are reported as
/// an exact zero: they are indistinguishable from a root on the circle.
pub const STRUCTURAL_ZERO: f64 = 1e-12;
const REFINE_WIDTH: f64 = 1e-12;
const REFINED_CANDIDATES: usize = 4;

fn mean_settings(tol: f64) -> QuadratureSettings {
    QuadratureSettings::with_tol(tol)
}

/// `int |P(r e^{i theta})|^p d theta` and its `1/p` power.
pub fn lp_mean(poly: &ComplexPoly, p: f64, radius: f64, tol: f64) -> CircleMeanResult {
    lp_mean_of(poly, p, radius, tol)
}

pub fn lp_mean_of<S: ModulusSource + ?Sized>(source: &S, p: f64, radius: f64, tol: f64) -> CircleMeanResult {
    let scheme = NodeScheme::around(&source.rough_angles(radius));
    let integrand = FnIntegrand(|theta: f64| Sample::Finite(source.value(Complex64::from_polar(radius, theta)).norm()));
    CircleMeanResult::from_integral(integrate_power(&integrand, &scheme, p, &mean_settings(tol)), radius)
}

/// `int |1 + k^mu e^{i theta}|^p d theta`.
pub fn kernel_integral(k: f64, mu: usize, p: f64, tol: f64) -> CircleMeanResult {
    let c = k.powi(mu as i32);
    // a cusp at theta = pi when c = 1, nearly one for c close to 1
    let scheme = if c >= crate::eval::NEAR_CIRCLE_BAND {
        NodeScheme::around(&[std::f64::consts::PI])
    } else {
        NodeScheme::Uniform
    };
    let integrand = FnIntegrand(|theta: f64| Sample::Finite((Complex64::new(1.0, 0.0) + Complex64::from_polar(c, theta)).norm()));
    CircleMeanResult::from_integral(integrate_power(&integrand, &scheme, p, &mean_settings(tol)), 1.0)
}

/// Golden-section search for a minimum of `f` on `[a, b]`.
fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, width: f64) -> (f64, f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a).abs() <= width {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let (x, fx) = if fc < fd { (c, fc) } else { (d, fd) };
    (x, fx, (b - a).abs())
}

/// Refined local extrema of `|f|` on `|z| = radius` as
/// `(theta, value, bracket width)`, best first, at most `limit` of them.
pub fn local_extrema_of<S: ModulusSource + ?Sized>(
    source: &S,
    radius: f64,
    kind: ExtremumKind,
    limit: usize,
) -> Vec<(f64, f64, f64)> {
    let n = (8 * source.degree()).max(512);
    let h = TAU / n as f64;
    let modulus = |theta: f64| source.value(Complex64::from_polar(radius, theta)).norm();
    // minimize sign * |f|
    let sign = match kind {
        ExtremumKind::Min => 1.0,
        ExtremumKind::Max => -1.0,
    };
    let grid: Vec<f64> = (0..n).map(|j| sign * modulus(h * j as f64)).collect();
    let mut candidates: Vec<usize> = (0..n)
        .filter(|&j| {
            let prev = grid[(j + n - 1) % n];
            let next = grid[(j + 1) % n];
            grid[j] <= prev && grid[j] <= next
        })
        .collect();
    candidates.sort_by(|&a, &b| grid[a].total_cmp(&grid[b]));
    candidates.truncate(limit.max(1));
    if candidates.is_empty() {
        candidates.push(0);
    }
    let mut refined: Vec<(f64, f64, f64)> = candidates
        .iter()
        .map(|&j| {
            let centre = h * j as f64;
            let (x, fx, width) = golden_min(|t| sign * modulus(t), centre - h, centre + h, REFINE_WIDTH);
            // keep the node itself if refinement did not improve on it
            if fx <= grid[j] {
                (x.rem_euclid(TAU), sign * fx, width)
            } else {
                (centre, sign * grid[j], width)
            }
        })
        .collect();
    refined.sort_by(|a, b| (sign * a.1).total_cmp(&(sign * b.1)));
    refined
}

/// Scan-and-refine extremum of `|f|` on `|z| = radius`.
pub fn extremum_of<S: ModulusSource + ?Sized>(source: &S, radius: f64, kind: ExtremumKind) -> ExtremumResult {
    if kind == ExtremumKind::Min {
        if let Some(&theta) = source.zeros_on_circle(radius).first() {
            return ExtremumResult { value: 0.0, arg_theta: theta, radius, kind, refined_to: 0.0 };
        }
    }
    let (theta, mut value, width) = local_extrema_of(source, radius, kind, REFINED_CANDIDATES)[0];
    if kind == ExtremumKind::Min && value <= STRUCTURAL_ZERO * source.scale_at(radius) {
        value = 0.0;
    }
    ExtremumResult { value, arg_theta: theta, radius, kind, refined_to: width }
}

pub fn min_modulus_on_circle(poly: &ComplexPoly, radius: f64) -> ExtremumResult {
    extremum_of(poly, radius, ExtremumKind::Min)
}

pub fn max_modulus_on_circle(poly: &ComplexPoly, radius: f64) -> ExtremumResult {
    extremum_of(poly, radius, ExtremumKind::Max)
}

/// The pieces of the ratio integrand
/// `|P + shift| / (|D_alpha P| - offset)` evaluated on `|z| = 1`.
#[derive(Debug, Clone, Copy)]
pub struct RatioTerms {
    /// `m beta / k^{n - mu}`.
    pub shift: Complex64,
    /// `n m / k^{n - mu}`.
    pub offset: f64,
    /// Denominators below this are treated as vanishing.
    pub floor: f64,
}

impl RatioTerms {
    pub fn new(n: usize, k: f64, mu: usize, m: f64, beta: Complex64, polar_scale: f64) -> Self {
        let weight = m / k.powi((n - mu) as i32);
        Self { shift: beta * weight, offset: n as f64 * weight, floor: 1e-12 * polar_scale }
    }

    pub fn sample(&self, p_value: Complex64, polar_value: Complex64) -> Sample {
        let numerator = (p_value + self.shift).norm();
        let denominator = polar_value.norm() - self.offset;
        // with no offset nothing cancels, and both values keep their relative
        // accuracy near a multiple zero, so only an exact zero is singular
        let floor = if self.offset == 0.0 { 0.0 } else { self.floor };
        if denominator <= floor {
            Sample::Singular
        } else {
            Sample::Finite(numerator / denominator)
        }
    }
}

/// Checks the shared parameter domain `|alpha| >= k^mu`, `|beta| <= 1`,
/// `0 < k <= 1`, `p > 0`.
pub fn check_domain(k: f64, mu: usize, alpha: Option<Complex64>, beta: Option<Complex64>, p: Option<f64>) -> Result<(), CheckError> {
    if !(k > 0.0 && k <= 1.0) {
        return Err(CheckError::Precondition(format!("k = {k} is outside (0, 1]")));
    }
    if mu == 0 {
        return Err(CheckError::Precondition("mu must be at least 1".into()));
    }
    if let Some(alpha) = alpha {
        let bound = k.powi(mu as i32);
        if alpha.norm() < bound * (1.0 - 1e-12) {
            return Err(CheckError::Precondition(format!("|alpha| = {} < k^mu = {bound}", alpha.norm())));
        }
    }
    if let Some(beta) = beta {
        if beta.norm() > 1.0 + 1e-12 {
            return Err(CheckError::Precondition(format!("|beta| = {} > 1", beta.norm())));
        }
    }
    if let Some(p) = p {
        if !(p > 0.0 && p.is_finite()) {
            return Err(CheckError::Precondition(format!("p = {p} must be positive")));
        }
    }
    Ok(())
}

/// Raw integral of `|(P + m beta/k^{n-mu}) / (|D_alpha P| - n m/k^{n-mu})|^p`
/// on the unit circle, generic over the evaluation backend.
pub fn ratio_mean_of<P: PolyEval + ?Sized>(
    poly: &P,
    terms: RatioTerms,
    alpha: Complex64,
    p: f64,
    tol: f64,
) -> CircleMeanResult {
    let scheme = NodeScheme::around(&poly.rough_angles(1.0));
    let integrand = FnIntegrand(|theta: f64| {
        let z = Complex64::from_polar(1.0, theta);
        let (value, deriv) = poly.value_and_derivative(z);
        let polar = value * poly.degree() as f64 + (alpha - z) * deriv;
        terms.sample(value, polar)
    });
    CircleMeanResult::from_integral(integrate_power(&integrand as &dyn CircleIntegrand, &scheme, p, &mean_settings(tol)), 1.0)
}

/// Ratio-form integral mean for a coefficient polynomial. `m` is computed as
/// `min_{|z|=k} |P|`. The zero-location and gap constraints are verified.
#[allow(clippy::too_many_arguments)]
pub fn ratio_lp_mean(
    poly: &ComplexPoly,
    alpha: Complex64,
    beta: Complex64,
    k: f64,
    mu: usize,
    p: f64,
    tol: f64,
) -> Result<CircleMeanResult, CheckError> {
    check_domain(k, mu, Some(alpha), Some(beta), Some(p))?;
    let gap = poly.lacunary_gap().map_err(|e| CheckError::Precondition(e.to_string()))?;
    if gap < mu {
        return Err(CheckError::Precondition(format!("lacunary gap {gap} < mu = {mu}")));
    }
    let radius = max_zero_modulus(poly).map_err(|e| CheckError::Precondition(e.to_string()))?;
    if radius > k * (1.0 + 1e-8) {
        return Err(CheckError::Precondition(format!("zero of modulus {radius} outside |z| <= {k}")));
    }
    let m = min_modulus_on_circle(poly, k).value;
    let polar_scale = extremum_of(&crate::eval::Polar { poly, alpha }, 1.0, ExtremumKind::Max).value;
    let terms = RatioTerms::new(poly.degree(), k, mu, m, beta, polar_scale);
    Ok(ratio_mean_of(poly, terms, alpha, p, tol))
}

/// Same as [`ratio_lp_mean`] for an instance known by its zeros.
pub fn ratio_lp_mean_factored(
    poly: &FactoredPoly,
    alpha: Complex64,
    terms: RatioTerms,
    p: f64,
    tol: f64,
) -> CircleMeanResult {
    ratio_mean_of(poly, terms, alpha, p, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real(coeffs: &[f64]) -> ComplexPoly {
        ComplexPoly::from_real(coeffs).unwrap()
    }

    #[test]
    fn lp_mean_examples() {
        let r = lp_mean(&real(&[1.0, 1.0]), 2.0, 1.0, 1e-10);
        assert!((r.raw_integral - 4.0 * PI).abs() < 1e-12);
        assert!((r.mean.powi(2) - r.raw_integral).abs() < 1e-12 * r.raw_integral);

        let cst = c(0.3, -1.2);
        for p in [0.25, 1.0, 3.0] {
            let r = lp_mean(&ComplexPoly::constant(cst), p, 0.7, 1e-10);
            let expected = TAU * cst.norm().powf(p);
            assert!((r.raw_integral - expected).abs() < 1e-12 * expected);
        }

        let r = lp_mean(&real(&[0.25, -1.0, 1.0]), 2.0, 1.0, 1e-10);
        assert!((r.raw_integral - 4.125 * PI).abs() < 1e-12);
    }

    #[test]
    fn kernel_integral_examples() {
        assert!((kernel_integral(1.0, 1, 2.0, 1e-10).raw_integral - 4.0 * PI).abs() < 1e-12);
        let r = kernel_integral(0.5, 2, 2.0, 1e-10);
        assert!((r.raw_integral - TAU * 1.0625).abs() < 1e-12);
        let r = kernel_integral(1e-9, 1, 3.0, 1e-10);
        assert!((r.raw_integral - TAU).abs() < 1e-7);
    }

    #[test]
    fn kernel_at_k_one_is_accurate_for_small_p() {
        // int |1 + e^{it}|^p = 2 pi Gamma(p + 1) / Gamma(p/2 + 1)^2; p = 1 gives 8
        let r = kernel_integral(1.0, 3, 1.0, 1e-10);
        assert_eq!(r.status, QuadStatus::Converged);
        assert!((r.raw_integral - 8.0).abs() < 1e-9);
    }

    #[test]
    fn min_modulus_examples() {
        let r = min_modulus_on_circle(&real(&[0.25, -1.0, 1.0]), 0.5);
        assert_eq!(r.value, 0.0);
        let r = min_modulus_on_circle(&real(&[-0.09, 0.0, 1.0]), 0.5);
        assert!((r.value - 0.16).abs() < 1e-12);
        assert!(r.arg_theta.abs() < 1e-5 || (r.arg_theta - PI).abs() < 1e-5);
        let r = min_modulus_on_circle(&ComplexPoly::constant(c(0.0, -2.5)), 0.3);
        assert!((r.value - 2.5).abs() < 1e-15);
    }

    #[test]
    fn max_modulus_examples() {
        let r = max_modulus_on_circle(&ComplexPoly::monomial(5), 0.8);
        assert!((r.value - 0.8f64.powi(5)).abs() < 1e-14);
        let r = max_modulus_on_circle(&real(&[0.25, 1.0, 1.0]), 1.0);
        assert!((r.value - 2.25).abs() < 1e-12);
        assert!(r.arg_theta.min(TAU - r.arg_theta) < 1e-5);
        let r = max_modulus_on_circle(&real(&[1.0, 0.0, 1.0]), 1.0);
        assert!((r.value - 2.0).abs() < 1e-12);
        let p = real(&[1.0, 0.0, 1.0]);
        let at = p.evaluate(Complex64::from_polar(1.0, r.arg_theta)).norm();
        assert!((at - r.value).abs() <= 1e-10 * r.value);
    }

    #[test]
    fn ratio_mean_equality_case() {
        // (z - 0.5)^2, alpha = 1: n(|alpha| - k) * mean = kernel_integral(0.5, 1, 2)^{1/2}
        let p = real(&[0.25, -1.0, 1.0]);
        let r = ratio_lp_mean(&p, c(1.0, 0.0), c(0.0, 0.0), 0.5, 1, 2.0, 1e-10).unwrap();
        let lhs = 2.0 * 0.5 * r.mean;
        assert!((lhs - (2.5 * PI).sqrt()).abs() < 1e-10);
        let kernel = kernel_integral(0.5, 1, 2.0, 1e-10).mean;
        assert!((lhs - kernel).abs() < 1e-10);
        // m = 0 so beta is irrelevant
        let r2 = ratio_lp_mean(&p, c(1.0, 0.0), c(0.0, 1.0), 0.5, 1, 2.0, 1e-10).unwrap();
        assert!((r2.mean - r.mean).abs() < 1e-13);
    }

    #[test]
    fn ratio_mean_for_monomial() {
        // P = z^n, k = 1: m = 1, D = n alpha z^{n-1}; integrand 1/(n(|alpha| - 1)) for beta = 0
        let n = 4;
        let alpha = c(3.0, 0.0);
        for p in [0.5, 2.0] {
            let r = ratio_lp_mean(&ComplexPoly::monomial(n), alpha, c(0.0, 0.0), 1.0, 1, p, 1e-10).unwrap();
            let expected = TAU.powf(1.0 / p) / (n as f64 * 2.0);
            assert!((r.mean - expected).abs() < 1e-12 * expected);
        }
    }

    #[test]
    fn ratio_mean_rejects_bad_domain() {
        let p = real(&[0.25, -1.0, 1.0]);
        assert!(ratio_lp_mean(&p, c(0.2, 0.0), c(0.0, 0.0), 0.5, 1, 2.0, 1e-10).is_err());
        assert!(ratio_lp_mean(&p, c(1.0, 0.0), c(2.0, 0.0), 0.5, 1, 2.0, 1e-10).is_err());
        assert!(ratio_lp_mean(&p, c(1.0, 0.0), c(0.0, 0.0), 0.4, 1, 2.0, 1e-10).is_err());
        assert!(ratio_lp_mean(&p, c(1.0, 0.0), c(0.0, 0.0), 0.5, 2, 2.0, 1e-10).is_err());
    }
}
