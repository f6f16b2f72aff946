//! Pointwise evaluation backends used by the circle solvers.
//!
//! Expanded coefficients lose relative accuracy near clustered zeros: for
//! `(z - 0.9)^9` at `z = 1` Horner's rule leaves only about five correct
//! digits. Instances know their zeros, so the checkers evaluate `P`, `P'`
//! and the conjugate-reciprocal `Q` from the product form instead.

use num_complex::Complex64;

use crate::poly::ComplexPoly;

/// Something whose modulus can be sampled on circles.
pub trait ModulusSource {
    fn degree(&self) -> usize;
    fn value(&self, z: Complex64) -> Complex64;
    /// Bound on `|f|` over `|z| = radius`; rounding errors are measured
    /// against it.
    fn scale_at(&self, radius: f64) -> f64;
    /// Angles of zeros known to lie exactly on `|z| = radius`.
    fn zeros_on_circle(&self, _radius: f64) -> Vec<f64> {
        Vec::new()
    }

    /// Angles where `|f|` on `|z| = radius` is rough or nearly so; the
    /// quadrature grades its nodes towards them.
    fn rough_angles(&self, radius: f64) -> Vec<f64> {
        self.zeros_on_circle(radius)
    }
}

/// A polynomial that can also return its derivative pointwise.
pub trait PolyEval: ModulusSource {
    fn value_and_derivative(&self, z: Complex64) -> (Complex64, Complex64);

    /// Bound on `|P'|` over `|z| = radius`.
    fn derivative_scale_at(&self, radius: f64) -> f64;

    fn polar_value(&self, z: Complex64, alpha: Complex64) -> Complex64 {
        let (p, dp) = self.value_and_derivative(z);
        p * self.degree() as f64 + (alpha - z) * dp
    }
}

impl ModulusSource for ComplexPoly {
    fn degree(&self) -> usize {
        ComplexPoly::degree(self)
    }

    fn value(&self, z: Complex64) -> Complex64 {
        self.evaluate(z)
    }

    fn scale_at(&self, radius: f64) -> f64 {
        ComplexPoly::scale_at(self, radius)
    }
}

impl PolyEval for ComplexPoly {
    fn value_and_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        self.evaluate_with_derivative(z)
    }

    fn derivative_scale_at(&self, radius: f64) -> f64 {
        self.coeffs()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, a)| a.norm() * j as f64 * radius.powi(j as i32 - 1))
            .sum()
    }
}

/// `leading * prod (z - zeros[i])`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactoredPoly {
    leading: Complex64,
    zeros: Vec<Complex64>,
}

/// Zeros closer than this (relative) to a circle count as lying on it.
pub const ON_CIRCLE_TOLERANCE: f64 = 1e-10;
/// Zeros in the annulus `NEAR_CIRCLE_BAND * r <= |z| <= r` slow down the
/// equispaced rule on `|z| = r` (its error decays like `(|z|/r)^N`).
pub const NEAR_CIRCLE_BAND: f64 = 0.9;

impl FactoredPoly {
    pub fn new(leading: Complex64, zeros: Vec<Complex64>) -> Self {
        Self { leading, zeros }
    }

    pub fn leading(&self) -> Complex64 {
        self.leading
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    /// `Q(z) = z^n conj(P(1/conj z)) = conj(a_n) prod (1 - conj(z_i) z)` and
    /// its derivative.
    pub fn reciprocal_value_and_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut q = self.leading.conj();
        let mut dq = Complex64::new(0.0, 0.0);
        for zero in &self.zeros {
            let c = zero.conj();
            let factor = Complex64::new(1.0, 0.0) - c * z;
            dq = dq * factor - q * c;
            q *= factor;
        }
        (q, dq)
    }

    pub fn expand(&self) -> ComplexPoly {
        ComplexPoly::from_zeros(&self.zeros, self.leading).expect("leading coefficient is nonzero")
    }
}

impl ModulusSource for FactoredPoly {
    fn degree(&self) -> usize {
        self.zeros.len()
    }

    fn value(&self, z: Complex64) -> Complex64 {
        self.zeros.iter().fold(self.leading, |acc, &zero| acc * (z - zero))
    }

    fn scale_at(&self, radius: f64) -> f64 {
        self.zeros.iter().fold(self.leading.norm(), |acc, zero| acc * (radius + zero.norm()))
    }

    fn zeros_on_circle(&self, radius: f64) -> Vec<f64> {
        self.zeros
            .iter()
            .filter(|z| (z.norm() - radius).abs() <= ON_CIRCLE_TOLERANCE * radius.max(1e-300))
            .map(|z| z.arg().rem_euclid(std::f64::consts::TAU))
            .collect()
    }

    fn rough_angles(&self, radius: f64) -> Vec<f64> {
        self.zeros
            .iter()
            .filter(|z| {
                let m = z.norm();
                m >= NEAR_CIRCLE_BAND * radius && m <= radius * (1.0 + ON_CIRCLE_TOLERANCE)
            })
            .map(|z| z.arg().rem_euclid(std::f64::consts::TAU))
            .collect()
    }
}

impl PolyEval for FactoredPoly {
    fn value_and_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = self.leading;
        let mut dp = Complex64::new(0.0, 0.0);
        for &zero in &self.zeros {
            let factor = z - zero;
            dp = dp * factor + p;
            p *= factor;
        }
        (p, dp)
    }

    fn derivative_scale_at(&self, radius: f64) -> f64 {
        // derivative of the majorant |a_n| prod (r + |z_i|)
        let mut s = self.leading.norm();
        let mut ds = 0.0;
        for zero in &self.zeros {
            let factor = radius + zero.norm();
            ds = ds * factor + s;
            s *= factor;
        }
        ds
    }
}

/// `P'` viewed as a modulus source.
pub struct Derivative<'a, P: PolyEval + ?Sized>(pub &'a P);

impl<P: PolyEval + ?Sized> ModulusSource for Derivative<'_, P> {
    fn degree(&self) -> usize {
        self.0.degree().saturating_sub(1)
    }

    fn value(&self, z: Complex64) -> Complex64 {
        self.0.value_and_derivative(z).1
    }

    fn scale_at(&self, radius: f64) -> f64 {
        self.0.derivative_scale_at(radius)
    }
}

/// `P + shift` viewed as a modulus source.
pub struct Shifted<'a, P: PolyEval + ?Sized> {
    pub poly: &'a P,
    pub shift: Complex64,
}

impl<P: PolyEval + ?Sized> ModulusSource for Shifted<'_, P> {
    fn degree(&self) -> usize {
        self.poly.degree()
    }

    fn value(&self, z: Complex64) -> Complex64 {
        self.poly.value(z) + self.shift
    }

    fn scale_at(&self, radius: f64) -> f64 {
        self.poly.scale_at(radius) + self.shift.norm()
    }
}

/// `D_alpha P` viewed as a modulus source.
pub struct Polar<'a, P: PolyEval + ?Sized> {
    pub poly: &'a P,
    pub alpha: Complex64,
}

impl<P: PolyEval + ?Sized> ModulusSource for Polar<'_, P> {
    fn degree(&self) -> usize {
        self.poly.degree().saturating_sub(1)
    }

    fn value(&self, z: Complex64) -> Complex64 {
        self.poly.polar_value(z, self.alpha)
    }

    fn scale_at(&self, radius: f64) -> f64 {
        self.poly.degree() as f64 * self.poly.scale_at(radius)
            + (self.alpha.norm() + radius) * self.poly.derivative_scale_at(radius)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn factored_matches_expanded() {
        let f = FactoredPoly::new(c(1.5, -0.5), vec![c(0.3, 0.1), c(-0.6, 0.2), c(0.0, -0.9), c(0.4, 0.4)]);
        let p = f.expand();
        let q = p.conjugate_reciprocal();
        let dq = q.derivative().unwrap();
        for j in 0..16 {
            let z = Complex64::from_polar(0.3 + 0.1 * j as f64, 0.7 * j as f64);
            let (v, d) = f.value_and_derivative(z);
            let (pv, pd) = p.evaluate_with_derivative(z);
            assert!((v - pv).norm() < 1e-13);
            assert!((d - pd).norm() < 1e-13);
            let (qv, qd) = f.reciprocal_value_and_derivative(z);
            assert!((qv - q.evaluate(z)).norm() < 1e-13);
            assert!((qd - dq.evaluate(z)).norm() < 1e-13);
            let alpha = c(1.2, -0.3);
            let polar = p.polar_derivative(alpha).unwrap().evaluate(z);
            assert!((f.polar_value(z, alpha) - polar).norm() < 1e-12);
        }
    }

    #[test]
    fn factored_keeps_relative_accuracy_near_clusters() {
        let f = FactoredPoly::new(c(1.0, 0.0), vec![c(0.9, 0.0); 9]);
        let exact = 0.1f64.powi(9);
        let v = f.value(c(1.0, 0.0)).re;
        assert!(((v - exact) / exact).abs() < 1e-13);
    }

    #[test]
    fn zeros_on_circle_are_reported() {
        let f = FactoredPoly::new(c(1.0, 0.0), vec![c(0.5, 0.0), c(0.0, 0.3), c(-0.5, 1e-14)]);
        let on = f.zeros_on_circle(0.5);
        assert_eq!(on.len(), 2);
        assert!(on[0].abs() < 1e-15);
    }

    #[test]
    fn rough_angles_cover_near_zeros() {
        let f = FactoredPoly::new(c(1.0, 0.0), vec![c(0.0, 0.95), c(0.5, 0.0), c(-1.0, 0.0)]);
        let mut angles = f.rough_angles(1.0);
        angles.sort_by(f64::total_cmp);
        assert_eq!(angles.len(), 2);
        assert!((angles[0] - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!((angles[1] - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn scales_bound_the_modulus() {
        let f = FactoredPoly::new(c(0.7, 0.2), vec![c(0.3, 0.1), c(-0.6, 0.2), c(0.0, -0.9)]);
        let p = f.expand();
        for j in 0..64 {
            let z = Complex64::from_polar(1.0, 0.1 * j as f64);
            let (v, d) = f.value_and_derivative(z);
            assert!(v.norm() <= f.scale_at(1.0) * (1.0 + 1e-14));
            assert!(d.norm() <= f.derivative_scale_at(1.0) * (1.0 + 1e-14));
            assert!(d.norm() <= p.derivative_scale_at(1.0) * (1.0 + 1e-14));
        }
    }
}
