//! Dense complex polynomials in ascending coefficient order.
//!
//! `ComplexPoly` stores `a_0, a_1, ..., a_n`. The top coefficient is nonzero
//! unless the polynomial is identically zero, in which case the coefficient
//! list is `[0]`.

use std::fmt;

use num_complex::Complex64;

use crate::error::PolyError;

/// Relative tolerance used to decide that a coefficient vanishes in
/// [`ComplexPoly::lacunary_gap`].
pub const GAP_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

impl ComplexPoly {
    /// Builds a polynomial from ascending coefficients. Exact zeros at the top
    /// are trimmed so that the degree is honest.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self, PolyError> {
        if coeffs.is_empty() {
            return Err(PolyError::Empty);
        }
        if let Some(index) = coeffs.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(PolyError::NonFinite { index });
        }
        Ok(Self::from_vec_trimmed(coeffs))
    }

    /// Real-coefficient convenience constructor.
    pub fn from_real(coeffs: &[f64]) -> Result<Self, PolyError> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn constant(c: Complex64) -> Self {
        Self { coeffs: vec![c] }
    }

    pub fn zero() -> Self {
        Self::constant(Complex64::new(0.0, 0.0))
    }

    /// `z^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[n] = Complex64::new(1.0, 0.0);
        Self { coeffs }
    }

    fn from_vec_trimmed(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.re == 0.0 && c.im == 0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Expands `leading * prod (z - zeros[i])`.
    pub fn from_zeros(zeros: &[Complex64], leading: Complex64) -> Result<Self, PolyError> {
        if leading.norm() == 0.0 {
            return Err(PolyError::ZeroLeading);
        }
        let mut coeffs = Vec::with_capacity(zeros.len() + 1);
        coeffs.push(leading);
        for &zero in zeros {
            // multiply by (z - zero), highest term first to stay in place
            coeffs.push(Complex64::new(0.0, 0.0));
            for j in (1..coeffs.len()).rev() {
                coeffs[j] = coeffs[j - 1] - zero * coeffs[j];
            }
            coeffs[0] = -zero * coeffs[0];
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs[self.degree()]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].norm() == 0.0
    }

    /// Horner evaluation of `sum a_j z^j`.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
    }

    /// `(P(z), P'(z))` in one Horner pass.
    pub fn evaluate_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let mut value = zero;
        let mut deriv = zero;
        for &a in self.coeffs.iter().rev() {
            deriv = deriv * z + value;
            value = value * z + a;
        }
        (value, deriv)
    }

    /// `P'`. A constant input has no honest derivative and is reported as
    /// degenerate.
    pub fn derivative(&self) -> Result<Self, PolyError> {
        if self.degree() == 0 {
            return Err(PolyError::DegenerateDerivative);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, &a)| a * j as f64)
            .collect();
        Ok(Self::from_vec_trimmed(coeffs))
    }

    /// Polar derivative `D_alpha P(z) = n P(z) + (alpha - z) P'(z)`.
    ///
    /// Coefficient `j` is `(n - j) a_j + alpha (j + 1) a_{j+1}`; the `z^n`
    /// term is never formed. The result is the zero polynomial for
    /// `P = c (z - alpha)^n`.
    pub fn polar_derivative(&self, alpha: Complex64) -> Result<Self, PolyError> {
        let n = self.degree();
        if n == 0 {
            return Err(PolyError::DegenerateDerivative);
        }
        let a = &self.coeffs;
        let coeffs = (0..n)
            .map(|j| a[j] * (n - j) as f64 + alpha * a[j + 1] * (j + 1) as f64)
            .collect();
        Ok(Self::from_vec_trimmed(coeffs))
    }

    /// `Q(z) = z^n conj(P(1/conj z))`, i.e. `Q_j = conj(a_{n-j})`.
    pub fn conjugate_reciprocal(&self) -> Self {
        Self::from_vec_trimmed(self.coeffs.iter().rev().map(|c| c.conj()).collect())
    }

    /// Largest `mu >= 1` with `a_{n-1} = ... = a_{n-mu+1} = 0`, capped at `n`.
    /// A coefficient counts as zero when its modulus is at most
    /// [`GAP_TOLERANCE`] times the largest coefficient modulus.
    pub fn lacunary_gap(&self) -> Result<usize, PolyError> {
        let n = self.degree();
        if n == 0 {
            return Err(PolyError::Constant);
        }
        let threshold = GAP_TOLERANCE * self.max_abs_coeff();
        let mu = (1..=n)
            .find(|&j| self.coeffs[n - j].norm() > threshold)
            .unwrap_or(n);
        Ok(mu)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `sum |a_j| r^j`, an upper bound for `|P|` on `|z| = r` and the natural
    /// scale for rounding errors of Horner evaluation there.
    pub fn scale_at(&self, radius: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, a| acc * radius + a.norm())
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self::from_vec_trimmed(self.coeffs.iter().map(|&a| a * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_vec_trimmed(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        let out = (0..len)
            .map(|j| {
                self.coeffs.get(j).copied().unwrap_or(zero) + other.coeffs.get(j).copied().unwrap_or(zero)
            })
            .collect();
        Self::from_vec_trimmed(out)
    }

    /// `P(t z)`: coefficient `a_j` becomes `a_j t^j`. Exact zeros stay zero.
    pub fn dilate(&self, t: f64) -> Self {
        let mut power = 1.0;
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| {
                let c = a * power;
                power *= t;
                c
            })
            .collect();
        Self::from_vec_trimmed(coeffs)
    }
}

impl fmt::Display for ComplexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.norm() == 0.0 && self.degree() > 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{j}")?,
            }
        }
        Ok(())
    }
}
