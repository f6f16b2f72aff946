//! Validated problem instances: a polynomial with all zeros in `|z| <= k`
//! and coefficient gap at least `mu`.

use num_complex::Complex64;

use crate::error::InstanceError;
use crate::eval::FactoredPoly;
use crate::poly::ComplexPoly;

/// Relative slack allowed on `|z_i| <= k`, so boundary zeros are accepted.
pub const DISK_TOLERANCE: f64 = 1e-12;
/// Allowed disagreement between supplied coefficients and the product of the
/// declared zeros, relative to the coefficient majorant.
pub const EXPANSION_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceSpec {
    pub zeros: Vec<Complex64>,
    pub leading: Complex64,
    pub k: f64,
    pub mu: usize,
    /// Exact coefficients when the construction knows them (lacunary
    /// families write structural zeros); otherwise expanded from the zeros.
    pub poly: Option<ComplexPoly>,
}

impl InstanceSpec {
    pub fn from_zeros(zeros: Vec<Complex64>, leading: Complex64, k: f64, mu: usize) -> Self {
        Self { zeros, leading, k, mu, poly: None }
    }

    pub fn with_poly(zeros: Vec<Complex64>, leading: Complex64, k: f64, mu: usize, poly: ComplexPoly) -> Self {
        Self { zeros, leading, k, mu, poly: Some(poly) }
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn validate(self) -> Result<Instance, InstanceError> {
        let n = self.zeros.len();
        if !(self.k > 0.0 && self.k <= 1.0) {
            return Err(InstanceError::RadiusOutOfRange(self.k));
        }
        let expanded = ComplexPoly::from_zeros(&self.zeros, self.leading)?;
        if n == 0 {
            return Err(crate::error::PolyError::Constant.into());
        }
        for (index, z) in self.zeros.iter().enumerate() {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(crate::error::PolyError::NonFinite { index }.into());
            }
            if z.norm() > self.k * (1.0 + DISK_TOLERANCE) {
                return Err(InstanceError::ZeroOutsideDisk { index, modulus: z.norm(), k: self.k });
            }
        }
        if self.mu == 0 || self.mu > n {
            return Err(InstanceError::MuOutOfRange { mu: self.mu, degree: n });
        }
        let poly = match &self.poly {
            Some(given) => {
                if given.degree() != n {
                    return Err(InstanceError::DegreeMismatch { poly: given.degree(), zeros: n });
                }
                let majorant = majorant_scale(&self.zeros, self.leading);
                let mismatch = given
                    .coeffs()
                    .iter()
                    .zip(expanded.coeffs())
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max)
                    / majorant;
                if mismatch > EXPANSION_TOLERANCE {
                    return Err(InstanceError::ZerosMismatch { mismatch });
                }
                given.clone()
            }
            None => expanded,
        };
        let gap = poly.lacunary_gap()?;
        if gap < self.mu {
            return Err(InstanceError::GapViolated { declared: self.mu, actual: gap });
        }
        let factored = FactoredPoly::new(self.leading, self.zeros.clone());
        Ok(Instance { spec: InstanceSpec { poly: Some(poly.clone()), ..self }, poly, factored, gap })
    }
}

// largest coefficient of |a_n| prod (z + |z_i|)
fn majorant_scale(zeros: &[Complex64], leading: Complex64) -> f64 {
    let moduli: Vec<Complex64> = zeros.iter().map(|z| Complex64::new(-z.norm(), 0.0)).collect();
    ComplexPoly::from_zeros(&moduli, Complex64::new(leading.norm(), 0.0))
        .map(|p| p.max_abs_coeff())
        .unwrap_or(1.0)
}

/// An [`InstanceSpec`] that passed validation.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    spec: InstanceSpec,
    poly: ComplexPoly,
    factored: FactoredPoly,
    gap: usize,
}

impl Instance {
    pub fn spec(&self) -> &InstanceSpec {
        &self.spec
    }

    pub fn poly(&self) -> &ComplexPoly {
        &self.poly
    }

    pub fn factored(&self) -> &FactoredPoly {
        &self.factored
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    pub fn k(&self) -> f64 {
        self.spec.k
    }

    pub fn mu(&self) -> usize {
        self.spec.mu
    }

    /// Measured gap of the coefficients, at least `mu`.
    pub fn gap(&self) -> usize {
        self.gap
    }

    /// `c * P`; every inequality is homogeneous in `P`.
    pub fn scaled(&self, c: Complex64) -> Result<Instance, InstanceError> {
        let spec = &self.spec;
        InstanceSpec::with_poly(spec.zeros.clone(), spec.leading * c, spec.k, spec.mu, self.poly.scaled(c)).validate()
    }

    /// Same instance with zeros moved from `|z| <= k` to `|z| <= k_new` by
    /// the dilation `z -> (k_new / k) z`. Coefficients become
    /// `a_j t^{n-j}`, so structural zeros stay exact.
    pub fn rescaled(&self, k_new: f64) -> Result<Instance, InstanceError> {
        let t = k_new / self.spec.k;
        let n = self.degree();
        let coeffs: Vec<Complex64> =
            self.poly.coeffs().iter().enumerate().map(|(j, a)| a * t.powi((n - j) as i32)).collect();
        let zeros = self.spec.zeros.iter().map(|z| z * t).collect();
        InstanceSpec::with_poly(zeros, self.spec.leading, k_new, self.spec.mu, ComplexPoly::new(coeffs)?).validate()
    }
}
