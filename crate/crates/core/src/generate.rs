//! Seeded instance generators.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::InstanceError;
use crate::instance::{Instance, InstanceSpec};
use crate::poly::ComplexPoly;

pub const DEFAULT_MARGIN: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub seed: u64,
    /// Inclusive degree range.
    pub n_range: (usize, usize),
    pub k_values: Vec<f64>,
    /// Zeros are kept within `k (1 - interior_margin)`.
    pub interior_margin: f64,
    pub count: usize,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self { seed: 42, n_range: (1, 10), k_values: vec![0.3, 0.6, 0.9, 1.0], interior_margin: DEFAULT_MARGIN, count: 16 }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<(), String> {
        let (lo, hi) = self.n_range;
        if lo == 0 || lo > hi {
            return Err(format!("degree range [{lo}, {hi}] must satisfy 1 <= n_min <= n_max"));
        }
        if self.k_values.is_empty() {
            return Err("k_values is empty".into());
        }
        if let Some(k) = self.k_values.iter().find(|k| !(**k > 0.0 && **k <= 1.0)) {
            return Err(format!("k = {k} is outside (0, 1]"));
        }
        if !(0.0..1.0).contains(&self.interior_margin) {
            return Err(format!("interior_margin = {} is outside [0, 1)", self.interior_margin));
        }
        Ok(())
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform by area in the disk of radius `r`.
fn point_in_disk(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
    let rho = r * rng.random::<f64>().sqrt();
    Complex64::from_polar(rho, std::f64::consts::TAU * rng.random::<f64>())
}

fn random_leading(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(rng.random_range(0.5..=2.0), std::f64::consts::TAU * rng.random::<f64>())
}

/// Instances with zeros uniform in `|z| <= k (1 - margin)`; `mu` is the
/// measured coefficient gap.
pub fn random_in_disk(cfg: &GeneratorConfig) -> impl Iterator<Item = Result<Instance, InstanceError>> + '_ {
    let mut rng = rng_for(cfg.seed, 1);
    (0..cfg.count).map(move |_| {
        let n = rng.random_range(cfg.n_range.0..=cfg.n_range.1);
        let k = cfg.k_values[rng.random_range(0..cfg.k_values.len())];
        let radius = k * (1.0 - cfg.interior_margin);
        let zeros: Vec<Complex64> = (0..n).map(|_| point_in_disk(&mut rng, radius)).collect();
        let leading = random_leading(&mut rng);
        let mu = ComplexPoly::from_zeros(&zeros, leading)?.lacunary_gap().unwrap_or(1);
        InstanceSpec::from_zeros(zeros, leading, k, mu).validate()
    })
}

/// `a_n z^rho prod_i (z^mu - c_i)` with `rho = n mod mu`, each `c_i = w_i^mu`
/// for `w_i` uniform in `|w| <= k (1 - margin)`.
pub fn lacunary_instance(
    n: usize,
    mu: usize,
    k: f64,
    leading: Complex64,
    c: &[Complex64],
    roots: &[Complex64],
) -> Result<Instance, InstanceError> {
    if mu == 0 || mu > n {
        return Err(InstanceError::MuOutOfRange { mu, degree: n });
    }
    let rho = n % mu;
    // prod (w - c_i) in the variable w = z^mu
    let inner = ComplexPoly::from_zeros(c, leading)?;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    for (j, a) in inner.coeffs().iter().enumerate() {
        coeffs[rho + mu * j] = *a;
    }
    let poly = ComplexPoly::new(coeffs)?;
    let mut zeros = vec![Complex64::new(0.0, 0.0); rho];
    zeros.extend_from_slice(roots);
    InstanceSpec::with_poly(zeros, leading, k, mu, poly).validate()
}

/// The `mu`-th roots of each `w_i^mu`, i.e. the points `w_i e^{2 pi i j/mu}`.
fn spread_roots(w: &[Complex64], mu: usize) -> Vec<Complex64> {
    w.iter()
        .flat_map(|&wi| (0..mu).map(move |j| wi * Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / mu as f64)))
        .collect()
}

pub fn lacunary_family(n: usize, mu: usize, cfg: &GeneratorConfig) -> impl Iterator<Item = Result<Instance, InstanceError>> + '_ {
    let mut rng = rng_for(cfg.seed, 2 + ((n as u64) << 16) + mu as u64);
    (0..cfg.count).map(move |_| {
        if mu == 0 || mu > n {
            return Err(InstanceError::MuOutOfRange { mu, degree: n });
        }
        let k = cfg.k_values[rng.random_range(0..cfg.k_values.len())];
        let radius = k * (1.0 - cfg.interior_margin);
        let w: Vec<Complex64> = (0..n / mu).map(|_| point_in_disk(&mut rng, radius)).collect();
        let leading = random_leading(&mut rng);
        let c: Vec<Complex64> = w.iter().map(|wi| wi.powu(mu as u32)).collect();
        lacunary_instance(n, mu, k, leading, &c, &spread_roots(&w, mu))
    })
}

/// Lacunary instances with degree and gap drawn from the config.
pub fn lacunary_stream<'a>(cfg: &'a GeneratorConfig, mu_values: &[usize]) -> impl Iterator<Item = Result<Instance, InstanceError>> + 'a {
    let mut rng = rng_for(cfg.seed, 3);
    let mus: Vec<usize> = if mu_values.is_empty() { vec![2, 3] } else { mu_values.to_vec() };
    (0..cfg.count).map(move |_| {
        let mu = mus[rng.random_range(0..mus.len())];
        let n = rng.random_range(cfg.n_range.0.max(mu)..=cfg.n_range.1.max(mu));
        let k = cfg.k_values[rng.random_range(0..cfg.k_values.len())];
        let radius = k * (1.0 - cfg.interior_margin);
        let w: Vec<Complex64> = (0..n / mu).map(|_| point_in_disk(&mut rng, radius)).collect();
        let leading = random_leading(&mut rng);
        let c: Vec<Complex64> = w.iter().map(|wi| wi.powu(mu as u32)).collect();
        lacunary_instance(n, mu, k, leading, &c, &spread_roots(&w, mu))
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub name: String,
    pub instance: Instance,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
    pub notes: Vec<String>,
}

/// `(z - k)^n`, `(z + k)^n`, `z^n`, and `z^n + 1` when `k = 1`.
pub fn extremal_catalog(k: f64, n: usize) -> Result<Catalog, InstanceError> {
    if n == 0 {
        return Err(crate::error::PolyError::Constant.into());
    }
    let one = Complex64::new(1.0, 0.0);
    let mut catalog = Catalog::default();
    let mut push = |name: String, zeros: Vec<Complex64>, mu: usize| -> Result<(), InstanceError> {
        let instance = InstanceSpec::from_zeros(zeros, one, k, mu).validate()?;
        catalog.entries.push(CatalogEntry { name, instance });
        Ok(())
    };
    push(format!("(z-{k})^{n}"), vec![Complex64::new(k, 0.0); n], 1)?;
    push(format!("(z+{k})^{n}"), vec![Complex64::new(-k, 0.0); n], 1)?;
    push(format!("z^{n}"), vec![Complex64::new(0.0, 0.0); n], n)?;
    if k == 1.0 {
        // zeros of z^n + 1 at the odd multiples of pi/n
        let zeros = (0..n)
            .map(|j| Complex64::from_polar(1.0, std::f64::consts::PI * (2 * j + 1) as f64 / n as f64))
            .collect();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[0] = one;
        coeffs[n] = one;
        let poly = ComplexPoly::new(coeffs)?;
        let instance = InstanceSpec::with_poly(zeros, one, k, n, poly).validate()?;
        catalog.entries.push(CatalogEntry { name: format!("z^{n}+1"), instance });
    } else {
        catalog.notes.push(format!("z^{n}+1 omitted: its zeros lie on |z| = 1 > k = {k}"));
    }
    Ok(catalog)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn lacunary_example_expands_exactly() {
        let w = [c(0.3, 0.0), c(0.4, 0.0)];
        let cs = [c(0.09, 0.0), c(0.16, 0.0)];
        let inst = lacunary_instance(4, 2, 0.6, c(1.0, 0.0), &cs, &spread_roots(&w, 2)).unwrap();
        let expected = [0.0144, 0.0, -0.25, 0.0, 1.0];
        for (a, e) in inst.poly().coeffs().iter().zip(expected) {
            assert!((a - c(e, 0.0)).norm() < 1e-15);
        }
        assert_eq!(inst.poly().coeffs()[1], c(0.0, 0.0));
        assert_eq!(inst.gap(), 2);
    }

    #[test]
    fn lacunary_edge_gaps() {
        let cfg = GeneratorConfig { count: 3, ..GeneratorConfig::default() };
        for inst in lacunary_family(5, 5, &cfg) {
            let inst = inst.unwrap();
            let nonzero = inst.poly().coeffs().iter().filter(|a| a.norm() != 0.0).count();
            assert_eq!(nonzero, 2);
        }
        for inst in lacunary_family(7, 3, &cfg) {
            let inst = inst.unwrap();
            assert_eq!(inst.poly().coeffs()[0], c(0.0, 0.0));
            assert!(inst.gap() >= 3);
        }
        assert_eq!(lacunary_family(4, 1, &cfg).filter(|i| i.is_ok()).count(), 3);
    }

    #[test]
    fn streams_are_deterministic() {
        let cfg = GeneratorConfig { count: 3, ..GeneratorConfig::default() };
        let a: Vec<_> = random_in_disk(&cfg).map(|i| i.unwrap().poly().clone()).collect();
        let b: Vec<_> = random_in_disk(&cfg).map(|i| i.unwrap().poly().clone()).collect();
        assert_eq!(a, b);
        let other = GeneratorConfig { seed: 7, ..cfg.clone() };
        let d: Vec<_> = random_in_disk(&other).map(|i| i.unwrap().poly().clone()).collect();
        assert_ne!(a, d);
        let l1: Vec<_> = lacunary_stream(&cfg, &[2, 3]).map(|i| i.unwrap().poly().clone()).collect();
        let l2: Vec<_> = lacunary_stream(&cfg, &[2, 3]).map(|i| i.unwrap().poly().clone()).collect();
        assert_eq!(l1, l2);
    }

    #[test]
    fn catalog_contents() {
        let cat = extremal_catalog(0.5, 2).unwrap();
        assert_eq!(cat.entries.len(), 3);
        assert_eq!(cat.notes.len(), 1);
        assert_eq!(cat.entries[0].instance.poly().coeffs(), ComplexPoly::from_real(&[0.25, -1.0, 1.0]).unwrap().coeffs());
        let cat = extremal_catalog(1.0, 2).unwrap();
        assert_eq!(cat.entries.len(), 4);
        assert_eq!(cat.entries[3].instance.poly().coeffs(), ComplexPoly::from_real(&[1.0, 0.0, 1.0]).unwrap().coeffs());
        assert_eq!(extremal_catalog(0.3, 1).unwrap().entries.len(), 3);
    }
}
