//! Checkers for the background inequalities, the main theorems and their
//! corollaries, plus pointwise checks of the intermediate bounds and the
//! subordination witness.
//!
//! A [`CheckContext`] belongs to one instance. It caches polynomial samples
//! on the quadrature nodes and memoizes every extremum and integral mean, so
//! a full parameter grid costs little more than its distinct integrals.

use std::cell::{OnceCell, RefCell};
use std::collections::HashMap;
use std::f64::consts::TAU;
use std::rc::Rc;

use num_complex::Complex64;

use crate::certificate::{CheckerId, Est, InequalityCertificate, Params, Quality};
use crate::circle::{check_domain, extremum_of, kernel_integral, local_extrema_of, CircleMeanResult, ExtremumKind, RatioTerms};
use crate::error::CheckError;
use crate::eval::{Derivative, FactoredPoly, ModulusSource, Polar, PolyEval, Shifted};
use crate::instance::Instance;
use crate::quadrature::{
    integrate_power, CircleIntegrand, NodeScheme, NodeSet, QuadStatus, QuadratureSettings, Sample, DEFAULT_TOLERANCE,
};

/// Relative slack on `|alpha| >= k^mu` and on the lhs factor `|alpha| - k^mu`.
const ALPHA_TOLERANCE: f64 = 1e-12;
/// Quadrature levels whose samples are kept; deeper levels are recomputed.
const CACHED_LEVELS: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    pub tol: f64,
    /// Lemma 1 with `m = min_{|z|=1} |P|` instead of `|z| = k`.
    pub lemma_m_on_unit_circle: bool,
    /// INEQ_8 with `min_{|z|=1} |P|` instead of `|z| = k`.
    pub ineq8_min_on_unit_circle: bool,
    /// INEQ_3 subtracting `min_{|z|=k} |P'|` instead of `min_{|z|=k} |P|`.
    pub ineq3_min_of_derivative: bool,
    /// Nodes for the pointwise checkers; default `max(64 n, 1024)`.
    pub grid_size: Option<usize>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOLERANCE,
            lemma_m_on_unit_circle: false,
            ineq8_min_on_unit_circle: false,
            ineq3_min_of_derivative: false,
            grid_size: None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Point {
    z: Complex64,
    p: Complex64,
    dp: Complex64,
}

#[derive(Debug, Clone, Copy)]
struct Mean {
    est: Est,
    quality: Quality,
}

impl Mean {
    fn from_result(r: &CircleMeanResult) -> Self {
        let quality = match r.status {
            QuadStatus::Converged => Quality::Converged,
            QuadStatus::Unconverged => Quality::Unconverged,
            QuadStatus::Indeterminate => Quality::Indeterminate,
        };
        Mean { est: Est::new(r.mean, r.mean_error_estimate), quality }
    }
}

fn bits(x: f64) -> u64 {
    x.to_bits()
}

struct UnitSamples<'a> {
    poly: &'a FactoredPoly,
    scheme: NodeScheme,
    levels: RefCell<Vec<Rc<Vec<Point>>>>,
}

impl<'a> UnitSamples<'a> {
    fn new(poly: &'a FactoredPoly, angles: &[f64]) -> Self {
        Self { poly, scheme: NodeScheme::around(angles), levels: RefCell::new(Vec::new()) }
    }
}

impl UnitSamples<'_> {
    fn point(&self, theta: f64) -> Point {
        let z = Complex64::from_polar(1.0, theta);
        let (p, dp) = self.poly.value_and_derivative(z);
        Point { z, p, dp }
    }

    fn level(&self, level: usize, nodes: &NodeSet) -> Rc<Vec<Point>> {
        let mut levels = self.levels.borrow_mut();
        if let Some(points) = levels.get(level) {
            if points.len() == nodes.len() {
                return Rc::clone(points);
            }
        }
        let points: Rc<Vec<Point>> = Rc::new(nodes.theta.iter().map(|&t| self.point(t)).collect());
        if level < CACHED_LEVELS && level == levels.len() {
            levels.push(Rc::clone(&points));
        }
        points
    }
}

struct PointIntegrand<'s, 'a, F: Fn(&Point) -> Sample> {
    samples: &'s UnitSamples<'a>,
    f: F,
}

impl<F: Fn(&Point) -> Sample> CircleIntegrand for PointIntegrand<'_, '_, F> {
    fn sample(&self, level: usize, nodes: &NodeSet, out: &mut Vec<Sample>) {
        let points = self.samples.level(level, nodes);
        out.clear();
        out.extend(points.iter().map(&self.f));
    }

    fn sample_at(&self, theta: f64) -> Sample {
        (self.f)(&self.samples.point(theta))
    }
}

/// Per-instance evaluation state shared by all checkers.
pub struct CheckContext<'a> {
    inst: &'a Instance,
    opts: CheckOptions,
    settings: QuadratureSettings,
    /// Angles of zeros of `P` on or near the unit circle.
    rough: Vec<f64>,
    /// Sample caches keyed by the break angles of their node scheme.
    samples: RefCell<HashMap<Vec<u64>, Rc<UnitSamples<'a>>>>,
    shift_angles: RefCell<HashMap<[u64; 2], Vec<f64>>>,
    polar_min: RefCell<HashMap<[u64; 2], Vec<(f64, f64)>>>,
    max_p: OnceCell<Est>,
    max_dp: OnceCell<Est>,
    m_k: OnceCell<Est>,
    m_unit: OnceCell<Est>,
    min_dp_k: OnceCell<Est>,
    max_d: RefCell<HashMap<[u64; 2], Est>>,
    lp: RefCell<HashMap<[u64; 3], Mean>>,
    kernel: RefCell<HashMap<[u64; 2], Mean>>,
    ratio: RefCell<HashMap<[u64; 6], Mean>>,
    excess: RefCell<HashMap<[u64; 4], Mean>>,
}

/// `n m / k^{n - mu}`-type weight `m / k^{n - mu}`.
fn weight(m: f64, k: f64, n: usize, mu: usize) -> f64 {
    m / k.powi((n - mu) as i32)
}

impl<'a> CheckContext<'a> {
    pub fn new(inst: &'a Instance, opts: CheckOptions) -> Self {
        let poly = inst.factored();
        Self {
            inst,
            opts,
            settings: QuadratureSettings::with_tol(opts.tol),
            rough: poly.rough_angles(1.0),
            samples: RefCell::default(),
            shift_angles: RefCell::default(),
            polar_min: RefCell::default(),
            max_p: OnceCell::new(),
            max_dp: OnceCell::new(),
            m_k: OnceCell::new(),
            m_unit: OnceCell::new(),
            min_dp_k: OnceCell::new(),
            max_d: RefCell::default(),
            lp: RefCell::default(),
            kernel: RefCell::default(),
            ratio: RefCell::default(),
            excess: RefCell::default(),
        }
    }

    pub fn instance(&self) -> &Instance {
        self.inst
    }

    pub fn options(&self) -> &CheckOptions {
        &self.opts
    }

    fn n(&self) -> usize {
        self.inst.degree()
    }

    fn k(&self) -> f64 {
        self.inst.k()
    }

    fn poly(&self) -> &'a FactoredPoly {
        self.inst.factored()
    }

    fn extremum<S: ModulusSource + ?Sized>(&self, source: &S, radius: f64, kind: ExtremumKind) -> Est {
        let r = extremum_of(source, radius, kind);
        let rounding = 32.0 * (source.degree() + 1) as f64 * f64::EPSILON * source.scale_at(radius);
        Est::new(r.value, rounding)
    }

    /// `max_{|z|=1} |P|`.
    pub fn max_p(&self) -> Est {
        *self.max_p.get_or_init(|| self.extremum(self.poly(), 1.0, ExtremumKind::Max))
    }

    /// `max_{|z|=1} |P'|`.
    pub fn max_dp(&self) -> Est {
        *self.max_dp.get_or_init(|| self.extremum(&Derivative(self.poly()), 1.0, ExtremumKind::Max))
    }

    /// `m = min_{|z|=k} |P|`.
    pub fn m(&self) -> Est {
        *self.m_k.get_or_init(|| self.extremum(self.poly(), self.k(), ExtremumKind::Min))
    }

    /// `min_{|z|=1} |P|`.
    pub fn min_p_unit(&self) -> Est {
        *self.m_unit.get_or_init(|| self.extremum(self.poly(), 1.0, ExtremumKind::Min))
    }

    fn min_dp_k(&self) -> Est {
        *self.min_dp_k.get_or_init(|| self.extremum(&Derivative(self.poly()), self.k(), ExtremumKind::Min))
    }

    /// `max_{|z|=1} |D_alpha P|`.
    pub fn max_polar(&self, alpha: Complex64) -> Est {
        let key = [bits(alpha.re), bits(alpha.im)];
        if let Some(v) = self.max_d.borrow().get(&key) {
            return *v;
        }
        let v = self.extremum(&Polar { poly: self.poly(), alpha }, 1.0, ExtremumKind::Max);
        self.max_d.borrow_mut().insert(key, v);
        v
    }

    /// Integral over nodes graded towards the zeros of `P` near the circle
    /// and towards `extra` angles.
    fn integrate<F: Fn(&Point) -> Sample>(&self, p: f64, extra: &[f64], f: F) -> Mean {
        let mut angles = self.rough.clone();
        angles.extend_from_slice(extra);
        let samples = {
            let scheme = NodeScheme::around(&angles);
            let key: Vec<u64> = match &scheme {
                NodeScheme::Uniform => Vec::new(),
                NodeScheme::Graded { breaks } => breaks.iter().map(|b| b.to_bits()).collect(),
            };
            let mut cache = self.samples.borrow_mut();
            Rc::clone(cache.entry(key).or_insert_with(|| Rc::new(UnitSamples::new(self.poly(), &angles))))
        };
        let integrand = PointIntegrand { samples: &samples, f };
        let r = integrate_power(&integrand, &samples.scheme, p, &self.settings);
        Mean::from_result(&CircleMeanResult::from_integral(r, 1.0))
    }

    /// Angles of zeros of `P + shift` near the unit circle, where
    /// `|P + shift|^p` has a cusp or nearly so.
    fn shift_angles(&self, shift: Complex64) -> Vec<f64> {
        if shift == Complex64::new(0.0, 0.0) {
            return Vec::new();
        }
        let key = [bits(shift.re), bits(shift.im)];
        if let Some(v) = self.shift_angles.borrow().get(&key) {
            return v.clone();
        }
        let mut coeffs = self.inst.poly().coeffs().to_vec();
        coeffs[0] += shift;
        let angles = crate::poly::ComplexPoly::new(coeffs)
            .ok()
            .and_then(|q| crate::roots::RootFinder::default().find(&q).ok())
            .map(|r| {
                r.roots
                    .iter()
                    .filter(|z| (z.norm() - 1.0).abs() <= 1.0 - crate::eval::NEAR_CIRCLE_BAND)
                    .map(|z| z.arg().rem_euclid(TAU))
                    .collect()
            })
            .unwrap_or_default();
        self.shift_angles.borrow_mut().insert(key, angles);
        self.shift_angles.borrow()[&key].clone()
    }

    /// Local minima `(theta, |D_alpha P|)` on the unit circle.
    fn polar_minima(&self, alpha: Complex64) -> Vec<(f64, f64)> {
        let key = [bits(alpha.re), bits(alpha.im)];
        if let Some(v) = self.polar_min.borrow().get(&key) {
            return v.clone();
        }
        let minima: Vec<(f64, f64)> = local_extrema_of(&Polar { poly: self.poly(), alpha }, 1.0, ExtremumKind::Min, 2 * self.n())
            .into_iter()
            .map(|(theta, value, _)| (theta, value))
            .collect();
        self.polar_min.borrow_mut().insert(key, minima.clone());
        minima
    }

    /// `(int |P + shift|^p)^{1/p}` on the unit circle.
    fn shifted_mean(&self, shift: Complex64, p: f64) -> Mean {
        let key = [bits(shift.re), bits(shift.im), bits(p)];
        if let Some(v) = self.lp.borrow().get(&key) {
            return *v;
        }
        let v = self.integrate(p, &self.shift_angles(shift), |pt| Sample::Finite((pt.p + shift).norm()));
        self.lp.borrow_mut().insert(key, v);
        v
    }

    /// `(int |P|^p)^{1/p}` on the unit circle.
    pub fn lp_mean(&self, p: f64) -> Est {
        self.shifted_mean(Complex64::new(0.0, 0.0), p).est
    }

    fn kernel_mean(&self, mu: usize, p: f64) -> Mean {
        let key = [mu as u64, bits(p)];
        if let Some(v) = self.kernel.borrow().get(&key) {
            return *v;
        }
        let v = Mean::from_result(&kernel_integral(self.k(), mu, p, self.opts.tol));
        self.kernel.borrow_mut().insert(key, v);
        v
    }

    fn unit_kernel_mean(&self, p: f64) -> Mean {
        let key = [u64::MAX, bits(p)];
        if let Some(v) = self.kernel.borrow().get(&key) {
            return *v;
        }
        let v = Mean::from_result(&kernel_integral(1.0, 1, p, self.opts.tol));
        self.kernel.borrow_mut().insert(key, v);
        v
    }

    fn ratio_terms(&self, mu: usize, beta: Complex64, alpha: Complex64) -> RatioTerms {
        RatioTerms::new(self.n(), self.k(), mu, self.m().value, beta, self.max_polar(alpha).value)
    }

    /// `(int |(P + m beta/k^{n-mu}) / (|D_alpha P| - n m/k^{n-mu})|^p)^{1/p}`.
    fn ratio_mean(&self, mu: usize, alpha: Complex64, beta: Complex64, p: f64) -> Mean {
        let key = [bits(alpha.re), bits(alpha.im), bits(beta.re), bits(beta.im), mu as u64, bits(p)];
        if let Some(v) = self.ratio.borrow().get(&key) {
            return *v;
        }
        let terms = self.ratio_terms(mu, beta, alpha);
        let n = self.n() as f64;
        let v = self.integrate(p, &self.shift_angles(terms.shift), |pt| {
            terms.sample(pt.p, pt.p * n + (alpha - pt.z) * pt.dp)
        });
        self.ratio.borrow_mut().insert(key, v);
        v
    }

    /// `(int (|D_alpha P| - offset)^q)^{1/q}`.
    fn excess_mean(&self, alpha: Complex64, offset: f64, q: f64) -> Mean {
        let key = [bits(alpha.re), bits(alpha.im), bits(offset), bits(q)];
        if let Some(v) = self.excess.borrow().get(&key) {
            return *v;
        }
        let n = self.n() as f64;
        // (|D| - offset) can touch zero at the boundary |alpha| = k^mu
        let near = 1e-3 * self.max_polar(alpha).value;
        let extra: Vec<f64> =
            self.polar_minima(alpha).into_iter().filter(|&(_, low)| low - offset <= near).map(|(at, _)| at).collect();
        let v = self.integrate(q, &extra, |pt| {
            let d = (pt.p * n + (alpha - pt.z) * pt.dp).norm();
            Sample::Finite((d - offset).max(0.0))
        });
        self.excess.borrow_mut().insert(key, v);
        v
    }

    fn require_gap(&self, mu: usize) -> Result<(), CheckError> {
        if mu == 0 || mu > self.n() {
            return Err(CheckError::Precondition(format!("mu = {mu} outside [1, {}]", self.n())));
        }
        if self.inst.gap() < mu {
            return Err(CheckError::Precondition(format!("lacunary gap {} < mu = {mu}", self.inst.gap())));
        }
        Ok(())
    }

    /// `n (|alpha| - base)`, or an exact zero at the boundary `|alpha| = base`.
    fn alpha_factor(&self, alpha: Complex64, base: f64) -> Option<f64> {
        let excess = alpha.norm() - base;
        if excess <= ALPHA_TOLERANCE * base {
            None
        } else {
            Some(self.n() as f64 * excess)
        }
    }

    fn judge(&self, id: CheckerId, lhs: Est, rhs: Est, params: Params, quality: Quality) -> InequalityCertificate {
        InequalityCertificate::judge(id, lhs, rhs, params, quality)
    }

    fn base_params(&self) -> Params {
        Params { k: Some(self.k()), ..Params::default() }
    }

    // ---- max-norm background inequalities ----

    pub fn check_bernstein(&self) -> Result<InequalityCertificate, CheckError> {
        let lhs = self.max_dp();
        let rhs = self.max_p().scale(self.n() as f64);
        Ok(self.judge(CheckerId::Bernstein, lhs, rhs, Params::default(), Quality::Converged))
    }

    pub fn check_turan(&self) -> Result<InequalityCertificate, CheckError> {
        let lhs = self.max_p().scale(self.n() as f64);
        let rhs = self.max_dp().scale(2.0);
        Ok(self.judge(CheckerId::Ineq1, lhs, rhs, Params::default(), Quality::Converged))
    }

    pub fn check_malik_max(&self) -> Result<InequalityCertificate, CheckError> {
        let lhs = self.max_p().scale(self.n() as f64);
        let rhs = self.max_dp().scale(1.0 + self.k());
        Ok(self.judge(CheckerId::Ineq2, lhs, rhs, self.base_params(), Quality::Converged))
    }

    pub fn check_aziz_shah(&self, mu: usize) -> Result<InequalityCertificate, CheckError> {
        self.require_gap(mu)?;
        let (n, k) = (self.n(), self.k());
        let lhs = self.max_p().scale(n as f64);
        let min_term = if self.opts.ineq3_min_of_derivative { self.min_dp_k() } else { self.m() };
        let rhs = self
            .max_dp()
            .scale(1.0 + k.powi(mu as i32))
            .sub(min_term.scale(n as f64 / k.powi((n - mu) as i32)));
        let params = Params { mu: Some(mu), ..self.base_params() };
        Ok(self.judge(CheckerId::Ineq3, lhs, rhs, params, Quality::Converged))
    }

    // ---- integral background inequalities ----

    pub fn check_malik_lp(&self, p: f64) -> Result<InequalityCertificate, CheckError> {
        check_domain(1.0, 1, None, None, Some(p))?;
        let mean = self.shifted_mean(Complex64::new(0.0, 0.0), p);
        let kernel = self.unit_kernel_mean(p);
        let lhs = mean.est.scale(self.n() as f64);
        let rhs = kernel.est.mul(self.max_dp());
        let params = Params { p: Some(p), ..Params::default() };
        Ok(self.judge(CheckerId::Ineq4, lhs, rhs, params, mean.quality.worst(kernel.quality)))
    }

    pub fn check_aziz_lp(&self, p: f64) -> Result<InequalityCertificate, CheckError> {
        check_domain(self.k(), 1, None, None, Some(p))?;
        let mean = self.shifted_mean(Complex64::new(0.0, 0.0), p);
        let kernel = self.kernel_mean(1, p);
        let lhs = mean.est.scale(self.n() as f64);
        let rhs = kernel.est.mul(self.max_dp());
        let params = Params { p: Some(p), ..self.base_params() };
        Ok(self.judge(CheckerId::Ineq5, lhs, rhs, params, mean.quality.worst(kernel.quality)))
    }

    // ---- polar derivative max-norm inequalities ----

    fn polar_max_norm(&self, id: CheckerId, mu: usize, alpha: Complex64) -> Result<InequalityCertificate, CheckError> {
        let k = self.k();
        check_domain(k, mu, Some(alpha), None, None)?;
        self.require_gap(mu)?;
        let base = k.powi(mu as i32);
        let lhs = match self.alpha_factor(alpha, base) {
            Some(factor) => self.max_p().scale(factor),
            None => Est::exact(0.0),
        };
        let rhs = self.max_polar(alpha).scale(1.0 + base);
        let mut params = Params { alpha: Some(alpha), ..self.base_params() };
        if id != CheckerId::Ineq6 {
            params.mu = Some(mu);
        }
        Ok(self.judge(id, lhs, rhs, params, Quality::Converged))
    }

    pub fn check_aziz_rather_polar(&self, alpha: Complex64) -> Result<InequalityCertificate, CheckError> {
        self.polar_max_norm(CheckerId::Ineq6, 1, alpha)
    }

    pub fn check_polar_lacunary(&self, mu: usize, alpha: Complex64) -> Result<InequalityCertificate, CheckError> {
        self.polar_max_norm(CheckerId::Ineq7, mu, alpha)
    }

    pub fn check_rather_mir(&self, mu: usize, alpha: Complex64) -> Result<InequalityCertificate, CheckError> {
        let (n, k) = (self.n(), self.k());
        check_domain(k, mu, Some(alpha), None, None)?;
        self.require_gap(mu)?;
        let base = k.powi(mu as i32);
        let max_term = match self.alpha_factor(alpha, base) {
            Some(factor) => self.max_p().scale(factor),
            None => Est::exact(0.0),
        };
        let min = if self.opts.ineq8_min_on_unit_circle { self.min_p_unit() } else { self.m() };
        let lhs = max_term.add(min.scale(n as f64 * (alpha.norm() - k) / k.powi((n - mu) as i32)));
        let rhs = self.max_polar(alpha).scale(1.0 + base);
        let params = Params { alpha: Some(alpha), mu: Some(mu), ..self.base_params() };
        Ok(self.judge(CheckerId::Ineq8, lhs, rhs, params, Quality::Converged))
    }

    // ---- polar derivative integral inequalities ----

    fn polar_lp(&self, id: CheckerId, mu: usize, alpha: Complex64, p: f64) -> Result<InequalityCertificate, CheckError> {
        let (n, k) = (self.n(), self.k());
        check_domain(k, mu, Some(alpha), None, Some(p))?;
        self.require_gap(mu)?;
        let base = k.powi(mu as i32);
        let mean = self.shifted_mean(Complex64::new(0.0, 0.0), p);
        let kernel = self.kernel_mean(mu, p);
        let lhs = match self.alpha_factor(alpha, base) {
            Some(factor) => mean.est.scale(factor),
            None => Est::exact(0.0),
        };
        let offset = self.m().scale(n as f64 / k.powi((n - mu) as i32));
        let rhs = kernel.est.mul(self.max_polar(alpha).sub(offset));
        let mut params = Params { alpha: Some(alpha), p: Some(p), ..self.base_params() };
        if id != CheckerId::Ineq9 {
            params.mu = Some(mu);
        }
        Ok(self.judge(id, lhs, rhs, params, mean.quality.worst(kernel.quality)))
    }

    pub fn check_roshanlal_lp(&self, alpha: Complex64, p: f64) -> Result<InequalityCertificate, CheckError> {
        self.polar_lp(CheckerId::Ineq9, 1, alpha, p)
    }

    pub fn check_roshanlal_lacunary_lp(&self, mu: usize, alpha: Complex64, p: f64) -> Result<InequalityCertificate, CheckError> {
        self.polar_lp(CheckerId::Ineq10, mu, alpha, p)
    }

    // ---- main results ----

    fn ratio_form(&self, id: CheckerId, mu: usize, alpha: Complex64, beta: Complex64, p: f64) -> Result<InequalityCertificate, CheckError> {
        let k = self.k();
        check_domain(k, mu, Some(alpha), Some(beta), Some(p))?;
        self.require_gap(mu)?;
        let kernel = self.kernel_mean(mu, p);
        let (lhs, quality) = match self.alpha_factor(alpha, k.powi(mu as i32)) {
            Some(factor) => {
                let mean = self.ratio_mean(mu, alpha, beta, p);
                (mean.est.scale(factor), mean.quality.worst(kernel.quality))
            }
            None => (Est::exact(0.0), kernel.quality),
        };
        let mut params = Params { alpha: Some(alpha), beta: Some(beta), p: Some(p), ..self.base_params() };
        if id == CheckerId::Thm2 {
            params.mu = Some(mu);
        }
        Ok(self.judge(id, lhs, kernel.est, params, quality))
    }

    pub fn check_theorem1(&self, alpha: Complex64, beta: Complex64, p: f64) -> Result<InequalityCertificate, CheckError> {
        self.ratio_form(CheckerId::Thm1, 1, alpha, beta, p)
    }

    pub fn check_theorem2(&self, mu: usize, alpha: Complex64, beta: Complex64, p: f64) -> Result<InequalityCertificate, CheckError> {
        self.ratio_form(CheckerId::Thm2, mu, alpha, beta, p)
    }

    /// `n (|alpha| - k^mu) (int |P + m beta / k^{n-mu}|^p)^{1/p}`.
    fn shifted_lhs(&self, mu: usize, alpha: Option<Complex64>, beta: Complex64, p: f64) -> (Est, Quality) {
        let (n, k) = (self.n(), self.k());
        let factor = match alpha {
            Some(alpha) => match self.alpha_factor(alpha, k.powi(mu as i32)) {
                Some(f) => f,
                None => return (Est::exact(0.0), Quality::Converged),
            },
            None => n as f64,
        };
        let shift = beta * weight(self.m().value, k, n, mu);
        let mean = self.shifted_mean(shift, p);
        (mean.est.scale(factor), mean.quality)
    }

    fn corollary_form(&self, id: CheckerId, mu: usize, alpha: Complex64, beta: Complex64, p: f64) -> Result<InequalityCertificate, CheckError> {
        let (n, k) = (self.n(), self.k());
        check_domain(k, mu, Some(alpha), Some(beta), Some(p))?;
        self.require_gap(mu)?;
        let (lhs, quality) = self.shifted_lhs(mu, Some(alpha), beta, p);
        let kernel = self.kernel_mean(mu, p);
        let offset = self.m().scale(n as f64 / k.powi((n - mu) as i32));
        let rhs = kernel.est.mul(self.max_polar(alpha).sub(offset));
        let mut params = Params { alpha: Some(alpha), beta: Some(beta), p: Some(p), ..self.base_params() };
        if id == CheckerId::Cor3 {
            params.mu = Some(mu);
        }
        Ok(self.judge(id, lhs, rhs, params, quality.worst(kernel.quality)))
    }

    pub fn check_corollary1(&self, alpha: Complex64, beta: Complex64, p: f64) -> Result<InequalityCertificate, CheckError> {
        self.corollary_form(CheckerId::Cor1, 1, alpha, beta, p)
    }

    pub fn check_corollary2(&self, beta: Complex64, p: f64) -> Result<InequalityCertificate, CheckError> {
        check_domain(self.k(), 1, None, Some(beta), Some(p))?;
        let (lhs, quality) = self.shifted_lhs(1, None, beta, p);
        let kernel = self.kernel_mean(1, p);
        let rhs = kernel.est.mul(self.max_dp());
        let params = Params { beta: Some(beta), p: Some(p), ..self.base_params() };
        Ok(self.judge(CheckerId::Cor2, lhs, rhs, params, quality.worst(kernel.quality)))
    }

    pub fn check_corollary3(&self, mu: usize, alpha: Complex64, beta: Complex64, p: f64) -> Result<InequalityCertificate, CheckError> {
        self.corollary_form(CheckerId::Cor3, mu, alpha, beta, p)
    }

    /// Theorem 3 with Hölder exponents `r = s / (s - 1)` and `s`.
    pub fn check_theorem3(&self, mu: usize, alpha: Complex64, beta: Complex64, p: f64, s: f64) -> Result<InequalityCertificate, CheckError> {
        if !(s > 1.0 && s.is_finite()) {
            return Err(CheckError::Precondition(format!("s = {s} must exceed 1")));
        }
        self.check_theorem3_rs(mu, alpha, beta, p, s / (s - 1.0), s)
    }

    pub fn check_theorem3_rs(
        &self,
        mu: usize,
        alpha: Complex64,
        beta: Complex64,
        p: f64,
        r: f64,
        s: f64,
    ) -> Result<InequalityCertificate, CheckError> {
        let (n, k) = (self.n(), self.k());
        check_domain(k, mu, Some(alpha), Some(beta), Some(p))?;
        self.require_gap(mu)?;
        if !(r > 1.0 && s > 1.0) || (1.0 / r + 1.0 / s - 1.0).abs() > 1e-12 {
            return Err(CheckError::Precondition(format!("r = {r}, s = {s} are not Hölder conjugates")));
        }
        let (lhs, quality) = self.shifted_lhs(mu, Some(alpha), beta, p);
        let kernel = self.kernel_mean(mu, p * r);
        let offset = n as f64 * weight(self.m().value, k, n, mu);
        let excess = self.excess_mean(alpha, offset, p * s);
        // the offset carries the rounding of m into the second factor
        let m_err = self.m().err * n as f64 / k.powi((n - mu) as i32) * TAU.powf(1.0 / (p * s));
        let rhs = kernel.est.mul(Est::new(excess.est.value, excess.est.err + m_err));
        let params = Params {
            alpha: Some(alpha),
            beta: Some(beta),
            mu: Some(mu),
            p: Some(p),
            r: Some(r),
            s: Some(s),
            ..self.base_params()
        };
        Ok(self.judge(CheckerId::Thm3, lhs, rhs, params, quality.worst(kernel.quality).worst(excess.quality)))
    }

    /// The `p -> infinity` form of the Corollary 3 ratio:
    /// `n (|alpha| - k^mu) max |P + m beta/k^{n-mu}| / ((1 + k^mu)(max |D_alpha P| - n m/k^{n-mu}))`.
    pub fn corollary3_max_ratio(&self, mu: usize, alpha: Complex64, beta: Complex64) -> f64 {
        let (n, k) = (self.n(), self.k());
        let base = k.powi(mu as i32);
        let w = weight(self.m().value, k, n, mu);
        let top = extremum_of(&Shifted { poly: self.poly(), shift: beta * w }, 1.0, ExtremumKind::Max).value;
        let lhs = n as f64 * (alpha.norm() - base) * top;
        lhs / ((1.0 + base) * (self.max_polar(alpha).value - n as f64 * w))
    }

    /// Normalized power mean `((1/2 pi) int |P + m beta/k^{n-mu}|^p)^{1/p}`.
    pub fn normalized_shifted_mean(&self, mu: usize, beta: Complex64, p: f64) -> Est {
        let (n, k) = (self.n(), self.k());
        let shift = beta * weight(self.m().value, k, n, mu);
        self.shifted_mean(shift, p).est.scale(TAU.powf(-1.0 / p))
    }

    // ---- pointwise checks ----

    fn grid(&self) -> usize {
        self.opts.grid_size.unwrap_or_else(|| (64 * self.n()).max(1024))
    }

    fn grid_points(&self) -> impl Iterator<Item = (f64, Complex64)> {
        let size = self.grid();
        (0..size).map(move |j| {
            let theta = TAU * j as f64 / size as f64;
            (theta, Complex64::from_polar(1.0, theta))
        })
    }

    /// Lemma 1: `k^mu |P'(z)| >= |Q'(z)| + n m / k^{n-mu}` on `|z| = 1`.
    pub fn check_lemma1_pointwise(&self, mu: usize) -> Result<InequalityCertificate, CheckError> {
        self.require_gap(mu)?;
        let (n, k) = (self.n(), self.k());
        let m = if self.opts.lemma_m_on_unit_circle { self.min_p_unit() } else { self.m() };
        let c = m.scale(n as f64 * weight(1.0, k, n, mu));
        let base = k.powi(mu as i32);
        let scale = 2.0 * n as f64 * self.poly().scale_at(1.0);
        let rows = self.grid_points().map(|(_, z)| {
            let (_, dp) = self.poly().value_and_derivative(z);
            let (_, dq) = self.poly().reciprocal_value_and_derivative(z);
            (dq.norm() + c.value, base * dp.norm())
        });
        let params = Params { mu: Some(mu), ..self.base_params() };
        Ok(worst_row(CheckerId::Lemma1, rows, scale, c.err, params))
    }

    /// The pointwise chain behind the main theorems on `|z| = 1`:
    /// `|Q' + n m conj(beta) z^{n-1}/k^{n-mu}| <= k^mu |n Q - z Q'|` and
    /// `|D_alpha P| >= (|alpha| - k^mu)|P'| + n m/k^{n-mu}`.
    /// Returns the certificate of the tighter of the two at its worst node.
    pub fn check_pointwise_chain(&self, mu: usize, alpha: Complex64, beta: Complex64) -> Result<InequalityCertificate, CheckError> {
        let (n, k) = (self.n(), self.k());
        check_domain(k, mu, Some(alpha), Some(beta), None)?;
        self.require_gap(mu)?;
        let base = k.powi(mu as i32);
        let w = weight(self.m().value, k, n, mu);
        let nf = n as f64;
        let scale = 2.0 * nf * self.poly().scale_at(1.0);
        let polar_scale = Polar { poly: self.poly(), alpha }.scale_at(1.0);
        let params = Params { alpha: Some(alpha), beta: Some(beta), mu: Some(mu), ..self.base_params() };

        let subordinate = self.grid_points().map(|(_, z)| {
            let (q, dq) = self.poly().reciprocal_value_and_derivative(z);
            let lhs = (dq + beta.conj() * z.powu(n as u32 - 1) * (nf * w)).norm();
            (lhs, base * (q * nf - z * dq).norm())
        });
        let first = worst_row(CheckerId::Chain, subordinate, scale, self.m().err * nf, params);
        let polar = self.grid_points().map(|(_, z)| {
            let (p, dp) = self.poly().value_and_derivative(z);
            let d = p * nf + (alpha - z) * dp;
            ((alpha.norm() - base) * dp.norm() + nf * w, d.norm())
        });
        let second = worst_row(CheckerId::Chain, polar, polar_scale, self.m().err * nf, params);
        let tighter = |c: &InequalityCertificate, s: f64| c.slack / s;
        Ok(if tighter(&first, scale) <= tighter(&second, polar_scale) { first } else { second })
    }

    /// `|D_alpha P(z)| - m n/k^{n-1} >= (|alpha| - k) |P(z)|` on `|z| = 1`.
    pub fn check_remark1_pointwise(&self, alpha: Complex64) -> Result<InequalityCertificate, CheckError> {
        let (n, k) = (self.n(), self.k());
        check_domain(k, 1, Some(alpha), None, None)?;
        let nf = n as f64;
        let offset = nf * weight(self.m().value, k, n, 1);
        let polar_scale = Polar { poly: self.poly(), alpha }.scale_at(1.0);
        let rows = self.grid_points().map(|(_, z)| {
            let (p, dp) = self.poly().value_and_derivative(z);
            let d = p * nf + (alpha - z) * dp;
            ((alpha.norm() - k) * p.norm(), d.norm() - offset)
        });
        let params = Params { alpha: Some(alpha), ..self.base_params() };
        Ok(worst_row(CheckerId::Remark1, rows, polar_scale, self.m().err * nf, params))
    }

    /// Largest deviation, relative to `n * sum |a_j|`, in the identities
    /// `|Q'| = |nP - zP'|` and `|P'| = |nQ - zQ'|` on the grid, computed from
    /// the coefficients.
    pub fn identity13_residual(&self) -> f64 {
        let poly = self.inst.poly();
        let q = poly.conjugate_reciprocal();
        let nf = self.n() as f64;
        let scale = nf * poly.scale_at(1.0);
        self.grid_points()
            .map(|(_, z)| {
                let (p, dp) = poly.evaluate_with_derivative(z);
                let (qv, dq) = q.evaluate_with_derivative(z);
                let a = (dq.norm() - (p * nf - z * dp).norm()).abs();
                let b = (dp.norm() - (qv * nf - z * dq).norm()).abs();
                a.max(b) / scale
            })
            .fold(0.0, f64::max)
    }

    // ---- subordination ----

    fn witness_at(&self, z: Complex64, mu: usize, beta: Complex64) -> Option<Complex64> {
        let (n, k) = (self.n(), self.k());
        let nf = n as f64;
        let w = weight(self.m().value, k, n, mu);
        let (q, dq) = self.poly().reciprocal_value_and_derivative(z);
        let denominator = (q * nf - z * dq) * k.powi(mu as i32);
        let floor = 1e-12 * nf * self.poly().scale_at(1.0);
        if denominator.norm() < floor {
            return None;
        }
        let numerator = z * (dq + beta.conj() * z.powu(n as u32 - 1) * (nf * w));
        Some(numerator / denominator)
    }

    /// The function `w` with `1 + k^mu w(z) = n (Q + m conj(beta) z^n / k^{n-mu}) / (nQ - zQ')`.
    pub fn subordination_witness(&self, mu: usize, beta: Complex64) -> Result<WitnessTrace, CheckError> {
        check_domain(self.k(), mu, None, Some(beta), None)?;
        self.require_gap(mu)?;
        let (n, k) = (self.n(), self.k());
        let nf = n as f64;
        let base = k.powi(mu as i32);
        let w_scale = weight(self.m().value, k, n, mu);
        let mut trace = WitnessTrace::default();
        for (j, (theta, z)) in self.grid_points().enumerate() {
            trace.theta_grid.push(theta);
            match self.witness_at(z, mu, beta) {
                Some(w) => {
                    trace.max_abs_w = trace.max_abs_w.max(w.norm());
                    let (q, _) = self.poly().reciprocal_value_and_derivative(z);
                    let (_, dp) = self.poly().value_and_derivative(z);
                    let lhs = (Complex64::new(1.0, 0.0) + w * base).norm();
                    let rhs = nf * (q + beta.conj() * z.powu(n as u32) * w_scale).norm() / dp.norm();
                    let dev = (lhs - rhs).abs() / lhs.max(rhs).max(1.0);
                    trace.identity16_deviation = trace.identity16_deviation.max(dev);
                    trace.w_values.push(w);
                }
                None => {
                    trace.flagged.push(j);
                    trace.w_values.push(Complex64::new(f64::NAN, f64::NAN));
                }
            }
        }
        trace.partial = !trace.flagged.is_empty();
        // the numerator carries a factor z
        trace.w_at_zero = self.witness_at(Complex64::new(0.0, 0.0), mu, beta).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        Ok(trace)
    }

    /// Zeros of `Q + m conj(beta) z^n / k^{n-mu}` near the unit circle.
    fn witness_angles(&self, mu: usize, beta: Complex64) -> Vec<f64> {
        let (n, k) = (self.n(), self.k());
        let mut coeffs = self.inst.poly().conjugate_reciprocal().coeffs().to_vec();
        coeffs.resize(n + 1, Complex64::new(0.0, 0.0));
        coeffs[n] += beta.conj() * weight(self.m().value, k, n, mu);
        crate::poly::ComplexPoly::new(coeffs)
            .ok()
            .filter(|q| q.degree() > 0)
            .and_then(|q| crate::roots::RootFinder::default().find(&q).ok())
            .map(|r| {
                r.roots
                    .iter()
                    .filter(|z| (z.norm() - 1.0).abs() <= 1.0 - crate::eval::NEAR_CIRCLE_BAND)
                    .map(|z| z.arg().rem_euclid(TAU))
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Mean comparison `(int |1 + k^mu w|^p)^{1/p} <= (int |1 + k^mu e^{i theta}|^p)^{1/p}`.
    pub fn check_subordination_mean(&self, mu: usize, beta: Complex64, p: f64) -> Result<InequalityCertificate, CheckError> {
        check_domain(self.k(), mu, None, Some(beta), Some(p))?;
        self.require_gap(mu)?;
        let (n, k) = (self.n(), self.k());
        let nf = n as f64;
        let w_scale = weight(self.m().value, k, n, mu);
        // m = 0: nQ and zQ' do not cancel near a multiple zero on the circle
        let floor = if w_scale == 0.0 { 0.0 } else { 1e-12 * nf * self.poly().scale_at(1.0) };
        let poly = self.poly();
        // |1 + k^mu w| through (16), which avoids dividing by k^mu twice
        let shift_angles = self.witness_angles(mu, beta);
        let mean = self.integrate(p, &shift_angles, |pt| {
            let (q, dq) = poly.reciprocal_value_and_derivative(pt.z);
            let denominator = (q * nf - pt.z * dq).norm();
            if denominator <= floor {
                return Sample::Singular;
            }
            Sample::Finite(nf * (q + beta.conj() * pt.z.powu(n as u32) * w_scale).norm() / denominator)
        });
        let kernel = self.kernel_mean(mu, p);
        let params = Params { beta: Some(beta), mu: Some(mu), p: Some(p), ..self.base_params() };
        Ok(self.judge(CheckerId::Subordination, mean.est, kernel.est, params, mean.quality.worst(kernel.quality)))
    }
}

/// Certificate at the node with the smallest slack relative to `scale`.
fn worst_row(
    id: CheckerId,
    rows: impl Iterator<Item = (f64, f64)>,
    scale: f64,
    extra_err: f64,
    params: Params,
) -> InequalityCertificate {
    let mut worst: Option<(f64, f64)> = None;
    for (lhs, rhs) in rows {
        if worst.is_none_or(|(l, r)| rhs - lhs < r - l) {
            worst = Some((lhs, rhs));
        }
    }
    let (lhs, rhs) = worst.unwrap_or((0.0, 0.0));
    let rounding = 64.0 * f64::EPSILON * scale;
    InequalityCertificate::judge(id, Est::new(lhs, rounding + extra_err), Est::new(rhs, rounding), params, Quality::Converged)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct WitnessTrace {
    pub theta_grid: Vec<f64>,
    /// `w(e^{i theta})`; NaN at flagged nodes.
    pub w_values: Vec<Complex64>,
    pub max_abs_w: f64,
    pub w_at_zero: Complex64,
    /// Grid indices where `nQ - zQ'` vanished to working precision.
    pub flagged: Vec<usize>,
    pub partial: bool,
    /// Largest relative gap between the two sides of (16) on the grid.
    pub identity16_deviation: f64,
}

/// Parameter grids for a full verification run of one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamGrid {
    /// `|alpha|` as multiples of the boundary value (`k` or `k^mu`).
    pub alpha_rel: Vec<f64>,
    /// `|alpha|` as absolute values; those below the boundary are skipped.
    pub alpha_abs: Vec<f64>,
    pub alpha_phases: usize,
    pub betas: Vec<Complex64>,
    pub ps: Vec<f64>,
    /// Hölder exponents `s` for Theorem 3.
    pub ss: Vec<f64>,
    pub checkers: Vec<CheckerId>,
}

impl Default for ParamGrid {
    fn default() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            alpha_rel: vec![1.0, 1.5],
            alpha_abs: vec![1.0, 2.0, 5.0],
            alpha_phases: 8,
            betas: vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(-1.0, 0.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(h, h),
            ],
            ps: vec![0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 8.0],
            ss: vec![2.0],
            checkers: CheckerId::SWEEP.to_vec(),
        }
    }
}

impl ParamGrid {
    /// `alpha` values with `|alpha| >= base`, each at `alpha_phases` phases.
    pub fn alphas(&self, base: f64) -> Vec<Complex64> {
        let mut moduli: Vec<f64> = self.alpha_rel.iter().map(|r| r * base).collect();
        moduli.extend(self.alpha_abs.iter().copied().filter(|&a| a >= base * (1.0 - ALPHA_TOLERANCE)));
        moduli.sort_by(f64::total_cmp);
        moduli.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
        let phases = self.alpha_phases.max(1);
        moduli
            .iter()
            .flat_map(|&r| (0..phases).map(move |j| Complex64::from_polar(r, TAU * j as f64 / phases as f64)))
            .collect()
    }
}

/// One point of a sweep: every parameter a checker may use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub p: f64,
    pub s: f64,
}

impl CheckContext<'_> {
    /// Runs one sweep checker at `point`, taking `mu` from the instance.
    pub fn check(&self, id: CheckerId, point: &SweepPoint) -> Result<InequalityCertificate, CheckError> {
        let mu = self.inst.mu();
        let SweepPoint { alpha, beta, p, s } = *point;
        match id {
            CheckerId::Bernstein => self.check_bernstein(),
            CheckerId::Ineq1 => self.check_turan(),
            CheckerId::Ineq2 => self.check_malik_max(),
            CheckerId::Ineq3 => self.check_aziz_shah(mu),
            CheckerId::Ineq4 => self.check_malik_lp(p),
            CheckerId::Ineq5 => self.check_aziz_lp(p),
            CheckerId::Ineq6 => self.check_aziz_rather_polar(alpha),
            CheckerId::Ineq7 => self.check_polar_lacunary(mu, alpha),
            CheckerId::Ineq8 => self.check_rather_mir(mu, alpha),
            CheckerId::Ineq9 => self.check_roshanlal_lp(alpha, p),
            CheckerId::Ineq10 => self.check_roshanlal_lacunary_lp(mu, alpha, p),
            CheckerId::Thm1 => self.check_theorem1(alpha, beta, p),
            CheckerId::Cor1 => self.check_corollary1(alpha, beta, p),
            CheckerId::Cor2 => self.check_corollary2(beta, p),
            CheckerId::Thm2 => self.check_theorem2(mu, alpha, beta, p),
            CheckerId::Cor3 => self.check_corollary3(mu, alpha, beta, p),
            CheckerId::Thm3 => self.check_theorem3(mu, alpha, beta, p, s),
            CheckerId::Lemma1 => self.check_lemma1_pointwise(mu),
            CheckerId::Chain => self.check_pointwise_chain(mu, alpha, beta),
            CheckerId::Remark1 => self.check_remark1_pointwise(alpha),
            CheckerId::Subordination => self.check_subordination_mean(mu, beta, p),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rejection {
    pub id: CheckerId,
    pub params: Params,
    pub reason: CheckError,
}

pub type Outcome = Result<InequalityCertificate, Rejection>;

/// Runs every enabled sweep checker over the grid, passing each outcome to
/// `sink` in a fixed order.
pub fn run_instance(ctx: &CheckContext<'_>, grid: &ParamGrid, sink: &mut dyn FnMut(Outcome)) {
    let k = ctx.k();
    let mu = ctx.inst.mu();
    let alphas_k = grid.alphas(k);
    let alphas_mu = grid.alphas(k.powi(mu as i32));
    let enabled = |id: CheckerId| grid.checkers.contains(&id);
    let mut emit = |id: CheckerId, params: Params, r: Result<InequalityCertificate, CheckError>| {
        sink(r.map_err(|reason| Rejection { id, params, reason }));
    };
    let kp = Params { k: Some(k), ..Params::default() };

    if enabled(CheckerId::Bernstein) {
        emit(CheckerId::Bernstein, Params::default(), ctx.check_bernstein());
    }
    if enabled(CheckerId::Ineq1) {
        emit(CheckerId::Ineq1, Params::default(), ctx.check_turan());
    }
    if enabled(CheckerId::Ineq2) {
        emit(CheckerId::Ineq2, kp, ctx.check_malik_max());
    }
    if enabled(CheckerId::Ineq3) {
        emit(CheckerId::Ineq3, Params { mu: Some(mu), ..kp }, ctx.check_aziz_shah(mu));
    }
    for &p in &grid.ps {
        if enabled(CheckerId::Ineq4) {
            emit(CheckerId::Ineq4, Params { p: Some(p), ..Params::default() }, ctx.check_malik_lp(p));
        }
        if enabled(CheckerId::Ineq5) {
            emit(CheckerId::Ineq5, Params { p: Some(p), ..kp }, ctx.check_aziz_lp(p));
        }
    }
    for &alpha in &alphas_k {
        let ap = Params { alpha: Some(alpha), ..kp };
        if enabled(CheckerId::Ineq6) {
            emit(CheckerId::Ineq6, ap, ctx.check_aziz_rather_polar(alpha));
        }
        for &p in &grid.ps {
            if enabled(CheckerId::Ineq9) {
                emit(CheckerId::Ineq9, Params { p: Some(p), ..ap }, ctx.check_roshanlal_lp(alpha, p));
            }
            for &beta in &grid.betas {
                let bp = Params { beta: Some(beta), p: Some(p), ..ap };
                if enabled(CheckerId::Thm1) {
                    emit(CheckerId::Thm1, bp, ctx.check_theorem1(alpha, beta, p));
                }
                if enabled(CheckerId::Cor1) {
                    emit(CheckerId::Cor1, bp, ctx.check_corollary1(alpha, beta, p));
                }
            }
        }
    }
    for &p in &grid.ps {
        for &beta in &grid.betas {
            if enabled(CheckerId::Cor2) {
                emit(CheckerId::Cor2, Params { beta: Some(beta), p: Some(p), ..kp }, ctx.check_corollary2(beta, p));
            }
        }
    }
    for &alpha in &alphas_mu {
        let ap = Params { alpha: Some(alpha), mu: Some(mu), ..kp };
        if enabled(CheckerId::Ineq7) {
            emit(CheckerId::Ineq7, ap, ctx.check_polar_lacunary(mu, alpha));
        }
        if enabled(CheckerId::Ineq8) {
            emit(CheckerId::Ineq8, ap, ctx.check_rather_mir(mu, alpha));
        }
        for &p in &grid.ps {
            if enabled(CheckerId::Ineq10) {
                emit(CheckerId::Ineq10, Params { p: Some(p), ..ap }, ctx.check_roshanlal_lacunary_lp(mu, alpha, p));
            }
            for &beta in &grid.betas {
                let bp = Params { beta: Some(beta), p: Some(p), ..ap };
                if enabled(CheckerId::Thm2) {
                    emit(CheckerId::Thm2, bp, ctx.check_theorem2(mu, alpha, beta, p));
                }
                if enabled(CheckerId::Cor3) {
                    emit(CheckerId::Cor3, bp, ctx.check_corollary3(mu, alpha, beta, p));
                }
                if enabled(CheckerId::Thm3) {
                    for &s in &grid.ss {
                        let r = s / (s - 1.0);
                        emit(CheckerId::Thm3, Params { r: Some(r), s: Some(s), ..bp }, ctx.check_theorem3(mu, alpha, beta, p, s));
                    }
                }
            }
        }
        if enabled(CheckerId::Chain) {
            for &beta in &grid.betas {
                emit(CheckerId::Chain, Params { beta: Some(beta), ..ap }, ctx.check_pointwise_chain(mu, alpha, beta));
            }
        }
    }

    // pointwise lemmas and the subordination step; off in the default grid
    if enabled(CheckerId::Lemma1) {
        emit(CheckerId::Lemma1, Params { mu: Some(mu), ..kp }, ctx.check_lemma1_pointwise(mu));
    }
    if enabled(CheckerId::Remark1) {
        for &alpha in &alphas_k {
            emit(CheckerId::Remark1, Params { alpha: Some(alpha), ..kp }, ctx.check_remark1_pointwise(alpha));
        }
    }
    if enabled(CheckerId::Subordination) {
        for &p in &grid.ps {
            for &beta in &grid.betas {
                let bp = Params { beta: Some(beta), p: Some(p), mu: Some(mu), ..kp };
                emit(CheckerId::Subordination, bp, ctx.check_subordination_mean(mu, beta, p));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::Verdict;
    use crate::instance::InstanceSpec;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn power(k: f64, n: usize, sign: f64) -> Instance {
        InstanceSpec::from_zeros(vec![c(sign * k, 0.0); n], c(1.0, 0.0), k, 1).validate().unwrap()
    }

    fn monomial(n: usize, k: f64) -> Instance {
        InstanceSpec::from_zeros(vec![c(0.0, 0.0); n], c(1.0, 0.0), k, 1).validate().unwrap()
    }

    fn lacunary() -> Instance {
        // z^4 + 0.1 z^2 + 0.002 has zeros of modulus at most 0.3
        let poly = crate::poly::ComplexPoly::from_real(&[0.002, 0.0, 0.1, 0.0, 1.0]).unwrap();
        let roots = crate::roots::RootFinder::default().find(&poly).unwrap().roots;
        InstanceSpec::with_poly(roots, c(1.0, 0.0), 0.6, 2, poly).validate().unwrap()
    }

    #[test]
    fn multiple_zero_on_the_unit_circle() {
        let inst = power(1.0, 5, 1.0);
        let ctx = CheckContext::new(&inst, CheckOptions::default());
        for p in [0.5, 2.0] {
            let cert = ctx.check_theorem1(c(2.0, 0.0), c(0.0, 1.0), p).unwrap();
            assert_eq!(cert.verdict, Verdict::Equality, "{cert:?}");
            let cert = ctx.check_subordination_mean(1, c(1.0, 0.0), p).unwrap();
            assert!(cert.verdict.is_sound(), "{cert:?}");
        }
    }

    #[test]
    fn bernstein_examples() {
        let inst = monomial(4, 1.0);
        let ctx = CheckContext::new(&inst, CheckOptions::default());
        assert_eq!(ctx.check_bernstein().unwrap().verdict, Verdict::Equality);
        let inst = InstanceSpec::from_zeros(vec![c(-1.0, 0.0)], c(1.0, 0.0), 1.0, 1).validate().unwrap();
        let ctx = CheckContext::new(&inst, CheckOptions::default());
        let cert = ctx.check_bernstein().unwrap();
        assert!((cert.lhs - 1.0).abs() < 1e-12 && (cert.rhs - 2.0).abs() < 1e-12);
        assert_eq!(cert.verdict, Verdict::Holds);
    }

    #[test]
    fn turan_and_malik_equality() {
        let zeros = vec![Complex64::from_polar(1.0, PI / 2.0), Complex64::from_polar(1.0, -PI / 2.0)];
        let inst = InstanceSpec::from_zeros(zeros, c(1.0, 0.0), 1.0, 1).validate().unwrap();
        let ctx = CheckContext::new(&inst, CheckOptions::default());
        let cert = ctx.check_turan().unwrap();
        assert!((cert.lhs - 4.0).abs() < 1e-12 && (cert.rhs - 4.0).abs() < 1e-12);
        assert_eq!(cert.verdict, Verdict::Equality);

        let inst = power(0.5, 2, -1.0);
        let ctx = CheckContext::new(&inst, CheckOptions::default());
        let cert = ctx.check_malik_max().unwrap();
        assert!((cert.lhs - 4.5).abs() < 1e-12 && (cert.rhs - 4.5).abs() < 1e-12);
        assert_eq!(cert.verdict, Verdict::Equality);
    }

    #[test]
    fn theorem1_equality_for_shifted_power() {
        let inst = power(0.5, 2, 1.0);
        let ctx = CheckContext::new(&inst, CheckOptions::default());
        for beta in [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)] {
            let cert = ctx.check_theorem1(c(1.0, 0.0), beta, 2.0).unwrap();
            assert!((cert.lhs - (2.5 * PI).sqrt()).abs() < 1e-10);
            assert!((cert.rhs - (2.5 * PI).sqrt()).abs() < 1e-10);
            assert_eq!(cert.verdict, Verdict::Equality);
        }
        let boundary = ctx.check_theorem1(c(0.5, 0.0), c(0.0, 0.0), 2.0).unwrap();
        assert_eq!(boundary.lhs, 0.0);
        assert!(ctx.check_theorem1(c(0.4, 0.0), c(0.0, 0.0), 2.0).is_err());
    }

    #[test]
    fn reductions_agree() {
        let inst = lacunary();
        let ctx = CheckContext::new(&inst, CheckOptions::default());
        let a = c(1.0, 0.3);
        let t1 = ctx.check_theorem1(a, c(0.0, 1.0), 1.5).unwrap();
        let t2 = ctx.check_theorem2(1, a, c(0.0, 1.0), 1.5).unwrap();
        assert!((t1.lhs - t2.lhs).abs() <= 1e-10 * t1.lhs);
        let c3 = ctx.check_corollary3(2, a, c(0.0, 0.0), 2.0).unwrap();
        let i10 = ctx.check_roshanlal_lacunary_lp(2, a, 2.0).unwrap();
        assert!((c3.lhs - i10.lhs).abs() <= 1e-12 * c3.lhs);
        assert!((c3.rhs - i10.rhs).abs() <= 1e-12 * c3.rhs);
        let c1 = ctx.check_corollary1(a, c(0.0, 0.0), 3.0).unwrap();
        let i9 = ctx.check_roshanlal_lp(a, 3.0).unwrap();
        assert_eq!((c1.lhs, c1.rhs), (i9.lhs, i9.rhs));
    }

    #[test]
    fn lacunary_examples_hold() {
        let inst = lacunary();
        let ctx = CheckContext::new(&inst, CheckOptions::default());
        assert!(ctx.check_aziz_shah(2).unwrap().verdict.is_sound());
        assert_eq!(ctx.check_polar_lacunary(2, c(1.0, 0.0)).unwrap().verdict, Verdict::Holds);
        assert_eq!(ctx.check_roshanlal_lacunary_lp(2, c(1.0, 0.0), 2.0).unwrap().verdict, Verdict::Holds);
        assert_eq!(ctx.check_theorem2(2, c(1.0, 0.0), c(0.0, 0.5), 1.0).unwrap().verdict, Verdict::Holds);
        assert!(ctx.check_theorem2(3, c(1.0, 0.0), c(0.0, 0.5), 1.0).is_err());
    }

    #[test]
    fn lemma1_equality_for_shifted_power() {
        let inst = power(0.5, 2, 1.0);
        let ctx = CheckContext::new(&inst, CheckOptions::default());
        assert_eq!(ctx.check_lemma1_pointwise(1).unwrap().verdict, Verdict::Equality);
    }

    #[test]
    fn remark1_fails_for_linear_polynomials() {
        // P = z - 0.5, k = 0.5, alpha = 2: |D| - m n/k^{n-1} = 1.5 < (|alpha| - k)|P| at z = -1
        let inst = power(0.5, 1, 1.0);
        let ctx = CheckContext::new(&inst, CheckOptions::default());
        let cert = ctx.check_remark1_pointwise(c(2.0, 0.0)).unwrap();
        assert_eq!(cert.verdict, Verdict::Violated);
        assert!((cert.lhs - 2.25).abs() < 1e-12 && (cert.rhs - 1.5).abs() < 1e-12);
        let inst = power(0.5, 3, 1.0);
        let ctx = CheckContext::new(&inst, CheckOptions::default());
        assert!(ctx.check_remark1_pointwise(c(2.0, 0.0)).unwrap().verdict.is_sound());
    }

    #[test]
    fn witness_saturates_for_shifted_power() {
        let inst = power(0.5, 3, 1.0);
        let ctx = CheckContext::new(&inst, CheckOptions::default());
        let trace = ctx.subordination_witness(1, c(0.0, 0.0)).unwrap();
        assert!(!trace.partial);
        assert_eq!(trace.w_at_zero, c(0.0, 0.0));
        for w in &trace.w_values {
            assert!((w.norm() - 1.0).abs() < 1e-12);
        }
        assert!(trace.identity16_deviation < 1e-12);
    }

    #[test]
    fn theorem3_matches_parseval_at_p2() {
        // first rhs factor at pr = 4: int |1 + c e^{it}|^4 = 2 pi (1 + 4c^2 + c^4)
        let inst = lacunary();
        let ctx = CheckContext::new(&inst, CheckOptions::default());
        let cert = ctx.check_theorem3(2, c(1.0, 0.0), c(1.0, 0.0), 2.0, 2.0).unwrap();
        assert!(cert.verdict.is_sound());
        let cc: f64 = 0.36;
        let exact = (TAU * (1.0 + 4.0 * cc * cc + cc.powi(4))).powf(0.25);
        assert!((ctx.kernel_mean(2, 4.0).est.value - exact).abs() < 1e-12);
        assert!(ctx.check_theorem3_rs(2, c(1.0, 0.0), c(1.0, 0.0), 2.0, 2.0, 3.0).is_err());
    }

    #[test]
    fn alpha_grid_respects_the_boundary() {
        let grid = ParamGrid::default();
        let alphas = grid.alphas(0.6);
        assert_eq!(alphas.len(), 5 * 8);
        assert!(alphas.iter().all(|a| a.norm() >= 0.6 * (1.0 - 1e-12)));
        assert_eq!(grid.alphas(1.0).len(), 4 * 8);
    }
}
