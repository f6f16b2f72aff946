//! Trapezoidal quadrature of `int_0^{2 pi} |f(theta)|^p d theta` with node
//! doubling.
//!
//! Smooth periodic integrands converge spectrally on equispaced nodes. When
//! the integrand has known rough points (zeros exactly on the circle, where
//! `|f|^p` has a cusp) the circle is split into arcs at those points and each
//! arc is integrated after the `sin^4` periodizing substitution, which
//! flattens the endpoint singularities and restores fast convergence.

use std::f64::consts::{PI, TAU};

/// Modulus of the integrand at one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sample {
    Finite(f64),
    /// 0/0 or x/0 at working precision; resolved by local subdivision.
    Singular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadStatus {
    Converged,
    /// Node cap reached; the estimate and error bound are still reported.
    Unconverged,
    /// The integrand blows up near a singular node.
    Indeterminate,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadratureSettings {
    pub tol: f64,
    pub min_nodes: usize,
    pub max_nodes: usize,
}

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self { tol: DEFAULT_TOLERANCE, min_nodes: 256, max_nodes: 1 << 20 }
    }
}

impl QuadratureSettings {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

/// Node placement on the circle.
#[derive(Debug, Clone, PartialEq)]
pub enum NodeScheme {
    Uniform,
    /// Arcs between the sorted break angles, each periodized.
    Graded { breaks: Vec<f64> },
}

#[derive(Debug, Clone, Default)]
pub struct NodeSet {
    pub theta: Vec<f64>,
    pub weight: Vec<f64>,
}

impl NodeSet {
    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }
}

// t - (2/3) sin(2 pi t)/pi + sin(4 pi t)/(12 pi); derivative (8/3) sin^4(pi t)
fn periodize(t: f64) -> (f64, f64) {
    let s = (PI * t).sin();
    let psi = t - 2.0 * (TAU * t).sin() / (3.0 * PI) + (2.0 * TAU * t).sin() / (12.0 * PI);
    (psi, 8.0 / 3.0 * s.powi(4))
}

impl NodeScheme {
    /// Graded nodes around the given angles, or uniform when there are none.
    pub fn around(angles: &[f64]) -> Self {
        if angles.is_empty() {
            return NodeScheme::Uniform;
        }
        let mut breaks: Vec<f64> = angles.iter().map(|a| a.rem_euclid(TAU)).collect();
        breaks.sort_by(f64::total_cmp);
        breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        if breaks.len() > 1 && (breaks[0] + TAU - breaks[breaks.len() - 1]) < 1e-12 {
            breaks.pop();
        }
        NodeScheme::Graded { breaks }
    }

    fn arcs(&self) -> usize {
        match self {
            NodeScheme::Uniform => 1,
            NodeScheme::Graded { breaks } => breaks.len(),
        }
    }

    /// Nodes per arc at doubling level `level`, or `None` past the cap.
    pub fn per_arc(&self, level: usize, settings: &QuadratureSettings) -> Option<usize> {
        let arcs = self.arcs();
        let per_arc = (settings.min_nodes << level).div_ceil(arcs).next_power_of_two().max(16);
        let first = settings.min_nodes.div_ceil(arcs).next_power_of_two().max(16);
        if level > 0 && per_arc * arcs > settings.max_nodes.max(first * arcs) {
            None
        } else {
            Some(per_arc)
        }
    }

    pub fn nodes(&self, per_arc: usize) -> NodeSet {
        match self {
            NodeScheme::Uniform => {
                let h = TAU / per_arc as f64;
                NodeSet {
                    theta: (0..per_arc).map(|j| h * j as f64).collect(),
                    weight: vec![h; per_arc],
                }
            }
            NodeScheme::Graded { breaks } => {
                let mut set = NodeSet::default();
                for (i, &start) in breaks.iter().enumerate() {
                    let end = breaks.get(i + 1).copied().unwrap_or(breaks[0] + TAU);
                    let length = end - start;
                    for j in 0..per_arc {
                        let (psi, dpsi) = periodize(j as f64 / per_arc as f64);
                        set.theta.push((start + length * psi).rem_euclid(TAU));
                        set.weight.push(length * dpsi / per_arc as f64);
                    }
                }
                set
            }
        }
    }
}

/// An integrand `theta -> |f(theta)|` on the circle.
pub trait CircleIntegrand {
    /// Fill `out` with samples at `nodes`. `level` identifies the node set so
    /// implementations can reuse cached data.
    fn sample(&self, level: usize, nodes: &NodeSet, out: &mut Vec<Sample>);

    fn sample_at(&self, theta: f64) -> Sample;
}

/// Any closure `theta -> Sample` is an integrand.
pub struct FnIntegrand<F: Fn(f64) -> Sample>(pub F);

impl<F: Fn(f64) -> Sample> CircleIntegrand for FnIntegrand<F> {
    fn sample(&self, _level: usize, nodes: &NodeSet, out: &mut Vec<Sample>) {
        out.clear();
        out.extend(nodes.theta.iter().map(|&t| (self.0)(t)));
    }

    fn sample_at(&self, theta: f64) -> Sample {
        (self.0)(theta)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PowerIntegral {
    /// `int |f|^p`; may overflow to infinity for large `p`, `mean` does not.
    pub raw: f64,
    pub mean: f64,
    pub p: f64,
    pub abs_error: f64,
    pub mean_error: f64,
    pub nodes: usize,
    pub status: QuadStatus,
}

impl PowerIntegral {
    pub fn converged(&self) -> bool {
        self.status == QuadStatus::Converged
    }
}

const PROBE_STEPS: usize = 12;

/// Value of a singular node from one-sided limits, or `None` when the
/// integrand grows without bound towards it.
fn resolve_singular<I: CircleIntegrand + ?Sized>(integrand: &I, theta: f64, spacing: f64) -> Option<f64> {
    let mut values = Vec::with_capacity(PROBE_STEPS);
    let mut delta = spacing;
    for _ in 0..PROBE_STEPS {
        delta *= 0.5;
        let left = integrand.sample_at(theta - delta);
        let right = integrand.sample_at(theta + delta);
        match (left, right) {
            (Sample::Finite(a), Sample::Finite(b)) if a.is_finite() && b.is_finite() => values.push(0.5 * (a + b)),
            _ => {}
        }
    }
    let last = *values.last()?;
    if values.len() >= 4 {
        let tail = &values[values.len() - 4..];
        let growing = tail.windows(2).all(|w| w[1] > w[0] * 1.05);
        if growing && tail[3] > 1.5 * tail[0] {
            return None;
        }
    }
    Some(last)
}

/// `int_0^{2pi} |f|^p d theta` by trapezoidal node doubling.
///
/// Stops when successive levels differ by at most `max(tol, tol * value)`
/// in raw units. The integrand is scaled by its largest first-level sample
/// so that `p` in the hundreds neither overflows nor underflows.
pub fn integrate_power<I: CircleIntegrand + ?Sized>(
    integrand: &I,
    scheme: &NodeScheme,
    p: f64,
    settings: &QuadratureSettings,
) -> PowerIntegral {
    assert!(p > 0.0, "exponent must be positive");
    let mut samples = Vec::new();
    let mut scale = 0.0f64;
    let mut previous: Option<f64> = None;
    let mut nodes_used = 0;
    let mut last = 0.0;
    let mut last_diff = f64::INFINITY;

    let indeterminate = |nodes: usize| PowerIntegral {
        raw: f64::NAN,
        mean: f64::NAN,
        p,
        abs_error: f64::INFINITY,
        mean_error: f64::INFINITY,
        nodes,
        status: QuadStatus::Indeterminate,
    };

    let mut level = 0;
    while let Some(per_arc) = scheme.per_arc(level, settings) {
        let nodes = scheme.nodes(per_arc);
        integrand.sample(level, &nodes, &mut samples);
        let spacing = TAU / nodes.len() as f64;
        let mut values = Vec::with_capacity(samples.len());
        for (i, s) in samples.iter().enumerate() {
            let v = match *s {
                Sample::Finite(v) if v.is_finite() => v,
                Sample::Finite(_) => return indeterminate(nodes.len()),
                Sample::Singular => match resolve_singular(integrand, nodes.theta[i], spacing) {
                    Some(v) => v,
                    None => return indeterminate(nodes.len()),
                },
            };
            values.push(v);
        }
        if scale == 0.0 {
            scale = values.iter().copied().fold(0.0, f64::max);
        }
        let sum: f64 = if scale > 0.0 {
            values.iter().zip(&nodes.weight).map(|(v, w)| w * (v / scale).powf(p)).sum()
        } else {
            0.0
        };
        nodes_used = nodes.len();
        if let Some(prev) = previous {
            last_diff = (sum - prev).abs();
            let scale_p = scale.powf(p);
            let abs_allowance = if scale_p.is_finite() && scale_p > 0.0 { settings.tol / scale_p } else { 0.0 };
            if last_diff <= abs_allowance.max(settings.tol * sum.abs()) {
                last = sum;
                return finish(scale, last, last_diff, p, nodes_used, QuadStatus::Converged);
            }
        }
        previous = Some(sum);
        last = sum;
        level += 1;
    }
    finish(scale, last, last_diff, p, nodes_used, QuadStatus::Unconverged)
}

fn finish(scale: f64, scaled: f64, diff: f64, p: f64, nodes: usize, status: QuadStatus) -> PowerIntegral {
    if scale == 0.0 || scaled == 0.0 {
        return PowerIntegral { raw: 0.0, mean: 0.0, p, abs_error: 0.0, mean_error: 0.0, nodes, status };
    }
    let mean = scale * scaled.powf(1.0 / p);
    let scale_p = scale.powf(p);
    PowerIntegral {
        raw: scale_p * scaled,
        mean,
        p,
        abs_error: scale_p * diff,
        mean_error: mean * diff / (p * scaled),
        nodes,
        status,
    }
}
