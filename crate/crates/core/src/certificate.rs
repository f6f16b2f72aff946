//! Certificates: the checked value of one inequality at one parameter point.

use std::fmt;

use num_complex::Complex64;

/// Relative tolerance for declaring two sides equal.
pub const EQUALITY_TOLERANCE: f64 = 1e-8;
/// Floor of the denominator of `rel_slack`.
pub const REL_SLACK_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckerId {
    Bernstein,
    Ineq1,
    Ineq2,
    Ineq3,
    Ineq4,
    Ineq5,
    Ineq6,
    Ineq7,
    Ineq8,
    Ineq9,
    Ineq10,
    Thm1,
    Cor1,
    Cor2,
    Thm2,
    Cor3,
    Thm3,
    Lemma1,
    Chain,
    Remark1,
    Subordination,
}

impl CheckerId {
    /// The seventeen integral and max-norm results checked in sweeps.
    pub const SWEEP: [CheckerId; 17] = [
        CheckerId::Bernstein,
        CheckerId::Ineq1,
        CheckerId::Ineq2,
        CheckerId::Ineq3,
        CheckerId::Ineq4,
        CheckerId::Ineq5,
        CheckerId::Ineq6,
        CheckerId::Ineq7,
        CheckerId::Ineq8,
        CheckerId::Ineq9,
        CheckerId::Ineq10,
        CheckerId::Thm1,
        CheckerId::Cor1,
        CheckerId::Cor2,
        CheckerId::Thm2,
        CheckerId::Cor3,
        CheckerId::Thm3,
    ];

    pub const ALL: [CheckerId; 21] = [
        CheckerId::Bernstein,
        CheckerId::Ineq1,
        CheckerId::Ineq2,
        CheckerId::Ineq3,
        CheckerId::Ineq4,
        CheckerId::Ineq5,
        CheckerId::Ineq6,
        CheckerId::Ineq7,
        CheckerId::Ineq8,
        CheckerId::Ineq9,
        CheckerId::Ineq10,
        CheckerId::Thm1,
        CheckerId::Cor1,
        CheckerId::Cor2,
        CheckerId::Thm2,
        CheckerId::Cor3,
        CheckerId::Thm3,
        CheckerId::Lemma1,
        CheckerId::Chain,
        CheckerId::Remark1,
        CheckerId::Subordination,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckerId::Bernstein => "BERNSTEIN",
            CheckerId::Ineq1 => "INEQ_1",
            CheckerId::Ineq2 => "INEQ_2",
            CheckerId::Ineq3 => "INEQ_3",
            CheckerId::Ineq4 => "INEQ_4",
            CheckerId::Ineq5 => "INEQ_5",
            CheckerId::Ineq6 => "INEQ_6",
            CheckerId::Ineq7 => "INEQ_7",
            CheckerId::Ineq8 => "INEQ_8",
            CheckerId::Ineq9 => "INEQ_9",
            CheckerId::Ineq10 => "INEQ_10",
            CheckerId::Thm1 => "THM1",
            CheckerId::Cor1 => "COR1",
            CheckerId::Cor2 => "COR2",
            CheckerId::Thm2 => "THM2",
            CheckerId::Cor3 => "COR3",
            CheckerId::Thm3 => "THM3",
            CheckerId::Lemma1 => "LEMMA1",
            CheckerId::Chain => "CHAIN",
            CheckerId::Remark1 => "REMARK1",
            CheckerId::Subordination => "SUBORD_15",
        }
    }

    pub fn parse(name: &str) -> Option<CheckerId> {
        CheckerId::ALL.iter().copied().find(|id| id.as_str().eq_ignore_ascii_case(name))
    }
}

impl fmt::Display for CheckerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Parameters of a certificate; unused ones are `None`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Params {
    pub alpha: Option<Complex64>,
    pub beta: Option<Complex64>,
    pub k: Option<f64>,
    pub mu: Option<usize>,
    pub p: Option<f64>,
    pub r: Option<f64>,
    pub s: Option<f64>,
}

impl Params {
    /// Total order used to sort reports; `None` sorts first.
    pub fn sort_key(&self) -> [u64; 10] {
        fn f(x: Option<f64>) -> u64 {
            x.map_or(0, |v| ordered_bits(v) | 1 << 63)
        }
        [
            f(self.k),
            self.mu.map_or(0, |m| m as u64 + 1),
            f(self.p),
            f(self.r),
            f(self.s),
            f(self.alpha.map(|a| a.re)),
            f(self.alpha.map(|a| a.im)),
            f(self.beta.map(|b| b.re)),
            f(self.beta.map(|b| b.im)),
            0,
        ]
    }
}

// bit pattern whose integer order matches the float order; top bit cleared
fn ordered_bits(v: f64) -> u64 {
    let bits = v.to_bits();
    let key = if bits >> 63 == 1 { !bits } else { bits | 1 << 63 };
    key >> 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Holds,
    Equality,
    ViolatedWithinError,
    Violated,
    Indeterminate,
}

impl Verdict {
    pub const ALL: [Verdict; 5] =
        [Verdict::Holds, Verdict::Equality, Verdict::ViolatedWithinError, Verdict::Violated, Verdict::Indeterminate];

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Equality => "equality",
            Verdict::ViolatedWithinError => "violated_within_error",
            Verdict::Violated => "violated",
            Verdict::Indeterminate => "indeterminate",
        }
    }

    pub fn is_sound(self) -> bool {
        matches!(self, Verdict::Holds | Verdict::Equality)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A value with an absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Est {
    pub value: f64,
    pub err: f64,
}

impl Est {
    pub fn exact(value: f64) -> Self {
        Self { value, err: 0.0 }
    }

    pub fn new(value: f64, err: f64) -> Self {
        Self { value, err }
    }

    pub fn scale(self, c: f64) -> Self {
        Self { value: self.value * c, err: self.err * c.abs() }
    }

    pub fn add(self, other: Est) -> Self {
        Self { value: self.value + other.value, err: self.err + other.err }
    }

    pub fn sub(self, other: Est) -> Self {
        Self { value: self.value - other.value, err: self.err + other.err }
    }

    pub fn mul(self, other: Est) -> Self {
        Self {
            value: self.value * other.value,
            err: self.err * other.value.abs() + other.err * self.value.abs() + self.err * other.err,
        }
    }
}

/// Whether the numbers behind a certificate came from converged solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Quality {
    #[default]
    Converged,
    Unconverged,
    Indeterminate,
}

impl Quality {
    pub fn worst(self, other: Quality) -> Quality {
        use Quality::*;
        match (self, other) {
            (Indeterminate, _) | (_, Indeterminate) => Indeterminate,
            (Unconverged, _) | (_, Unconverged) => Unconverged,
            _ => Converged,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InequalityCertificate {
    pub id: CheckerId,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub slack: f64,
    pub rel_slack: f64,
    pub params: Params,
    pub error_budget: f64,
    pub verdict: Verdict,
}

impl InequalityCertificate {
    /// Certificate for `lhs <= rhs`.
    pub fn judge(id: CheckerId, lhs: Est, rhs: Est, params: Params, quality: Quality) -> Self {
        let budget = lhs.err + rhs.err;
        let slack = rhs.value - lhs.value;
        let magnitude = lhs.value.abs().max(rhs.value.abs());
        let verdict = if quality == Quality::Indeterminate || !slack.is_finite() || !budget.is_finite() {
            Verdict::Indeterminate
        } else {
            classify(slack, magnitude, budget, quality)
        };
        Self {
            id,
            lhs: lhs.value,
            rhs: rhs.value,
            slack,
            rel_slack: slack / rhs.value.abs().max(REL_SLACK_FLOOR),
            params,
            error_budget: budget,
            verdict,
        }
    }

    /// Ratio `lhs / rhs`, the quantity tracked by the limit ladders.
    pub fn ratio(&self) -> f64 {
        self.lhs / self.rhs
    }
}

fn classify(slack: f64, magnitude: f64, budget: f64, quality: Quality) -> Verdict {
    let equality_tol = EQUALITY_TOLERANCE * magnitude;
    if magnitude == 0.0 || slack.abs() <= equality_tol.max(budget) {
        if quality == Quality::Unconverged && budget > equality_tol {
            return Verdict::Indeterminate;
        }
        return Verdict::Equality;
    }
    if slack > 0.0 {
        Verdict::Holds
    } else if slack < -budget - equality_tol {
        Verdict::Violated
    } else {
        Verdict::ViolatedWithinError
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn judge(lhs: f64, rhs: f64, budget: f64) -> Verdict {
        InequalityCertificate::judge(
            CheckerId::Thm1,
            Est::exact(lhs),
            Est::new(rhs, budget),
            Params::default(),
            Quality::Converged,
        )
        .verdict
    }

    #[test]
    fn verdict_thresholds() {
        assert_eq!(judge(1.0, 2.0, 0.0), Verdict::Holds);
        assert_eq!(judge(1.0, 1.0 + 5e-9, 0.0), Verdict::Equality);
        assert_eq!(judge(1.0 + 5e-9, 1.0, 0.0), Verdict::Equality);
        assert_eq!(judge(1.0, 0.999, 0.01), Verdict::Equality);
        assert_eq!(judge(1.0, 0.999, 0.0), Verdict::Violated);
        assert_eq!(judge(0.0, 0.0, 0.0), Verdict::Equality);
    }

    #[test]
    fn violated_within_error_band() {
        // slack -2e-8 against an equality tolerance of 1e-8
        let v = InequalityCertificate::judge(
            CheckerId::Thm1,
            Est::new(1.0 + 2e-8, 0.0),
            Est::new(1.0, 0.0),
            Params::default(),
            Quality::Converged,
        );
        assert_eq!(v.verdict, Verdict::Violated);
        let lhs = Est::new(1.0 + 2e-8, 5e-9);
        let rhs = Est::new(1.0, 4e-9);
        assert_eq!(InequalityCertificate::judge(CheckerId::Thm1, lhs, rhs, Params::default(), Quality::Converged).verdict, Verdict::Violated);
        let lhs = Est::new(1.0 + 2e-8, 6e-9);
        let rhs = Est::new(1.0, 6e-9);
        // |slack| exceeds the budget but not budget + tolerance
        assert_eq!(
            InequalityCertificate::judge(CheckerId::Thm1, lhs, rhs, Params::default(), Quality::Converged).verdict,
            Verdict::ViolatedWithinError
        );
    }

    #[test]
    fn unconverged_straddle_is_indeterminate() {
        let v = InequalityCertificate::judge(
            CheckerId::Thm1,
            Est::new(1.0, 0.1),
            Est::new(1.05, 0.0),
            Params::default(),
            Quality::Unconverged,
        );
        assert_eq!(v.verdict, Verdict::Indeterminate);
        let v = InequalityCertificate::judge(
            CheckerId::Thm1,
            Est::new(1.0, 0.01),
            Est::new(2.0, 0.0),
            Params::default(),
            Quality::Unconverged,
        );
        assert_eq!(v.verdict, Verdict::Holds);
    }

    #[test]
    fn rel_slack_survives_zero_rhs() {
        let c = InequalityCertificate::judge(CheckerId::Ineq6, Est::exact(0.0), Est::exact(0.0), Params::default(), Quality::Converged);
        assert_eq!(c.rel_slack, 0.0);
        assert_eq!(c.verdict, Verdict::Equality);
    }

    #[test]
    fn checker_names_round_trip() {
        for id in CheckerId::ALL {
            assert_eq!(CheckerId::parse(id.as_str()), Some(id));
        }
        assert_eq!(CheckerId::parse("thm2"), Some(CheckerId::Thm2));
        assert_eq!(CheckerId::parse("nope"), None);
    }

    #[test]
    fn sort_key_orders_floats() {
        let a = Params { p: Some(-1.0), ..Params::default() };
        let b = Params { p: Some(0.5), ..Params::default() };
        let c = Params { p: Some(2.0), ..Params::default() };
        let none = Params::default();
        assert!(none.sort_key() < a.sort_key());
        assert!(a.sort_key() < b.sort_key());
        assert!(b.sort_key() < c.sort_key());
    }
}
