//! Report assembly: certificate CSV, rejection CSV and `summary.toml`.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use anyhow::Context;
use polarlp::{CheckerId, Complex64, Verdict};
use serde::Serialize;

use crate::suite::SuiteResult;

pub const ARTIFACT_VERSION: &str = concat!("polarlp-report/", env!("CARGO_PKG_VERSION"));

pub const CSV_HEADER: [&str; 18] = [
    "instance_id",
    "checker_id",
    "n",
    "k",
    "mu",
    "p",
    "r",
    "s",
    "alpha_re",
    "alpha_im",
    "beta_re",
    "beta_im",
    "lhs",
    "rhs",
    "slack",
    "rel_slack",
    "error_budget",
    "verdict",
];

/// Shortest round-trip form; exponent notation outside `[1e-4, 1e15)`.
pub fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

fn parts(v: Option<Complex64>) -> [String; 2] {
    [opt(v.map(|z| z.re)), opt(v.map(|z| z.im))]
}

pub fn write_certificates(path: &Path, result: &SuiteResult) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(CSV_HEADER)?;
    for row in &result.rows {
        let c = &row.cert;
        let [are, aim] = parts(c.params.alpha);
        let [bre, bim] = parts(c.params.beta);
        w.write_record([
            row.instance_id.clone(),
            c.id.as_str().to_string(),
            row.n.to_string(),
            fmt_f64(row.k),
            row.mu.to_string(),
            opt(c.params.p),
            opt(c.params.r),
            opt(c.params.s),
            are,
            aim,
            bre,
            bim,
            fmt_f64(c.lhs),
            fmt_f64(c.rhs),
            fmt_f64(c.slack),
            fmt_f64(c.rel_slack),
            fmt_f64(c.error_budget),
            c.verdict.as_str().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_rejections(path: &Path, result: &SuiteResult) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(["instance_id", "checker_id", "p", "s", "alpha_re", "alpha_im", "beta_re", "beta_im", "reason"])?;
    for r in &result.rejected {
        let [are, aim] = parts(r.params.alpha);
        let [bre, bim] = parts(r.params.beta);
        w.write_record([
            r.instance_id.clone(),
            r.id.as_str().to_string(),
            opt(r.params.p),
            opt(r.params.s),
            are,
            aim,
            bre,
            bim,
            r.reason.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Tallies per checker. Every enabled checker appears, with zero counts kept.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Tally {
    pub certificates: usize,
    pub rejected: usize,
    pub totals: BTreeMap<String, usize>,
    pub counts: BTreeMap<String, BTreeMap<String, usize>>,
}

impl Tally {
    pub fn of(result: &SuiteResult, checkers: &[CheckerId]) -> Tally {
        let empty = || -> BTreeMap<String, usize> {
            let mut m: BTreeMap<String, usize> = Verdict::ALL.iter().map(|v| (v.as_str().to_string(), 0)).collect();
            m.insert("rejected".into(), 0);
            m
        };
        let mut t = Tally { totals: empty(), ..Tally::default() };
        for id in checkers {
            t.counts.insert(id.as_str().to_string(), empty());
        }
        for row in &result.rows {
            let v = row.cert.verdict.as_str().to_string();
            *t.counts.entry(row.cert.id.as_str().to_string()).or_insert_with(empty).entry(v.clone()).or_default() += 1;
            *t.totals.entry(v).or_default() += 1;
            t.certificates += 1;
        }
        for r in &result.rejected {
            *t.counts.entry(r.id.as_str().to_string()).or_insert_with(empty).entry("rejected".into()).or_default() += 1;
            *t.totals.entry("rejected".into()).or_default() += 1;
            t.rejected += 1;
        }
        t
    }

    pub fn total(&self, verdict: Verdict) -> usize {
        self.totals.get(verdict.as_str()).copied().unwrap_or(0)
    }
}

#[derive(Debug, Serialize)]
pub struct Summary<C: Serialize> {
    pub artifact_version: &'static str,
    pub command: String,
    pub exit_code: i32,
    pub tally: Tally,
    pub config: C,
    /// Wall-clock seconds per phase; not part of any determinism check.
    pub timing: BTreeMap<String, f64>,
}

pub fn write_summary<C: Serialize>(path: &Path, summary: &Summary<C>) -> anyhow::Result<()> {
    let text = toml::to_string(summary).context("serializing summary")?;
    let mut f = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    f.write_all(text.as_bytes())?;
    Ok(())
}
