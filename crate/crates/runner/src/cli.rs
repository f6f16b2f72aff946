//! `polarlp verify | sweep | sharpness`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use clap::{Parser, Subcommand};
use polarlp::generate::extremal_catalog;
use polarlp::{CheckOptions, CheckerId, Complex64, ParamGrid, Verdict};
use serde::Serialize;

use crate::config::{Config, ConfigError};
use crate::report::{write_certificates, write_rejections, write_summary, Summary, Tally, ARTIFACT_VERSION};
use crate::suite::{self, Labeled, SuiteResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_INDETERMINATE: i32 = 3;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "polarlp", version, about = "Certify L_p inequalities for polar derivatives on generated polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every enabled checker over the configured instances and grid.
    Verify {
        config: PathBuf,
        /// Output directory; falls back to $OUT_DIR, then `./out`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Exit 3 when any certificate is indeterminate.
        #[arg(long)]
        strict: bool,
    },
    /// Evaluate the Cartesian product of the `[axes]` section.
    Sweep {
        config: PathBuf,
        /// Output directory; falls back to $OUT_DIR.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        strict: bool,
    },
    /// Check the extremal polynomials and the equality cases they attain.
    Sharpness {
        #[arg(long)]
        k: f64,
        /// One or more degrees, comma separated.
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        n: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = polarlp::quadrature::DEFAULT_TOLERANCE)]
        tol: f64,
    },
}

enum Failure {
    Usage(String),
    Io(anyhow::Error),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Io(e)
    }
}

/// Parses `args` (program name first) and runs the command; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Verify { config, out, strict } => verify(&config, out, strict),
        Command::Sweep { config, out, strict } => sweep(&config, out, strict),
        Command::Sharpness { k, n, out, tol } => sharpness(k, &n, out, tol),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e:#}");
            EXIT_IO
        }
    }
}

fn out_dir(flag: Option<PathBuf>, fallback: Option<&str>) -> Result<PathBuf, Failure> {
    if let Some(p) = flag {
        return Ok(p);
    }
    if let Some(p) = std::env::var_os("OUT_DIR").filter(|v| !v.is_empty()) {
        return Ok(PathBuf::from(p));
    }
    fallback.map(PathBuf::from).ok_or_else(|| Failure::Usage("no output directory: pass --out or set OUT_DIR".into()))
}

fn load_config(path: &Path) -> Result<Config, Failure> {
    let mut config = Config::load(path)?;
    if let Some(seed) = std::env::var_os("SEED") {
        let seed = seed.to_string_lossy();
        config.seed = seed.trim().parse().map_err(|_| Failure::Usage(format!("SEED={seed} is not an unsigned integer")))?;
    }
    Ok(config)
}

fn exit_code(tally: &Tally, strict: bool) -> i32 {
    if tally.total(Verdict::Violated) > 0 {
        EXIT_VIOLATION
    } else if strict && tally.total(Verdict::Indeterminate) > 0 {
        EXIT_INDETERMINATE
    } else {
        EXIT_OK
    }
}

struct Timer {
    phases: BTreeMap<String, f64>,
    at: Instant,
}

impl Timer {
    fn new() -> Self {
        Self { phases: BTreeMap::new(), at: Instant::now() }
    }

    fn lap(&mut self, name: &str) {
        self.phases.insert(name.to_string(), self.at.elapsed().as_secs_f64());
        self.at = Instant::now();
    }
}

fn generate(config: &Config) -> Result<Vec<Labeled>, Failure> {
    suite::generate(config).map_err(|e| Failure::Io(anyhow::anyhow!("instance generation failed: {e}")))
}

fn write_all<C: Serialize>(
    dir: &Path,
    command: &str,
    result: &SuiteResult,
    tally: Tally,
    config: C,
    code: i32,
    mut timer: Timer,
) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    write_certificates(&dir.join("certificates.csv"), result)?;
    write_rejections(&dir.join("rejected.csv"), result)?;
    timer.lap("write");
    eprintln!(
        "{command}: {} certificates, {} rejected, {} violated, {} indeterminate -> {}",
        tally.certificates,
        tally.rejected,
        tally.total(Verdict::Violated),
        tally.total(Verdict::Indeterminate),
        dir.display()
    );
    let summary = Summary {
        artifact_version: ARTIFACT_VERSION,
        command: command.to_string(),
        exit_code: code,
        tally,
        config,
        timing: timer.phases,
    };
    write_summary(&dir.join("summary.toml"), &summary)?;
    Ok(())
}

fn verify(config_path: &Path, out: Option<PathBuf>, strict: bool) -> Result<i32, Failure> {
    let config = load_config(config_path)?;
    let dir = out_dir(out, Some("out"))?;
    let grid = config.param_grid()?;
    let mut timer = Timer::new();
    let instances = generate(&config)?;
    timer.lap("generate");
    let pool = suite::thread_pool(config.parallelism);
    let result = suite::run_grid(&pool, &instances, &grid, &config.check_options());
    timer.lap("check");
    let tally = Tally::of(&result, &grid.checkers);
    let code = exit_code(&tally, strict);
    write_all(&dir, "verify", &result, tally, &config, code, timer)?;
    Ok(code)
}

fn sweep(config_path: &Path, out: Option<PathBuf>, strict: bool) -> Result<i32, Failure> {
    let config = load_config(config_path)?;
    let dir = out_dir(out, None)?;
    let axes = config.sweep_axes()?;
    let checkers = config.checker_ids()?;
    let mut timer = Timer::new();
    let instances = generate(&config)?;
    timer.lap("generate");
    let pool = suite::thread_pool(config.parallelism);
    let result = suite::run_sweep(&pool, &instances, &axes, &checkers, &config.check_options())
        .map_err(|e| Failure::Io(anyhow::anyhow!("rescaling failed: {e}")))?;
    timer.lap("check");
    let tally = Tally::of(&result, &checkers);
    let code = exit_code(&tally, strict);
    write_all(&dir, "sweep", &result, tally, &config, code, timer)?;
    Ok(code)
}

/// Which extremal polynomial a catalog entry is.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Extremal {
    Minus,
    Plus,
    Monomial,
    MonomialPlusOne,
}

const CATALOG_ORDER: [Extremal; 4] = [Extremal::Minus, Extremal::Plus, Extremal::Monomial, Extremal::MonomialPlusOne];

/// Checkers whose bound is attained by the given polynomial.
fn claimed_equality(kind: Extremal, id: CheckerId) -> bool {
    matches!(
        (kind, id),
        (Extremal::Monomial, CheckerId::Bernstein)
            | (Extremal::MonomialPlusOne, CheckerId::Ineq1)
            | (Extremal::Plus, CheckerId::Ineq2)
            | (Extremal::Minus, CheckerId::Thm1)
    )
}

#[derive(Debug, Serialize)]
struct SharpnessEcho {
    k: f64,
    n: Vec<usize>,
    alpha: Vec<f64>,
    beta: Vec<[f64; 2]>,
    p: Vec<f64>,
    s: Vec<f64>,
    checkers: Vec<String>,
    quadrature_tolerance: f64,
    claims_checked: usize,
    claim_failures: Vec<String>,
}

/// Real `alpha` values used by the sharpness suite: `1`, `2k` and `1 + k`,
/// keeping only those strictly outside `|z| <= k`.
pub fn sharpness_alphas(k: f64) -> Vec<f64> {
    let mut a: Vec<f64> = [1.0, 2.0 * k, 1.0 + k].into_iter().filter(|&a| a > k * (1.0 + 1e-12)).collect();
    a.sort_by(f64::total_cmp);
    a.dedup();
    a
}

fn sharpness(k: f64, ns: &[usize], out: Option<PathBuf>, tol: f64) -> Result<i32, Failure> {
    if !(k > 0.0 && k <= 1.0) {
        return Err(Failure::Usage(format!("k = {k} is outside (0, 1]")));
    }
    if ns.contains(&0) {
        return Err(Failure::Usage("degrees must be positive".into()));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Failure::Usage(format!("tol = {tol} must be positive")));
    }
    let dir = out_dir(out, None)?;
    let mut timer = Timer::new();
    let mut instances = Vec::new();
    let mut kinds = Vec::new();
    for &n in ns {
        let catalog = extremal_catalog(k, n).map_err(|e| Failure::Io(anyhow::anyhow!("catalog: {e}")))?;
        for (entry, kind) in catalog.entries.into_iter().zip(CATALOG_ORDER) {
            instances.push(Labeled { id: entry.name, instance: entry.instance });
            kinds.push((kind, instances.len() - 1));
        }
    }
    timer.lap("generate");

    let alphas = sharpness_alphas(k);
    let betas = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
    let grid = ParamGrid {
        alpha_rel: vec![],
        alpha_abs: alphas.clone(),
        alpha_phases: 1,
        betas: betas.iter().map(|b| Complex64::new(b[0], b[1])).collect(),
        ps: vec![0.5, 1.0, 2.0, 4.0],
        ss: vec![2.0],
        checkers: CheckerId::SWEEP.to_vec(),
    };
    let opts = CheckOptions { tol, ..CheckOptions::default() };
    let pool = suite::thread_pool(0);
    let result = suite::run_grid(&pool, &instances, &grid, &opts);
    timer.lap("check");

    let kind_of: BTreeMap<&str, Extremal> = kinds.iter().map(|&(kind, i)| (instances[i].id.as_str(), kind)).collect();
    let mut checked = 0;
    let mut failures = Vec::new();
    for row in &result.rows {
        let c = &row.cert;
        let kind = kind_of[row.instance_id.as_str()];
        if claimed_equality(kind, c.id) {
            checked += 1;
            if c.verdict != Verdict::Equality {
                failures.push(format!("{} {} {:?}: expected equality, got {} (slack {:e})", row.instance_id, c.id, c.params, c.verdict, c.slack));
            }
        } else if !c.verdict.is_sound() {
            failures.push(format!("{} {} {:?}: {} (slack {:e})", row.instance_id, c.id, c.params, c.verdict, c.slack));
        }
    }
    for r in &result.rejected {
        failures.push(format!("{} {}: rejected: {}", r.instance_id, r.id, r.reason));
    }
    for f in &failures {
        eprintln!("sharpness: {f}");
    }
    let code = if failures.is_empty() { EXIT_OK } else { EXIT_VIOLATION };
    let tally = Tally::of(&result, &grid.checkers);
    let echo = SharpnessEcho {
        k,
        n: ns.to_vec(),
        alpha: alphas,
        beta: betas.to_vec(),
        p: grid.ps.clone(),
        s: grid.ss.clone(),
        checkers: grid.checkers.iter().map(|c| c.as_str().to_string()).collect(),
        quadrature_tolerance: tol,
        claims_checked: checked,
        claim_failures: failures,
    };
    write_all(&dir, "sharpness", &result, tally, echo, code, timer)?;
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tally(violated: usize, indeterminate: usize) -> Tally {
        let mut t = Tally::default();
        t.totals.insert("violated".into(), violated);
        t.totals.insert("indeterminate".into(), indeterminate);
        t
    }

    #[test]
    fn exit_code_contract() {
        assert_eq!(exit_code(&tally(0, 0), true), EXIT_OK);
        assert_eq!(exit_code(&tally(0, 4), false), EXIT_OK);
        assert_eq!(exit_code(&tally(0, 4), true), EXIT_INDETERMINATE);
        assert_eq!(exit_code(&tally(1, 4), true), EXIT_VIOLATION);
        assert_eq!(exit_code(&tally(1, 0), false), EXIT_VIOLATION);
    }

    #[test]
    fn sharpness_alpha_grid() {
        assert_eq!(sharpness_alphas(0.5), [1.0, 1.5]);
        assert_eq!(sharpness_alphas(1.0), [2.0]);
        assert_eq!(sharpness_alphas(0.25), [0.5, 1.0, 1.25]);
    }
}
