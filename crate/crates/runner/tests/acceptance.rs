//! Acceptance criteria 1 to 10. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};
use std::process::Command;
use std::time::Instant;

use polarlp::circle::{kernel_integral, lp_mean, max_modulus_on_circle, min_modulus_on_circle};
use polarlp::generate::{extremal_catalog, lacunary_stream, random_in_disk, GeneratorConfig};
use polarlp::inequalities::run_instance;
use polarlp::{max_zero_modulus, CheckContext, CheckOptions, Complex64, Instance, ParamGrid, Verdict};
use polarlp_runner::cli::sharpness_alphas;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn cfg(seed: u64, n_max: usize, count: usize) -> GeneratorConfig {
    GeneratorConfig { seed, n_range: (1, n_max), count, ..GeneratorConfig::default() }
}

fn soundness_instances() -> Vec<Instance> {
    let cfg = cfg(42, 10, 250);
    random_in_disk(&cfg).chain(lacunary_stream(&cfg, &[2, 3])).map(|i| i.expect("generated instance")).collect()
}

fn parseval() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for inst in random_in_disk(&cfg(1, 12, 100)) {
        let poly = inst.unwrap().poly().clone();
        let exact = TAU * poly.coeffs().iter().map(|a| a.norm_sqr()).sum::<f64>();
        let got = lp_mean(&poly, 2.0, 1.0, 1e-13).raw_integral;
        worst = worst.max((got - exact).abs() / exact);
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(worst <= 1e-12 && secs < 5.0, format!("100 polynomials, worst relative error {worst:.2e}, {secs:.2} s"))
}

fn theorem1_equality() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut rows = 0;
    for k in [0.25, 0.5, 0.9] {
        for n in [2, 5, 9] {
            let inst = extremal_catalog(k, n).unwrap().entries.swap_remove(0).instance;
            let ctx = CheckContext::new(&inst, CheckOptions::default());
            for alpha in [2.0 * k, 1.0 + k] {
                for p in [0.5, 1.0, 2.0, 4.0] {
                    for beta in [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)] {
                        let cert = ctx.check_theorem1(c(alpha, 0.0), beta, p).unwrap();
                        worst = worst.max((cert.lhs - cert.rhs).abs() / cert.rhs);
                        rows += 1;
                    }
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(worst <= 1e-8 && secs < 30.0, format!("{rows} rows on (z-k)^n, worst |lhs-rhs|/rhs {worst:.2e}, {secs:.2} s"))
}

fn turan_malik_equality() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    let mut rows = 0;
    for n in [1, 2, 5, 9] {
        let catalog = extremal_catalog(1.0, n).unwrap();
        let turan = &catalog.entries[3].instance;
        let cert = CheckContext::new(turan, CheckOptions::default()).check_turan().unwrap();
        let mut certs = vec![(format!("z^{n}+1"), cert)];
        for k in [0.25, 0.5, 0.9, 1.0] {
            let plus = extremal_catalog(k, n).unwrap().entries.swap_remove(1);
            let cert = CheckContext::new(&plus.instance, CheckOptions::default()).check_malik_max().unwrap();
            certs.push((plus.name, cert));
        }
        for (name, cert) in certs {
            rows += 1;
            let rel = cert.slack.abs() / cert.rhs;
            worst = worst.max(rel);
            if cert.verdict != Verdict::Equality || rel > 1e-10 {
                failures.push(format!("{name} {}: {} {rel:.1e}", cert.id, cert.verdict));
            }
        }
    }
    outcome(failures.is_empty(), format!("{rows} rows, worst |slack|/rhs {worst:.2e}{}", failure_note(&failures)))
}

fn failure_note(failures: &[String]) -> String {
    match failures.first() {
        None => String::new(),
        Some(first) => format!(", {} failures, first: {first}", failures.len()),
    }
}

fn soundness(instances: &[Instance]) -> Outcome {
    let start = Instant::now();
    let grid = ParamGrid::default();
    let (mut total, mut violated, mut indeterminate, mut rejected) = (0usize, 0usize, 0usize, 0usize);
    let mut first = None;
    for inst in instances {
        let ctx = CheckContext::new(inst, CheckOptions::default());
        run_instance(&ctx, &grid, &mut |o| match o {
            Ok(cert) => {
                total += 1;
                match cert.verdict {
                    Verdict::Violated => {
                        violated += 1;
                        first.get_or_insert_with(|| format!("{} {:?}", cert.id, cert.params));
                    }
                    Verdict::Indeterminate => indeterminate += 1,
                    _ => {}
                }
            }
            Err(_) => rejected += 1,
        });
    }
    let secs = start.elapsed().as_secs_f64();
    let rate = indeterminate as f64 / total.max(1) as f64;
    let pass = violated == 0 && rate < 0.01 && secs < 300.0 && grid.checkers.len() == 17;
    let mut detail = format!(
        "{} instances, {total} certificates over 17 checkers, {violated} violated, {indeterminate} indeterminate ({:.3}%), {rejected} rejected, {secs:.1} s",
        instances.len(),
        100.0 * rate
    );
    if let Some(f) = first {
        detail.push_str(&format!(", first violation: {f}"));
    }
    outcome(pass, detail)
}

fn limit_ladder(instances: &[Instance]) -> Outcome {
    let ladder: Vec<f64> = (1..=10).map(|j| 2f64.powi(j)).collect();
    let mut worst_gap: f64 = 0.0;
    let mut failures = Vec::new();
    let mut cases = 0;
    for (i, inst) in instances.iter().step_by(25).enumerate() {
        let ctx = CheckContext::new(inst, CheckOptions::default());
        let (k, mu) = (inst.k(), inst.mu());
        let base = k.powi(mu as i32);
        let alpha = c(2.0 * base, 0.5 * base);
        for beta in [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)] {
            cases += 1;
            let limit = ctx.corollary3_max_ratio(mu, alpha, beta);
            let at = ctx.check_corollary3(mu, alpha, beta, 1024.0).unwrap().ratio();
            let gap = (at - limit).abs() / limit;
            worst_gap = worst_gap.max(gap);
            if gap > 0.02 {
                failures.push(format!("instance {i}: ratio {at:.6} vs limit {limit:.6}"));
            }
            let means: Vec<_> = ladder.iter().map(|&p| ctx.normalized_shifted_mean(mu, beta, p)).collect();
            let kernels: Vec<_> = ladder
                .iter()
                .map(|&p| {
                    let r = kernel_integral(k, mu, p, 1e-10);
                    (r.mean * TAU.powf(-1.0 / p), r.mean_error_estimate * TAU.powf(-1.0 / p))
                })
                .collect();
            for j in 1..ladder.len() {
                let (a, b) = (means[j - 1], means[j]);
                if b.value < a.value - a.err - b.err - 1e-12 * a.value {
                    failures.push(format!("instance {i}: shifted mean drops at p = {}", ladder[j]));
                }
                let (a, b) = (kernels[j - 1], kernels[j]);
                if b.0 < a.0 - a.1 - b.1 - 1e-12 * a.0 {
                    failures.push(format!("instance {i}: kernel mean drops at p = {}", ladder[j]));
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("{cases} cases, worst |ratio(1024) - max ratio| / max ratio {worst_gap:.2e}{}", failure_note(&failures)),
    )
}

fn theorem3_limit() -> Outcome {
    let mut worst_rel: f64 = 0.0;
    let mut worst_below: f64 = 0.0;
    let mut over = 0;
    let mut below = 0;
    let mut rows = 0;
    let mut first = None;
    for k in [0.25, 0.5, 0.9, 1.0] {
        for n in [2, 5, 9] {
            for entry in extremal_catalog(k, n).unwrap().entries {
                let inst = &entry.instance;
                let ctx = CheckContext::new(inst, CheckOptions::default());
                let mu = inst.mu();
                for a in sharpness_alphas(k) {
                    for beta in [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)] {
                        for p in [0.5, 1.0, 2.0, 4.0] {
                            let alpha = c(a, 0.0);
                            let thm3 = ctx.check_theorem3(mu, alpha, beta, p, 64.0).unwrap();
                            let cor3 = ctx.check_corollary3(mu, alpha, beta, p).unwrap();
                            rows += 1;
                            let rel = (thm3.rhs - cor3.rhs).abs() / cor3.rhs;
                            worst_rel = worst_rel.max(rel);
                            if rel > 0.02 {
                                over += 1;
                            }
                            let budget = thm3.error_budget + cor3.error_budget;
                            if thm3.rhs < cor3.rhs - budget {
                                below += 1;
                                let shortfall = (cor3.rhs - thm3.rhs) / cor3.rhs;
                                if shortfall > worst_below {
                                    worst_below = shortfall;
                                    first = Some(format!("{} alpha {a} beta {beta} p {p}", entry.name));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let mut detail = format!(
        "{rows} rows, worst relative gap {:.2}% ({over} rows over 2%), {below} rows below the s = infinity bound, worst shortfall {:.2}%",
        100.0 * worst_rel,
        100.0 * worst_below
    );
    if let Some(f) = first {
        detail.push_str(&format!(" at {f}"));
    }
    outcome(over == 0 && below == 0, detail)
}

fn subordination(instances: &[Instance]) -> Outcome {
    let betas = [c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(FRAC_1_SQRT_2, FRAC_1_SQRT_2)];
    let mut pool: Vec<Instance> = instances.iter().step_by(5).cloned().collect();
    for k in [0.25, 0.5, 0.9, 1.0] {
        for n in [2, 5, 9] {
            pool.extend(extremal_catalog(k, n).unwrap().entries.into_iter().map(|e| e.instance));
        }
    }
    let (mut max_w, mut max_w0): (f64, f64) = (0.0, 0.0);
    let mut means = 0;
    let mut failures = Vec::new();
    for (i, inst) in pool.iter().enumerate() {
        let ctx = CheckContext::new(inst, CheckOptions::default());
        let mu = inst.mu();
        for beta in betas {
            let trace = ctx.subordination_witness(mu, beta).unwrap();
            max_w = max_w.max(trace.max_abs_w);
            max_w0 = max_w0.max(trace.w_at_zero.norm());
            for p in [0.5, 1.0, 2.0, 4.0] {
                let cert = ctx.check_subordination_mean(mu, beta, p).unwrap();
                means += 1;
                if !cert.verdict.is_sound() {
                    failures.push(format!("instance {i} beta {beta} p {p}: {}", cert.verdict));
                }
            }
        }
    }
    let pass = max_w <= 1.0 + 1e-8 && max_w0 <= 1e-8 && failures.is_empty();
    outcome(
        pass,
        format!(
            "{} instances, max |w| on the circle {max_w:.12}, max |w(0)| {max_w0:.1e}, {means} mean comparisons{}",
            pool.len(),
            failure_note(&failures)
        ),
    )
}

fn extrema_oracle() -> Outcome {
    const SCAN: usize = 1_000_000;
    let mut worst: f64 = 0.0;
    for inst in random_in_disk(&cfg(8, 8, 20)) {
        let poly = inst.unwrap().poly().clone();
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for j in 0..SCAN {
            let v = poly.evaluate(Complex64::from_polar(1.0, TAU * j as f64 / SCAN as f64)).norm();
            lo = lo.min(v);
            hi = hi.max(v);
        }
        worst = worst.max((min_modulus_on_circle(&poly, 1.0).value - lo).abs());
        worst = worst.max((max_modulus_on_circle(&poly, 1.0).value - hi).abs());
    }
    outcome(worst <= 1e-6, format!("20 polynomials against a {SCAN}-point scan, worst absolute difference {worst:.2e}"))
}

fn gauss_lucas(instances: &[Instance]) -> Outcome {
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut checked = 0;
    for inst in instances.iter().filter(|i| i.degree() >= 2) {
        let r = max_zero_modulus(&inst.poly().derivative().unwrap()).expect("derivative roots");
        worst = worst.max(r - inst.k());
        checked += 1;
    }
    outcome(worst <= 1e-8, format!("{checked} instances of degree >= 2, worst max|zero of P'| - k = {worst:.2e}"))
}

fn determinism() -> Outcome {
    let config = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/sweep.toml");
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_polarlp"))
            .args(["sweep", config, "--out"])
            .arg(&out)
            .env_remove("SEED")
            .env_remove("OUT_DIR")
            .output()
            .unwrap()
            .status;
        (status.code(), std::fs::read(out.join("certificates.csv")).unwrap_or_default())
    };
    let (code_a, a) = run("a");
    let (code_b, b) = run("b");
    let rows = a.iter().filter(|&&ch| ch == b'\n').count().saturating_sub(1);
    outcome(
        code_a == Some(0) && code_b == Some(0) && !a.is_empty() && a == b,
        format!("two sweep runs, {rows} rows each, identical bytes: {}", a == b),
    )
}

fn main() {
    let instances = soundness_instances();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("parseval oracle", Box::new(parseval)),
        ("theorem 1 equality", Box::new(theorem1_equality)),
        ("turan and malik equality", Box::new(turan_malik_equality)),
        ("universal soundness", Box::new(|| soundness(&instances))),
        ("limit ladder", Box::new(|| limit_ladder(&instances))),
        ("theorem 3 at s = 64", Box::new(theorem3_limit)),
        ("subordination witness", Box::new(|| subordination(&instances))),
        ("extrema oracle", Box::new(extrema_oracle)),
        ("gauss-lucas", Box::new(|| gauss_lucas(&instances))),
        ("determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!("{} criterion {} ({name}): {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
