//! Instance generation and the parallel checker fan-out.
//!
//! Workers only call pure library functions; results are merged and sorted
//! by key afterwards, so reports do not depend on scheduling.

use polarlp::generate::{extremal_catalog, lacunary_stream, random_in_disk};
use polarlp::inequalities::run_instance;
use polarlp::{CheckContext, CheckOptions, CheckerId, InequalityCertificate, Instance, InstanceError, ParamGrid, Params, SweepPoint};
use rayon::prelude::*;

use crate::config::{Config, Family, SweepAxes};

#[derive(Debug, Clone)]
pub struct Labeled {
    pub id: String,
    pub instance: Instance,
}

/// A certificate with the instance it came from.
#[derive(Debug, Clone)]
pub struct Row {
    pub instance_id: String,
    pub n: usize,
    pub k: f64,
    pub mu: usize,
    pub cert: InequalityCertificate,
    order: usize,
}

/// A parameter point the checker refused, with the reason.
#[derive(Debug, Clone)]
pub struct Rejected {
    pub instance_id: String,
    pub id: CheckerId,
    pub params: Params,
    pub reason: String,
    order: usize,
}

#[derive(Debug, Default)]
pub struct SuiteResult {
    pub rows: Vec<Row>,
    pub rejected: Vec<Rejected>,
}

impl SuiteResult {
    fn sort(&mut self) {
        self.rows.sort_by_key(|a| (a.order, a.cert.id, a.cert.params.sort_key()));
        self.rejected.sort_by_key(|a| (a.order, a.id, a.params.sort_key()));
    }
}

/// Instances for every configured family, in config order.
pub fn generate(config: &Config) -> Result<Vec<Labeled>, InstanceError> {
    let cfg = config.generator_config();
    let mut out = Vec::new();
    for &family in &config.generator.families {
        let instances: Vec<Instance> = match family {
            Family::RandomInDisk => random_in_disk(&cfg).collect::<Result<_, _>>()?,
            Family::Lacunary => lacunary_stream(&cfg, &config.generator.lacunary_mu).collect::<Result<_, _>>()?,
            Family::ExtremalCatalog => {
                let mut all = Vec::new();
                for &k in &cfg.k_values {
                    for &n in &config.generator.catalog_n {
                        all.extend(extremal_catalog(k, n)?.entries.into_iter().map(|e| e.instance));
                    }
                }
                all
            }
        };
        let prefix = family.prefix();
        out.extend(instances.into_iter().enumerate().map(|(i, instance)| Labeled { id: format!("{prefix}-{i:04}"), instance }));
    }
    Ok(out)
}

pub fn thread_pool(parallelism: usize) -> rayon::ThreadPool {
    // 0 lets rayon pick the available cores
    rayon::ThreadPoolBuilder::new().num_threads(parallelism).build().expect("thread pool")
}

fn collect(instance_id: &str, instance: &Instance, order: usize, outcome: polarlp::Outcome, into: &mut SuiteResult) {
    match outcome {
        Ok(cert) => into.rows.push(Row {
            instance_id: instance_id.to_string(),
            n: instance.degree(),
            k: instance.k(),
            mu: instance.mu(),
            cert,
            order,
        }),
        Err(r) => into.rejected.push(Rejected {
            instance_id: instance_id.to_string(),
            id: r.id,
            params: r.params,
            reason: r.reason.to_string(),
            order,
        }),
    }
}

fn merge(parts: Vec<SuiteResult>) -> SuiteResult {
    let mut all = SuiteResult::default();
    for part in parts {
        all.rows.extend(part.rows);
        all.rejected.extend(part.rejected);
    }
    all.sort();
    all
}

/// Every enabled checker over the grid, for each instance.
pub fn run_grid(pool: &rayon::ThreadPool, instances: &[Labeled], grid: &ParamGrid, opts: &CheckOptions) -> SuiteResult {
    let parts = pool.install(|| {
        instances
            .par_iter()
            .enumerate()
            .map(|(order, labeled)| {
                let mut part = SuiteResult::default();
                let ctx = CheckContext::new(&labeled.instance, *opts);
                run_instance(&ctx, grid, &mut |o| collect(&labeled.id, &labeled.instance, order, o, &mut part));
                part
            })
            .collect()
    });
    merge(parts)
}

/// The Cartesian product of the sweep axes. Each base instance is dilated to
/// every `k` on the axis; rows record the full parameter point.
pub fn run_sweep(
    pool: &rayon::ThreadPool,
    instances: &[Labeled],
    axes: &SweepAxes,
    checkers: &[CheckerId],
    opts: &CheckOptions,
) -> Result<SuiteResult, InstanceError> {
    let mut jobs = Vec::new();
    for labeled in instances {
        for &k in &axes.k {
            jobs.push((labeled.id.as_str(), labeled.instance.rescaled(k)?));
        }
    }
    let mut points = Vec::new();
    for &p in &axes.p {
        for &alpha in &axes.alpha {
            for &beta in &axes.beta {
                for &s in &axes.s {
                    points.push(SweepPoint { alpha, beta, p, s });
                }
            }
        }
    }
    let parts = pool.install(|| {
        jobs.par_iter()
            .enumerate()
            .map(|(order, (id, instance))| {
                let mut part = SuiteResult::default();
                let ctx = CheckContext::new(instance, *opts);
                for &checker in checkers {
                    for point in &points {
                        let params = Params {
                            alpha: Some(point.alpha),
                            beta: Some(point.beta),
                            k: Some(instance.k()),
                            mu: Some(instance.mu()),
                            p: Some(point.p),
                            r: Some(point.s / (point.s - 1.0)),
                            s: Some(point.s),
                        };
                        let outcome = ctx
                            .check(checker, point)
                            .map(|cert| InequalityCertificate { params, ..cert })
                            .map_err(|reason| polarlp::Rejection { id: checker, params, reason });
                        collect(id, instance, order, outcome, &mut part);
                    }
                }
                part
            })
            .collect()
    });
    Ok(merge(parts))
}
