//! Run configuration, read from a single TOML file.
//!
//! Every knob that affects results lives here so that the echoed config in a
//! report fully describes the run. Only the seed and the output directory can
//! come from the environment.

use std::path::Path;

use polarlp::generate::{GeneratorConfig, DEFAULT_MARGIN};
use polarlp::quadrature::DEFAULT_TOLERANCE;
use polarlp::{CheckOptions, CheckerId, Complex64, ParamGrid};
use serde::{Deserialize, Serialize};

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn bad(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    RandomInDisk,
    Lacunary,
    ExtremalCatalog,
}

impl Family {
    pub fn prefix(self) -> &'static str {
        match self {
            Family::RandomInDisk => "rid",
            Family::Lacunary => "lac",
            Family::ExtremalCatalog => "cat",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Generator {
    pub families: Vec<Family>,
    /// Instances per family.
    pub count: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub k_values: Vec<f64>,
    pub interior_margin: f64,
    /// Gaps drawn for the lacunary family.
    pub lacunary_mu: Vec<usize>,
    /// Degrees for the extremal catalog, built at every `k_values` entry.
    pub catalog_n: Vec<usize>,
}

impl Default for Generator {
    fn default() -> Self {
        Self {
            families: vec![Family::RandomInDisk, Family::Lacunary],
            count: 12,
            n_min: 1,
            n_max: 10,
            k_values: vec![0.3, 0.6, 0.9, 1.0],
            interior_margin: DEFAULT_MARGIN,
            lacunary_mu: vec![2, 3],
            catalog_n: vec![2, 5, 9],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Grid {
    pub alpha_rel: Vec<f64>,
    pub alpha_abs: Vec<f64>,
    pub alpha_phases: usize,
    /// `[re, im]` pairs.
    pub beta: Vec<[f64; 2]>,
    pub p: Vec<f64>,
    pub s: Vec<f64>,
}

impl Default for Grid {
    fn default() -> Self {
        let g = ParamGrid::default();
        Self {
            alpha_rel: g.alpha_rel,
            alpha_abs: g.alpha_abs,
            alpha_phases: g.alpha_phases,
            beta: g.betas.iter().map(|b| [b.re, b.im]).collect(),
            p: g.ps,
            s: g.ss,
        }
    }
}

/// Sweep axes. `k` and `p` must be declared; the rest default to one point.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axes {
    pub k: Option<Vec<f64>>,
    pub p: Option<Vec<f64>>,
    /// Absolute `alpha` values as `[re, im]`.
    pub alpha: Option<Vec<[f64; 2]>>,
    pub beta: Option<Vec<[f64; 2]>>,
    pub s: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Checkers {
    pub enabled: Vec<String>,
}

impl Default for Checkers {
    fn default() -> Self {
        Self { enabled: CheckerId::SWEEP.iter().map(|c| c.as_str().to_string()).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub quadrature: f64,
    /// Nodes for the pointwise checkers; 0 picks `max(64 n, 1024)`.
    pub grid_size: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { quadrature: DEFAULT_TOLERANCE, grid_size: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Variants {
    pub lemma_m_on_unit_circle: bool,
    pub ineq8_min_on_unit_circle: bool,
    pub ineq3_min_of_derivative: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub seed: u64,
    /// Worker threads; 0 uses every available core.
    pub parallelism: usize,
    pub generator: Generator,
    pub grid: Grid,
    pub checkers: Checkers,
    pub tolerances: Tolerances,
    pub variants: Variants,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axes: Option<Axes>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            seed: 42,
            parallelism: 0,
            generator: Generator::default(),
            grid: Grid::default(),
            checkers: Checkers::default(),
            tolerances: Tolerances::default(),
            variants: Variants::default(),
            axes: None,
        }
    }
}

/// One concrete sweep axis set, every axis nonempty.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxes {
    pub k: Vec<f64>,
    pub p: Vec<f64>,
    pub alpha: Vec<Complex64>,
    pub beta: Vec<Complex64>,
    pub s: Vec<f64>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| bad(format!("cannot read {}: {e}", path.display())))?;
        Config::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Config, ConfigError> {
        let config: Config = toml::from_str(text).map_err(|e| bad(format!("invalid config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.generator_config().validate().map_err(|e| bad(format!("generator: {e}")))?;
        let g = &self.generator;
        if g.families.is_empty() {
            return Err(bad("generator.families is empty"));
        }
        if g.lacunary_mu.iter().any(|&mu| mu < 2) {
            return Err(bad("generator.lacunary_mu entries must be at least 2"));
        }
        if g.families.contains(&Family::ExtremalCatalog) && (g.catalog_n.is_empty() || g.catalog_n.contains(&0)) {
            return Err(bad("generator.catalog_n must list positive degrees"));
        }
        let t = &self.tolerances;
        if !(t.quadrature.is_finite() && t.quadrature > 0.0) {
            return Err(bad(format!("tolerances.quadrature = {} must be positive", t.quadrature)));
        }
        let grid = &self.grid;
        check_list("grid.alpha_rel", &grid.alpha_rel, |a| a >= 1.0, ">= 1")?;
        check_list("grid.alpha_abs", &grid.alpha_abs, |a| a > 0.0, "> 0")?;
        if grid.alpha_rel.is_empty() && grid.alpha_abs.is_empty() {
            return Err(bad("grid declares no alpha values"));
        }
        if grid.alpha_phases == 0 {
            return Err(bad("grid.alpha_phases must be at least 1"));
        }
        check_pairs("grid.beta", &grid.beta)?;
        check_list("grid.p", &grid.p, |p| p > 0.0, "> 0")?;
        check_list("grid.s", &grid.s, |s| s > 1.0, "> 1")?;
        for list in [("grid.beta", grid.beta.len()), ("grid.p", grid.p.len()), ("grid.s", grid.s.len())] {
            if list.1 == 0 {
                return Err(bad(format!("{} is empty", list.0)));
            }
        }
        self.checker_ids()?;
        if let Some(axes) = &self.axes {
            sweep_axes(axes)?;
        }
        Ok(())
    }

    pub fn generator_config(&self) -> GeneratorConfig {
        let g = &self.generator;
        GeneratorConfig {
            seed: self.seed,
            n_range: (g.n_min, g.n_max),
            k_values: g.k_values.clone(),
            interior_margin: g.interior_margin,
            count: g.count,
        }
    }

    pub fn checker_ids(&self) -> Result<Vec<CheckerId>, ConfigError> {
        if self.checkers.enabled.is_empty() {
            return Err(bad("checkers.enabled is empty"));
        }
        let mut ids = Vec::new();
        for name in &self.checkers.enabled {
            let id = CheckerId::parse(name).ok_or_else(|| bad(format!("unknown checker `{name}`")))?;
            if !ids.contains(&id) {
                ids.push(id);
            }
        }
        ids.sort();
        Ok(ids)
    }

    pub fn param_grid(&self) -> Result<ParamGrid, ConfigError> {
        let g = &self.grid;
        Ok(ParamGrid {
            alpha_rel: g.alpha_rel.clone(),
            alpha_abs: g.alpha_abs.clone(),
            alpha_phases: g.alpha_phases,
            betas: g.beta.iter().map(|b| Complex64::new(b[0], b[1])).collect(),
            ps: g.p.clone(),
            ss: g.s.clone(),
            checkers: self.checker_ids()?,
        })
    }

    pub fn check_options(&self) -> CheckOptions {
        CheckOptions {
            tol: self.tolerances.quadrature,
            lemma_m_on_unit_circle: self.variants.lemma_m_on_unit_circle,
            ineq8_min_on_unit_circle: self.variants.ineq8_min_on_unit_circle,
            ineq3_min_of_derivative: self.variants.ineq3_min_of_derivative,
            grid_size: (self.tolerances.grid_size > 0).then_some(self.tolerances.grid_size),
        }
    }

    pub fn sweep_axes(&self) -> Result<SweepAxes, ConfigError> {
        match &self.axes {
            Some(axes) => sweep_axes(axes),
            None => Err(bad("sweep needs an [axes] section declaring at least k and p")),
        }
    }
}

fn check_list(name: &str, values: &[f64], ok: impl Fn(f64) -> bool, rule: &str) -> Result<(), ConfigError> {
    match values.iter().find(|v| !(v.is_finite() && ok(**v))) {
        Some(v) => Err(bad(format!("{name}: value {v} must be finite and {rule}"))),
        None => Ok(()),
    }
}

fn check_pairs(name: &str, values: &[[f64; 2]]) -> Result<(), ConfigError> {
    match values.iter().find(|v| !(v[0].is_finite() && v[1].is_finite())) {
        Some(v) => Err(bad(format!("{name}: value {v:?} is not finite"))),
        None => Ok(()),
    }
}

fn required<T: Clone>(name: &str, axis: &Option<Vec<T>>) -> Result<Vec<T>, ConfigError> {
    match axis {
        None => Err(bad(format!("axes.{name} must be declared"))),
        Some(v) if v.is_empty() => Err(bad(format!("axes.{name} is empty"))),
        Some(v) => Ok(v.clone()),
    }
}

fn optional<T: Clone>(name: &str, axis: &Option<Vec<T>>, default: T) -> Result<Vec<T>, ConfigError> {
    match axis {
        None => Ok(vec![default]),
        Some(v) if v.is_empty() => Err(bad(format!("axes.{name} is empty"))),
        Some(v) => Ok(v.clone()),
    }
}

fn sweep_axes(axes: &Axes) -> Result<SweepAxes, ConfigError> {
    let k = required("k", &axes.k)?;
    let p = required("p", &axes.p)?;
    let alpha = optional("alpha", &axes.alpha, [1.0, 0.0])?;
    let beta = optional("beta", &axes.beta, [0.0, 0.0])?;
    let s = optional("s", &axes.s, 2.0)?;
    check_list("axes.k", &k, |k| k > 0.0 && k <= 1.0, "in (0, 1]")?;
    check_list("axes.p", &p, |p| p > 0.0, "> 0")?;
    check_list("axes.s", &s, |s| s > 1.0, "> 1")?;
    check_pairs("axes.alpha", &alpha)?;
    check_pairs("axes.beta", &beta)?;
    let complex = |v: Vec<[f64; 2]>| v.into_iter().map(|a| Complex64::new(a[0], a[1])).collect();
    Ok(SweepAxes { k, p, alpha: complex(alpha), beta: complex(beta), s })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_the_default() {
        let cfg = Config::parse("").unwrap();
        assert_eq!(cfg, Config::default());
        assert_eq!(cfg.checker_ids().unwrap().len(), 17);
    }

    #[test]
    fn echo_round_trips() {
        let cfg = Config::parse("seed = 7\n[axes]\nk = [0.5]\np = [1.0, 2.0]\n").unwrap();
        let text = toml::to_string(&cfg).unwrap();
        assert_eq!(Config::parse(&text).unwrap(), cfg);
    }

    #[test]
    fn bad_values_are_rejected() {
        for text in [
            "[tolerances]\nquadrature = -1e-10\n",
            "[tolerances]\nquadrature = 0.0\n",
            "[checkers]\nenabled = [\"THM9\"]\n",
            "[grid]\np = [0.0]\n",
            "[grid]\ns = [1.0]\n",
            "[generator]\nk_values = [1.5]\n",
            "[generator]\nn_min = 0\n",
            "typo = 1\n",
            "[axes]\nk = []\np = [1.0]\n",
            "[axes]\nk = [0.5]\n",
            "[axes]\nk = [0.5]\np = [1.0]\nbeta = []\n",
        ] {
            assert!(Config::parse(text).is_err(), "accepted: {text}");
        }
    }

    #[test]
    fn sweep_axes_defaults() {
        let cfg = Config::parse("[axes]\nk = [0.3, 0.6, 0.9]\np = [1.0, 2.0]\n").unwrap();
        let axes = cfg.sweep_axes().unwrap();
        assert_eq!(axes.k.len() * axes.p.len() * axes.alpha.len() * axes.beta.len() * axes.s.len(), 6);
    }
}
