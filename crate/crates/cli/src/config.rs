use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::ValueEnum;
use serde::Serialize;

use crate::CliError;

pub const DEFAULT_N_MAX: usize = 60;
pub const DEFAULT_GUARD: usize = 3;
pub const DEFAULT_TOL: f64 = 1e-9;
pub const MIN_N_MAX: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Do,
    Jc,
    Dirac2d,
}

impl ModelKind {
    /// Accepted `--param` keys with their defaults, in report order.
    pub fn defaults(self) -> &'static [(&'static str, f64)] {
        match self {
            ModelKind::Do => &[("m", 1.0), ("omega", 1.0)],
            ModelKind::Jc => &[("omega", 1.0), ("Omega", 1.0), ("J", 0.1)],
            ModelKind::Dirac2d => &[("lmin", -20.0), ("lmax", 20.0)],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Do => "do",
            ModelKind::Jc => "jc",
            ModelKind::Dirac2d => "dirac2d",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Parameter values keyed by name; a single point unless sweeping.
pub type ParamGrid = BTreeMap<String, Vec<f64>>;

/// Parse `KEY=VALUE` (or `KEY=V1,V2,...` when `allow_lists`) against the
/// model's accepted keys, filling in defaults for the rest.
pub fn parse_params(model: ModelKind, raw: &[String], allow_lists: bool) -> Result<ParamGrid, CliError> {
    let known = model.defaults();
    let mut grid = ParamGrid::new();
    for item in raw {
        let (key, values) = item
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("parameter `{item}` is not KEY=VALUE")))?;
        let key = key.trim();
        if !known.iter().any(|(k, _)| *k == key) {
            let accepted: Vec<&str> = known.iter().map(|(k, _)| *k).collect();
            return Err(CliError::Config(format!(
                "unknown parameter `{key}` for model {}; accepted: {}",
                model.name(),
                accepted.join(", ")
            )));
        }
        if grid.contains_key(key) {
            return Err(CliError::Config(format!("parameter `{key}` given twice")));
        }
        let parsed = values
            .split(',')
            .map(|v| {
                let v = v.trim();
                v.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| CliError::Config(format!("`{key}`: `{v}` is not a finite number")))
            })
            .collect::<Result<Vec<f64>, _>>()?;
        if parsed.len() > 1 && !allow_lists {
            return Err(CliError::Config(format!(
                "`{key}` has several values; lists are only accepted by `sweep`"
            )));
        }
        grid.insert(key.to_string(), parsed);
    }
    for (k, v) in known {
        grid.entry(k.to_string()).or_insert_with(|| vec![*v]);
    }
    Ok(grid)
}

/// Cartesian product of the grid in key order (last key fastest).
pub fn grid_points(grid: &ParamGrid) -> Vec<BTreeMap<String, f64>> {
    let mut points = vec![BTreeMap::new()];
    for (key, values) in grid {
        let mut next = Vec::with_capacity(points.len() * values.len());
        for p in &points {
            for v in values {
                let mut q = p.clone();
                q.insert(key.clone(), *v);
                next.push(q);
            }
        }
        points = next;
    }
    points
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub model: ModelKind,
    pub params: ParamGrid,
    pub n_max: usize,
    pub guard: usize,
    pub tolerance: f64,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.n_max < MIN_N_MAX {
            return Err(CliError::Config(format!("--nmax must be at least {MIN_N_MAX}, got {}", self.n_max)));
        }
        if self.guard < 1 || self.guard >= self.n_max {
            return Err(CliError::Config(format!(
                "--guard must satisfy 1 <= g < n_max = {}, got {}",
                self.n_max, self.guard
            )));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(CliError::Config(format!("--tol must be positive, got {}", self.tolerance)));
        }
        if self.params.values().any(|v| v.is_empty()) {
            return Err(CliError::Config("empty parameter grid".into()));
        }
        Ok(())
    }

    /// The single parameter point of a non-sweep run.
    pub fn point(&self) -> BTreeMap<String, f64> {
        self.params.iter().map(|(k, v)| (k.clone(), v[0])).collect()
    }
}
