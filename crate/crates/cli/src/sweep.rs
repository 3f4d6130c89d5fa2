//! Parameter sweeps over a Cartesian grid, written as CSV in grid order.
//!
//! Columns: `family, params, isPSD, isPPT, p, q, bestObjective`. `params`
//! lists `name=value` pairs joined by `;` in axis order; `bestObjective` is
//! empty unless the search is requested.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use edgelab_core::classify::{classify, Tolerances};
use edgelab_core::{product_vector_search, SearchConfig};
use rayon::prelude::*;
use serde::Deserialize;

use crate::family::{build, Family, Params, PARAM_NAMES};
use crate::json::format_float;

pub const CSV_HEADER: [&str; 7] = ["family", "params", "isPSD", "isPPT", "p", "q", "bestObjective"];

#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

impl Axis {
    /// `name=lo:hi:steps` (inclusive linspace) or `name=value`.
    pub fn parse(s: &str) -> Result<Self> {
        let (name, range) = s
            .split_once('=')
            .ok_or_else(|| anyhow!("grid entry `{s}` must look like name=lo:hi:steps or name=value"))?;
        let name = name.trim().to_string();
        if !PARAM_NAMES.contains(&name.as_str()) {
            bail!("unknown grid parameter `{name}`");
        }
        let parts: Vec<&str> = range.split(':').map(str::trim).collect();
        let num = |t: &str| -> Result<f64> {
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| anyhow!("bad number `{t}` in grid entry `{s}`"))
        };
        let values = match parts.as_slice() {
            [v] => vec![num(v)?],
            [lo, hi, steps] => {
                let (lo, hi) = (num(lo)?, num(hi)?);
                let steps: usize = steps
                    .parse()
                    .with_context(|| format!("bad step count in `{s}`"))?;
                if steps == 0 {
                    bail!("grid entry `{s}` needs at least one step");
                }
                if steps == 1 {
                    vec![lo]
                } else {
                    (0..steps)
                        .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
                        .collect()
                }
            }
            _ => bail!("grid entry `{s}` must look like name=lo:hi:steps or name=value"),
        };
        Ok(Self { name, values })
    }
}

/// JSON form accepted by `sweep --spec`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpecFile {
    pub family: String,
    pub grid: Vec<String>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub search: bool,
    #[serde(default)]
    pub starts: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub family: Family,
    pub axes: Vec<Axis>,
    pub seed: u64,
    pub search: bool,
    pub starts: usize,
}

impl SweepSpec {
    pub fn new(family: Family, grid: &[String], seed: u64, search: bool, starts: usize) -> Result<Self> {
        if grid.is_empty() {
            bail!("sweep needs at least one --grid entry");
        }
        let axes = grid.iter().map(|g| Axis::parse(g)).collect::<Result<Vec<_>>>()?;
        for (i, a) in axes.iter().enumerate() {
            if axes[..i].iter().any(|b| b.name == a.name) {
                bail!("grid parameter `{}` given twice", a.name);
            }
        }
        Ok(Self {
            family,
            axes,
            seed,
            search,
            starts,
        })
    }

    pub fn from_file(spec: &SweepSpecFile) -> Result<Self> {
        let starts = spec.starts.unwrap_or(SearchConfig::default().starts);
        Self::new(Family::parse(&spec.family)?, &spec.grid, spec.seed, spec.search, starts)
    }

    /// Grid points in row order: the first axis varies slowest.
    pub fn points(&self) -> Vec<Vec<(String, f64)>> {
        let mut points = vec![Vec::new()];
        for axis in &self.axes {
            points = points
                .into_iter()
                .flat_map(|prefix| {
                    axis.values.iter().map(move |&v| {
                        let mut p: Vec<(String, f64)> = prefix.clone();
                        p.push((axis.name.clone(), v));
                        p
                    })
                })
                .collect();
        }
        points
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub params: Vec<(String, f64)>,
    pub is_psd: bool,
    pub is_ppt: bool,
    pub p: usize,
    pub q: usize,
    pub best_objective: Option<f64>,
}

fn evaluate(spec: &SweepSpec, point: &[(String, f64)]) -> Result<SweepRow> {
    let mut params = Params::default();
    for (name, v) in point {
        params.set(name, *v)?;
    }
    let s = build(spec.family, &params)?;
    let tol = Tolerances::default();
    let c = classify(&s, tol.rel_tol, tol.abs_tol)?;
    let best_objective = spec.search.then(|| {
        let cfg = SearchConfig {
            starts: spec.starts,
            seed: spec.seed,
            ..SearchConfig::default()
        };
        product_vector_search(&s, &cfg).best_objective
    });
    Ok(SweepRow {
        params: point.to_vec(),
        is_psd: c.is_psd,
        is_ppt: c.is_ppt,
        p: c.kind.0,
        q: c.kind.1,
        best_objective,
    })
}

/// Evaluates every grid point in parallel; rows come back in grid order.
pub fn run(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.points()
        .par_iter()
        .map(|point| {
            evaluate(spec, point).with_context(|| format!("at grid point {}", params_label(point)))
        })
        .collect()
}

fn params_label(point: &[(String, f64)]) -> String {
    point
        .iter()
        .map(|(n, v)| format!("{n}={}", format_float(*v)))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn to_csv(family: Family, rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            family.name().to_string(),
            params_label(&r.params),
            r.is_psd.to_string(),
            r.is_ppt.to_string(),
            r.p.to_string(),
            r.q.to_string(),
            r.best_objective.map(format_float).unwrap_or_default(),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
