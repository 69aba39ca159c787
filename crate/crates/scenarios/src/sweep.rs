//! Cartesian parameter sweeps on a bounded worker pool.
//!
//! Points are numbered row-major over the axes (first axis slowest). Point
//! `i` runs with seed `base_seed ^ i` in its own subdirectory `point_iiii/`;
//! a failing point is recorded in the sweep manifest and does not stop the
//! others.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Resolved, ScenarioConfig, SweepParam};
use crate::error::{io_err, Result, ScenarioError};
use crate::manifest::{PointFailure, RunManifest, MANIFEST_FILE};
use crate::run::{run_resolved, Emitter, Summary};

pub const SWEEP_FILE: &str = "sweep.csv";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub index: usize,
    pub values: Vec<(SweepParam, f64)>,
    pub seed: u64,
    pub summary: Option<Summary>,
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub dir: PathBuf,
    pub manifest: RunManifest,
    pub points: Vec<PointResult>,
}

impl SweepOutput {
    /// Metric of every point in sweep order (`None` for failed points).
    pub fn metric(&self, key: &str) -> Vec<Option<f64>> {
        self.points.iter().map(|p| p.summary.as_ref().and_then(|s| s.metric(key))).collect()
    }
}

pub fn point_dir(index: usize) -> String {
    format!("point_{index:04}")
}

/// Every combination of axis values, first axis slowest.
pub fn cartesian(params: &Resolved) -> Vec<Vec<(SweepParam, f64)>> {
    params.sweep.iter().fold(vec![Vec::new()], |acc, axis| {
        acc.iter()
            .flat_map(|prefix| {
                axis.values.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push((axis.name, v));
                    p
                })
            })
            .collect()
    })
}

pub fn run_sweep(config: &ScenarioConfig, workers: usize, out: &Path) -> Result<SweepOutput> {
    let base = config.resolve()?;
    if base.sweep.is_empty() {
        return Err(ScenarioError::Config(format!("{}: no sweep axes", base.scenario)));
    }
    std::fs::create_dir_all(out).map_err(io_err(out))?;
    let mut manifest = RunManifest::start(&base);
    manifest.write(out)?;

    let points = cartesian(&base);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| ScenarioError::Pool(e.to_string()))?;
    let outcomes: Vec<(PointResult, Option<PointFailure>)> = pool.install(|| {
        points
            .par_iter()
            .enumerate()
            .map(|(index, values)| {
                let seed = base.seed ^ index as u64;
                let mut point = PointResult { index, values: values.clone(), seed, summary: None, error: None };
                match run_point(&base, values, seed, &out.join(point_dir(index))) {
                    Ok(s) => {
                        point.summary = Some(s);
                        (point, None)
                    }
                    Err(e) => {
                        point.error = Some(e.to_string());
                        let failure = PointFailure { point: index, kind: e.kind().into(), message: e.to_string() };
                        (point, Some(failure))
                    }
                }
            })
            .collect()
    });
    let mut results = Vec::with_capacity(outcomes.len());
    for (point, failure) in outcomes {
        manifest.failures.extend(failure);
        results.push(point);
    }

    let mut emit = Emitter { dir: out, files: Vec::new() };
    write_table(&base, &results, &mut emit)?;
    for p in results.iter().filter(|p| p.summary.is_some()) {
        emit.files.push(PathBuf::from(point_dir(p.index)).join(MANIFEST_FILE));
    }
    manifest.finalize(out, &emit.files)?;
    Ok(SweepOutput { dir: out.to_path_buf(), manifest, points: results })
}

fn run_point(base: &Resolved, values: &[(SweepParam, f64)], seed: u64, dir: &Path) -> Result<Summary> {
    let mut r = base.clone();
    for &(p, v) in values {
        r.apply(p, v)?;
    }
    r.seed = seed;
    r.sweep.clear();
    r.validate()?;
    Ok(run_resolved(&r, dir)?.summary)
}

fn write_table(base: &Resolved, points: &[PointResult], emit: &mut Emitter) -> Result<()> {
    let keys: BTreeSet<&String> = points.iter().filter_map(|p| p.summary.as_ref()).flat_map(|s| s.metrics.keys()).collect();
    let mut header: Vec<String> = vec!["point".into()];
    header.extend(base.sweep.iter().map(|a| a.name.name().to_string()));
    header.extend(["seed".to_string(), "status".to_string()]);
    header.extend(keys.iter().map(|k| k.to_string()));
    header.push("error".into());
    let rows = points.iter().map(|p| {
        let mut row = vec![p.index.to_string()];
        row.extend(p.values.iter().map(|(_, v)| v.to_string()));
        row.push(p.seed.to_string());
        row.push(if p.summary.is_some() { "ok" } else { "failed" }.into());
        for k in &keys {
            row.push(p.summary.as_ref().and_then(|s| s.metric(k)).map_or_else(String::new, |v| v.to_string()));
        }
        row.push(p.error.clone().unwrap_or_default());
        row
    });
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    emit.csv(SWEEP_FILE, &header, rows)
}
