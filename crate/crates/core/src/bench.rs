//! Benchmark harness over the generated families. One CSV row per instance
//! size; a failing size records its error and the run moves on.

use std::path::Path;

use serde::Serialize;

use crate::engine::{self, Method};
use crate::env;
use crate::error::Error;
use crate::model::TeachingInstance;

/// Sizes at or above this only run greedy unless the caller forces exact.
const EXACT_CUTOFF: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchFamily {
    Diamond,
    Tower,
}

impl BenchFamily {
    pub fn label(self) -> &'static str {
        match self {
            BenchFamily::Diamond => "diamond",
            BenchFamily::Tower => "tower",
        }
    }

    fn generate(self, n: usize) -> Result<TeachingInstance, Error> {
        match self {
            BenchFamily::Diamond => Ok(env::gen_diamond(n)?),
            BenchFamily::Tower => Ok(env::gen_polygon_tower(n)?),
        }
    }

    fn ground_truth(self, n: usize) -> Option<usize> {
        match self {
            BenchFamily::Diamond => None,
            BenchFamily::Tower => Some(env::polygon_tower_optimal(n).len()),
        }
    }
}

/// Field order fixes the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub instance_label: String,
    pub n: usize,
    pub num_states: usize,
    pub num_diff_vectors: usize,
    pub num_dedup_rays: usize,
    pub num_extreme_rays: usize,
    pub td_exact: Option<usize>,
    pub td_greedy: usize,
    pub td_ground_truth: Option<usize>,
    pub runtime_ms_total: f64,
    pub runtime_ms_diff: f64,
    pub runtime_ms_lp: f64,
    pub runtime_ms_cover: f64,
    pub trials: usize,
    pub seed: u64,
    pub error: Option<String>,
}

impl BenchRecord {
    fn failed(family: BenchFamily, n: usize, trials: usize, seed: u64, error: String) -> Self {
        BenchRecord {
            instance_label: family.label().to_string(),
            n,
            num_states: 0,
            num_diff_vectors: 0,
            num_dedup_rays: 0,
            num_extreme_rays: 0,
            td_exact: None,
            td_greedy: 0,
            td_ground_truth: None,
            runtime_ms_total: 0.0,
            runtime_ms_diff: 0.0,
            runtime_ms_lp: 0.0,
            runtime_ms_cover: 0.0,
            trials,
            seed,
            error: Some(error),
        }
    }
}

/// Runs each size in `ns`: greedy `trials` times for the timing columns
/// (averaged), exact once for `td_exact` where tractable or forced.
pub fn run_bench(
    family: BenchFamily,
    ns: &[usize],
    trials: usize,
    seed: u64,
    exact_all: bool,
    node_budget: u64,
) -> Vec<BenchRecord> {
    let trials = trials.max(1);
    let mut records = Vec::with_capacity(ns.len());
    for &n in ns {
        records.push(bench_one(family, n, trials, seed, exact_all, node_budget));
    }
    records
}

fn bench_one(
    family: BenchFamily,
    n: usize,
    trials: usize,
    seed: u64,
    exact_all: bool,
    node_budget: u64,
) -> BenchRecord {
    let instance = match family.generate(n) {
        Ok(inst) => inst,
        Err(e) => return BenchRecord::failed(family, n, trials, seed, e.to_string()),
    };

    let mut total = 0.0;
    let mut diff = 0.0;
    let mut lp = 0.0;
    let mut cover = 0.0;
    let mut greedy = None;
    for _ in 0..trials {
        match engine::optimal_teach(&instance, Method::Greedy) {
            Ok(result) => {
                total += result.stats.timings.total_ms;
                diff += result.stats.timings.diff_ms;
                lp += result.stats.timings.lp_ms;
                cover += result.stats.timings.cover_ms;
                greedy = Some(result);
            }
            Err(e) => return BenchRecord::failed(family, n, trials, seed, e.to_string()),
        }
    }
    let greedy = greedy.expect("at least one trial ran");
    let scale = trials as f64;

    let mut error = None;
    let td_exact = if exact_all || n < EXACT_CUTOFF {
        match engine::optimal_teach_with_budget(&instance, Method::Exact, node_budget) {
            Ok(result) if result.optimal => Some(result.teaching_set.len()),
            Ok(result) => {
                error = Some(format!(
                    "exact search exhausted {node_budget} nodes; incumbent size {}",
                    result.teaching_set.len()
                ));
                None
            }
            Err(e) => {
                error = Some(e.to_string());
                None
            }
        }
    } else {
        None
    };

    BenchRecord {
        instance_label: family.label().to_string(),
        n,
        num_states: instance.num_states(),
        num_diff_vectors: greedy.stats.num_diff_vectors,
        num_dedup_rays: greedy.stats.num_dedup_rays,
        num_extreme_rays: greedy.stats.num_extreme_rays,
        td_exact,
        td_greedy: greedy.teaching_set.len(),
        td_ground_truth: family.ground_truth(n),
        runtime_ms_total: total / scale,
        runtime_ms_diff: diff / scale,
        runtime_ms_lp: lp / scale,
        runtime_ms_cover: cover / scale,
        trials,
        seed,
        error,
    }
}

pub fn write_csv(records: &[BenchRecord], path: &Path) -> Result<(), std::io::Error> {
    let mut writer = csv::Writer::from_path(path)?;
    for record in records {
        writer.serialize(record)?;
    }
    writer.flush()?;
    Ok(())
}

/// Two-column `n` versus mean total runtime, ready for gnuplot.
pub fn write_plot(records: &[BenchRecord], path: &Path) -> Result<(), std::io::Error> {
    let mut out = String::from("# n runtime_ms_total\n");
    for record in records {
        if record.error.is_none() {
            out.push_str(&format!("{} {:.6}\n", record.n, record.runtime_ms_total));
        }
    }
    std::fs::write(path, out)
}
