//! End-to-end teaching-set construction and checking.
//!
//! The pipeline: difference vectors, ray dedup, extreme-ray elimination,
//! then a set cover of the extreme rays by states. A state covers a ray when
//! one of its own difference vectors lies on it, and any cover of the
//! extreme rays pins the version space exactly, so minimum teaching sets and
//! minimum covers coincide.
//!
//! [`verify_teaching_set`] deliberately shares nothing with that pipeline
//! beyond the LP solver: it asks, per candidate deviation, whether some
//! weight vector consistent with the taught states scores the deviation at
//! least as high as the target. Ties count against the teacher.

use std::time::Instant;

use itertools::Itertools;
use serde_json::json;

use crate::cone::{self, RaySet};
use crate::cover::{self, CoverError, CoverInstance, DEFAULT_NODE_BUDGET};
use crate::error::Error;
use crate::lp::{self, LinearProgram, LpOutcome};
use crate::model::{
    difference_vectors, DemonstrationSet, DifferenceVector, TeachingInstance,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Greedy,
    Exact,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Greedy => "greedy",
            Method::Exact => "exact",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhaseTimings {
    pub diff_ms: f64,
    pub lp_ms: f64,
    pub cover_ms: f64,
    pub total_ms: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TeachingStats {
    pub num_diff_vectors: usize,
    pub num_dedup_rays: usize,
    pub num_extreme_rays: usize,
    pub lp_calls: usize,
    pub timings: PhaseTimings,
}

/// Which state and alternative action witness each extreme ray.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertificateEntry {
    pub ray: usize,
    pub state: usize,
    pub alt_action: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TeachingResult {
    pub teaching_set: DemonstrationSet,
    pub extreme_rays: RaySet,
    pub certificate: Vec<CertificateEntry>,
    pub method: Method,
    /// True only when the exact search finished. Greedy never claims it.
    pub optimal: bool,
    /// The exact search ran out of nodes; `teaching_set` is its incumbent.
    pub budget_exhausted: bool,
    pub stats: TeachingStats,
}

impl TeachingResult {
    pub fn to_json_value(&self, instance: &TeachingInstance) -> serde_json::Value {
        json!({
            "teaching_states": self.teaching_set.ids(instance),
            "size": self.teaching_set.len(),
            "method": self.method.as_str(),
            "optimal": self.optimal,
            "extreme_rays": self.extreme_rays.unit_directions(),
            "certificate": self.certificate.iter().map(|c| json!({
                "ray": c.ray,
                "state": instance.state_id(c.state),
                "alt_action": instance.action_id(c.alt_action),
            })).collect::<Vec<_>>(),
            "stats": {
                "num_diff_vectors": self.stats.num_diff_vectors,
                "num_dedup_rays": self.stats.num_dedup_rays,
                "num_extreme_rays": self.stats.num_extreme_rays,
                "lp_calls": self.stats.lp_calls,
                "budget_exhausted": self.budget_exhausted,
                "runtime_ms": {
                    "total": self.stats.timings.total_ms,
                    "diff": self.stats.timings.diff_ms,
                    "lp": self.stats.timings.lp_ms,
                    "cover": self.stats.timings.cover_ms,
                },
            },
        })
    }

    pub fn to_json_string(&self, instance: &TeachingInstance) -> String {
        serde_json::to_string_pretty(&self.to_json_value(instance)).expect("result serializes")
    }
}

/// `coverage[s]` lists the extreme rays that demonstrating state `s` pins
/// down, straight from the rays' provenance records.
pub fn build_coverage_sets(instance: &TeachingInstance, extreme: &RaySet) -> Vec<Vec<usize>> {
    let mut coverage = vec![Vec::new(); instance.num_states()];
    for (r, ray) in extreme.rays.iter().enumerate() {
        let mut last = usize::MAX;
        for m in &ray.members {
            // Members arrive state-major, so repeats per state are adjacent.
            if m.state != last {
                coverage[m.state].push(r);
                last = m.state;
            }
        }
    }
    coverage
}

pub fn optimal_teach(
    instance: &TeachingInstance,
    method: Method,
) -> Result<TeachingResult, Error> {
    optimal_teach_with_budget(instance, method, DEFAULT_NODE_BUDGET)
}

pub fn optimal_teach_with_budget(
    instance: &TeachingInstance,
    method: Method,
    node_budget: u64,
) -> Result<TeachingResult, Error> {
    let start = Instant::now();
    crate::model::check_realizability(instance)?;
    let mut lp_calls = 1;

    let t = Instant::now();
    let vectors = difference_vectors(instance, &DemonstrationSet::full(instance))?;
    let rays = cone::dedupe_rays(&vectors)?;
    let diff_ms = ms_since(t);

    let t = Instant::now();
    let (extreme, elim) = cone::minimal_extreme_with_stats(&rays)?;
    let lp_ms = ms_since(t);
    lp_calls += elim.lp_calls;

    let t = Instant::now();
    let coverage = build_coverage_sets(instance, &extreme);
    let ci = CoverInstance::new(
        extreme.len(),
        coverage.into_iter().enumerate().collect(),
    )?;
    let (solution, budget_exhausted) = match method {
        Method::Greedy => (cover::greedy_cover(&ci)?, false),
        Method::Exact => match cover::exact_cover(&ci, node_budget) {
            Ok(sol) => (sol, false),
            Err(CoverError::BudgetExceeded { incumbent, .. }) => (incumbent, true),
            Err(e) => return Err(e.into()),
        },
    };
    let cover_ms = ms_since(t);

    let mut chosen = solution.chosen.clone();
    chosen.sort_unstable();
    let teaching_set = DemonstrationSet::new(instance, chosen)?;
    let certificate = solution
        .covered_by
        .iter()
        .enumerate()
        .map(|(r, &s)| {
            let member = extreme.rays[r]
                .members
                .iter()
                .find(|m| m.state == s)
                .expect("covering state owns a vector on the ray");
            CertificateEntry { ray: r, state: s, alt_action: member.alt_action }
        })
        .collect();

    Ok(TeachingResult {
        teaching_set,
        certificate,
        method,
        optimal: method == Method::Exact && !budget_exhausted,
        budget_exhausted,
        stats: TeachingStats {
            num_diff_vectors: vectors.len(),
            num_dedup_rays: rays.len(),
            num_extreme_rays: extreme.len(),
            lp_calls,
            timings: PhaseTimings {
                diff_ms,
                lp_ms,
                cover_ms,
                total_ms: ms_since(start),
            },
        },
        extreme_rays: extreme,
    })
}

fn ms_since(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verification {
    Valid,
    /// A weight vector consistent with the taught states under which
    /// `alt_action` ties or beats the target at `state`.
    Counterexample { state: usize, alt_action: usize, witness: Vec<f64> },
}

/// Checks whether teaching `subset` pins the full version space: for every
/// state and alternative action, no consistent weight vector may score the
/// alternative at or above the target. States scan in instance order and
/// alternatives in action order, so the reported counterexample is the
/// first one.
pub fn verify_teaching_set(
    instance: &TeachingInstance,
    subset: &DemonstrationSet,
) -> Result<Verification, Error> {
    let taught = difference_vectors(instance, subset)?;
    for s in 0..instance.num_states() {
        if let Some(v) = deviation_witness(instance, &taught, s)? {
            return Ok(v);
        }
    }
    Ok(Verification::Valid)
}

/// Same verdict as [`verify_teaching_set`], with states partitioned across
/// `threads` workers. The merge keeps the lowest-state counterexample, so
/// the answer matches the serial scan.
pub fn verify_teaching_set_threaded(
    instance: &TeachingInstance,
    subset: &DemonstrationSet,
    threads: usize,
) -> Result<Verification, Error> {
    let threads = threads.max(1).min(instance.num_states().max(1));
    if threads == 1 {
        return verify_teaching_set(instance, subset);
    }
    let taught = difference_vectors(instance, subset)?;
    let n = instance.num_states();
    let chunk = n.div_ceil(threads);
    let mut found: Vec<Result<Option<Verification>, Error>> = Vec::new();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for t in 0..threads {
            let lo = t * chunk;
            let hi = ((t + 1) * chunk).min(n);
            let taught = &taught;
            handles.push(scope.spawn(move || {
                for s in lo..hi {
                    match deviation_witness(instance, taught, s) {
                        Ok(Some(v)) => return Ok(Some(v)),
                        Ok(None) => {}
                        Err(e) => return Err(e),
                    }
                }
                Ok(None)
            }));
        }
        for h in handles {
            found.push(h.join().expect("verification worker panicked"));
        }
    });
    // Chunks are in state order, so the first hit is the global first.
    for slot in found {
        if let Some(v) = slot? {
            return Ok(v);
        }
    }
    Ok(Verification::Valid)
}

fn deviation_witness(
    instance: &TeachingInstance,
    taught: &[DifferenceVector],
    s: usize,
) -> Result<Option<Verification>, Error> {
    let t = instance.target(s);
    let phi_t = instance.feature(s, t);
    for b in 0..instance.num_actions() {
        if b == t {
            continue;
        }
        // Feasible w with margin-one taught constraints and the deviation
        // scoring at least as high as the target (<w, psi_sb> <= 0).
        let psi_sb: Vec<f64> = phi_t
            .iter()
            .zip(instance.feature(s, b))
            .map(|(x, y)| x - y)
            .collect();
        let mut constraints: Vec<(Vec<f64>, f64)> = taught
            .iter()
            .map(|dv| (dv.vec.clone(), 1.0))
            .collect();
        constraints.push((psi_sb.iter().map(|x| -x).collect(), 0.0));
        let program = LinearProgram { objective: vec![0.0; instance.dim()], constraints };
        match lp::solve(&program)? {
            LpOutcome::Optimal { w, .. } => {
                return Ok(Some(Verification::Counterexample {
                    state: s,
                    alt_action: b,
                    witness: w,
                }));
            }
            LpOutcome::Infeasible => {}
            LpOutcome::Unbounded { .. } => {
                return Err(crate::lp::LpError::NumericalFailure(
                    "zero-objective feasibility program reported unbounded".into(),
                )
                .into());
            }
        }
    }
    Ok(None)
}

/// Smallest valid teaching set by exhaustive search: cardinalities ascending,
/// combinations in lexicographic state order, first hit wins. Only
/// [`verify_teaching_set`] decides validity, so this is an independent
/// baseline for the pipeline.
pub fn brute_force_min_teaching(
    instance: &TeachingInstance,
    max_cardinality: Option<usize>,
) -> Result<DemonstrationSet, Error> {
    let n = instance.num_states();
    let cap = max_cardinality.unwrap_or(n).min(n);
    for k in 0..=cap {
        for combo in (0..n).combinations(k) {
            let candidate = DemonstrationSet::new(instance, combo)?;
            if verify_teaching_set(instance, &candidate)? == Verification::Valid {
                return Ok(candidate);
            }
        }
    }
    Err(Error::NoTeachingSetWithin { max_cardinality: cap })
}
