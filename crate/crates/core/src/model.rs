//! The teaching problem's data model: finite states and actions, a feature
//! map into R^d, and a deterministic target policy. The learner picks
//! `argmax_a <w, phi(s, a)>`, so everything downstream works with the
//! difference vectors `phi(s, target) - phi(s, b)` for each non-target `b`.

use std::collections::HashMap;
use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lp::{self, LinearProgram, LpError, LpOutcome};

/// Score gap below which two actions count as tied, relative to the largest
/// score magnitude at the state.
pub const EPS_TIE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("state {state}: actions {target} and {alt_action} share a feature vector")]
    ZeroDifference { state: String, target: String, alt_action: String },
    #[error("no weight vector realizes the target policy")]
    NotRealizable,
    #[error("weight vector has dimension {got}, expected {expected}")]
    WeightDimension { expected: usize, got: usize },
    #[error("unknown state id {0:?}")]
    UnknownState(String),
    #[error("duplicate state in demonstration set: {0:?}")]
    DuplicateState(String),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("failed to read or write instance: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed instance JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// Immutable once constructed; every accessor hands out views only.
#[derive(Debug, Clone, PartialEq)]
pub struct TeachingInstance {
    dim: usize,
    states: Vec<String>,
    actions: Vec<String>,
    /// `features[s][a]` is phi(s, a), length `dim`.
    features: Vec<Vec<Vec<f64>>>,
    /// `target[s]` indexes into `actions`.
    target: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct InstanceJson {
    d: usize,
    states: Vec<String>,
    actions: Vec<String>,
    features: Vec<Vec<Vec<f64>>>,
    target: Vec<usize>,
}

impl TeachingInstance {
    pub fn new(
        dim: usize,
        states: Vec<String>,
        actions: Vec<String>,
        features: Vec<Vec<Vec<f64>>>,
        target: Vec<usize>,
    ) -> Result<Self, ModelError> {
        let fail = |msg: String| Err(ModelError::InvalidInstance(msg));
        if dim == 0 {
            return fail("feature dimension must be positive".into());
        }
        if states.is_empty() {
            return fail("instance needs at least one state".into());
        }
        if actions.is_empty() {
            return fail("instance needs at least one action".into());
        }
        for (label, ids) in [("state", &states), ("action", &actions)] {
            let mut seen = HashSet::new();
            for id in ids.iter() {
                if !seen.insert(id) {
                    return fail(format!("duplicate {label} id {id:?}"));
                }
            }
        }
        if features.len() != states.len() {
            return fail(format!(
                "features has {} rows for {} states",
                features.len(),
                states.len()
            ));
        }
        for (s, row) in features.iter().enumerate() {
            if row.len() != actions.len() {
                return fail(format!(
                    "state {:?} has {} feature rows for {} actions",
                    states[s],
                    row.len(),
                    actions.len()
                ));
            }
            for (a, phi) in row.iter().enumerate() {
                if phi.len() != dim {
                    return fail(format!(
                        "phi({:?}, {:?}) has length {}, expected {}",
                        states[s],
                        actions[a],
                        phi.len(),
                        dim
                    ));
                }
                if let Some(x) = phi.iter().find(|x| !x.is_finite()) {
                    return fail(format!(
                        "phi({:?}, {:?}) contains non-finite entry {x}",
                        states[s], actions[a]
                    ));
                }
            }
        }
        if target.len() != states.len() {
            return fail(format!(
                "target has {} entries for {} states",
                target.len(),
                states.len()
            ));
        }
        if let Some((s, &t)) = target.iter().enumerate().find(|(_, &t)| t >= actions.len()) {
            return fail(format!(
                "target action index {t} at state {:?} is out of range",
                states[s]
            ));
        }
        Ok(Self { dim, states, actions, features, target })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn state_id(&self, s: usize) -> &str {
        &self.states[s]
    }

    pub fn action_id(&self, a: usize) -> &str {
        &self.actions[a]
    }

    pub fn state_index(&self, id: &str) -> Option<usize> {
        self.states.iter().position(|s| s == id)
    }

    pub fn feature(&self, s: usize, a: usize) -> &[f64] {
        &self.features[s][a]
    }

    pub fn target(&self, s: usize) -> usize {
        self.target[s]
    }

    pub fn from_json_str(text: &str) -> Result<Self, ModelError> {
        let raw: InstanceJson = serde_json::from_str(text)?;
        Self::new(raw.d, raw.states, raw.actions, raw.features, raw.target)
    }

    pub fn to_json_string(&self) -> String {
        let raw = InstanceJson {
            d: self.dim,
            states: self.states.clone(),
            actions: self.actions.clone(),
            features: self.features.clone(),
            target: self.target.clone(),
        };
        serde_json::to_string(&raw).expect("instance serializes")
    }

    pub fn load(path: &Path) -> Result<Self, ModelError> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<(), ModelError> {
        Ok(std::fs::write(path, self.to_json_string())?)
    }
}

/// One constraint row of the version space: the target action at `state`
/// must outscore `alt_action`, i.e. `<w, vec> > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceVector {
    pub state: usize,
    pub target_action: usize,
    pub alt_action: usize,
    pub vec: Vec<f64>,
}

/// Ordered, duplicate-free subset of an instance's states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemonstrationSet {
    states: Vec<usize>,
}

impl DemonstrationSet {
    pub fn new(instance: &TeachingInstance, states: Vec<usize>) -> Result<Self, ModelError> {
        let mut seen = HashSet::new();
        for &s in &states {
            if s >= instance.num_states() {
                return Err(ModelError::InvalidInstance(format!(
                    "state index {s} out of range"
                )));
            }
            if !seen.insert(s) {
                return Err(ModelError::DuplicateState(instance.state_id(s).to_string()));
            }
        }
        Ok(Self { states })
    }

    pub fn full(instance: &TeachingInstance) -> Self {
        Self { states: (0..instance.num_states()).collect() }
    }

    pub fn from_ids(instance: &TeachingInstance, ids: &[String]) -> Result<Self, ModelError> {
        let index: HashMap<&str, usize> = instance
            .states()
            .iter()
            .enumerate()
            .map(|(i, id)| (id.as_str(), i))
            .collect();
        let mut states = Vec::with_capacity(ids.len());
        for id in ids {
            match index.get(id.as_str()) {
                Some(&i) => states.push(i),
                None => return Err(ModelError::UnknownState(id.clone())),
            }
        }
        Self::new(instance, states)
    }

    pub fn states(&self) -> &[usize] {
        &self.states
    }

    pub fn ids(&self, instance: &TeachingInstance) -> Vec<String> {
        self.states.iter().map(|&s| instance.state_id(s).to_string()).collect()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// A weight vector consistent with the demonstrations, plus the smallest
/// margin `<w, psi>` it attains over them.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightWitness {
    pub w: Vec<f64>,
    pub margin: f64,
}

/// All difference vectors induced by demonstrating the target action at each
/// state of `subset`: one per non-target action, in state order then action
/// order. A zero difference means the target cannot strictly win at that
/// state and is an error.
pub fn difference_vectors(
    instance: &TeachingInstance,
    subset: &DemonstrationSet,
) -> Result<Vec<DifferenceVector>, ModelError> {
    let mut out = Vec::new();
    for &s in subset.states() {
        let t = instance.target(s);
        let phi_t = instance.feature(s, t);
        for b in 0..instance.num_actions() {
            if b == t {
                continue;
            }
            let vec: Vec<f64> = phi_t
                .iter()
                .zip(instance.feature(s, b))
                .map(|(x, y)| x - y)
                .collect();
            if vec.iter().all(|&x| x == 0.0) {
                return Err(ModelError::ZeroDifference {
                    state: instance.state_id(s).to_string(),
                    target: instance.action_id(t).to_string(),
                    alt_action: instance.action_id(b).to_string(),
                });
            }
            out.push(DifferenceVector { state: s, target_action: t, alt_action: b, vec });
        }
    }
    Ok(out)
}

const EPS_PARALLEL: f64 = 1e-9;

/// Collapses positively parallel rows to the shortest member of each class.
/// At margin one the shortest vector is the binding constraint, so the
/// reduced system keeps the same feasible set while the row count drops
/// from |S|(|A|-1) to the number of distinct directions.
fn parallel_reps(vectors: &[DifferenceVector]) -> Vec<Vec<f64>> {
    let mut units: Vec<Vec<f64>> = Vec::new();
    let mut reps: Vec<(f64, Vec<f64>)> = Vec::new();
    for dv in vectors {
        let norm = dv.vec.iter().map(|x| x * x).sum::<f64>().sqrt();
        let unit: Vec<f64> = dv.vec.iter().map(|x| x / norm).collect();
        let class = units
            .iter()
            .position(|u| u.iter().zip(&unit).all(|(a, b)| (a - b).abs() <= EPS_PARALLEL));
        match class {
            Some(i) => {
                if norm < reps[i].0 {
                    reps[i] = (norm, dv.vec.clone());
                }
            }
            None => {
                units.push(unit);
                reps.push((norm, dv.vec.clone()));
            }
        }
    }
    reps.into_iter().map(|(_, v)| v).collect()
}

/// Decides whether some `w` makes the target policy the strict argmax
/// everywhere. Strictness is encoded at margin one, which loses nothing:
/// any strictly separating `w` scales to margin one and back.
pub fn check_realizability(instance: &TeachingInstance) -> Result<WeightWitness, ModelError> {
    let full = DemonstrationSet::full(instance);
    let vectors = match difference_vectors(instance, &full) {
        Ok(v) => v,
        Err(ModelError::ZeroDifference { .. }) => return Err(ModelError::NotRealizable),
        Err(e) => return Err(e),
    };
    if vectors.is_empty() {
        // Single-action instances: every policy is trivially realizable.
        return Ok(WeightWitness { w: vec![0.0; instance.dim()], margin: f64::INFINITY });
    }
    let program = LinearProgram {
        objective: vec![0.0; instance.dim()],
        constraints: parallel_reps(&vectors).into_iter().map(|v| (v, 1.0)).collect(),
    };
    match lp::solve(&program)? {
        LpOutcome::Optimal { w, .. } => {
            let margin = vectors
                .iter()
                .map(|dv| lp::dot(&w, &dv.vec))
                .fold(f64::INFINITY, f64::min);
            Ok(WeightWitness { w, margin })
        }
        LpOutcome::Infeasible => Err(ModelError::NotRealizable),
        LpOutcome::Unbounded { .. } => Err(LpError::NumericalFailure(
            "feasibility program reported unbounded".into(),
        )
        .into()),
    }
}

/// Actions of maximal score at state `s` under `w`, as indices in action
/// order. Ties within [`EPS_TIE`] of the top score (relative to the largest
/// score magnitude) are all included.
pub fn induced_actions(
    instance: &TeachingInstance,
    w: &[f64],
    s: usize,
) -> Result<Vec<usize>, ModelError> {
    if w.len() != instance.dim() {
        return Err(ModelError::WeightDimension { expected: instance.dim(), got: w.len() });
    }
    let scores: Vec<f64> = (0..instance.num_actions())
        .map(|a| lp::dot(w, instance.feature(s, a)))
        .collect();
    let best = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = scores.iter().map(|x| x.abs()).fold(0.0, f64::max).max(1.0);
    Ok((0..scores.len()).filter(|&a| best - scores[a] <= EPS_TIE * span).collect())
}
