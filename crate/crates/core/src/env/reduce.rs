//! Set cover embedded as a teaching problem. Each universe element becomes
//! a rim direction on a circle lifted to constant height, each subset
//! becomes a state whose non-target actions sit opposite the directions of
//! its elements, and the shared target action sits at the origin. Teaching
//! a state then pins exactly the rays of its elements, so minimum teaching
//! sets and minimum covers have the same size.

use std::collections::BTreeSet;
use std::f64::consts::TAU;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::env::EnvError;
use crate::model::TeachingInstance;

/// Rim height; any constant larger than 1 keeps the lift well away from the
/// circle plane.
const LIFT: f64 = 10.0;

/// Cover instance over universe `{1, .., universe}` with one-based element
/// indices, as read from JSON: `{"universe": m, "subsets": [[..], ..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetCoverSpec {
    #[serde(rename = "universe")]
    pub universe_size: usize,
    pub subsets: Vec<Vec<usize>>,
}

impl SetCoverSpec {
    pub fn from_json_str(text: &str) -> Result<Self, EnvError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("cover spec serializes")
    }

    pub fn load(path: &Path) -> Result<Self, EnvError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| EnvError::InvalidParam(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }
}

/// Builds the teaching instance. Subsets are deduplicated internally;
/// elements must be in range and every element must appear somewhere.
pub fn reduce_set_cover(spec: &SetCoverSpec) -> Result<TeachingInstance, EnvError> {
    let m = spec.universe_size;
    if m == 0 {
        return Err(EnvError::InvalidParam("universe must be nonempty".into()));
    }
    if spec.subsets.is_empty() {
        return Err(EnvError::InvalidParam("at least one subset is required".into()));
    }
    let mut subsets: Vec<Vec<usize>> = Vec::with_capacity(spec.subsets.len());
    for (i, raw) in spec.subsets.iter().enumerate() {
        if raw.is_empty() {
            return Err(EnvError::InvalidParam(format!("subset {} is empty", i + 1)));
        }
        let mut seen = BTreeSet::new();
        let mut elems = Vec::with_capacity(raw.len());
        for &e in raw {
            if e == 0 || e > m {
                return Err(EnvError::InvalidParam(format!(
                    "subset {} contains element {e} outside 1..={m}",
                    i + 1
                )));
            }
            if seen.insert(e) {
                elems.push(e);
            }
        }
        subsets.push(elems);
    }
    let covered: BTreeSet<usize> = subsets.iter().flatten().copied().collect();
    let missing: Vec<usize> = (1..=m).filter(|e| !covered.contains(e)).collect();
    if !missing.is_empty() {
        return Err(EnvError::UncoverableUniverse(missing));
    }

    // Rim direction of element k, shared across all subsets containing it.
    let rim: Vec<Vec<f64>> = (1..=m)
        .map(|k| {
            let angle = TAU * k as f64 / m as f64;
            vec![angle.cos(), angle.sin(), LIFT]
        })
        .collect();

    let num_actions = subsets.iter().map(Vec::len).max().unwrap() + 1;
    let states: Vec<String> = (1..=subsets.len()).map(|i| i.to_string()).collect();
    let actions: Vec<String> = (1..=num_actions).map(|a| a.to_string()).collect();
    let features: Vec<Vec<Vec<f64>>> = subsets
        .iter()
        .map(|elems| {
            let mut row: Vec<Vec<f64>> = (1..num_actions)
                .map(|b| {
                    // Shorter subsets repeat their last element so every
                    // non-target action still points at one of their rays.
                    let e = elems[b.min(elems.len()) - 1];
                    rim[e - 1].iter().map(|x| -x).collect()
                })
                .collect();
            row.push(vec![0.0; 3]);
            row
        })
        .collect();
    let target = vec![num_actions - 1; subsets.len()];
    Ok(TeachingInstance::new(3, states, actions, features, target)?)
}
