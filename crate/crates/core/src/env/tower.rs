//! Polygon towers. State `s` in `{2, .., n}` is a regular `s`-gon; actions
//! `1..n` step to one of its vertices and action `n + 1` climbs the tower.
//! Climbing is the demonstrated policy, realized by `w = [0, 0, 1]`.
//!
//! The difference vector against vertex action `a` points along
//! `[cos(2*pi*a/s), sin(2*pi*a/s), 1]`, so the rays of state `s` are the
//! reduced fractions `a/s` on the unit circle. State `s` covers exactly the
//! rays whose reduced denominator divides `s`, which makes the minimum
//! teaching set the states without a proper multiple in range.

use std::f64::consts::TAU;

use crate::env::EnvError;
use crate::model::TeachingInstance;

pub fn gen_polygon_tower(n: usize) -> Result<TeachingInstance, EnvError> {
    if !(2..=1000).contains(&n) {
        return Err(EnvError::InvalidParam(format!(
            "polygon towers support 2 to 1000 floors, got {n}"
        )));
    }
    let states: Vec<String> = (2..=n).map(|s| s.to_string()).collect();
    let actions: Vec<String> = (1..=n + 1).map(|a| a.to_string()).collect();
    let mut features = Vec::with_capacity(n - 1);
    for s in 2..=n {
        let sf = s as f64;
        let mut row: Vec<Vec<f64>> = (1..=n)
            .map(|a| {
                let angle = TAU * a as f64 / sf;
                vec![-sf * angle.cos(), -sf * angle.sin(), 0.0]
            })
            .collect();
        row.push(vec![0.0, 0.0, sf]);
        features.push(row);
    }
    let target = vec![n; n - 1];
    Ok(TeachingInstance::new(3, states, actions, features, target)?)
}

/// The unique minimum teaching set: states `s` with no multiple `2s <= n`,
/// i.e. the top half of the tower. Returned as state values, ascending.
pub fn polygon_tower_optimal(n: usize) -> Vec<usize> {
    (2..=n).filter(|s| 2 * s > n).collect()
}
