//! Seeded random instances that are realizable by construction: a hidden
//! unit weight vector is drawn first and each state's features are redrawn
//! until its top action wins by a clear margin under that vector.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::env::EnvError;
use crate::model::TeachingInstance;

/// Minimum top-two score gap a state must exhibit under the hidden weights.
pub const DELTA_MARGIN: f64 = 1e-3;

const MAX_ATTEMPTS: usize = 1000;

pub fn gen_random_realizable(
    dim: usize,
    num_states: usize,
    num_actions: usize,
    seed: u64,
) -> Result<TeachingInstance, EnvError> {
    if dim == 0 || num_states == 0 || num_actions == 0 {
        return Err(EnvError::InvalidParam(
            "dim, states, and actions must all be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hidden = unit_normal(&mut rng, dim);

    let mut features = Vec::with_capacity(num_states);
    let mut target = Vec::with_capacity(num_states);
    for state in 0..num_states {
        let mut accepted = None;
        for _ in 0..MAX_ATTEMPTS {
            let candidate: Vec<Vec<f64>> = (0..num_actions)
                .map(|_| (0..dim).map(|_| rng.sample(StandardNormal)).collect())
                .collect();
            let scores: Vec<f64> = candidate
                .iter()
                .map(|phi| phi.iter().zip(&hidden).map(|(x, w)| x * w).sum())
                .collect();
            let best = (0..num_actions)
                .max_by(|&a, &b| scores[a].total_cmp(&scores[b]))
                .unwrap();
            let runner_up = scores
                .iter()
                .enumerate()
                .filter(|&(a, _)| a != best)
                .map(|(_, &v)| v)
                .fold(f64::NEG_INFINITY, f64::max);
            if num_actions == 1 || scores[best] - runner_up >= DELTA_MARGIN {
                accepted = Some((candidate, best));
                break;
            }
        }
        match accepted {
            Some((candidate, best)) => {
                features.push(candidate);
                target.push(best);
            }
            None => return Err(EnvError::ResampleLimit { state, attempts: MAX_ATTEMPTS }),
        }
    }

    let states = (1..=num_states).map(|i| format!("s{i}")).collect();
    let actions = (1..=num_actions).map(|a| format!("a{a}")).collect();
    Ok(TeachingInstance::new(dim, states, actions, features, target)?)
}

fn unit_normal(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-9 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}
