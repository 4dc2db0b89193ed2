//! Helpers shared by the integration suites: independent oracles that avoid
//! the library's LP path entirely, plus small generators.

#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use tie::model::DifferenceVector;

/// Conic membership by Caratheodory: `x` lies in the cone of `gens` iff some
/// subset of at most `d` generators combines to it with nonnegative weights.
/// Solved per subset by Gaussian elimination on the normal equations, so no
/// simplex code is involved.
pub fn caratheodory_member(x: &[f64], gens: &[Vec<f64>], tol: f64) -> bool {
    let d = x.len();
    let n = gens.len();
    let mut picked = Vec::new();
    subsets_up_to(n, d.min(n), &mut picked, &mut |subset| {
        if subset.is_empty() {
            return false;
        }
        let cols: Vec<&Vec<f64>> = subset.iter().map(|&i| &gens[i]).collect();
        match solve_least_squares(&cols, x) {
            Some(lambda) => {
                if lambda.iter().any(|&l| l < -tol) {
                    return false;
                }
                for coord in 0..d {
                    let built: f64 =
                        lambda.iter().zip(&cols).map(|(l, g)| l * g[coord]).sum();
                    if (built - x[coord]).abs() > tol {
                        return false;
                    }
                }
                true
            }
            None => false,
        }
    })
}

fn subsets_up_to(
    n: usize,
    k: usize,
    picked: &mut Vec<usize>,
    hit: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    if hit(picked) {
        return true;
    }
    if picked.len() == k {
        return false;
    }
    let start = picked.last().map_or(0, |&p| p + 1);
    for i in start..n {
        picked.push(i);
        if subsets_up_to(n, k, picked, hit) {
            picked.pop();
            return true;
        }
        picked.pop();
    }
    false
}

/// Least-squares weights for `cols * lambda = x` via the Gram system;
/// None when the columns are numerically dependent.
fn solve_least_squares(cols: &[&Vec<f64>], x: &[f64]) -> Option<Vec<f64>> {
    let k = cols.len();
    let mut gram = vec![vec![0.0; k + 1]; k];
    for i in 0..k {
        for j in 0..k {
            gram[i][j] = dot(cols[i], cols[j]);
        }
        gram[i][k] = dot(cols[i], x);
    }
    // Gaussian elimination with partial pivoting.
    for col in 0..k {
        let pivot = (col..k).max_by(|&a, &b| {
            gram[a][col].abs().total_cmp(&gram[b][col].abs())
        })?;
        if gram[pivot][col].abs() < 1e-12 {
            return None;
        }
        gram.swap(col, pivot);
        let pivot_row = gram[col][col..=k].to_vec();
        for (row, r) in gram.iter_mut().enumerate() {
            if row != col {
                let f = r[col] / pivot_row[0];
                for (slot, p) in r[col..=k].iter_mut().zip(&pivot_row) {
                    *slot -= f * p;
                }
            }
        }
    }
    Some((0..k).map(|i| gram[i][k] / gram[i][i]).collect())
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn unit(v: &[f64]) -> Vec<f64> {
    let norm = dot(v, v).sqrt();
    v.iter().map(|x| x / norm).collect()
}

/// Minimum set-cover size by enumerating all subset selections; universe is
/// one-based like the reduction's wire format.
pub fn exhaustive_cover_optimum(universe: usize, subsets: &[Vec<usize>]) -> Option<usize> {
    let k = subsets.len();
    assert!(k <= 20, "enumeration oracle is for small instances");
    let full: u64 = if universe == 64 { u64::MAX } else { (1u64 << universe) - 1 };
    let masks: Vec<u64> = subsets
        .iter()
        .map(|s| s.iter().fold(0u64, |m, &e| m | 1 << (e - 1)))
        .collect();
    let mut best: Option<usize> = None;
    for pick in 0u32..(1 << k) {
        let mut covered = 0u64;
        for (i, &mask) in masks.iter().enumerate() {
            if pick & (1 << i) != 0 {
                covered |= mask;
            }
        }
        if covered == full {
            let size = pick.count_ones() as usize;
            if best.is_none_or(|b| size < b) {
                best = Some(size);
            }
        }
    }
    best
}

/// Vectors drawn from one open halfspace, so their rays form a pointed cone
/// and generic position rules out coincident directions.
pub fn halfspace_vectors(seed: u64, dim: usize, count: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal: Vec<f64> = loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let n = dot(&v, &v).sqrt();
        if n > 1e-9 {
            break v.into_iter().map(|x| x / n).collect();
        }
    };
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        if dot(&v, &normal) >= 0.1 {
            out.push(v);
        }
    }
    out
}

pub fn as_difference_vectors(vectors: &[Vec<f64>]) -> Vec<DifferenceVector> {
    vectors
        .iter()
        .enumerate()
        .map(|(i, v)| DifferenceVector {
            state: i,
            target_action: 0,
            alt_action: 1,
            vec: v.clone(),
        })
        .collect()
}

/// Lexicographically sorted unit directions for order-free comparison.
pub fn sorted_unit_dirs(dirs: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = dirs.iter().map(|d| unit(d)).collect();
    out.sort_by(|a, b| {
        for (x, y) in a.iter().zip(b) {
            match x.total_cmp(y) {
                std::cmp::Ordering::Equal => continue,
                other => return other,
            }
        }
        std::cmp::Ordering::Equal
    });
    out
}

pub fn assert_dir_sets_match(a: &[Vec<f64>], b: &[Vec<f64>], tol: f64) {
    assert_eq!(a.len(), b.len(), "direction counts differ: {} vs {}", a.len(), b.len());
    for (x, y) in sorted_unit_dirs(a).iter().zip(sorted_unit_dirs(b).iter()) {
        for (p, q) in x.iter().zip(y) {
            assert!((p - q).abs() <= tol, "directions diverge: {x:?} vs {y:?}");
        }
    }
}
