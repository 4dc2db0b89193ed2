//! Open rays, deduplication, and extreme-ray extraction.
//!
//! The version space carved out by a demonstration set is the open dual cone
//! of its difference vectors, so only the set of open rays matters: positive
//! multiples collapse, antipodal directions do not. Extreme rays are found by
//! a single elimination pass. For a ray `x` against survivors `X`, solve
//!
//! ```text
//! minimize <w, x>  subject to  <w, x'> >= 1 for x' in X \ {x}
//! ```
//!
//! Unbounded means no conic combination of the others reaches `x` (keep).
//! A strictly positive optimum means `x` is redundant (eliminate). Any other
//! status contradicts the dichotomy that holds for deduplicated generator
//! sets of a pointed cone, and is surfaced as an error rather than guessed.

use std::collections::HashMap;

use thiserror::Error;

use crate::lp::{self, LinearProgram, LpError, LpOutcome, TAU_POS};
use crate::model::DifferenceVector;

/// Two unit directions closer than this (max coordinate gap) are one ray.
pub const EPS_RAY: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum ConeError {
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("extreme-ray test returned an impossible status: {0}")]
    SpuriousStatus(String),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// Canonical representative of an open ray. Integer input is reduced by the
/// gcd of its entries with signs kept, so the representative is exact and
/// antipodal rays stay distinct. Anything else is normalized to unit length.
#[derive(Debug, Clone, PartialEq)]
pub enum RayDirection {
    Unit(Vec<f64>),
    Integer(Vec<i64>),
}

impl RayDirection {
    pub fn as_f64(&self) -> Vec<f64> {
        match self {
            RayDirection::Unit(v) => v.clone(),
            RayDirection::Integer(v) => v.iter().map(|&x| x as f64).collect(),
        }
    }

    /// Unit-length copy regardless of representation.
    pub fn unit(&self) -> Vec<f64> {
        let v = self.as_f64();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.into_iter().map(|x| x / norm).collect()
    }

    pub fn dim(&self) -> usize {
        match self {
            RayDirection::Unit(v) => v.len(),
            RayDirection::Integer(v) => v.len(),
        }
    }
}

/// Which demonstration constraint produced a vector on this ray.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RayMember {
    pub state: usize,
    pub alt_action: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ray {
    pub direction: RayDirection,
    /// Provenance records, in first-seen order.
    pub members: Vec<RayMember>,
}

/// Rays in first-occurrence order of their earliest member.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RaySet {
    pub rays: Vec<Ray>,
}

impl RaySet {
    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn directions(&self) -> Vec<Vec<f64>> {
        self.rays.iter().map(|r| r.direction.as_f64()).collect()
    }

    pub fn unit_directions(&self) -> Vec<Vec<f64>> {
        self.rays.iter().map(|r| r.direction.unit()).collect()
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Exact integer test: every coordinate of every vector is an integer small
/// enough for i64 arithmetic.
fn all_integral(vectors: &[DifferenceVector]) -> bool {
    const LIMIT: f64 = 9e15;
    vectors.iter().all(|dv| {
        dv.vec
            .iter()
            .all(|&x| x.is_finite() && x.fract() == 0.0 && x.abs() < LIMIT)
    })
}

/// Canonical direction of a nonzero vector. `integral` selects the exact
/// gcd-reduced integer form; otherwise the unit form.
pub fn canonical_direction(vec: &[f64], integral: bool) -> Result<RayDirection, ConeError> {
    if vec.iter().all(|&x| x == 0.0) {
        return Err(ConeError::ZeroVector);
    }
    if integral {
        let ints: Vec<i64> = vec.iter().map(|&x| x as i64).collect();
        let g = ints.iter().fold(0, |acc, &x| gcd(acc, x));
        Ok(RayDirection::Integer(ints.iter().map(|&x| x / g).collect()))
    } else {
        let norm = vec.iter().map(|x| x * x).sum::<f64>().sqrt();
        Ok(RayDirection::Unit(vec.iter().map(|&x| x / norm).collect()))
    }
}

/// Groups difference vectors by open ray, preserving first-occurrence order
/// and provenance. Positive multiples merge; antipodal vectors do not.
pub fn dedupe_rays(vectors: &[DifferenceVector]) -> Result<RaySet, ConeError> {
    let integral = all_integral(vectors);
    let mut rays: Vec<Ray> = Vec::new();
    let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
    for dv in vectors {
        let member = RayMember { state: dv.state, alt_action: dv.alt_action };
        let dir = canonical_direction(&dv.vec, integral)?;
        let slot = match &dir {
            RayDirection::Integer(key) => index.get(key).copied(),
            RayDirection::Unit(u) => rays.iter().position(|r| match &r.direction {
                RayDirection::Unit(v) => {
                    u.iter().zip(v).all(|(a, b)| (a - b).abs() <= EPS_RAY)
                }
                RayDirection::Integer(_) => false,
            }),
        };
        match slot {
            Some(i) => rays[i].members.push(member),
            None => {
                if let RayDirection::Integer(key) = &dir {
                    index.insert(key.clone(), rays.len());
                }
                rays.push(Ray { direction: dir, members: vec![member] });
            }
        }
    }
    Ok(RaySet { rays })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremeTest {
    Keep,
    Eliminate,
}

/// Keep-or-eliminate dichotomy for one deduplicated ray against the others.
/// With `others` empty the ray trivially spans its own cone.
pub fn extreme_ray_test(x: &[f64], others: &[Vec<f64>]) -> Result<ExtremeTest, ConeError> {
    if others.is_empty() {
        return Ok(ExtremeTest::Keep);
    }
    let program = LinearProgram {
        objective: x.to_vec(),
        constraints: others.iter().map(|o| (o.clone(), 1.0)).collect(),
    };
    match lp::solve(&program)? {
        LpOutcome::Unbounded { .. } => Ok(ExtremeTest::Keep),
        LpOutcome::Optimal { value, .. } if value > TAU_POS => Ok(ExtremeTest::Eliminate),
        LpOutcome::Optimal { value, .. } => Err(ConeError::SpuriousStatus(format!(
            "optimal value {value:.3e} is not strictly positive; \
             input rays were not deduplicated or the cone is not pointed"
        ))),
        LpOutcome::Infeasible => Err(ConeError::SpuriousStatus(
            "elimination program infeasible; the dual cone is empty".into(),
        )),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EliminationStats {
    pub lp_calls: usize,
}

/// One pass over the rays in stored order, testing each against the current
/// survivors minus itself and dropping it on ELIMINATE. What remains are
/// exactly the extreme rays, one representative per ray.
pub fn minimal_extreme(rays: &RaySet) -> Result<RaySet, ConeError> {
    Ok(minimal_extreme_with_stats(rays)?.0)
}

pub fn minimal_extreme_with_stats(
    rays: &RaySet,
) -> Result<(RaySet, EliminationStats), ConeError> {
    let dirs = rays.directions();
    let mut alive = vec![true; dirs.len()];
    let mut stats = EliminationStats::default();
    for i in 0..dirs.len() {
        let others: Vec<Vec<f64>> = (0..dirs.len())
            .filter(|&j| j != i && alive[j])
            .map(|j| dirs[j].clone())
            .collect();
        if others.is_empty() {
            continue;
        }
        stats.lp_calls += 1;
        if extreme_ray_test(&dirs[i], &others)? == ExtremeTest::Eliminate {
            alive[i] = false;
        }
    }
    let survivors = RaySet {
        rays: rays
            .rays
            .iter()
            .zip(&alive)
            .filter(|(_, &keep)| keep)
            .map(|(r, _)| r.clone())
            .collect(),
    };
    Ok((survivors, stats))
}

/// Membership of `x` in the closed conic hull of `generators`, decided by a
/// feasibility program over the combination weights.
pub fn in_primal_cone(x: &[f64], generators: &[Vec<f64>]) -> Result<bool, ConeError> {
    Ok(conic_combination(x, generators)?.is_some())
}

/// Nonnegative weights expressing `x` over `generators`, if any. The
/// equality is enforced as paired inequalities at tolerance [`EPS_FEAS`].
pub fn conic_combination(
    x: &[f64],
    generators: &[Vec<f64>],
) -> Result<Option<Vec<f64>>, ConeError> {
    if x.iter().all(|&v| v == 0.0) {
        return Err(ConeError::ZeroVector);
    }
    if generators.is_empty() {
        return Ok(None);
    }
    let k = generators.len();
    let d = x.len();
    let mut constraints = Vec::with_capacity(2 * d + k);
    for coord in 0..d {
        let row: Vec<f64> = generators.iter().map(|g| g[coord]).collect();
        constraints.push((row.clone(), x[coord]));
        constraints.push((row.into_iter().map(|v| -v).collect(), -x[coord]));
    }
    for i in 0..k {
        let mut row = vec![0.0; k];
        row[i] = 1.0;
        constraints.push((row, 0.0));
    }
    let program = LinearProgram { objective: vec![0.0; k], constraints };
    match lp::solve(&program)? {
        LpOutcome::Optimal { w, .. } => Ok(Some(w)),
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded { .. } => Err(ConeError::SpuriousStatus(
            "membership feasibility program cannot be unbounded".into(),
        )),
    }
}
