//! Set cover over extreme rays. Greedy carries the usual harmonic guarantee;
//! the exact solver is a depth-first branch and bound on the least-covered
//! element, bounded by a node budget so hard instances fail loudly with the
//! best cover found instead of hanging.

use thiserror::Error;

/// Branch-and-bound node ceiling used when the caller does not supply one.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error)]
pub enum CoverError {
    #[error("subset {subset} contains element {element} outside the universe of size {universe}")]
    ElementOutOfRange { subset: usize, element: usize, universe: usize },
    #[error("elements {0:?} are not covered by any subset")]
    Uncoverable(Vec<usize>),
    #[error("node budget {budget} exhausted; best cover found has size {}", incumbent.chosen.len())]
    BudgetExceeded { budget: u64, incumbent: CoverSolution },
}

/// Universe `{0, .., universe_size - 1}` and one candidate subset per state.
/// `label` ties a subset back to whatever the caller is covering with.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverInstance {
    universe_size: usize,
    subsets: Vec<(usize, Vec<usize>)>,
}

impl CoverInstance {
    /// `subsets` pairs a caller-side label with the elements it covers.
    /// Empty subsets are legal; they are simply never chosen.
    pub fn new(
        universe_size: usize,
        subsets: Vec<(usize, Vec<usize>)>,
    ) -> Result<Self, CoverError> {
        for (i, (_, elems)) in subsets.iter().enumerate() {
            for &e in elems {
                if e >= universe_size {
                    return Err(CoverError::ElementOutOfRange {
                        subset: i,
                        element: e,
                        universe: universe_size,
                    });
                }
            }
        }
        Ok(Self { universe_size, subsets })
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn subsets(&self) -> &[(usize, Vec<usize>)] {
        &self.subsets
    }

    pub fn label(&self, position: usize) -> usize {
        self.subsets[position].0
    }

    fn uncovered_elements(&self) -> Vec<usize> {
        let mut covered = vec![false; self.universe_size];
        for (_, elems) in &self.subsets {
            for &e in elems {
                covered[e] = true;
            }
        }
        (0..self.universe_size).filter(|&e| !covered[e]).collect()
    }
}

/// Chosen subsets as caller labels, in pick order, plus one covering label
/// per element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSolution {
    pub chosen: Vec<usize>,
    /// `covered_by[e]` is the label of the chosen subset covering element `e`.
    pub covered_by: Vec<usize>,
}

fn solution_from_positions(ci: &CoverInstance, positions: &[usize]) -> CoverSolution {
    let mut covered_by = vec![usize::MAX; ci.universe_size];
    for &p in positions {
        for &e in &ci.subsets[p].1 {
            if covered_by[e] == usize::MAX {
                covered_by[e] = ci.label(p);
            }
        }
    }
    CoverSolution {
        chosen: positions.iter().map(|&p| ci.label(p)).collect(),
        covered_by,
    }
}

fn greedy_positions(ci: &CoverInstance) -> Result<Vec<usize>, CoverError> {
    let missing = ci.uncovered_elements();
    if !missing.is_empty() {
        return Err(CoverError::Uncoverable(missing));
    }
    let mut covered = vec![false; ci.universe_size];
    let mut remaining = ci.universe_size;
    let mut picks = Vec::new();
    while remaining > 0 {
        let (best, gain) = ci
            .subsets
            .iter()
            .enumerate()
            .map(|(p, (_, elems))| (p, elems.iter().filter(|&&e| !covered[e]).count()))
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
            .expect("coverage was verified");
        debug_assert!(gain > 0);
        picks.push(best);
        for &e in &ci.subsets[best].1 {
            if !covered[e] {
                covered[e] = true;
                remaining -= 1;
            }
        }
    }
    Ok(picks)
}

/// Classic greedy: repeatedly take the subset covering the most uncovered
/// elements, first position on ties. Size is within `1 + ln(max |subset|)`
/// of optimal.
pub fn greedy_cover(ci: &CoverInstance) -> Result<CoverSolution, CoverError> {
    Ok(solution_from_positions(ci, &greedy_positions(ci)?))
}

struct Search<'a> {
    ci: &'a CoverInstance,
    /// covering[e] lists subset positions containing element e.
    covering: Vec<Vec<usize>>,
    max_subset: usize,
    nodes: u64,
    budget: u64,
    best: Vec<usize>,
}

enum SearchExit {
    Done,
    OutOfBudget,
}

impl Search<'_> {
    fn dive(
        &mut self,
        chosen: &mut Vec<usize>,
        covered: &mut [u32],
        uncovered: usize,
    ) -> SearchExit {
        self.nodes += 1;
        if self.nodes > self.budget {
            return SearchExit::OutOfBudget;
        }
        if uncovered == 0 {
            if chosen.len() < self.best.len() {
                self.best = chosen.clone();
            }
            return SearchExit::Done;
        }
        // Coverage lower bound: each pick covers at most max_subset elements.
        let bound = chosen.len() + uncovered.div_ceil(self.max_subset);
        if bound >= self.best.len() {
            return SearchExit::Done;
        }
        // Branch on the uncovered element with the fewest candidate subsets.
        let element = (0..covered.len())
            .filter(|&e| covered[e] == 0)
            .min_by_key(|&e| (self.covering[e].len(), e))
            .expect("uncovered element exists");
        for i in 0..self.covering[element].len() {
            let pick = self.covering[element][i];
            chosen.push(pick);
            let mut newly = 0;
            for &e in &self.ci.subsets[pick].1 {
                if covered[e] == 0 {
                    newly += 1;
                }
                covered[e] += 1;
            }
            let exit = self.dive(chosen, covered, uncovered - newly);
            for &e in &self.ci.subsets[pick].1 {
                covered[e] -= 1;
            }
            chosen.pop();
            if let SearchExit::OutOfBudget = exit {
                return exit;
            }
        }
        SearchExit::Done
    }
}

/// Minimum cover by branch and bound, seeded with the greedy incumbent.
/// Exhausting `budget` nodes returns [`CoverError::BudgetExceeded`] carrying
/// the best cover found so far.
pub fn exact_cover(ci: &CoverInstance, budget: u64) -> Result<CoverSolution, CoverError> {
    let incumbent = greedy_positions(ci)?;
    if ci.universe_size == 0 {
        return Ok(solution_from_positions(ci, &incumbent));
    }
    let mut covering = vec![Vec::new(); ci.universe_size];
    for (p, (_, elems)) in ci.subsets.iter().enumerate() {
        for &e in elems {
            covering[e].push(p);
        }
    }
    let max_subset = ci.subsets.iter().map(|(_, elems)| elems.len()).max().unwrap_or(1).max(1);
    let mut search = Search {
        ci,
        covering,
        max_subset,
        nodes: 0,
        budget,
        best: incumbent,
    };
    let mut covered = vec![0u32; ci.universe_size];
    let exit = search.dive(&mut Vec::new(), &mut covered, ci.universe_size);
    let solution = solution_from_positions(ci, &search.best);
    match exit {
        SearchExit::Done => Ok(solution),
        SearchExit::OutOfBudget => {
            Err(CoverError::BudgetExceeded { budget, incumbent: solution })
        }
    }
}
