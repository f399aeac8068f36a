//! Exact TSP engines over an arbitrary directed arc set: a Held-Karp
//! dynamic program (the oracle) and a branch-and-bound driven by the
//! assignment relaxation with subtour branching.

mod assignment;
mod branch_bound;
mod held_karp;

pub use assignment::solve_assignment;
pub use branch_bound::branch_and_bound;
pub use held_karp::held_karp;

use std::collections::HashSet;
use std::time::Duration;

use thiserror::Error;

use crate::model::{is_permutation, ArcSet, Instance, Tour};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("instance with {0} vertices is too large for the dynamic program (limit 24)")]
    TooLarge(usize),
    #[error("vertex {0} does not have exactly one successor and one predecessor")]
    DegreeViolation(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    TimeLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    HeldKarp,
    BranchBound,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub tour: Option<Tour>,
    pub status: SolveStatus,
    /// Proven lower bound. Equals the objective on Optimal; negative
    /// infinity when a time limit struck before any bound was proven.
    pub best_bound: f64,
    pub objective: Option<f64>,
    pub elapsed: Duration,
    pub engine: Engine,
}

/// The support {(i,j) : x_ij = 1} of a 0/1 arc selection.
#[derive(Debug, Clone, Default)]
pub struct ArcSelection {
    pub chosen: HashSet<(usize, usize)>,
}

impl ArcSelection {
    pub fn from_arcs<I: IntoIterator<Item = (usize, usize)>>(arcs: I) -> Self {
        Self {
            chosen: arcs.into_iter().collect(),
        }
    }

    pub fn from_successors(succ: &[usize]) -> Self {
        Self::from_arcs(succ.iter().enumerate().map(|(i, &j)| (i, j)))
    }
}

/// Decomposes a degree-feasible selection into the directed cycles induced by
/// its successor function. A single cycle of length n means the selection is
/// a Hamiltonian tour.
pub fn find_subtours(selection: &ArcSelection, n: usize) -> Result<Vec<Vec<usize>>, SolveError> {
    let mut succ = vec![usize::MAX; n];
    let mut pred_count = vec![0usize; n];
    for &(i, j) in &selection.chosen {
        if i >= n || j >= n {
            return Err(SolveError::DegreeViolation(i.min(j)));
        }
        if succ[i] != usize::MAX {
            return Err(SolveError::DegreeViolation(i));
        }
        succ[i] = j;
        pred_count[j] += 1;
    }
    for v in 0..n {
        if succ[v] == usize::MAX || pred_count[v] != 1 {
            return Err(SolveError::DegreeViolation(v));
        }
    }

    let mut visited = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut v = start;
        while !visited[v] {
            visited[v] = true;
            cycle.push(v);
            v = succ[v];
        }
        cycles.push(cycle);
    }
    Ok(cycles)
}

/// Post-hoc audit: permutation, arc membership (closing arc included), and
/// stated cost versus recomputation within 1e-6.
pub fn validate_tour(instance: &Instance, arcs: &ArcSet, tour: &Tour) -> bool {
    let n = instance.n();
    let order = tour.order();
    if !is_permutation(order, n) {
        return false;
    }
    let mut total = 0.0;
    for w in 0..n {
        let (i, j) = (order[w], order[(w + 1) % n]);
        if !arcs.contains(i, j) {
            return false;
        }
        total += instance.cost(i, j);
    }
    (total - tour.cost()).abs() <= 1e-6 * total.max(1.0)
}
