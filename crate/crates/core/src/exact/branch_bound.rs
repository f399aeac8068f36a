//! Branch-and-bound with the assignment relaxation as the node bound.
//!
//! Degree constraints alone give an integral relaxation solvable in O(n^3).
//! When the relaxation answer splits into several cycles, the node branches
//! by excluding, one at a time, each arc of a smallest cycle: no Hamiltonian
//! tour can use every arc of a proper cycle, so the children cover the node.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use crate::model::{ArcSet, Instance, Tour};

use super::{find_subtours, solve_assignment, ArcSelection, Engine, SolveResult, SolveStatus};

// Forbidden-arc sentinel; any matching touching one costs at least this much.
const FORBIDDEN: f64 = 1e9;

struct Node {
    bound: f64,
    excluded: Vec<(usize, usize)>,
    succ: Vec<usize>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        // Max-heap; invert for best-first (smallest bound pops first).
        other.bound.partial_cmp(&self.bound).unwrap()
    }
}

pub fn branch_and_bound(instance: &Instance, arcs: &ArcSet, time_limit: Duration) -> SolveResult {
    let start = Instant::now();
    let n = instance.n();
    debug_assert_eq!(arcs.n(), n);

    let base: Vec<f64> = (0..n * n)
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            if i != j && arcs.contains(i, j) {
                instance.cost(i, j)
            } else {
                FORBIDDEN
            }
        })
        .collect();

    let relax = |excluded: &[(usize, usize)]| -> Option<(f64, Vec<usize>)> {
        let mut cost = base.clone();
        for &(i, j) in excluded {
            cost[i * n + j] = FORBIDDEN;
        }
        let (succ, total) = solve_assignment(&cost, n);
        (total < FORBIDDEN / 2.0).then_some((total, succ))
    };

    let mut heap = BinaryHeap::new();
    match relax(&[]) {
        Some((bound, succ)) => heap.push(Node {
            bound,
            excluded: Vec::new(),
            succ,
        }),
        None => {
            return SolveResult {
                tour: None,
                status: SolveStatus::Infeasible,
                best_bound: f64::INFINITY,
                objective: None,
                elapsed: start.elapsed(),
                engine: Engine::BranchBound,
            }
        }
    }

    let mut incumbent: Option<Tour> = None;
    let mut best_bound = heap.peek().map(|nd| nd.bound).unwrap();

    while let Some(node) = heap.pop() {
        // Best-first order makes popped bounds the global lower bound.
        best_bound = best_bound.max(node.bound);

        if let Some(inc) = &incumbent {
            if node.bound >= inc.cost() - 1e-9 {
                break;
            }
        }
        if start.elapsed() > time_limit {
            return SolveResult {
                tour: incumbent.clone(),
                status: SolveStatus::TimeLimit,
                best_bound,
                objective: incumbent.map(|t| t.cost()),
                elapsed: start.elapsed(),
                engine: Engine::BranchBound,
            };
        }

        let cycles = find_subtours(&ArcSelection::from_successors(&node.succ), n)
            .expect("assignment solutions are degree-feasible");
        if cycles.len() == 1 {
            let tour = Tour::new(instance, cycles.into_iter().next().unwrap())
                .expect("cycle covering all vertices is a permutation");
            if incumbent.as_ref().map_or(true, |inc| tour.cost() < inc.cost()) {
                incumbent = Some(tour);
            }
            continue;
        }

        let smallest = cycles.iter().min_by_key(|c| c.len()).unwrap();
        let mut cycle_arcs: Vec<(usize, usize)> = smallest
            .iter()
            .enumerate()
            .map(|(w, &v)| (v, smallest[(w + 1) % smallest.len()]))
            .collect();
        cycle_arcs.sort_by(|a, b| {
            instance
                .cost(a.0, a.1)
                .partial_cmp(&instance.cost(b.0, b.1))
                .unwrap()
        });

        for arc in cycle_arcs {
            let mut excluded = node.excluded.clone();
            excluded.push(arc);
            if let Some((bound, succ)) = relax(&excluded) {
                let worth_exploring = incumbent
                    .as_ref()
                    .map_or(true, |inc| bound < inc.cost() - 1e-9);
                if worth_exploring {
                    heap.push(Node {
                        bound,
                        excluded,
                        succ,
                    });
                }
            }
        }
    }

    match incumbent {
        Some(tour) => {
            let objective = tour.cost();
            SolveResult {
                tour: Some(tour),
                status: SolveStatus::Optimal,
                best_bound: objective,
                objective: Some(objective),
                elapsed: start.elapsed(),
                engine: Engine::BranchBound,
            }
        }
        None => SolveResult {
            tour: None,
            status: SolveStatus::Infeasible,
            best_bound: f64::INFINITY,
            objective: None,
            elapsed: start.elapsed(),
            engine: Engine::BranchBound,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caf::caf_filter;
    use crate::exact::{held_karp, validate_tour};
    use crate::model::complete_arcs;
    use crate::tsplib::parse_tsplib_str;

    const BERLIN52: &str = include_str!("../../data/berlin52.tsp");
    const LIMIT: Duration = Duration::from_secs(300);

    #[test]
    fn agrees_with_held_karp_on_berlin52_prefixes() {
        let file = parse_tsplib_str(BERLIN52).unwrap();
        for n in 5..=10 {
            let inst = file.take_prefix(n).unwrap();
            for arcs in [complete_arcs(&inst), caf_filter(&inst).arcs] {
                let hk = held_karp(&inst, &arcs, LIMIT).unwrap();
                let bb = branch_and_bound(&inst, &arcs, LIMIT);
                assert_eq!(bb.status, SolveStatus::Optimal, "n={n}");
                let (a, b) = (hk.objective.unwrap(), bb.objective.unwrap());
                assert!((a - b).abs() <= 1e-6 * a, "n={n}: {a} vs {b}");
                assert!(validate_tour(&inst, &arcs, bb.tour.as_ref().unwrap()));
            }
        }
    }

    #[test]
    fn unique_cycle_arc_set_returns_that_cycle() {
        let file = parse_tsplib_str(BERLIN52).unwrap();
        let inst = file.take_prefix(8).unwrap();
        let order = [0usize, 3, 1, 6, 2, 7, 4, 5];
        let mut arcs = ArcSet::empty(8);
        for w in 0..8 {
            arcs.insert(order[w], order[(w + 1) % 8]);
        }
        let result = branch_and_bound(&inst, &arcs, LIMIT);
        assert_eq!(result.status, SolveStatus::Optimal);
        let tour = result.tour.unwrap();
        assert!(validate_tour(&inst, &arcs, &tour));
        let expected = crate::model::tour_cost(&inst, &order).unwrap();
        assert!((tour.cost() - expected).abs() < 1e-9);
    }

    #[test]
    fn infeasible_arc_set_is_detected() {
        let inst = Instance::from_coords(vec![(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)]);
        let mut arcs = complete_arcs(&inst);
        for j in 0..4 {
            if j != 3 {
                arcs.remove(3, j);
            }
        }
        let result = branch_and_bound(&inst, &arcs, LIMIT);
        assert_eq!(result.status, SolveStatus::Infeasible);
    }

    #[test]
    fn optimal_bound_matches_objective() {
        let file = parse_tsplib_str(BERLIN52).unwrap();
        let inst = file.take_prefix(9).unwrap();
        let result = branch_and_bound(&inst, &complete_arcs(&inst), LIMIT);
        assert_eq!(result.status, SolveStatus::Optimal);
        assert!((result.best_bound - result.objective.unwrap()).abs() < 1e-9);
    }
}
