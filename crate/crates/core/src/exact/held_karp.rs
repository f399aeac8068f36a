//! Held-Karp dynamic program over (visited-set, last-vertex) states.
//!
//! Vertex 0 is the tour anchor; states cover subsets of 1..n-1. Arcs absent
//! from the arc set are non-existent transitions, so the optimum is taken
//! over tours fully contained in the set and Infeasible falls out naturally.

use std::time::{Duration, Instant};

use crate::model::{ArcSet, Instance, Tour};

use super::{Engine, SolveError, SolveResult, SolveStatus};

const MAX_DP_VERTICES: usize = 24;

pub fn held_karp(
    instance: &Instance,
    arcs: &ArcSet,
    time_limit: Duration,
) -> Result<SolveResult, SolveError> {
    let start = Instant::now();
    let n = instance.n();
    if n > MAX_DP_VERTICES {
        return Err(SolveError::TooLarge(n));
    }
    debug_assert_eq!(arcs.n(), n);

    let m = n - 1; // vertices 1..n, stored shifted by one
    let num_masks = 1usize << m;
    let mut dp = vec![f64::INFINITY; num_masks * m];
    let idx = |mask: usize, last: usize| mask * m + last;

    for last in 0..m {
        if arcs.contains(0, last + 1) {
            dp[idx(1 << last, last)] = instance.cost(0, last + 1);
        }
    }

    for mask in 1..num_masks {
        // Masks are visited in increasing numeric order, so every submask a
        // transition extends has already been finalized.
        if mask.count_ones() as usize >= m {
            continue;
        }
        if mask % 4096 == 0 && start.elapsed() > time_limit {
            return Ok(time_limit_result(start));
        }
        for last in 0..m {
            if mask & (1 << last) == 0 {
                continue;
            }
            let here = dp[idx(mask, last)];
            if !here.is_finite() {
                continue;
            }
            for next in 0..m {
                if mask & (1 << next) != 0 || !arcs.contains(last + 1, next + 1) {
                    continue;
                }
                let slot = idx(mask | (1 << next), next);
                let cand = here + instance.cost(last + 1, next + 1);
                if cand < dp[slot] {
                    dp[slot] = cand;
                }
            }
        }
    }

    let full = num_masks - 1;
    let mut best = f64::INFINITY;
    let mut best_last = usize::MAX;
    for last in 0..m {
        if !arcs.contains(last + 1, 0) {
            continue;
        }
        let cand = dp[idx(full, last)] + instance.cost(last + 1, 0);
        if cand < best {
            best = cand;
            best_last = last;
        }
    }

    if !best.is_finite() {
        return Ok(SolveResult {
            tour: None,
            status: SolveStatus::Infeasible,
            best_bound: f64::INFINITY,
            objective: None,
            elapsed: start.elapsed(),
            engine: Engine::HeldKarp,
        });
    }

    // Reconstruct backwards by re-checking which predecessor attains each
    // state value; avoids a parent table the size of dp.
    let mut tail = vec![best_last + 1];
    let mut mask = full & !(1 << best_last);
    let mut last = best_last;
    while mask != 0 {
        let target = dp[idx(mask | (1 << last), last)];
        let mut found = false;
        for prev in 0..m {
            if mask & (1 << prev) == 0 || !arcs.contains(prev + 1, last + 1) {
                continue;
            }
            let via = dp[idx(mask, prev)] + instance.cost(prev + 1, last + 1);
            if (via - target).abs() <= 1e-9 * target.max(1.0) {
                tail.push(prev + 1);
                mask &= !(1 << prev);
                last = prev;
                found = true;
                break;
            }
        }
        assert!(found, "dp reconstruction lost the optimal path");
    }
    // tail holds v_m .. v_1; the forward tour is 0, v_1, .., v_m.
    let mut order = vec![0usize];
    order.extend(tail.into_iter().rev());

    let tour = Tour::new(instance, order).expect("reconstructed order is a permutation");
    debug_assert!((tour.cost() - best).abs() <= 1e-6 * best.max(1.0));
    Ok(SolveResult {
        tour: Some(tour),
        status: SolveStatus::Optimal,
        best_bound: best,
        objective: Some(best),
        elapsed: start.elapsed(),
        engine: Engine::HeldKarp,
    })
}

fn time_limit_result(start: Instant) -> SolveResult {
    SolveResult {
        tour: None,
        status: SolveStatus::TimeLimit,
        best_bound: f64::NEG_INFINITY,
        objective: None,
        elapsed: start.elapsed(),
        engine: Engine::HeldKarp,
    }
}
