//! TSP toolkit built around cost-based arc filtering (CAF).
//!
//! The crate parses TSPLIB EUC_2D instances, reduces the candidate arc set by
//! keeping the `ceil(n/2)` cheapest neighbors per vertex, solves full and
//! reduced instances to proven optimality (Held-Karp and branch-and-bound),
//! emulates a repeated stochastic solve protocol with simulated annealing,
//! and exports the integer linear model with fully enumerated subtour
//! elimination constraints.

pub mod anneal;
pub mod bench;
pub mod caf;
pub mod exact;
pub mod export;
pub mod model;
pub mod tsplib;

pub use caf::{caf_filter, dirac_certificate, k_of, CafResult};
pub use exact::{branch_and_bound, find_subtours, held_karp, validate_tour, SolveResult};
pub use model::{complete_arcs, ArcSet, Instance, Tour};
pub use tsplib::{parse_tsplib, RawTsplibFile};
