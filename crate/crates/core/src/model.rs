//! Core data model: instances, directed arc sets, tours, and the model-size
//! accounting used by the benchmark tables.

use thiserror::Error;

use crate::tsplib::{euclidean_cost, DistanceRounding};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("filtered variable count {with_caf} exceeds unfiltered count {without}")]
    OrderViolation { without: usize, with_caf: usize },
    #[error("order is not a permutation of 0..n-1")]
    NotAPermutation,
}

/// A symmetric Euclidean TSP (sub)instance with a dense cost matrix.
#[derive(Debug, Clone)]
pub struct Instance {
    n: usize,
    coords: Vec<(f64, f64)>,
    cost: Vec<f64>,
}

impl Instance {
    pub fn from_coords(coords: Vec<(f64, f64)>) -> Self {
        Self::from_coords_with(coords, DistanceRounding::Exact)
    }

    pub fn from_coords_with(coords: Vec<(f64, f64)>, rounding: DistanceRounding) -> Self {
        let n = coords.len();
        assert!(n >= 3, "instance needs at least 3 vertices");
        let mut cost = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let d = euclidean_cost(coords[i], coords[j]);
                    cost[i * n + j] = match rounding {
                        DistanceRounding::Exact => d,
                        DistanceRounding::NearestInteger => d.round(),
                    };
                }
            }
        }
        Self { n, coords, cost }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[(f64, f64)] {
        &self.coords
    }

    #[inline]
    pub fn cost(&self, i: usize, j: usize) -> f64 {
        self.cost[i * self.n + j]
    }

    pub fn max_cost(&self) -> f64 {
        self.cost.iter().cloned().fold(0.0, f64::max)
    }
}

/// An explicit set of directed arcs (i, j), i != j, over vertices 0..n-1.
/// Backed by a dense membership matrix so queries are O(1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcSet {
    n: usize,
    present: Vec<bool>,
    len: usize,
}

impl ArcSet {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            present: vec![false; n * n],
            len: 0,
        }
    }

    /// All n(n-1) ordered pairs.
    pub fn complete(n: usize) -> Self {
        let mut set = Self::empty(n);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    set.insert(i, j);
                }
            }
        }
        set
    }

    pub fn insert(&mut self, i: usize, j: usize) -> bool {
        assert!(i != j, "self-loops are excluded");
        let slot = &mut self.present[i * self.n + j];
        if *slot {
            false
        } else {
            *slot = true;
            self.len += 1;
            true
        }
    }

    pub fn remove(&mut self, i: usize, j: usize) -> bool {
        let slot = &mut self.present[i * self.n + j];
        if *slot {
            *slot = false;
            self.len -= 1;
            true
        } else {
            false
        }
    }

    #[inline]
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.present[i * self.n + j]
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Arcs in lexicographic (i, j) order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i| (0..n).filter(move |&j| self.contains(i, j)).map(move |j| (i, j)))
    }
}

/// A Hamiltonian cycle as a vertex permutation plus its closed-tour cost.
#[derive(Debug, Clone, PartialEq)]
pub struct Tour {
    order: Vec<usize>,
    cost: f64,
}

impl Tour {
    pub fn new(instance: &Instance, order: Vec<usize>) -> Result<Self, ModelError> {
        let cost = tour_cost(instance, &order)?;
        Ok(Self { order, cost })
    }

    /// Only for tests and deserialization; callers are responsible for the
    /// cost matching the order.
    pub fn from_parts(order: Vec<usize>, cost: f64) -> Self {
        Self { order, cost }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn cost(&self) -> f64 {
        self.cost
    }
}

pub fn is_permutation(order: &[usize], n: usize) -> bool {
    if order.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in order {
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

pub fn complete_arcs(instance: &Instance) -> ArcSet {
    ArcSet::complete(instance.n())
}

/// One binary variable per arc.
pub fn count_variables(arcs: &ArcSet) -> usize {
    arcs.len()
}

/// Integer percentage reduction, rounded half away from zero.
pub fn reduction_gap_percent(without: usize, with_caf: usize) -> Result<u32, ModelError> {
    if with_caf > without {
        return Err(ModelError::OrderViolation { without, with_caf });
    }
    assert!(without > 0);
    let ratio = 100.0 * (without - with_caf) as f64 / without as f64;
    Ok(ratio.round() as u32)
}

/// Cost of the closed tour visiting `order`, including the arc back to the
/// first vertex.
pub fn tour_cost(instance: &Instance, order: &[usize]) -> Result<f64, ModelError> {
    let n = instance.n();
    if !is_permutation(order, n) {
        return Err(ModelError::NotAPermutation);
    }
    let mut total = 0.0;
    for w in 0..n {
        total += instance.cost(order[w], order[(w + 1) % n]);
    }
    Ok(total)
}

/// True iff every consecutive arc of the tour, including the closing arc,
/// is a member of `arcs`.
pub fn tour_uses_only(tour: &Tour, arcs: &ArcSet) -> bool {
    let order = tour.order();
    let n = order.len();
    (0..n).all(|w| arcs.contains(order[w], order[(w + 1) % n]))
}
