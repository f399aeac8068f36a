//! Cost-based arc filtering: keep, per vertex, the `ceil(n/2)` cheapest
//! neighbors and add both arc directions. With that k the undirected reduced
//! graph has minimum degree >= n/2, so Dirac's condition guarantees it stays
//! Hamiltonian.

use crate::model::{ArcSet, Instance};

/// The reduced arc set plus the raw per-vertex selections that produced it.
#[derive(Debug, Clone)]
pub struct CafResult {
    pub arcs: ArcSet,
    pub k: usize,
    pub per_vertex_selected: Vec<Vec<usize>>,
}

pub fn k_of(n: usize) -> usize {
    assert!(n >= 3);
    n.div_ceil(2)
}

pub fn caf_filter(instance: &Instance) -> CafResult {
    caf_filter_with_k(instance, k_of(instance.n()))
}

/// Filtering with an arbitrary neighbor count. Any k below `ceil(n/2)` voids
/// the Hamiltonicity guarantee; callers opting in should check
/// `dirac_certificate` on the result.
pub fn caf_filter_with_k(instance: &Instance, k: usize) -> CafResult {
    let n = instance.n();
    assert!(k >= 1 && k <= n - 1, "k must be in 1..=n-1");
    let mut arcs = ArcSet::empty(n);
    let mut per_vertex_selected = Vec::with_capacity(n);
    for i in 0..n {
        let mut neighbors: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        // Ties in cost break toward the lower vertex index.
        neighbors.sort_by(|&a, &b| {
            instance
                .cost(i, a)
                .partial_cmp(&instance.cost(i, b))
                .unwrap()
                .then(a.cmp(&b))
        });
        neighbors.truncate(k);
        for &j in &neighbors {
            arcs.insert(i, j);
            arcs.insert(j, i);
        }
        per_vertex_selected.push(neighbors);
    }
    CafResult {
        arcs,
        k,
        per_vertex_selected,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiracCertificate {
    pub min_degree: usize,
    pub hamiltonicity_guaranteed: bool,
}

/// Minimum degree of the undirected graph obtained by collapsing symmetric
/// arc pairs, and whether it meets Dirac's n/2 bound. The bound is sufficient
/// for Hamiltonicity, not necessary.
pub fn dirac_certificate(arcs: &ArcSet) -> DiracCertificate {
    let n = arcs.n();
    let min_degree = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i && (arcs.contains(i, j) || arcs.contains(j, i)))
                .count()
        })
        .min()
        .unwrap_or(0);
    DiracCertificate {
        min_degree,
        hamiltonicity_guaranteed: 2 * min_degree >= n,
    }
}
