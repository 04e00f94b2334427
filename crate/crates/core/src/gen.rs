//! Small graph families and seeded random bounded-degree graphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::FiniteGraph;

/// `C_n` on vertices `0..n`, `n >= 3`.
pub fn cycle(n: usize) -> FiniteGraph {
    assert!(n >= 3, "cycles need at least 3 vertices");
    FiniteGraph::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle is simple")
}

/// `P_n`: the path with `n` vertices `0 - 1 - ... - (n-1)`.
pub fn path(n: usize) -> FiniteGraph {
    FiniteGraph::new(n, (1..n).map(|i| (i - 1, i))).expect("path is simple")
}

/// `K_{1,k}` with center `0`.
pub fn star(k: usize) -> FiniteGraph {
    FiniteGraph::new(k + 1, (1..=k).map(|v| (0, v))).expect("star is simple")
}

pub fn complete(n: usize) -> FiniteGraph {
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    FiniteGraph::new(n, edges).expect("complete graph is simple")
}

/// Random simple graph on `n` vertices with maximum degree at most `delta`.
///
/// Each unordered pair is considered in a random order and kept with
/// probability `density` while both endpoints have spare degree.
pub fn random_bounded<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    delta: usize,
    density: f64,
) -> FiniteGraph {
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    for i in (1..pairs.len()).rev() {
        let j = rng.random_range(0..=i);
        pairs.swap(i, j);
    }
    let mut degree = vec![0usize; n];
    let mut edges = Vec::new();
    for (u, v) in pairs {
        if degree[u] < delta && degree[v] < delta && rng.random_bool(density) {
            degree[u] += 1;
            degree[v] += 1;
            edges.push((u, v));
        }
    }
    FiniteGraph::new(n, edges).expect("generated graph is simple")
}

/// Deterministic corpus of `count` random graphs with `1..=max_vertices`
/// vertices and degree at most `delta`.
pub fn seeded_corpus(
    seed: u64,
    count: usize,
    max_vertices: usize,
    delta: usize,
) -> Vec<FiniteGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(1..=max_vertices);
            let density = rng.random_range(0.05..0.9);
            random_bounded(&mut rng, n, delta, density)
        })
        .collect()
}

/// Uniformly random permutation of `0..n`.
pub fn random_permutation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    perm
}
