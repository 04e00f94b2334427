//! Finite simple graphs and the global degree bound.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Global settings shared by every computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    delta: usize,
    max_ball_vertices: usize,
}

impl Config {
    pub const DEFAULT_DELTA: usize = 8;
    /// Hard cap on the number of vertices a single explored ball may hold.
    pub const DEFAULT_MAX_BALL_VERTICES: usize = 1 << 20;

    pub fn new(delta: usize) -> Result<Self> {
        if delta == 0 {
            return Err(Error::InvalidDelta);
        }
        Ok(Self {
            delta,
            max_ball_vertices: Self::DEFAULT_MAX_BALL_VERTICES,
        })
    }

    pub fn with_max_ball_vertices(mut self, cap: usize) -> Self {
        self.max_ball_vertices = cap.max(1);
        self
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn max_ball_vertices(&self) -> usize {
        self.max_ball_vertices
    }

    /// Largest possible ball of radius `r` in a graph of maximum degree
    /// `delta`, clamped to the configured cap.
    pub fn ball_budget(&self, r: usize) -> usize {
        let cap = self.max_ball_vertices;
        let mut total: usize = 1;
        let mut layer: usize = 1;
        for depth in 0..r {
            let branching = if depth == 0 {
                self.delta
            } else {
                self.delta - 1
            };
            layer = layer.saturating_mul(branching);
            if layer == 0 {
                break;
            }
            total = total.saturating_add(layer);
            if total >= cap {
                return cap;
            }
        }
        total.min(cap)
    }

    pub fn check_graph(&self, g: &FiniteGraph) -> Result<()> {
        for v in 0..g.vertex_count() {
            let degree = g.degree(v);
            if degree > self.delta {
                return Err(Error::DegreeExceeded {
                    vertex: v,
                    degree,
                    delta: self.delta,
                });
            }
        }
        Ok(())
    }
}

impl Default for Config {
    fn default() -> Self {
        Self {
            delta: Self::DEFAULT_DELTA,
            max_ball_vertices: Self::DEFAULT_MAX_BALL_VERTICES,
        }
    }
}

/// An undirected simple graph on vertices `0..n`.
///
/// Neighbor lists are kept sorted, so two graphs built from the same edge
/// set compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteGraph {
    adj: Vec<Vec<usize>>,
}

impl FiniteGraph {
    pub fn new<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); vertex_count];
        for (u, v) in edges {
            if u >= vertex_count {
                return Err(Error::UnknownVertex(u));
            }
            if v >= vertex_count {
                return Err(Error::UnknownVertex(v));
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, nbrs) in adj.iter_mut().enumerate() {
            nbrs.sort_unstable();
            if let Some(w) = nbrs.windows(2).find(|w| w[0] == w[1]) {
                let v = w[0];
                return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
            }
        }
        Ok(Self { adj })
    }

    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.adj.len() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    /// BFS distances from `source`, not exploring past `limit`.
    pub fn distances_from(&self, source: usize, limit: Option<usize>) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.adj.len()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap_or(0);
            if limit.is_some_and(|l| d >= l) {
                continue;
            }
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Vertices within distance `limit` of `source`, in BFS order.
    pub(crate) fn bfs_order(&self, source: usize, limit: usize) -> Vec<usize> {
        let mut seen = vec![false; self.adj.len()];
        let mut order = vec![source];
        let mut depth = vec![0usize];
        seen[source] = true;
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            let d = depth[head];
            head += 1;
            if d >= limit {
                continue;
            }
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                    depth.push(d + 1);
                }
            }
        }
        order
    }

    pub fn component_size(&self, v: usize) -> usize {
        self.bfs_order(v, usize::MAX).len()
    }

    pub fn is_connected(&self) -> bool {
        self.adj.is_empty() || self.component_size(0) == self.adj.len()
    }

    /// Subgraph induced by `vertices`; vertex `vertices[i]` becomes `i`.
    pub fn induced(&self, vertices: &[usize]) -> Self {
        let mut index = vec![usize::MAX; self.adj.len()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let adj = vertices
            .iter()
            .map(|&v| {
                let mut nbrs: Vec<usize> = self.adj[v]
                    .iter()
                    .filter_map(|&w| (index[w] != usize::MAX).then_some(index[w]))
                    .collect();
                nbrs.sort_unstable();
                nbrs
            })
            .collect();
        Self { adj }
    }

    /// Relabel so that vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.adj.len(), "permutation length");
        let mut adj = vec![Vec::new(); self.adj.len()];
        for (v, nbrs) in self.adj.iter().enumerate() {
            let mut mapped: Vec<usize> = nbrs.iter().map(|&w| perm[w]).collect();
            mapped.sort_unstable();
            adj[perm[v]] = mapped;
        }
        Self { adj }
    }

    pub fn disjoint_union(&self, other: &Self) -> Self {
        let offset = self.adj.len();
        let mut adj = self.adj.clone();
        adj.extend(
            other
                .adj
                .iter()
                .map(|nbrs| nbrs.iter().map(|&w| w + offset).collect()),
        );
        Self { adj }
    }
}
