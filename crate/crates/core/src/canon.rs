//! Canonical vertex orderings by individualization and refinement.
//!
//! The search starts from an ordered partition (BFS layers, with the roots in
//! singleton cells at the front), refines it to an equitable partition, and
//! then branches on the members of the first non-singleton cell. Every leaf
//! is a discrete partition, i.e. a vertex ordering that keeps the roots first
//! and respects the layer order; the canonical ordering is the leaf with the
//! smallest adjacency serialization. Two leaves with equal serializations
//! give an automorphism, and automorphisms fixing the current branch prefix
//! prune siblings lying in the same orbit.

use crate::graph::FiniteGraph;

pub(crate) struct CanonicalForm {
    /// Packed lower-triangle adjacency bits in canonical order.
    pub body: Vec<u8>,
}

pub(crate) fn body_len(n: usize) -> usize {
    let bits = n * n.saturating_sub(1) / 2;
    bits.div_ceil(8)
}

/// Lower triangle, row by row: bit for `(i, j)` with `j < i`, MSB first.
pub(crate) fn serialize(graph: &FiniteGraph, order: &[usize]) -> Vec<u8> {
    let n = order.len();
    let mut position = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut body = vec![0u8; body_len(n)];
    for (i, &v) in order.iter().enumerate() {
        let row = i * i.saturating_sub(1) / 2;
        for &w in graph.neighbors(v) {
            let j = position[w];
            if j < i {
                let bit = row + j;
                body[bit / 8] |= 0x80 >> (bit % 8);
            }
        }
    }
    body
}

/// Canonical ordering of `graph` where `roots` are pinned to the first
/// positions and the remaining vertices are grouped by distance from
/// `roots[0]`.
///
/// Every vertex must be reachable from `roots[0]`.
pub(crate) fn canonical_form(graph: &FiniteGraph, roots: &[usize]) -> CanonicalForm {
    let n = graph.vertex_count();
    let dist = graph.distances_from(roots[0], None);
    let keys: Vec<(usize, usize)> = (0..n)
        .map(|v| match roots.iter().position(|&r| r == v) {
            Some(p) => (0, p),
            None => (1, dist[v].expect("vertex unreachable from root")),
        })
        .collect();
    let initial = ranks(&keys);
    let colors = refine(graph, initial);
    let mut search = Search {
        graph,
        best: None,
        automorphisms: Vec::new(),
    };
    let mut prefix = Vec::new();
    search.visit(colors, &mut prefix);
    let (body, _) = search.best.expect("search visits at least one leaf");
    CanonicalForm { body }
}

fn ranks<T: Ord + Clone>(keys: &[T]) -> Vec<usize> {
    let mut distinct: Vec<T> = keys.to_vec();
    distinct.sort();
    distinct.dedup();
    keys.iter()
        .map(|k| distinct.binary_search(k).expect("key present"))
        .collect()
}

/// Colour refinement. Cells keep their relative order; a cell splits by the
/// sorted multiset of neighbour colours.
fn refine(graph: &FiniteGraph, mut colors: Vec<usize>) -> Vec<usize> {
    let n = colors.len();
    let mut cells = colors.iter().copied().max().map_or(0, |m| m + 1);
    loop {
        if cells == n {
            return colors;
        }
        let signatures: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nbrs: Vec<usize> = graph.neighbors(v).iter().map(|&w| colors[w]).collect();
                nbrs.sort_unstable();
                (colors[v], nbrs)
            })
            .collect();
        let next = ranks(&signatures);
        let next_cells = next.iter().copied().max().map_or(0, |m| m + 1);
        colors = next;
        if next_cells == cells {
            return colors;
        }
        cells = next_cells;
    }
}

fn individualize(colors: &[usize], v: usize) -> Vec<usize> {
    let c = colors[v];
    colors
        .iter()
        .enumerate()
        .map(|(u, &cu)| {
            if cu > c || (cu == c && u != v) {
                cu + 1
            } else {
                cu
            }
        })
        .collect()
}

struct Search<'a> {
    graph: &'a FiniteGraph,
    best: Option<(Vec<u8>, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn visit(&mut self, colors: Vec<usize>, prefix: &mut Vec<usize>) {
        let n = colors.len();
        let mut sizes = vec![0usize; n];
        for &c in &colors {
            sizes[c] += 1;
        }
        let Some(target) = sizes.iter().position(|&s| s > 1) else {
            self.leaf(&colors);
            return;
        };
        let members: Vec<usize> = (0..n).filter(|&v| colors[v] == target).collect();
        let mut explored: Vec<usize> = Vec::new();
        for v in members {
            if !explored.is_empty() {
                let orbits = self.orbits_fixing(prefix, n);
                let rep = orbits.find(v);
                if explored.iter().any(|&u| orbits.find(u) == rep) {
                    continue;
                }
            }
            explored.push(v);
            let child = refine(self.graph, individualize(&colors, v));
            prefix.push(v);
            self.visit(child, prefix);
            prefix.pop();
        }
    }

    fn leaf(&mut self, colors: &[usize]) {
        let mut order = vec![0usize; colors.len()];
        for (v, &c) in colors.iter().enumerate() {
            order[c] = v;
        }
        let body = serialize(self.graph, &order);
        match &self.best {
            None => self.best = Some((body, order)),
            Some((best_body, best_order)) => match body.cmp(best_body) {
                std::cmp::Ordering::Less => self.best = Some((body, order)),
                std::cmp::Ordering::Equal => {
                    let mut gamma = vec![0usize; order.len()];
                    for (i, &v) in best_order.iter().enumerate() {
                        gamma[v] = order[i];
                    }
                    self.automorphisms.push(gamma);
                }
                std::cmp::Ordering::Greater => {}
            },
        }
    }

    /// Orbits of the group generated by the known automorphisms that fix
    /// every vertex of `prefix`.
    fn orbits_fixing(&self, prefix: &[usize], n: usize) -> UnionFind {
        let mut uf = UnionFind::new(n);
        for gamma in &self.automorphisms {
            if prefix.iter().all(|&p| gamma[p] == p) {
                for (v, &image) in gamma.iter().enumerate() {
                    uf.union(v, image);
                }
            }
        }
        uf
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&self, mut v: usize) -> usize {
        while self.parent[v] != v {
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
