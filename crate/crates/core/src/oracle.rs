//! Exhaustive reference procedures for small graphs.
//!
//! These never touch canonical codes; they exist to cross-check the
//! refinement-based machinery on graphs with at most a handful of vertices.

use crate::graph::FiniteGraph;

/// Every bijection `0..n -> 0..n` extending `partial` that maps edges to
/// edges and non-edges to non-edges between `g` and `h`, reported through
/// `visit`. Returns early when `visit` returns `false`.
fn for_each_isomorphism(
    g: &FiniteGraph,
    h: &FiniteGraph,
    map: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
    next: usize,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    let n = g.vertex_count();
    if next == n {
        let perm: Vec<usize> = map.iter().map(|m| m.expect("total map")).collect();
        return visit(&perm);
    }
    if let Some(fixed) = map[next] {
        if g.degree(next) != h.degree(fixed) || !consistent(g, h, map, next, fixed) {
            return true;
        }
        return for_each_isomorphism(g, h, map, used, next + 1, visit);
    }
    for target in 0..n {
        if used[target]
            || g.degree(next) != h.degree(target)
            || !consistent(g, h, map, next, target)
        {
            continue;
        }
        map[next] = Some(target);
        used[target] = true;
        let keep_going = for_each_isomorphism(g, h, map, used, next + 1, visit);
        map[next] = None;
        used[target] = false;
        if !keep_going {
            return false;
        }
    }
    true
}

fn consistent(
    g: &FiniteGraph,
    h: &FiniteGraph,
    map: &[Option<usize>],
    v: usize,
    image: usize,
) -> bool {
    (0..v).all(|u| match map[u] {
        Some(iu) => g.has_edge(u, v) == h.has_edge(iu, image),
        None => true,
    })
}

/// All automorphisms of `g`, as permutations `v -> perm[v]`.
pub fn automorphisms(g: &FiniteGraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    let mut map = vec![None; n];
    let mut used = vec![false; n];
    for_each_isomorphism(g, g, &mut map, &mut used, 0, &mut |p| {
        out.push(p.to_vec());
        true
    });
    out
}

/// Orbits of `Aut(g)` as a representative per vertex (smallest member).
pub fn orbit_representatives(g: &FiniteGraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut rep: Vec<usize> = (0..n).collect();
    for perm in automorphisms(g) {
        for v in 0..n {
            let image = perm[v];
            let (a, b) = (rep[v].min(rep[image]), rep[v].max(rep[image]));
            if a != b {
                for r in rep.iter_mut() {
                    if *r == b {
                        *r = a;
                    }
                }
            }
        }
    }
    rep
}

/// Whether the component of `o` in `g` and the component of `p` in `h` are
/// isomorphic by a map sending `o` to `p`.
pub fn rooted_components_isomorphic(g: &FiniteGraph, o: usize, h: &FiniteGraph, p: usize) -> bool {
    let (cg, ro) = component(g, o);
    let (ch, rp) = component(h, p);
    if cg.vertex_count() != ch.vertex_count() || cg.edge_count() != ch.edge_count() {
        return false;
    }
    // Put the roots first so the forced assignment is checked immediately.
    let cg = swap_to_front(&cg, ro);
    let ch = swap_to_front(&ch, rp);
    let n = cg.vertex_count();
    let mut map = vec![None; n];
    let mut used = vec![false; n];
    map[0] = Some(0);
    used[0] = true;
    let mut found = false;
    for_each_isomorphism(&cg, &ch, &mut map, &mut used, 0, &mut |_| {
        found = true;
        false
    });
    found
}

fn component(g: &FiniteGraph, o: usize) -> (FiniteGraph, usize) {
    let mut members: Vec<usize> = g
        .distances_from(o, None)
        .iter()
        .enumerate()
        .filter_map(|(v, d)| d.map(|_| v))
        .collect();
    members.sort_unstable();
    let root = members.binary_search(&o).expect("root in its component");
    (g.induced(&members), root)
}

fn swap_to_front(g: &FiniteGraph, v: usize) -> FiniteGraph {
    let mut perm: Vec<usize> = (0..g.vertex_count()).collect();
    perm.swap(0, v);
    g.relabel(&perm)
}
