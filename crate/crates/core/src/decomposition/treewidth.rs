//! Exact treewidth by branch and bound over elimination orderings.
//!
//! The search decides `tw(G) <= k` for increasing `k`, starting at the
//! minor-min-width lower bound and stopping below the min-fill upper bound.
//! States are sets of remaining vertices (`u128` bitsets); a set that failed
//! once is never expanded again. Simplicial vertices of small degree are
//! eliminated without branching.

use std::collections::{BTreeSet, HashSet};

use super::TreeDecomposition;
use crate::error::{Error, Result};
use crate::graph::{components, induced, Adjacency, Graph};

/// Default vertex limit for exact search.
pub const DEFAULT_GUARD: usize = 40;
/// Bitset width; no exact search beyond this many vertices.
pub const HARD_CAP: usize = 128;

/// Outcome of a width decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    /// A decomposition of at most the requested width.
    Yes(TreeDecomposition),
    /// No such decomposition exists.
    No,
    /// The node budget ran out.
    Unknown,
}

fn set_adjacency<G: Adjacency>(g: &G) -> Vec<BTreeSet<usize>> {
    (0..g.vertex_count()).map(|v| g.neighbors(v).into_iter().collect()).collect()
}

/// Width of the elimination ordering `order` (a permutation of the vertices).
pub fn ordering_width<G: Adjacency>(g: &G, order: &[usize]) -> i64 {
    decomposition_from_ordering(g, order).width()
}

/// Tree decomposition induced by an elimination ordering: the bag of `v` is `v`
/// with its later neighbours in the filled graph, and its parent is the first
/// of those to be eliminated.
pub fn decomposition_from_ordering<G: Adjacency>(g: &G, order: &[usize]) -> TreeDecomposition {
    let n = g.vertex_count();
    assert_eq!(order.len(), n, "ordering must list every vertex once");
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        assert!(pos[v] == usize::MAX, "vertex {v} repeated in ordering");
        pos[v] = i;
    }
    let mut adj = set_adjacency(g);
    let mut bags = Vec::with_capacity(n);
    let mut parent = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        let later: Vec<usize> = adj[v].iter().copied().filter(|&u| pos[u] > i).collect();
        for (a, &x) in later.iter().enumerate() {
            for &y in &later[a + 1..] {
                adj[x].insert(y);
                adj[y].insert(x);
            }
        }
        if let Some(p) = later.iter().map(|&u| pos[u]).min() {
            parent[i] = p;
        }
        let mut bag = later;
        bag.push(v);
        bags.push(bag);
    }
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    let mut last_root: Option<usize> = None;
    for (i, &p) in parent.iter().enumerate() {
        if p != usize::MAX {
            edges.push((i, p));
        } else {
            if let Some(r) = last_root {
                edges.push((r, i));
            }
            last_root = Some(i);
        }
    }
    TreeDecomposition::new(bags, edges)
}

/// Greedy min-fill elimination ordering; ties go to smaller degree, then to
/// the smaller vertex index.
pub fn min_fill_ordering<G: Adjacency>(g: &G) -> Vec<usize> {
    let n = g.vertex_count();
    let mut adj = set_adjacency(g);
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best: Option<(usize, usize, usize)> = None;
        for v in (0..n).filter(|&v| alive[v]) {
            let nb: Vec<usize> = adj[v].iter().copied().collect();
            let mut fill = 0;
            for (a, &x) in nb.iter().enumerate() {
                for &y in &nb[a + 1..] {
                    if !adj[x].contains(&y) {
                        fill += 1;
                    }
                }
            }
            let key = (fill, nb.len(), v);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
        let v = best.unwrap().2;
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        for (a, &x) in nb.iter().enumerate() {
            adj[x].remove(&v);
            for &y in &nb[a + 1..] {
                adj[x].insert(y);
                adj[y].insert(x);
            }
        }
        adj[v].clear();
        alive[v] = false;
        order.push(v);
    }
    order
}

/// Minor-min-width lower bound: repeatedly contract a minimum-degree vertex
/// into its least-degree neighbour, recording the largest minimum degree seen.
pub fn minor_min_width<G: Adjacency>(g: &G) -> i64 {
    let n = g.vertex_count();
    if n == 0 {
        return -1;
    }
    let mut adj = set_adjacency(g);
    let mut alive: BTreeSet<usize> = (0..n).collect();
    let mut lb = 0;
    while let Some(&v) = alive.iter().min_by_key(|&&v| (adj[v].len(), v)) {
        lb = lb.max(adj[v].len());
        let u = adj[v].iter().copied().min_by_key(|&u| (adj[u].len(), u));
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        for &x in &nb {
            adj[x].remove(&v);
        }
        if let Some(u) = u {
            for &x in &nb {
                if x != u {
                    adj[u].insert(x);
                    adj[x].insert(u);
                }
            }
        }
        adj[v].clear();
        alive.remove(&v);
    }
    lb as i64
}

/// For `k <= 2`, eliminating any vertex of degree at most `k` never hurts, so
/// a greedy pass decides `tw <= k` at any size.
fn greedy_low_width<G: Adjacency>(g: &G, k: usize) -> Option<Vec<usize>> {
    debug_assert!(k <= 2);
    let n = g.vertex_count();
    let mut adj = set_adjacency(g);
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    let mut stack: Vec<usize> = (0..n).rev().filter(|&v| adj[v].len() <= k).collect();
    while let Some(v) = stack.pop() {
        if !alive[v] || adj[v].len() > k {
            continue;
        }
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        for &x in &nb {
            adj[x].remove(&v);
        }
        if let [a, b] = nb[..] {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        adj[v].clear();
        alive[v] = false;
        order.push(v);
        stack.extend(nb.into_iter().filter(|&x| adj[x].len() <= k));
    }
    (order.len() == n).then_some(order)
}

#[inline]
fn bit(v: usize) -> u128 {
    1u128 << v
}

fn bits(mut s: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if s == 0 {
            None
        } else {
            let v = s.trailing_zeros() as usize;
            s &= s - 1;
            Some(v)
        }
    })
}

fn eliminate(adj: &mut [u128], alive: u128, v: usize) {
    let nb = adj[v] & alive & !bit(v);
    for u in bits(nb) {
        adj[u] |= nb & !bit(u);
        adj[u] &= !bit(v);
    }
}

struct Search {
    k: usize,
    failed: HashSet<u128>,
    nodes: u64,
    budget: Option<u64>,
    order: Vec<usize>,
}

impl Search {
    /// `Some(true)` when the remaining graph has an ordering of width `<= k`,
    /// in which case `order` holds it. `None` when the budget ran out.
    fn dfs(&mut self, adj: &[u128], alive: u128) -> Option<bool> {
        let remaining = alive.count_ones() as usize;
        if remaining <= self.k + 1 {
            self.order.extend(bits(alive));
            return Some(true);
        }
        if self.failed.contains(&alive) {
            return Some(false);
        }
        self.nodes += 1;
        if self.budget.is_some_and(|b| self.nodes > b) {
            return None;
        }
        let mut candidates: Vec<(u32, usize)> = Vec::new();
        for v in bits(alive) {
            let nb = adj[v] & alive;
            let deg = nb.count_ones();
            if deg as usize > self.k {
                continue;
            }
            if bits(nb).all(|u| (adj[u] | bit(u)) & nb == nb) {
                // simplicial: eliminating it first is always safe
                candidates.clear();
                candidates.push((deg, v));
                break;
            }
            candidates.push((deg, v));
        }
        candidates.sort_unstable();
        for (_, v) in candidates {
            let mut next = adj.to_vec();
            eliminate(&mut next, alive, v);
            self.order.push(v);
            match self.dfs(&next, alive & !bit(v)) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {
                    self.order.pop();
                }
            }
        }
        self.failed.insert(alive);
        Some(false)
    }
}

/// Decides `tw(g) <= k` for a connected graph with at most `HARD_CAP` vertices.
fn decide_connected(g: &Graph, k: usize, budget: Option<u64>) -> Decision {
    let n = g.vertex_count();
    let mut adj = vec![0u128; n];
    for (v, row) in adj.iter_mut().enumerate() {
        for &u in g.neighbor_slice(v) {
            *row |= bit(u);
        }
    }
    let alive = if n == 128 { u128::MAX } else { bit(n) - 1 };
    let mut search = Search {
        k,
        failed: HashSet::new(),
        nodes: 0,
        budget,
        order: Vec::with_capacity(n),
    };
    match search.dfs(&adj, alive) {
        Some(true) => Decision::Yes(decomposition_from_ordering(g, &search.order)),
        Some(false) => Decision::No,
        None => Decision::Unknown,
    }
}

/// Glues decompositions of the components of a graph into one decomposition.
/// `parts` pairs each component's vertex list with its decomposition.
fn glue(parts: Vec<(Vec<usize>, TreeDecomposition)>) -> TreeDecomposition {
    let mut bags = Vec::new();
    let mut edges = Vec::new();
    let mut prev_root: Option<usize> = None;
    for (map, td) in parts {
        let offset = bags.len();
        for bag in td.bags() {
            bags.push(bag.iter().map(|&v| map[v]).collect());
        }
        for &(a, b) in td.tree_edges() {
            edges.push((a + offset, b + offset));
        }
        if td.node_count() > 0 {
            if let Some(r) = prev_root {
                edges.push((r, offset));
            }
            prev_root = Some(offset);
        }
    }
    TreeDecomposition::new(bags, edges)
}

fn component_graphs<G: Adjacency>(g: &G) -> Vec<(Graph, Vec<usize>)> {
    let all = vec![true; g.vertex_count()];
    components(g, &all).into_iter().map(|c| induced(g, &c)).collect()
}

/// Decides whether `tw(g) <= k`. Widths up to 2 are decided greedily at any
/// size; larger widths use the exact search on each component, subject to
/// `HARD_CAP` and the optional node budget.
pub fn treewidth_at_most<G: Adjacency>(g: &G, k: i64, budget: Option<u64>) -> Result<Decision> {
    let n = g.vertex_count();
    if k < 0 {
        return Ok(if n == 0 { Decision::Yes(TreeDecomposition::default()) } else { Decision::No });
    }
    if k <= 2 {
        return Ok(match greedy_low_width(g, k as usize) {
            Some(order) => Decision::Yes(decomposition_from_ordering(g, &order)),
            None => Decision::No,
        });
    }
    let mut parts = Vec::new();
    for (h, map) in component_graphs(g) {
        let order = min_fill_ordering(&h);
        let upper = decomposition_from_ordering(&h, &order);
        if upper.width() <= k {
            parts.push((map, upper));
            continue;
        }
        if minor_min_width(&h) > k {
            return Ok(Decision::No);
        }
        if h.vertex_count() > HARD_CAP {
            return Err(Error::GuardExceeded {
                what: "component size",
                actual: h.vertex_count(),
                limit: HARD_CAP,
            });
        }
        match decide_connected(&h, k as usize, budget) {
            Decision::Yes(td) => parts.push((map, td)),
            other => return Ok(other),
        }
    }
    Ok(Decision::Yes(glue(parts)))
}

/// Exact treewidth with the default guard.
pub fn exact_treewidth<G: Adjacency>(g: &G) -> Result<(i64, TreeDecomposition)> {
    exact_treewidth_with(g, DEFAULT_GUARD)
}

/// Exact treewidth and an optimal decomposition. The empty graph has width
/// `-1`. Fails when `g` has more than `guard` vertices (capped at `HARD_CAP`).
pub fn exact_treewidth_with<G: Adjacency>(g: &G, guard: usize) -> Result<(i64, TreeDecomposition)> {
    let limit = guard.min(HARD_CAP);
    if g.vertex_count() > limit {
        return Err(Error::GuardExceeded {
            what: "vertex count",
            actual: g.vertex_count(),
            limit,
        });
    }
    let mut parts = Vec::new();
    for (h, map) in component_graphs(g) {
        let upper = decomposition_from_ordering(&h, &min_fill_ordering(&h));
        let mut best = upper;
        let mut k = minor_min_width(&h).max(0);
        while k < best.width() {
            let decided = if k <= 2 {
                greedy_low_width(&h, k as usize).map(|o| decomposition_from_ordering(&h, &o))
            } else {
                match decide_connected(&h, k as usize, None) {
                    Decision::Yes(td) => Some(td),
                    _ => None,
                }
            };
            if let Some(td) = decided {
                best = td;
                break;
            }
            k += 1;
        }
        parts.push((map, best));
    }
    let td = glue(parts);
    Ok((td.width(), td))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_qn;

    fn brute_force(g: &Graph) -> i64 {
        fn permute(order: &mut Vec<usize>, i: usize, g: &Graph, best: &mut i64) {
            if i == order.len() {
                *best = (*best).min(ordering_width(g, order));
                return;
            }
            for j in i..order.len() {
                order.swap(i, j);
                permute(order, i + 1, g, best);
                order.swap(i, j);
            }
        }
        let mut order: Vec<usize> = (0..g.vertex_count()).collect();
        let mut best = i64::MAX;
        permute(&mut order, 0, g, &mut best);
        if g.vertex_count() == 0 {
            -1
        } else {
            best
        }
    }

    #[test]
    fn closed_forms() {
        assert_eq!(exact_treewidth(&Graph::star(5)).unwrap().0, 1);
        assert_eq!(exact_treewidth(&Graph::path(9)).unwrap().0, 1);
        assert_eq!(exact_treewidth(&Graph::complete(4)).unwrap().0, 3);
        assert_eq!(exact_treewidth(&Graph::complete(7)).unwrap().0, 6);
        assert_eq!(exact_treewidth(&Graph::empty(3)).unwrap().0, 0);
        assert_eq!(exact_treewidth(&Graph::empty(0)).unwrap().0, -1);
    }

    #[test]
    fn cube_matches_brute_force() {
        let q = Graph::from_adjacency(&build_qn(2).unwrap());
        let (w, td) = exact_treewidth(&q).unwrap();
        assert!(td.validate(&q));
        assert_eq!(w, brute_force(&q));
    }

    #[test]
    fn cycle_and_disjoint_union() {
        let mut c = Graph::path(6);
        c.add_edge(0, 5);
        assert_eq!(exact_treewidth(&c).unwrap().0, 2);
        let mut g = Graph::empty(9);
        for (u, v) in [(0, 1), (1, 2), (2, 0), (3, 4), (5, 6), (5, 7), (5, 8), (6, 7), (6, 8), (7, 8)] {
            g.add_edge(u, v);
        }
        let (w, td) = exact_treewidth(&g).unwrap();
        assert_eq!(w, 3);
        assert!(td.validate(&g));
    }

    #[test]
    fn guard_is_enforced() {
        let g = Graph::path(50);
        assert!(matches!(exact_treewidth(&g), Err(Error::GuardExceeded { .. })));
        assert_eq!(exact_treewidth_with(&g, 60).unwrap().0, 1);
    }

    #[test]
    fn low_width_decisions_scale() {
        let mut big = Graph::path(400);
        assert!(matches!(treewidth_at_most(&big, 1, None).unwrap(), Decision::Yes(_)));
        big.add_edge(0, 399);
        assert_eq!(treewidth_at_most(&big, 1, None).unwrap(), Decision::No);
        match treewidth_at_most(&big, 2, None).unwrap() {
            Decision::Yes(td) => assert!(td.validate(&big) && td.width() <= 2),
            other => panic!("{other:?}"),
        }
        assert_eq!(treewidth_at_most(&Graph::complete(4), 2, None).unwrap(), Decision::No);
        assert_eq!(treewidth_at_most(&Graph::complete(1), 0, None).unwrap(), Decision::Yes(TreeDecomposition::trivial(1)));
    }

    #[test]
    fn bounds_sandwich_exact() {
        let q = Graph::from_adjacency(&build_qn(3).unwrap());
        let lb = minor_min_width(&q);
        let ub = ordering_width(&q, &min_fill_ordering(&q));
        let (w, td) = exact_treewidth(&q).unwrap();
        assert!(td.validate(&q));
        assert!(lb <= w && w <= ub, "{lb} <= {w} <= {ub}");
    }
}
