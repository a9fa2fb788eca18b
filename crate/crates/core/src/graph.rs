//! Simple undirected graphs and the reachability helpers shared by every module.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

/// Read access to a simple undirected graph on vertices `0..vertex_count()`.
pub trait Adjacency {
    fn vertex_count(&self) -> usize;

    fn for_each_neighbor<F: FnMut(usize)>(&self, v: usize, f: F);

    fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        self.for_each_neighbor(v, |u| out.push(u));
        out
    }

    fn degree(&self, v: usize) -> usize {
        let mut d = 0;
        self.for_each_neighbor(v, |_| d += 1);
        d
    }

    fn adjacent(&self, u: usize, v: usize) -> bool {
        let mut found = false;
        self.for_each_neighbor(u, |w| found |= w == v);
        found
    }

    /// Every edge once, as `(u, v)` with `u < v`, sorted.
    fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.vertex_count() {
            self.for_each_neighbor(u, |v| {
                if u < v {
                    out.push((u, v));
                }
            });
        }
        out.sort_unstable();
        out
    }

    fn edge_count(&self) -> usize {
        (0..self.vertex_count()).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    fn max_degree(&self) -> usize {
        (0..self.vertex_count())
            .map(|v| self.degree(v))
            .max()
            .unwrap_or(0)
    }
}

/// Adjacency-list graph. Neighbour lists are sorted and duplicate free.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list; loops and repeated edges are dropped.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range for {n} vertices");
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Graph { adj }
    }

    pub fn from_adjacency<G: Adjacency>(g: &G) -> Self {
        let adj = (0..g.vertex_count())
            .map(|v| {
                let mut l = g.neighbors(v);
                l.sort_unstable();
                l
            })
            .collect();
        Graph { adj }
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Graph::from_edges(n, &edges)
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::from_edges(n, &edges)
    }

    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
        Graph::from_edges(leaves + 1, &edges)
    }

    pub fn neighbor_slice(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u == v {
            return;
        }
        if let Err(pos) = self.adj[u].binary_search(&v) {
            self.adj[u].insert(pos, v);
            let pos = self.adj[v].binary_search(&u).unwrap_err();
            self.adj[v].insert(pos, u);
        }
    }
}

impl Adjacency for Graph {
    fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    fn for_each_neighbor<F: FnMut(usize)>(&self, v: usize, mut f: F) {
        for &u in &self.adj[v] {
            f(u);
        }
    }

    fn neighbors(&self, v: usize) -> Vec<usize> {
        self.adj[v].clone()
    }

    fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }
}

/// Subgraph of `g` induced by `vertices`. Returns the subgraph and the map from
/// new indices back to indices of `g` (which is `vertices` in the given order).
pub fn induced<G: Adjacency>(g: &G, vertices: &[usize]) -> (Graph, Vec<usize>) {
    let mut local = vec![usize::MAX; g.vertex_count()];
    for (i, &v) in vertices.iter().enumerate() {
        local[v] = i;
    }
    let mut edges = Vec::new();
    for (i, &v) in vertices.iter().enumerate() {
        g.for_each_neighbor(v, |u| {
            let j = local[u];
            if j != usize::MAX && i < j {
                edges.push((i, j));
            }
        });
    }
    (Graph::from_edges(vertices.len(), &edges), vertices.to_vec())
}

/// Marks every vertex reachable from `sources` without entering a vertex for
/// which `blocked` holds. Blocked sources are not expanded.
pub fn reachable<G, B>(g: &G, sources: &[usize], blocked: B) -> Vec<bool>
where
    G: Adjacency,
    B: Fn(usize) -> bool,
{
    let mut seen = vec![false; g.vertex_count()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if !blocked(s) && !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        g.for_each_neighbor(v, |u| {
            if !seen[u] && !blocked(u) {
                seen[u] = true;
                queue.push_back(u);
            }
        });
    }
    seen
}

/// Shortest path from any source to any target through allowed vertices.
/// Sources and targets themselves must be allowed.
pub fn shortest_path<G, A>(g: &G, sources: &[usize], is_target: impl Fn(usize) -> bool, allowed: A) -> Option<Vec<usize>>
where
    G: Adjacency,
    A: Fn(usize) -> bool,
{
    let n = g.vertex_count();
    let mut prev = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for &s in sources {
        if allowed(s) && !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        if is_target(v) {
            let mut path = vec![v];
            let mut cur = v;
            while prev[cur] != usize::MAX {
                cur = prev[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        g.for_each_neighbor(v, |u| {
            if !seen[u] && allowed(u) {
                seen[u] = true;
                prev[u] = v;
                queue.push_back(u);
            }
        });
    }
    None
}

/// Connected components of the subgraph induced by `member`. Each component is
/// a sorted vertex list; components are ordered by their smallest vertex.
pub fn components<G: Adjacency>(g: &G, member: &[bool]) -> Vec<Vec<usize>> {
    let mut comp = vec![usize::MAX; g.vertex_count()];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for s in 0..g.vertex_count() {
        if !member[s] || comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut list = vec![s];
        comp[s] = id;
        let mut head = 0;
        while head < list.len() {
            let v = list[head];
            head += 1;
            g.for_each_neighbor(v, |u| {
                if member[u] && comp[u] == usize::MAX {
                    comp[u] = id;
                    list.push(u);
                }
            });
        }
        list.sort_unstable();
        out.push(list);
    }
    out
}

/// Whether the subgraph induced by `set` is connected. The empty set is not.
pub fn is_connected_subset<G: Adjacency>(g: &G, set: &[usize]) -> bool {
    if set.is_empty() {
        return false;
    }
    let mut member = vec![false; g.vertex_count()];
    for &v in set {
        member[v] = true;
    }
    let seen = reachable(g, &set[..1], |v| !member[v]);
    set.iter().all(|&v| seen[v])
}

pub fn is_connected<G: Adjacency>(g: &G) -> bool {
    let all: Vec<usize> = (0..g.vertex_count()).collect();
    all.is_empty() || is_connected_subset(g, &all)
}

/// Whether `g` has no cycle.
pub fn is_forest<G: Adjacency>(g: &G) -> bool {
    let all = vec![true; g.vertex_count()];
    components(g, &all).len() + g.edge_count() == g.vertex_count()
}

/// A cycle of `g` as a closed vertex sequence (first vertex repeated at the
/// end), or `None` for forests.
pub fn find_cycle<G: Adjacency>(g: &G) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    for root in 0..n {
        if depth[root] != usize::MAX {
            continue;
        }
        depth[root] = 0;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for u in g.neighbors(v) {
                if depth[u] == usize::MAX {
                    depth[u] = depth[v] + 1;
                    parent[u] = v;
                    stack.push(u);
                } else if u != parent[v] && parent[u] != v {
                    // non-tree edge v-u closes a cycle through the lowest common ancestor
                    let (mut a, mut b) = (v, u);
                    let mut left = vec![a];
                    let mut right = vec![b];
                    while a != b {
                        if depth[a] >= depth[b] {
                            a = parent[a];
                            left.push(a);
                        } else {
                            b = parent[b];
                            right.push(b);
                        }
                    }
                    right.pop();
                    right.reverse();
                    left.extend(right);
                    left.push(v);
                    return Some(left);
                }
            }
        }
    }
    None
}
