use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{is_connected_subset, Adjacency, Graph};

/// A tree decomposition: a tree on `bags.len()` nodes and a bag per node.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    bags: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Bags are sorted and deduplicated; the tree shape is checked by
    /// [`TreeDecomposition::validate`], not here.
    pub fn new(mut bags: Vec<Vec<usize>>, edges: Vec<(usize, usize)>) -> Self {
        for b in &mut bags {
            b.sort_unstable();
            b.dedup();
        }
        TreeDecomposition { bags, edges }
    }

    /// One bag holding every vertex.
    pub fn trivial(n: usize) -> Self {
        if n == 0 {
            return TreeDecomposition::default();
        }
        TreeDecomposition::new(vec![(0..n).collect()], Vec::new())
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn bag(&self, node: usize) -> &[usize] {
        &self.bags[node]
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    /// Largest bag size minus one; `-1` for the empty decomposition.
    pub fn width(&self) -> i64 {
        self.bags.iter().map(|b| b.len() as i64).max().unwrap_or(0) - 1
    }

    /// The decomposition tree as a graph on its nodes.
    pub fn tree(&self) -> Graph {
        Graph::from_edges(self.bags.len(), &self.edges)
    }

    fn is_tree(&self) -> bool {
        let k = self.bags.len();
        if self.edges.iter().any(|&(a, b)| a >= k || b >= k || a == b) {
            return false;
        }
        let t = self.tree();
        k == 0 || (t.edge_count() == k - 1 && self.edges.len() == k - 1 && crate::graph::is_connected(&t))
    }

    /// Whether this is a tree decomposition of `g`: the node graph is a tree,
    /// every vertex and every edge lies in a bag, and the nodes containing any
    /// one vertex induce a subtree.
    pub fn validate<G: Adjacency>(&self, g: &G) -> bool {
        let n = g.vertex_count();
        if !self.is_tree() || self.bags.iter().flatten().any(|&v| v >= n) {
            return false;
        }
        if n > 0 && self.bags.is_empty() {
            return false;
        }
        let mut holders: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (node, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                holders[v].push(node);
            }
        }
        if holders.iter().any(|h| h.is_empty()) {
            return false;
        }
        let edges_covered = g.edges().into_iter().all(|(u, v)| {
            // both holder lists are sorted by node index
            let (a, b) = (&holders[u], &holders[v]);
            let (mut i, mut j) = (0, 0);
            while i < a.len() && j < b.len() {
                match a[i].cmp(&b[j]) {
                    std::cmp::Ordering::Equal => return true,
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                }
            }
            false
        });
        if !edges_covered {
            return false;
        }
        let t = self.tree();
        holders.iter().all(|h| is_connected_subset(&t, h))
    }

    /// Line format: a header `nodes width`, one line per bag listing its
    /// vertices, then one line `a b` per tree edge.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.bags.len(), self.width());
        for bag in &self.bags {
            let line: Vec<String> = bag.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(s, "{}", line.join(" "));
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(s, "{a} {b}");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("missing header".into()))?;
        let head: Vec<&str> = header.split_whitespace().collect();
        if head.len() != 2 {
            return Err(Error::Parse(format!("bad header {header:?}")));
        }
        let nodes: usize = head[0].parse().map_err(|_| Error::Parse(format!("bad node count {:?}", head[0])))?;
        let width: i64 = head[1].parse().map_err(|_| Error::Parse(format!("bad width {:?}", head[1])))?;
        let parse_list = |line: &str| -> Result<Vec<usize>> {
            line.split_whitespace()
                .map(|tok| tok.parse().map_err(|_| Error::Parse(format!("bad vertex {tok:?}"))))
                .collect()
        };
        let mut bags = Vec::with_capacity(nodes);
        for _ in 0..nodes {
            let line = lines.next().ok_or_else(|| Error::Parse("too few bag lines".into()))?;
            bags.push(parse_list(line)?);
        }
        let mut edges = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            match parse_list(line)?.as_slice() {
                &[a, b] => edges.push((a, b)),
                _ => return Err(Error::Parse(format!("bad tree edge {line:?}"))),
            }
        }
        let td = TreeDecomposition::new(bags, edges);
        if td.width() != width {
            return Err(Error::Parse(format!("header width {width} but bags give {}", td.width())));
        }
        Ok(td)
    }
}
