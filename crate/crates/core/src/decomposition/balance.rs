use serde::{Deserialize, Serialize};

use super::TreeDecomposition;
use crate::error::{Error, Result};
use crate::graph::Adjacency;

/// Rational vertex weights `num[v] / den` with a shared positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightFunction {
    num: Vec<i64>,
    den: i64,
}

impl WeightFunction {
    pub fn new(num: Vec<i64>, den: i64) -> Result<Self> {
        if den <= 0 {
            return Err(Error::Precondition(format!("denominator {den} must be positive")));
        }
        Ok(WeightFunction { num, den })
    }

    pub fn integer(values: Vec<i64>) -> Self {
        WeightFunction { num: values, den: 1 }
    }

    /// Half-integer weights given doubled.
    pub fn halves(doubled: Vec<i64>) -> Self {
        WeightFunction { num: doubled, den: 2 }
    }

    pub fn len(&self) -> usize {
        self.num.len()
    }

    pub fn is_empty(&self) -> bool {
        self.num.is_empty()
    }

    pub fn numerator(&self, v: usize) -> i64 {
        self.num[v]
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    /// Numerator of `λ(X)` over the shared denominator; repeated vertices
    /// count once.
    pub fn mass(&self, set: &[usize]) -> i64 {
        let mut seen = std::collections::HashSet::with_capacity(set.len());
        set.iter().filter(|v| seen.insert(**v)).map(|&v| self.num[v]).sum()
    }

    pub fn total(&self) -> i64 {
        self.num.iter().sum()
    }

    /// Whether `|λ(v)| <= 1` everywhere.
    pub fn is_bounded(&self) -> bool {
        self.num.iter().all(|x| x.abs() <= self.den)
    }
}

/// A separation `(K, L)`: `K ∪ L` is every vertex and no edge joins `K \ L` to
/// `L \ K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Separation {
    pub k: Vec<usize>,
    pub l: Vec<usize>,
}

impl Separation {
    fn membership(&self, n: usize) -> (Vec<bool>, Vec<bool>) {
        let mut in_k = vec![false; n];
        let mut in_l = vec![false; n];
        for &v in &self.k {
            in_k[v] = true;
        }
        for &v in &self.l {
            in_l[v] = true;
        }
        (in_k, in_l)
    }

    pub fn is_separation<G: Adjacency>(&self, g: &G) -> bool {
        let n = g.vertex_count();
        if self.k.iter().chain(&self.l).any(|&v| v >= n) {
            return false;
        }
        let (in_k, in_l) = self.membership(n);
        if (0..n).any(|v| !in_k[v] && !in_l[v]) {
            return false;
        }
        g.edges().into_iter().all(|(u, v)| {
            let k_only = |x: usize| in_k[x] && !in_l[x];
            let l_only = |x: usize| in_l[x] && !in_k[x];
            !(k_only(u) && l_only(v) || l_only(u) && k_only(v))
        })
    }

    /// `K ∩ L`, sorted.
    pub fn intersection(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.k.iter().copied().filter(|v| self.l.contains(v)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// `K \ L`, sorted.
    pub fn k_minus_l(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.k.iter().copied().filter(|v| !self.l.contains(v)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// For the tree edge `u -> v`, the vertices in bags on `v`'s side of the edge,
/// minus `β(u)`.
fn side_set(td: &TreeDecomposition, tree: &crate::graph::Graph, u: usize, v: usize, n: usize) -> Vec<usize> {
    let mut in_bag_u = vec![false; n];
    for &x in td.bag(u) {
        in_bag_u[x] = true;
    }
    let mut member = vec![false; n];
    let mut stack = vec![(v, u)];
    while let Some((node, from)) = stack.pop() {
        for &x in td.bag(node) {
            if !in_bag_u[x] {
                member[x] = true;
            }
        }
        for &next in tree.neighbor_slice(node) {
            if next != from {
                stack.push((next, node));
            }
        }
    }
    (0..n).filter(|&x| member[x]).collect()
}

/// Weighted balanced separation from a tree decomposition of width `t`.
///
/// Requires `|λ(v)| <= 1` and `λ(V) >= 3t + 3`. Walks from node 0 towards any
/// neighbour whose side carries more than two thirds of the mass until no such
/// neighbour exists, then takes the heaviest sides (stable on ties) until they
/// reach a third. The result has `λ(V)/3 <= λ(K \ L) <= 2λ(V)/3` and
/// `|K ∩ L| <= t + 1`.
pub fn balanced_separation<G: Adjacency>(h: &G, td: &TreeDecomposition, lambda: &WeightFunction) -> Result<Separation> {
    let n = h.vertex_count();
    if lambda.len() != n {
        return Err(Error::Precondition("weight function does not match the graph".into()));
    }
    if !td.validate(h) {
        return Err(Error::Precondition("not a tree decomposition of the graph".into()));
    }
    if !lambda.is_bounded() {
        return Err(Error::Precondition("some |λ(v)| exceeds 1".into()));
    }
    let t = td.width().max(0);
    let total = lambda.total();
    if total < (3 * t + 3) * lambda.denominator() {
        return Err(Error::Precondition(format!(
            "λ(V) = {total}/{} is below 3t+3 = {}",
            lambda.denominator(),
            3 * t + 3
        )));
    }
    let tree = td.tree();
    let heavy = |mass: i64| 3 * mass > 2 * total;

    let mut u = 0;
    let mut came_from = usize::MAX;
    let mut steps = 0;
    let sides = loop {
        let sides: Vec<(usize, Vec<usize>)> = tree
            .neighbor_slice(u)
            .iter()
            .map(|&v| (v, side_set(td, &tree, u, v, n)))
            .collect();
        match sides.iter().find(|(_, s)| heavy(lambda.mass(s))) {
            None => break sides,
            Some(&(v, _)) => {
                if v == came_from {
                    return Err(Error::Invariant("two heavy sides point at each other".into()));
                }
                came_from = u;
                u = v;
            }
        }
        steps += 1;
        if steps > td.node_count() {
            return Err(Error::Invariant("heavy-side walk did not terminate".into()));
        }
    };

    // the sides at u must be disjoint and cover everything outside β(u)
    let mut owner = vec![usize::MAX; n];
    for (i, (_, s)) in sides.iter().enumerate() {
        for &x in s {
            if owner[x] != usize::MAX {
                return Err(Error::Invariant(format!("vertex {x} lies on two sides of node {u}")));
            }
            owner[x] = i;
        }
    }

    let mut ranked: Vec<(i64, usize)> = sides.iter().enumerate().map(|(i, (_, s))| (lambda.mass(s), i)).collect();
    ranked.sort_by_key(|&(mass, _)| std::cmp::Reverse(mass));
    let mut prefix = 0;
    let mut cut = ranked.len();
    for (m, &(mass, _)) in ranked.iter().enumerate() {
        prefix += mass;
        if 3 * prefix >= total {
            cut = m + 1;
            break;
        }
    }
    let bag = td.bag(u).to_vec();
    let mut k = bag.clone();
    let mut l = bag;
    for (m, &(_, i)) in ranked.iter().enumerate() {
        if m < cut {
            k.extend_from_slice(&sides[i].1);
        } else {
            l.extend_from_slice(&sides[i].1);
        }
    }
    k.sort_unstable();
    l.sort_unstable();
    Ok(Separation { k, l })
}
