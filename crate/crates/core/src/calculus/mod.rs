//! Vertex functions with values in `{-1, 0, +1, *}`, the `d` operator, walk
//! indicator chains and integrals, and triangle certificates for (almost)
//! contractible walks.

mod strip;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{AddAssign, Neg};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::Adjacency;

pub use strip::{strip_homotopy, strip_triangles, StripHomotopy};

/// A value of `{-1, 0, +1, *}`. `Star` is not a number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LValue {
    Neg,
    Zero,
    Pos,
    Star,
}

impl LValue {
    pub const ALL: [LValue; 4] = [LValue::Neg, LValue::Zero, LValue::Pos, LValue::Star];

    pub fn as_int(self) -> Option<i64> {
        match self {
            LValue::Neg => Some(-1),
            LValue::Zero => Some(0),
            LValue::Pos => Some(1),
            LValue::Star => None,
        }
    }

    pub fn from_int(v: i64) -> Option<LValue> {
        match v {
            -1 => Some(LValue::Neg),
            0 => Some(LValue::Zero),
            1 => Some(LValue::Pos),
            _ => None,
        }
    }

    /// `{+1, -1}` pairs break continuity.
    pub fn clash(self, other: LValue) -> bool {
        matches!((self, other), (LValue::Pos, LValue::Neg) | (LValue::Neg, LValue::Pos))
    }

    /// `{0, *}` pairs break holomorphy.
    pub fn zero_star(self, other: LValue) -> bool {
        matches!((self, other), (LValue::Zero, LValue::Star) | (LValue::Star, LValue::Zero))
    }
}

impl fmt::Display for LValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LValue::Neg => f.write_str("-1"),
            LValue::Zero => f.write_str("0"),
            LValue::Pos => f.write_str("1"),
            LValue::Star => f.write_str("*"),
        }
    }
}

impl Serialize for LValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.as_int() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str("*"),
        }
    }
}

impl<'de> Deserialize<'de> for LValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => LValue::from_int(v).ok_or_else(|| serde::de::Error::custom(format!("bad value {v}"))),
            Raw::Str(s) if s == "*" => Ok(LValue::Star),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("bad value {s:?}"))),
        }
    }
}

/// A total map `V(G) -> {-1, 0, +1, *}`, stored in vertex order. Serialises as
/// a JSON array such as `[-1, 0, "*", 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LFunction {
    values: Vec<LValue>,
}

impl LFunction {
    pub fn new(values: Vec<LValue>) -> Self {
        LFunction { values }
    }

    pub fn constant(n: usize, v: LValue) -> Self {
        LFunction { values: vec![v; n] }
    }

    pub fn get(&self, v: usize) -> LValue {
        self.values[v]
    }

    pub fn set(&mut self, v: usize, val: LValue) {
        self.values[v] = val;
    }

    pub fn values(&self) -> &[LValue] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn all_edges<G: Adjacency>(&self, g: &G, within: Option<&[usize]>, bad: impl Fn(LValue, LValue) -> bool) -> bool {
        match within {
            None => g.edges().iter().all(|&(u, v)| !bad(self.values[u], self.values[v])),
            Some(set) => {
                let mut member = vec![false; g.vertex_count()];
                for &v in set {
                    member[v] = true;
                }
                set.iter().all(|&u| {
                    let mut ok = true;
                    g.for_each_neighbor(u, |v| {
                        if member[v] && bad(self.values[u], self.values[v]) {
                            ok = false;
                        }
                    });
                    ok
                })
            }
        }
    }

    /// No edge joins `+1` and `-1`.
    pub fn is_continuous<G: Adjacency>(&self, g: &G) -> bool {
        self.all_edges(g, None, LValue::clash)
    }

    /// Continuous, and no edge joins `0` and `*`.
    pub fn is_holomorphic<G: Adjacency>(&self, g: &G) -> bool {
        self.all_edges(g, None, |a, b| a.clash(b) || a.zero_star(b))
    }

    /// Continuous and `*`-free.
    pub fn is_entire<G: Adjacency>(&self, g: &G) -> bool {
        !self.values.contains(&LValue::Star) && self.is_continuous(g)
    }

    /// The three predicates restricted to the subgraph induced by `set`.
    pub fn is_continuous_on<G: Adjacency>(&self, g: &G, set: &[usize]) -> bool {
        self.all_edges(g, Some(set), LValue::clash)
    }

    pub fn is_holomorphic_on<G: Adjacency>(&self, g: &G, set: &[usize]) -> bool {
        self.all_edges(g, Some(set), |a, b| a.clash(b) || a.zero_star(b))
    }

    pub fn is_entire_on<G: Adjacency>(&self, g: &G, set: &[usize]) -> bool {
        set.iter().all(|&v| self.values[v] != LValue::Star) && self.is_continuous_on(g, set)
    }
}

/// The edges of a simple graph with a fixed orientation. Edge ids are the
/// positions in the sorted edge list and do not depend on the orientation.
#[derive(Clone, Debug)]
pub struct OrientedEdges {
    tail: Vec<usize>,
    head: Vec<usize>,
    ids: HashMap<(usize, usize), usize>,
    vertex_count: usize,
}

impl OrientedEdges {
    /// Orients every edge from its smaller to its larger endpoint.
    pub fn canonical<G: Adjacency>(g: &G) -> Self {
        let edges = g.edges();
        let ids = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        OrientedEdges {
            tail: edges.iter().map(|e| e.0).collect(),
            head: edges.iter().map(|e| e.1).collect(),
            ids,
            vertex_count: g.vertex_count(),
        }
    }

    /// Same edges, with the orientation of edge `e` reversed where `flip[e]`.
    pub fn reoriented(&self, flip: &[bool]) -> Self {
        let mut out = self.clone();
        for (e, &f) in flip.iter().enumerate() {
            if f {
                std::mem::swap(&mut out.tail[e], &mut out.head[e]);
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.tail.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// `e^-`.
    pub fn tail(&self, e: usize) -> usize {
        self.tail[e]
    }

    /// `e^+`.
    pub fn head(&self, e: usize) -> usize {
        self.head[e]
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.ids.get(&(u.min(v), u.max(v))).copied()
    }
}

/// An integer-valued function on edges with finite support.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneChain {
    coeffs: BTreeMap<usize, i64>,
}

impl OneChain {
    pub fn zero() -> Self {
        OneChain::default()
    }

    pub fn get(&self, e: usize) -> i64 {
        self.coeffs.get(&e).copied().unwrap_or(0)
    }

    pub fn add(&mut self, e: usize, v: i64) {
        if v == 0 {
            return;
        }
        let entry = self.coeffs.entry(e).or_insert(0);
        *entry += v;
        if *entry == 0 {
            self.coeffs.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Non-zero entries in edge order.
    pub fn support(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coeffs.iter().map(|(&e, &v)| (e, v))
    }

    /// `sum_e self(e) * other(e)`.
    pub fn dot(&self, other: &OneChain) -> i64 {
        let (small, large) = if self.coeffs.len() <= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.support().map(|(e, v)| v * large.get(e)).sum()
    }
}

impl AddAssign<&OneChain> for OneChain {
    fn add_assign(&mut self, rhs: &OneChain) {
        for (e, v) in rhs.support() {
            self.add(e, v);
        }
    }
}

impl Neg for OneChain {
    type Output = OneChain;
    fn neg(mut self) -> OneChain {
        for v in self.coeffs.values_mut() {
            *v = -*v;
        }
        self
    }
}

/// A directed walk `(v_0, e_1, v_1, ..., e_n, v_n)`. Its direction is the
/// sequence order, independent of any orientation of the edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Walk {
    vertices: Vec<usize>,
    edges: Vec<usize>,
}

impl Walk {
    /// The zero-length walk at `v`.
    pub fn trivial(v: usize) -> Self {
        Walk {
            vertices: vec![v],
            edges: Vec::new(),
        }
    }

    /// Walk through the given vertices; edges are inferred (the graph is simple).
    pub fn from_vertices(g: &OrientedEdges, vertices: &[usize]) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidWalk("no vertices".into()));
        }
        let mut edges = Vec::with_capacity(vertices.len() - 1);
        for w in vertices.windows(2) {
            let e = g
                .edge_between(w[0], w[1])
                .ok_or_else(|| Error::InvalidWalk(format!("{} and {} are not adjacent", w[0], w[1])))?;
            edges.push(e);
        }
        Ok(Walk {
            vertices: vertices.to_vec(),
            edges,
        })
    }

    /// Walk from an explicit alternating sequence; each edge must join its
    /// neighbouring vertices.
    pub fn from_parts(g: &OrientedEdges, vertices: Vec<usize>, edges: Vec<usize>) -> Result<Self> {
        if vertices.len() != edges.len() + 1 {
            return Err(Error::InvalidWalk("need one more vertex than edges".into()));
        }
        for (i, &e) in edges.iter().enumerate() {
            let (a, b) = (vertices[i], vertices[i + 1]);
            if e >= g.edge_count() {
                return Err(Error::InvalidWalk(format!("unknown edge {e}")));
            }
            let (t, h) = (g.tail(e), g.head(e));
            if !((t == a && h == b) || (t == b && h == a)) {
                return Err(Error::InvalidWalk(format!("edge {e} does not join {a} and {b}")));
            }
        }
        Ok(Walk { vertices, edges })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn end(&self) -> usize {
        *self.vertices.last().unwrap()
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.start() == self.end()
    }

    pub fn reversed(&self) -> Walk {
        let mut vertices = self.vertices.clone();
        let mut edges = self.edges.clone();
        vertices.reverse();
        edges.reverse();
        Walk { vertices, edges }
    }

    /// `self` followed by `other`; `other` must start where `self` ends.
    pub fn concat(&self, other: &Walk) -> Result<Walk> {
        if self.end() != other.start() {
            return Err(Error::InvalidWalk(format!(
                "cannot append a walk from {} to a walk ending at {}",
                other.start(),
                self.end()
            )));
        }
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices[1..]);
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Ok(Walk { vertices, edges })
    }

    /// Distinct vertices, sorted.
    pub fn vertex_set(&self) -> Vec<usize> {
        let mut v = self.vertices.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Closed walk of length three on three distinct vertices.
    pub fn is_triangle(&self) -> bool {
        self.len() == 3 && self.is_closed() && {
            let v = &self.vertices;
            v[0] != v[1] && v[1] != v[2] && v[0] != v[2]
        }
    }
}

/// `df(e) = f(e+) - f(e-)`, or `0` when either end is `*`.
pub fn d(f: &LFunction, g: &OrientedEdges) -> OneChain {
    let mut out = OneChain::zero();
    for e in 0..g.edge_count() {
        if let (Some(a), Some(b)) = (f.get(g.tail(e)).as_int(), f.get(g.head(e)).as_int()) {
            out.add(e, b - a);
        }
    }
    out
}

/// `I_W`: each traversal contributes `+1` when it enters the head of its edge
/// and `-1` otherwise.
pub fn indicator(w: &Walk, g: &OrientedEdges) -> OneChain {
    let mut out = OneChain::zero();
    for (i, &e) in w.edges.iter().enumerate() {
        let sign = if w.vertices[i + 1] == g.head(e) { 1 } else { -1 };
        out.add(e, sign);
    }
    out
}

/// `sum_e I_W(e) h(e)`.
pub fn integrate(w: &Walk, h: &OneChain, g: &OrientedEdges) -> i64 {
    indicator(w, g).dot(h)
}

/// Whether `f` is holomorphic on the vertices of the triangle `t`.
pub fn is_contractible(t: &Walk, f: &LFunction) -> Result<bool> {
    if !t.is_triangle() {
        return Err(Error::NotTriangle(format!("{:?}", t.vertices())));
    }
    let v = &t.vertices;
    let vals = [f.get(v[0]), f.get(v[1]), f.get(v[2])];
    for i in 0..3 {
        for j in i + 1..3 {
            if vals[i].clash(vals[j]) || vals[i].zero_star(vals[j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Checks a certificate that the closed walk `w` is `(f, k)`-almost
/// contractible: the triangle indicators sum to `I_W`, and every triangle
/// after the first `k` is `f`-contractible.
pub fn verify_almost_contractible(w: &Walk, triangles: &[Walk], f: &LFunction, k: usize, g: &OrientedEdges) -> bool {
    if !w.is_closed() || triangles.iter().any(|t| !t.is_triangle()) {
        return false;
    }
    let mut sum = OneChain::zero();
    for t in triangles {
        sum += &indicator(t, g);
    }
    if sum != indicator(w, g) {
        return false;
    }
    triangles
        .iter()
        .skip(k)
        .all(|t| is_contractible(t, f).unwrap_or(false))
}

/// Checks a certificate that `w1` and `w2` are `(f, k)`-almost homotopic:
/// `q` joins their starts, `r` their ends, `f` is a constant integer on each of
/// `V(q)` and `V(r)`, and `q w2 r^-1 w1^-1` is certified by `triangles`.
#[allow(clippy::too_many_arguments)]
pub fn verify_almost_homotopic(
    w1: &Walk,
    w2: &Walk,
    q: &Walk,
    r: &Walk,
    triangles: &[Walk],
    f: &LFunction,
    k: usize,
    g: &OrientedEdges,
) -> Result<bool> {
    if q.start() != w1.start() || q.end() != w2.start() {
        return Err(Error::InvalidWalk("Q must join the starts of W1 and W2".into()));
    }
    if r.start() != w1.end() || r.end() != w2.end() {
        return Err(Error::InvalidWalk("R must join the ends of W1 and W2".into()));
    }
    let constant_integer = |walk: &Walk| {
        let first = f.get(walk.start());
        first.as_int().is_some() && walk.vertices().iter().all(|&v| f.get(v) == first)
    };
    if !constant_integer(q) || !constant_integer(r) {
        return Ok(false);
    }
    let closed = q.concat(w2)?.concat(&r.reversed())?.concat(&w1.reversed())?;
    Ok(verify_almost_contractible(&closed, triangles, f, k, g))
}

/// An exact half-integer, stored doubled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfInt(pub i64);

impl HalfInt {
    pub fn doubled(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }
}

impl std::iter::Sum for HalfInt {
    fn sum<I: Iterator<Item = HalfInt>>(iter: I) -> HalfInt {
        HalfInt(iter.map(|h| h.0).sum())
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Interior weights `(f(v_{i+1}) - f(v_{i-1})) / 2` along a path, as
/// `(v_i, weight)` pairs in path order. `f` must be entire on the path's
/// vertex set (adjacency taken from `g`).
pub fn path_weights<G: Adjacency>(p: &Walk, f: &LFunction, g: &G) -> Result<Vec<(usize, HalfInt)>> {
    let vs = p.vertices();
    if p.vertex_set().len() != vs.len() {
        return Err(Error::InvalidWalk("path repeats a vertex".into()));
    }
    if !f.is_entire_on(g, vs) {
        return Err(Error::NotEntire);
    }
    let val = |v: usize| f.get(v).as_int().expect("entire");
    Ok((1..vs.len().saturating_sub(1))
        .map(|i| (vs[i], HalfInt(val(vs[i + 1]) - val(vs[i - 1]))))
        .collect())
}
