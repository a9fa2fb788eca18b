//! Side-to-side separators: minimum cuts by max-flow, inclusion-minimal
//! separators, connectivity of minimal separators in enlargements, and
//! blocked staircases for 2-colourings of `Q_N`.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::calculus::{indicator, verify_almost_contractible, LFunction, LValue, OneChain, OrientedEdges, Walk};
use crate::error::{Error, Result};
use crate::graph::{components, is_connected_subset, reachable, shortest_path, Adjacency};
use crate::grid::{enlarge, Coord, Enlargement, GridGraph, Staircase};

fn mask(n: usize, set: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in set {
        m[v] = true;
    }
    m
}

/// Whether `x` meets every path from `s1` to `s2`. `x` must avoid both sides.
pub fn is_separator<G: Adjacency>(g: &G, s1: &[usize], s2: &[usize], x: &[usize]) -> Result<bool> {
    let n = g.vertex_count();
    let in_x = mask(n, x);
    if s1.iter().chain(s2).any(|&v| in_x[v]) {
        return Err(Error::SeparatorTouchesSide);
    }
    let seen = reachable(g, s1, |v| in_x[v]);
    Ok(!s2.iter().any(|&v| seen[v]))
}

struct FlowNet {
    head: Vec<usize>,
    cap: Vec<i64>,
    adj: Vec<Vec<usize>>,
}

impl FlowNet {
    fn new(nodes: usize) -> Self {
        FlowNet {
            head: Vec::new(),
            cap: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    fn arc(&mut self, from: usize, to: usize, cap: i64) {
        self.adj[from].push(self.head.len());
        self.head.push(to);
        self.cap.push(cap);
        self.adj[to].push(self.head.len());
        self.head.push(from);
        self.cap.push(0);
    }

    /// Edmonds-Karp; returns the flow value.
    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        loop {
            let mut via = vec![usize::MAX; self.adj.len()];
            let mut queue = VecDeque::from([s]);
            let mut seen = vec![false; self.adj.len()];
            seen[s] = true;
            while let Some(u) = queue.pop_front() {
                for &e in &self.adj[u] {
                    let v = self.head[e];
                    if !seen[v] && self.cap[e] > 0 {
                        seen[v] = true;
                        via[v] = e;
                        queue.push_back(v);
                    }
                }
            }
            if !seen[t] {
                return flow;
            }
            let mut push = i64::MAX;
            let mut v = t;
            while v != s {
                let e = via[v];
                push = push.min(self.cap[e]);
                v = self.head[e ^ 1];
            }
            let mut v = t;
            while v != s {
                let e = via[v];
                self.cap[e] -= push;
                self.cap[e ^ 1] += push;
                v = self.head[e ^ 1];
            }
            flow += push;
        }
    }

    fn residual_reach(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &e in &self.adj[u] {
                let v = self.head[e];
                if !seen[v] && self.cap[e] > 0 {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }
}

/// A minimum-cardinality set of non-side vertices separating `s1` from `s2`,
/// by unit vertex capacities and node splitting. Fails when the sides overlap
/// or touch, since then nothing off the sides can separate them.
pub fn min_side_separator<G: Adjacency>(g: &G, s1: &[usize], s2: &[usize]) -> Result<Vec<usize>> {
    let n = g.vertex_count();
    let side1 = mask(n, s1);
    let side2 = mask(n, s2);
    for v in 0..n {
        if side1[v] && (side2[v] || g.neighbors(v).iter().any(|&u| side2[u])) {
            return Err(Error::NoSeparatorExists);
        }
    }
    let inf = n as i64 + 1;
    let (source, sink) = (2 * n, 2 * n + 1);
    let mut net = FlowNet::new(2 * n + 2);
    for v in 0..n {
        let side = side1[v] || side2[v];
        net.arc(2 * v, 2 * v + 1, if side { inf } else { 1 });
        g.for_each_neighbor(v, |u| net.arc(2 * v + 1, 2 * u, inf));
        if side1[v] {
            net.arc(source, 2 * v, inf);
        }
        if side2[v] {
            net.arc(2 * v + 1, sink, inf);
        }
    }
    let flow = net.max_flow(source, sink);
    let reach = net.residual_reach(source);
    let cut: Vec<usize> = (0..n).filter(|&v| reach[2 * v] && !reach[2 * v + 1]).collect();
    if cut.len() as i64 != flow {
        return Err(Error::Invariant(format!("cut of size {} for flow {flow}", cut.len())));
    }
    Ok(cut)
}

/// Drops vertices of `x` one at a time, in the given order, whenever the rest
/// still separates. One pass is enough: a vertex that was needed stays needed
/// as the set shrinks.
pub fn minimalize_in_order<G: Adjacency>(g: &G, s1: &[usize], s2: &[usize], x: &[usize], order: &[usize]) -> Result<Vec<usize>> {
    if !is_separator(g, s1, s2, x)? {
        return Err(Error::NotSeparator);
    }
    let n = g.vertex_count();
    let mut in_x = mask(n, x);
    for &v in order {
        if !in_x[v] {
            continue;
        }
        in_x[v] = false;
        let seen = reachable(g, s1, |u| in_x[u]);
        if s2.iter().any(|&u| seen[u]) {
            in_x[v] = true;
        }
    }
    Ok((0..n).filter(|&v| in_x[v]).collect())
}

/// Inclusion-minimal separator inside `x`, scanning in lexicographic
/// coordinate order.
pub fn minimalize(g: &GridGraph, s1: &[usize], s2: &[usize], x: &[usize]) -> Result<Vec<usize>> {
    let mut order = x.to_vec();
    order.sort_by_key(|&v| g.coord(v));
    order.dedup();
    minimalize_in_order(g, s1, s2, x, &order)
}

/// Whether no proper subset of `x` separates, checked one vertex at a time.
pub fn is_minimal_separator<G: Adjacency>(g: &G, s1: &[usize], s2: &[usize], x: &[usize]) -> Result<bool> {
    if !is_separator(g, s1, s2, x)? {
        return Ok(false);
    }
    for i in 0..x.len() {
        let rest: Vec<usize> = x.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
        if is_separator(g, s1, s2, &rest)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Connectivity of the induced subgraph on a minimal separator of an
/// enlargement's sides. Fails if `x` is not such a separator.
pub fn check_separator_connected(e: &Enlargement, x: &[usize]) -> Result<bool> {
    if !is_minimal_separator(e.graph(), e.left(), e.right(), x)? {
        return Err(Error::Precondition("not a minimal side separator of the enlargement".into()));
    }
    Ok(is_connected_subset(e.graph(), x))
}

/// Shrinks square offsets by one toward the base staircase:
/// `s + (dy, dz) -> s + (max(dy-1, 0), max(dz-1, 0))`. Adjacent vertices map
/// to adjacent or equal vertices and every vertex is adjacent or equal to its
/// image.
fn retract(e: &Enlargement, v: usize) -> usize {
    let (dy, dz) = e.offset_of(v);
    let c = e.graph().coord(v);
    let base = e.base().at_x(c.x).unwrap();
    e.graph()
        .index(Coord::new(c.x, base.y + dy.saturating_sub(1), base.z + dz.saturating_sub(1)))
        .unwrap()
}

fn adjacent_or_equal(g: &GridGraph, a: usize, b: usize) -> bool {
    a == b || g.adjacent(a, b)
}

/// Triangles whose indicators sum to that of the closed walk `walk` in the
/// enlargement. Each edge `uv` and its retraction `ρu ρv` bound a quadrilateral
/// that is coned from a vertex adjacent to all four corners; after `b` rounds
/// the walk lies on the base staircase, a path, where its indicator vanishes.
pub fn enlargement_triangles(e: &Enlargement, oe: &OrientedEdges, walk: &[usize]) -> Result<Vec<Walk>> {
    let g = e.graph();
    if walk.first() != walk.last() {
        return Err(Error::InvalidWalk("walk is not closed".into()));
    }
    let mut current = walk.to_vec();
    let mut out = Vec::new();
    for _ in 0..e.b() {
        let next: Vec<usize> = current.iter().map(|&v| retract(e, v)).collect();
        for i in 0..current.len() - 1 {
            let quad = [current[i], current[i + 1], next[i + 1], next[i]];
            let mut candidates: Vec<usize> = quad.to_vec();
            candidates.extend(g.neighbors(quad[0]));
            let apex = candidates
                .into_iter()
                .find(|&w| quad.iter().all(|&q| adjacent_or_equal(g, w, q)))
                .ok_or_else(|| Error::Invariant(format!("no apex for quadrilateral {quad:?}")))?;
            for j in 0..4 {
                let (a, b) = (quad[j], quad[(j + 1) % 4]);
                if a != b && a != apex && b != apex {
                    out.push(Walk::from_vertices(oe, &[apex, a, b, apex])?);
                }
            }
        }
        current = next;
    }
    let rest = Walk::from_vertices(oe, &dedup_consecutive(&current))?;
    if !indicator(&rest, oe).is_zero() {
        return Err(Error::Invariant("retracted walk does not cancel on the staircase".into()));
    }
    Ok(out)
}

fn dedup_consecutive(walk: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(walk.len());
    for &v in walk {
        if out.last() != Some(&v) {
            out.push(v);
        }
    }
    out
}

/// The homotopy argument behind connectivity of a minimal separator, replayed
/// for one pair of separator vertices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConnectivityWitness {
    pub x: usize,
    pub y: usize,
    /// Integral of `df` along the path through `x` (always 2).
    pub integral_x: i64,
    /// Integral along the path through `y`; 0 would place `y` outside the
    /// component of `x`.
    pub integral_y: i64,
    pub triangles: usize,
    /// The triangle certificate for the closed walk was verified with `k = 0`.
    pub certified: bool,
}

/// For a minimal separator `x_set` of the enlargement's sides and two of its
/// vertices, builds the paths `P_x`, `P_y` meeting the separator only in `x`
/// and `y`, the function `f` (−1 / 0 on the component of `x` / `*` on the rest
/// of the separator / +1), and a triangle certificate for `P_x P_y^-1`.
pub fn connectivity_witness(e: &Enlargement, x_set: &[usize], x: usize, y: usize) -> Result<ConnectivityWitness> {
    let g = e.graph();
    let n = g.vertex_count();
    if !is_minimal_separator(g, e.left(), e.right(), x_set)? {
        return Err(Error::Precondition("not a minimal side separator".into()));
    }
    let in_x = mask(n, x_set);
    if !in_x[x] || !in_x[y] {
        return Err(Error::Precondition("witness vertices must lie in the separator".into()));
    }
    let a_side = reachable(g, e.left(), |v| in_x[v]);
    let member: Vec<bool> = in_x.clone();
    let comp = components(g, &member).into_iter().find(|c| c.contains(&x)).unwrap();
    let in_comp = mask(n, &comp);
    let f = LFunction::new(
        (0..n)
            .map(|v| {
                if in_comp[v] {
                    LValue::Zero
                } else if in_x[v] {
                    LValue::Star
                } else if a_side[v] {
                    LValue::Neg
                } else {
                    LValue::Pos
                }
            })
            .collect(),
    );
    let (l, r) = (e.left()[0], e.right()[0]);
    let through = |keep: usize| {
        shortest_path(g, &[l], |v| v == r, |v| !in_x[v] || v == keep)
            .ok_or_else(|| Error::Invariant(format!("no path through separator vertex {keep}")))
    };
    let px = through(x)?;
    let py = through(y)?;
    let oe = OrientedEdges::canonical(g);
    let mut closed = px.clone();
    closed.extend(py.iter().rev().skip(1));
    let triangles = enlargement_triangles(e, &oe, &closed)?;
    let w = Walk::from_vertices(&oe, &closed)?;
    let df = crate::calculus::d(&f, &oe);
    let integral = |p: &[usize]| -> Result<i64> { Ok(indicator(&Walk::from_vertices(&oe, p)?, &oe).dot(&df)) };
    Ok(ConnectivityWitness {
        x,
        y,
        integral_x: integral(&px)?,
        integral_y: integral(&py)?,
        triangles: triangles.len(),
        certified: verify_almost_contractible(&w, &triangles, &f, 0, &oe),
    })
}

/// Sum of triangle indicators, exposed for tests of the decomposition.
pub fn triangle_sum(triangles: &[Walk], oe: &OrientedEdges) -> OneChain {
    let mut sum = OneChain::zero();
    for t in triangles {
        sum += &indicator(t, oe);
    }
    sum
}

/// A 2-colouring of the vertices of a grid, classes `1` and `2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition2 {
    pub n: u32,
    pub class: Vec<u8>,
}

impl Partition2 {
    pub fn new(n: u32, class: Vec<u8>) -> Result<Self> {
        let p = Partition2 { n, class };
        p.check()?;
        Ok(p)
    }

    pub fn uniform(n: u32, i: u8) -> Self {
        Partition2 {
            n,
            class: vec![i; (n as usize).pow(3)],
        }
    }

    pub fn random<R: Rng>(n: u32, rng: &mut R) -> Self {
        Partition2 {
            n,
            class: (0..(n as usize).pow(3)).map(|_| rng.gen_range(1..=2)).collect(),
        }
    }

    /// Validates class values and length (`n^3`).
    pub fn check(&self) -> Result<()> {
        if self.class.len() != (self.n as usize).pow(3) {
            return Err(Error::Parse(format!("expected {} classes, got {}", (self.n as usize).pow(3), self.class.len())));
        }
        if let Some(c) = self.class.iter().find(|&&c| c != 1 && c != 2) {
            return Err(Error::Parse(format!("class {c} is not 1 or 2")));
        }
        Ok(())
    }

    /// Class of the vertex at `c` in the full grid.
    pub fn of(&self, c: Coord) -> u8 {
        self.class[crate::grid::full_index(self.n, c)]
    }

    /// Vertex indices (full-grid numbering) of class `i`.
    pub fn members(&self, i: u8) -> Vec<usize> {
        (0..self.class.len()).filter(|&v| self.class[v] == i).collect()
    }
}

fn check_colour(i: u8) -> Result<()> {
    if i == 1 || i == 2 {
        Ok(())
    } else {
        Err(Error::Precondition(format!("colour {i} is not 1 or 2")))
    }
}

/// A side-to-side path of the b-enlargement avoiding `A_i` off the sides, as
/// coordinates, or `None` when `p` is `(b, i)`-blocked.
pub fn unblocking_path(host: &GridGraph, p: &Staircase, b: u32, i: u8, part: &Partition2) -> Result<Option<Vec<Coord>>> {
    check_colour(i)?;
    let e = enlarge(host, p, b)?;
    let g = e.graph();
    let right = mask(g.vertex_count(), e.right());
    let allowed = |v: usize| e.is_side(v) || part.of(g.coord(v)) != i;
    Ok(shortest_path(g, e.left(), |v| right[v], allowed).map(|path| path.into_iter().map(|v| g.coord(v)).collect()))
}

/// Whether every side-to-side path of the b-enlargement of `p` meets `A_i`
/// off the sides.
pub fn is_blocked(host: &GridGraph, p: &Staircase, b: u32, i: u8, part: &Partition2) -> Result<bool> {
    Ok(unblocking_path(host, p, b, i, part)?.is_none())
}

/// For a `(b, i)`-blocked staircase, the component of the (b+1)-enlargement
/// restricted to `A_i` that holds every side-to-side path in `A_i`. It is the
/// component containing a minimal `A_i` separator of the b-enlargement.
pub fn blocked_component(host: &GridGraph, p: &Staircase, b: u32, i: u8, part: &Partition2) -> Result<Vec<Coord>> {
    if !is_blocked(host, p, b, i, part)? {
        return Err(Error::NotBlocked);
    }
    let m0 = enlarge(host, p, b)?;
    let m = enlarge(host, p, b + 1)?;
    let g0 = m0.graph();
    let candidates: Vec<usize> = m0
        .interior()
        .into_iter()
        .filter(|&v| part.of(g0.coord(v)) == i)
        .collect();
    let x = minimalize(g0, m0.left(), m0.right(), &candidates)?;
    let g = m.graph();
    let in_ai: Vec<bool> = g.coords().iter().map(|&c| part.of(c) == i).collect();
    let comps = components(g, &in_ai);
    let x_in_m: Vec<usize> = x.iter().map(|&v| g.index(g0.coord(v)).unwrap()).collect();
    let comp = comps
        .into_iter()
        .find(|c| c.binary_search(&x_in_m[0]).is_ok())
        .unwrap();
    if !x_in_m.iter().all(|v| comp.binary_search(v).is_ok()) {
        return Err(Error::Invariant("minimal separator split across components".into()));
    }
    let mut coords: Vec<Coord> = comp.into_iter().map(|v| g.coord(v)).collect();
    coords.sort_unstable();
    Ok(coords)
}

/// Random separators between `s1` and `s2`, each avoiding the sides:
/// boundaries of level sets of randomly weighted distances from `s1`, and
/// random supersets of those. `minimal` minimalizes every sample.
pub fn sample_separators<R: Rng>(g: &GridGraph, s1: &[usize], s2: &[usize], count: usize, minimal: bool, rng: &mut R) -> Result<Vec<Vec<usize>>> {
    let n = g.vertex_count();
    let side = {
        let mut m = mask(n, s1);
        for &v in s2 {
            m[v] = true;
        }
        m
    };
    let interior: Vec<usize> = (0..n).filter(|&v| !side[v]).collect();
    let base_cut = min_side_separator(g, s1, s2)?;
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > 200 * count + 1000 {
            return Err(Error::Invariant("separator sampler made no progress".into()));
        }
        let mut x = match rng.gen_range(0..3) {
            0 => base_cut.clone(),
            _ => level_set_boundary(g, s1, &side, rng),
        };
        if rng.gen_bool(0.5) {
            let p = rng.gen_range(0.0..0.3);
            x.extend(interior.iter().copied().filter(|_| rng.gen_bool(p)));
        }
        x.sort_unstable();
        x.dedup();
        if x.is_empty() || !is_separator(g, s1, s2, &x)? {
            continue;
        }
        if minimal {
            let mut order = x.clone();
            if rng.gen_bool(0.5) {
                order.sort_by_key(|&v| g.coord(v));
            } else {
                order.shuffle(rng);
            }
            x = minimalize_in_order(g, s1, s2, &x, &order)?;
        }
        out.push(x);
    }
    Ok(out)
}

/// Vertices off the sides whose randomly weighted distance from `s1` reaches a
/// random threshold while some neighbour's does not.
fn level_set_boundary<R: Rng>(g: &GridGraph, s1: &[usize], side: &[bool], rng: &mut R) -> Vec<usize> {
    let n = g.vertex_count();
    let weight: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=8)).collect();
    let mut dist = vec![u64::MAX; n];
    let mut heap = std::collections::BinaryHeap::new();
    for &s in s1 {
        dist[s] = weight[s];
        heap.push(std::cmp::Reverse((weight[s], s)));
    }
    while let Some(std::cmp::Reverse((d, v))) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        g.for_each_neighbor(v, |u| {
            let nd = d + weight[u];
            if nd < dist[u] {
                dist[u] = nd;
                heap.push(std::cmp::Reverse((nd, u)));
            }
        });
    }
    let inner: Vec<u64> = (0..n).filter(|&v| !side[v]).map(|v| dist[v]).collect();
    if inner.is_empty() {
        return Vec::new();
    }
    let tau = inner[rng.gen_range(0..inner.len())];
    (0..n)
        .filter(|&v| !side[v] && dist[v] >= tau && g.neighbors(v).iter().any(|&u| dist[u] < tau))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::job_rng;
    use crate::grid::build_qn;

    fn faces(q: &GridGraph) -> (Vec<usize>, Vec<usize>) {
        (q.layer(0, 0), q.layer(0, q.side() - 1))
    }

    /// Box `[0, len) x [0, m)^2` inside `Q_max(len, m)`.
    fn bar(len: u32, m: u32) -> GridGraph {
        let q = build_qn(len.max(m)).unwrap();
        let cells = (0..len).flat_map(|x| (0..m).flat_map(move |y| (0..m).map(move |z| Coord::new(x, y, z))));
        q.induced(cells).unwrap()
    }

    #[test]
    fn planes_separate() {
        let q = build_qn(5).unwrap();
        let (s1, s2) = faces(&q);
        let mid = q.layer(0, 2);
        assert!(is_separator(&q, &s1, &s2, &mid).unwrap());
        assert!(!is_separator(&q, &s1, &s2, &[]).unwrap());
        assert!(!is_separator(&q, &s1, &s2, &mid[1..]).unwrap());
        assert!(matches!(is_separator(&q, &s1, &s2, &s1[..1]), Err(Error::SeparatorTouchesSide)));
    }

    #[test]
    fn min_cut_sizes() {
        let q2 = build_qn(2).unwrap();
        let (s1, s2) = faces(&q2);
        assert!(matches!(min_side_separator(&q2, &s1, &s2), Err(Error::NoSeparatorExists)));
        for m in 2..=3 {
            let g = bar(6, m);
            let (s1, s2) = (g.layer(0, 0), g.layer(0, 5));
            let cut = min_side_separator(&g, &s1, &s2).unwrap();
            assert_eq!(cut.len(), (m * m) as usize);
            assert!(is_separator(&g, &s1, &s2, &cut).unwrap());
        }
        let q3 = build_qn(3).unwrap();
        let (s1, s2) = faces(&q3);
        assert_eq!(min_side_separator(&q3, &s1, &s2).unwrap(), q3.layer(0, 1));
    }

    #[test]
    fn enlargement_cut_is_one_square() {
        let q = build_qn(6).unwrap();
        let p = Staircase::new(vec![
            Coord::new(0, 0, 0),
            Coord::new(1, 1, 0),
            Coord::new(2, 1, 1),
            Coord::new(3, 2, 1),
        ])
        .unwrap();
        let e = enlarge(&q, &p, 1).unwrap();
        assert_eq!(min_side_separator(e.graph(), e.left(), e.right()).unwrap().len(), 4);
    }

    #[test]
    fn minimalize_behaviour() {
        let q = build_qn(4).unwrap();
        let (s1, s2) = faces(&q);
        let plane = q.layer(0, 1);
        assert_eq!(minimalize(&q, &s1, &s2, &plane).unwrap().len(), 16);
        let mut more = plane.clone();
        more.push(q.index(Coord::new(2, 0, 0)).unwrap());
        let out = minimalize(&q, &s1, &s2, &more).unwrap();
        assert_eq!(out.len(), 16);
        assert_eq!(minimalize(&q, &s1, &s2, &out).unwrap(), out);
        assert!(is_minimal_separator(&q, &s1, &s2, &out).unwrap());
        assert!(matches!(minimalize(&q, &s1, &s2, &plane[1..]), Err(Error::NotSeparator)));
    }

    #[test]
    fn retraction_decomposes_closed_walks() {
        let q = build_qn(8).unwrap();
        let p = Staircase::new(vec![
            Coord::new(0, 0, 0),
            Coord::new(1, 1, 0),
            Coord::new(2, 1, 1),
            Coord::new(3, 1, 1),
            Coord::new(4, 2, 2),
        ])
        .unwrap();
        for b in 0..=2 {
            let e = enlarge(&q, &p, b).unwrap();
            let g = e.graph();
            let oe = OrientedEdges::canonical(g);
            // every edge walked there and back, and every triangle
            for (u, v) in g.edges() {
                let t = enlargement_triangles(&e, &oe, &[u, v, u]).unwrap();
                assert!(triangle_sum(&t, &oe).is_zero());
                for w in g.neighbors(u) {
                    if w > v && g.adjacent(v, w) {
                        let walk = [u, v, w, u];
                        let t = enlargement_triangles(&e, &oe, &walk).unwrap();
                        assert_eq!(triangle_sum(&t, &oe), indicator(&Walk::from_vertices(&oe, &walk).unwrap(), &oe));
                    }
                }
            }
        }
    }

    #[test]
    fn minimal_separators_connected() {
        let q = build_qn(8).unwrap();
        let p = Staircase::new(vec![
            Coord::new(0, 0, 0),
            Coord::new(1, 1, 0),
            Coord::new(2, 1, 1),
            Coord::new(3, 2, 1),
            Coord::new(4, 2, 1),
            Coord::new(5, 3, 2),
        ])
        .unwrap();
        let e = enlarge(&q, &p, 2).unwrap();
        let mut rng = job_rng(3, 0);
        let g = e.graph();
        for x in sample_separators(g, e.left(), e.right(), 20, true, &mut rng).unwrap() {
            assert!(check_separator_connected(&e, &x).unwrap());
            let w = connectivity_witness(&e, &x, x[0], *x.last().unwrap()).unwrap();
            assert!(w.certified);
            assert_eq!(w.integral_x, 2);
            assert_eq!(w.integral_y, 2);
        }
        // a single staircase vertex separates the b = 0 enlargement
        let e0 = enlarge(&q, &p, 0).unwrap();
        let mid = e0.graph().index(p.vertices()[2]).unwrap();
        assert!(check_separator_connected(&e0, &[mid]).unwrap());
    }

    #[test]
    fn blocking() {
        let q = build_qn(6).unwrap();
        let p = Staircase::straight(Coord::new(0, 0, 0), 5).unwrap();
        let all1 = Partition2::uniform(6, 1);
        assert!(is_blocked(&q, &p, 1, 1, &all1).unwrap());
        assert!(!is_blocked(&q, &p, 1, 2, &all1).unwrap());
        let mut part = Partition2::uniform(6, 2);
        for y in 0..6 {
            for z in 0..6 {
                part.class[crate::grid::full_index(6, Coord::new(2, y, z))] = 1;
            }
        }
        assert!(is_blocked(&q, &p, 1, 1, &part).unwrap());
        let comp = blocked_component(&q, &p, 1, 1, &part).unwrap();
        assert_eq!(comp.len(), 9);
        assert!(matches!(blocked_component(&q, &p, 1, 2, &all1), Err(Error::NotBlocked)));
    }

    #[test]
    fn partition_json() {
        let p = Partition2::uniform(2, 1);
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, r#"{"n":2,"class":[1,1,1,1,1,1,1,1]}"#);
        let bad: Partition2 = serde_json::from_str(r#"{"n":1,"class":[3]}"#).unwrap();
        assert!(bad.check().is_err());
    }
}
