//! Exhaustive and randomized checks of the calculus, separation and
//! connectivity properties. Each suite returns case and violation counts; sampled
//! suites draw sample `j` from stream `j` of the seed, so counts do not depend
//! on thread scheduling.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::calculus::{d, indicator, is_contractible, path_weights, strip_homotopy, verify_almost_homotopic, LFunction, LValue, OrientedEdges, Walk};
use crate::decomposition::{balanced_separation, decomposition_from_ordering, min_fill_ordering, WeightFunction};
use crate::error::Result;
use crate::exec::{job_rng, Execution};
use crate::graph::{is_connected_subset, Adjacency, Graph};
use crate::grid::{build_qn, enlarge, Coord, GridGraph, Staircase};
use crate::separators::{is_minimal_separator, connectivity_witness, sample_separators};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteStats {
    pub suite: String,
    pub mode: String,
    pub cases: u64,
    pub violations: u64,
    /// Suite-specific count, described by `note`.
    pub extra: u64,
    pub note: String,
}

impl SuiteStats {
    fn new(suite: &str, mode: &str, note: &str) -> Self {
        SuiteStats {
            suite: suite.into(),
            mode: mode.into(),
            cases: 0,
            violations: 0,
            extra: 0,
            note: note.into(),
        }
    }

    fn absorb(mut self, parts: impl IntoIterator<Item = (u64, u64, u64)>) -> Self {
        for (c, v, e) in parts {
            self.cases += c;
            self.violations += v;
            self.extra += e;
        }
        self
    }

    pub const CSV_HEADER: [&'static str; 6] = ["suite", "mode", "cases", "violations", "extra", "note"];

    pub fn csv_row(&self) -> [String; 6] {
        [
            self.suite.clone(),
            self.mode.clone(),
            self.cases.to_string(),
            self.violations.to_string(),
            self.extra.to_string(),
            self.note.clone(),
        ]
    }
}

const INTS: [LValue; 3] = [LValue::Neg, LValue::Zero, LValue::Pos];
const ALL: [LValue; 4] = [LValue::Neg, LValue::Zero, LValue::Pos, LValue::Star];

/// Dense `df` over all edges.
fn dense_d(f: &LFunction, oe: &OrientedEdges) -> Vec<i64> {
    let df = d(f, oe);
    (0..oe.edge_count()).map(|e| df.get(e)).collect()
}

fn dense_integral(w: &Walk, df: &[i64], oe: &OrientedEdges) -> i64 {
    indicator(w, oe).support().map(|(e, s)| s * df[e]).sum()
}

/// All assignments from `palette` to `set` (other vertices `0`) accepted by
/// `keep`, each with its dense `df`.
fn assignments(
    g: &GridGraph,
    oe: &OrientedEdges,
    set: &[usize],
    palette: &[LValue],
    keep: impl Fn(&LFunction) -> bool,
) -> Vec<(LFunction, Vec<i64>)> {
    let n = g.vertex_count();
    let total = palette.len().pow(set.len() as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut f = LFunction::constant(n, LValue::Zero);
        let mut c = code;
        for &v in set {
            f.set(v, palette[c % palette.len()]);
            c /= palette.len();
        }
        if keep(&f) {
            let df = dense_d(&f, oe);
            out.push((f, df));
        }
    }
    out
}

/// Every walk with at most `max_len` edges in `Q_n`, against every function
/// entire on its vertex set: `∫_W df = f(end) - f(start)`.
pub fn walk_integrals_exhaustive(n: u32, max_len: usize, exec: Execution) -> Result<SuiteStats> {
    let g = build_qn(n)?;
    let oe = OrientedEdges::canonical(&g);
    let parts = exec.map_range(g.vertex_count(), |start| -> Result<(u64, u64, u64)> {
        let mut cache: HashMap<Vec<usize>, Vec<(LFunction, Vec<i64>)>> = HashMap::new();
        let (mut cases, mut bad, mut walks) = (0u64, 0u64, 0u64);
        let mut stack = vec![vec![start]];
        while let Some(vs) = stack.pop() {
            walks += 1;
            let w = Walk::from_vertices(&oe, &vs)?;
            let mut set = vs.clone();
            set.sort_unstable();
            set.dedup();
            let fs = cache
                .entry(set.clone())
                .or_insert_with(|| assignments(&g, &oe, &set, &INTS, |f| f.is_entire_on(&g, &set)));
            let ind: Vec<(usize, i64)> = indicator(&w, &oe).support().collect();
            for (f, df) in fs.iter() {
                cases += 1;
                let lhs: i64 = ind.iter().map(|&(e, s)| s * df[e]).sum();
                let rhs = f.get(w.end()).as_int().unwrap() - f.get(w.start()).as_int().unwrap();
                if lhs != rhs {
                    bad += 1;
                }
            }
            if vs.len() <= max_len {
                for u in g.neighbors(*vs.last().unwrap()) {
                    let mut next = vs.clone();
                    next.push(u);
                    stack.push(next);
                }
            }
        }
        Ok((cases, bad, walks))
    });
    let parts: Vec<_> = parts.into_iter().collect::<Result<_>>()?;
    Ok(SuiteStats::new("walk_integral", "exhaustive", "walks").absorb(parts))
}

fn random_walk(g: &GridGraph, rng: &mut ChaCha8Rng, max_len: usize) -> Vec<usize> {
    let mut vs = vec![rng.gen_range(0..g.vertex_count())];
    for _ in 0..rng.gen_range(0..=max_len) {
        let nb = g.neighbors(*vs.last().unwrap());
        vs.push(*nb.choose(rng).unwrap());
    }
    vs
}

/// Random values from `palette` on `set`, then every vertex of `set` with a
/// `-1/+1` neighbour inside `set` (other than those in `fixed`) set to `0`,
/// which makes `f` continuous on `set`.
fn random_continuous(g: &GridGraph, set: &[usize], palette: &[LValue], fixed: &[usize], rng: &mut ChaCha8Rng) -> LFunction {
    let mut f = LFunction::constant(g.vertex_count(), LValue::Zero);
    for &v in set {
        if !fixed.contains(&v) {
            f.set(v, *palette.choose(rng).unwrap());
        }
    }
    let member: std::collections::HashSet<usize> = set.iter().copied().collect();
    for &v in set {
        if fixed.contains(&v) {
            continue;
        }
        if g.neighbors(v).into_iter().any(|u| member.contains(&u) && f.get(u).clash(f.get(v))) {
            f.set(v, LValue::Zero);
        }
    }
    f
}

pub fn walk_integrals_sampled(n: u32, samples: usize, seed: u64, exec: Execution) -> Result<SuiteStats> {
    let g = build_qn(n)?;
    let oe = OrientedEdges::canonical(&g);
    let parts = exec.map_range(samples, |j| -> Result<(u64, u64, u64)> {
        let mut rng = job_rng(seed, j as u64);
        let vs = random_walk(&g, &mut rng, 12);
        let mut set = vs.clone();
        set.sort_unstable();
        set.dedup();
        let f = random_continuous(&g, &set, &INTS, &[], &mut rng);
        let w = Walk::from_vertices(&oe, &vs)?;
        let lhs = dense_integral(&w, &dense_d(&f, &oe), &oe);
        let rhs = f.get(w.end()).as_int().unwrap() - f.get(w.start()).as_int().unwrap();
        Ok((1, (lhs != rhs) as u64, 0))
    });
    let parts: Vec<_> = parts.into_iter().collect::<Result<_>>()?;
    Ok(SuiteStats::new("walk_integral", "sampled", "").absorb(parts))
}

/// Unordered triangles of `g`.
fn triangles(g: &GridGraph) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 0..g.vertex_count() {
        for b in g.neighbors(a).into_iter().filter(|&b| b > a) {
            for c in g.neighbors(b).into_iter().filter(|&c| c > b) {
                if g.adjacent(a, c) {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

/// The six closed walks around a triangle.
fn triangle_walks(oe: &OrientedEdges, t: [usize; 3]) -> Result<Vec<Walk>> {
    let [a, b, c] = t;
    [[a, b, c], [b, c, a], [c, a, b], [a, c, b], [c, b, a], [b, a, c]]
        .iter()
        .map(|&[x, y, z]| Walk::from_vertices(oe, &[x, y, z, x]))
        .collect()
}

fn check_triangle(w: &Walk, f: &LFunction, df: &[i64], oe: &OrientedEdges) -> Result<(bool, bool)> {
    let v = dense_integral(w, df, oe);
    let contractible = is_contractible(w, f)?;
    Ok((v.abs() <= 1 && (!contractible || v == 0), contractible))
}

/// Every triangle of `Q_n`, both orientations and all starting points, against
/// every continuous assignment of `L` to its vertices: `|∫_T df| <= 1`, and
/// `0` for contractible triangles.
pub fn triangle_integrals_exhaustive(n: u32, exec: Execution) -> Result<SuiteStats> {
    let g = build_qn(n)?;
    let oe = OrientedEdges::canonical(&g);
    let tris = triangles(&g);
    let parts = exec.map_slice(&tris, |&t| -> Result<(u64, u64, u64)> {
        let walks = triangle_walks(&oe, t)?;
        let (mut cases, mut bad, mut contractible) = (0, 0, 0);
        for (f, df) in assignments(&g, &oe, &t, &ALL, |f| f.is_continuous_on(&g, &t)) {
            for w in &walks {
                let (ok, c) = check_triangle(w, &f, &df, &oe)?;
                cases += 1;
                bad += (!ok) as u64;
                contractible += c as u64;
            }
        }
        Ok((cases, bad, contractible))
    });
    let parts: Vec<_> = parts.into_iter().collect::<Result<_>>()?;
    Ok(SuiteStats::new("triangle", "exhaustive", "contractible cases").absorb(parts))
}

pub fn triangle_integrals_sampled(n: u32, samples: usize, seed: u64, exec: Execution) -> Result<SuiteStats> {
    let g = build_qn(n)?;
    let oe = OrientedEdges::canonical(&g);
    let tris = triangles(&g);
    let parts = exec.map_range(samples, |j| -> Result<(u64, u64, u64)> {
        let mut rng = job_rng(seed, j as u64);
        let t = *tris.choose(&mut rng).unwrap();
        let f = random_continuous(&g, &t, &ALL, &[], &mut rng);
        let df = dense_d(&f, &oe);
        let walks = triangle_walks(&oe, t)?;
        let w = walks.choose(&mut rng).unwrap();
        let (ok, c) = check_triangle(w, &f, &df, &oe)?;
        Ok((1, (!ok) as u64, c as u64))
    });
    let parts: Vec<_> = parts.into_iter().collect::<Result<_>>()?;
    Ok(SuiteStats::new("triangle", "sampled", "contractible cases").absorb(parts))
}

/// A random strip of parallel segments in an axis plane of `Q_n`: lines
/// along one in-plane axis, stacked along the other, possibly reversed and
/// stacked downwards.
fn random_strip(g: &GridGraph, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let n = g.side();
    let fixed = rng.gen_range(0..3);
    let value = rng.gen_range(0..n);
    let mut free: Vec<usize> = (0..3).filter(|&a| a != fixed).collect();
    free.shuffle(rng);
    let (along, across) = (free[0], free[1]);
    let s = rng.gen_range(0..n - 1);
    let e = rng.gen_range(s + 1..n);
    let mut c1 = rng.gen_range(0..n);
    let mut c2 = rng.gen_range(0..n);
    while c2 == c1 {
        c1 = rng.gen_range(0..n);
        c2 = rng.gen_range(0..n);
    }
    let reverse = rng.gen_bool(0.5);
    let stack: Vec<u32> = if c1 < c2 { (c1..=c2).collect() } else { (c2..=c1).rev().collect() };
    stack
        .into_iter()
        .map(|c| {
            let mut line: Vec<usize> = (s..=e)
                .map(|u| {
                    let mut p = [0u32; 3];
                    p[fixed] = value;
                    p[along] = u;
                    p[across] = c;
                    g.index(Coord::new(p[0], p[1], p[2])).unwrap()
                })
                .collect();
            if reverse {
                line.reverse();
            }
            line
        })
        .collect()
}

/// Almost-homotopic pairs from plane strips: the constructive certificate
/// verifies and `|∫_{W1} df - ∫_{W2} df| <= k`, with equality when `k = 0`.
pub fn strip_homotopies(n: u32, samples: usize, seed: u64, exec: Execution) -> Result<SuiteStats> {
    let g = build_qn(n.max(2))?;
    let oe = OrientedEdges::canonical(&g);
    let parts = exec.map_range(samples, |j| -> Result<(u64, u64, u64)> {
        let mut rng = job_rng(seed, j as u64);
        let lines = random_strip(&g, &mut rng);
        let q: Vec<usize> = lines.iter().map(|l| l[0]).collect();
        let r: Vec<usize> = lines.iter().map(|l| *l.last().unwrap()).collect();
        let all: Vec<usize> = (0..g.vertex_count()).collect();
        let palette: Vec<LValue> = ALL.iter().copied().filter(|_| rng.gen_bool(0.7)).collect();
        let palette = if palette.is_empty() { vec![LValue::Zero] } else { palette };
        let mut f = LFunction::constant(g.vertex_count(), LValue::Zero);
        let (cq, cr) = (*INTS.choose(&mut rng).unwrap(), *INTS.choose(&mut rng).unwrap());
        for &v in &q {
            f.set(v, cq);
        }
        for &v in &r {
            f.set(v, cr);
        }
        let fixed: Vec<usize> = q.iter().chain(&r).copied().collect();
        if fixed.iter().any(|&a| fixed.iter().any(|&b| g.adjacent(a, b) && f.get(a).clash(f.get(b)))) {
            // the two ends touch with opposite signs; flatten one of them
            for &v in &r {
                f.set(v, cq);
            }
        }
        let mut rest = random_continuous(&g, &all, &palette, &fixed, &mut rng);
        for &v in &fixed {
            rest.set(v, f.get(v));
        }
        // re-zero anything that now clashes with the fixed ends
        for v in 0..g.vertex_count() {
            if !fixed.contains(&v) && g.neighbors(v).into_iter().any(|u| rest.get(u).clash(rest.get(v))) {
                rest.set(v, LValue::Zero);
            }
        }
        let f = rest;
        if !f.is_continuous(&g) {
            return Ok((1, 1, 0));
        }
        let cert = strip_homotopy(&oe, &lines, &f)?;
        let ok = verify_almost_homotopic(&cert.w1, &cert.w2, &cert.q, &cert.r, &cert.triangles, &f, cert.k, &oe)?;
        let df = dense_d(&f, &oe);
        let gap = (dense_integral(&cert.w1, &df, &oe) - dense_integral(&cert.w2, &df, &oe)).abs();
        let holds = ok && gap <= cert.k as i64 && (cert.k > 0 || gap == 0);
        Ok((1, (!holds) as u64, (cert.k == 0) as u64))
    });
    let parts: Vec<_> = parts.into_iter().collect::<Result<_>>()?;
    Ok(SuiteStats::new("strip", "sampled", "pairs with k = 0").absorb(parts))
}

fn random_graph(rng: &mut ChaCha8Rng) -> Graph {
    let n = rng.gen_range(3..=18);
    let mut g = Graph::empty(n);
    match rng.gen_range(0..3) {
        0 => {
            let p = rng.gen_range(0.05..0.35);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        g.add_edge(u, v);
                    }
                }
            }
        }
        1 => {
            // random tree plus a few chords
            for v in 1..n {
                g.add_edge(rng.gen_range(0..v), v);
            }
            for _ in 0..rng.gen_range(0..=n / 3) {
                let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
                if a != b && !g.adjacent(a, b) {
                    g.add_edge(a, b);
                }
            }
        }
        _ => {
            // a random partial k-tree
            let k = rng.gen_range(1..=3usize).min(n - 1);
            for v in 1..n {
                let mut pool: Vec<usize> = (0..v).collect();
                pool.shuffle(rng);
                for &u in pool.iter().take(k) {
                    if rng.gen_bool(0.8) {
                        g.add_edge(u, v);
                    }
                }
            }
        }
    }
    g
}

/// Balanced separations from random decompositions and weights: `(K, L)` is a
/// separation, `λ(V)/3 <= λ(K \ L) <= 2λ(V)/3` and `|K ∩ L| <= t + 1`.
pub fn balanced_separations(samples: usize, seed: u64, exec: Execution) -> Result<SuiteStats> {
    let parts = exec.map_range(samples, |j| -> Result<(u64, u64, u64)> {
        let mut rng = job_rng(seed, j as u64);
        for _ in 0..64 {
            let g = random_graph(&mut rng);
            let n = g.vertex_count();
            let order: Vec<usize> = if rng.gen_bool(0.5) {
                min_fill_ordering(&g)
            } else {
                let mut o: Vec<usize> = (0..n).collect();
                o.shuffle(&mut rng);
                o
            };
            let td = decomposition_from_ordering(&g, &order);
            let t = td.width().max(0);
            let need = 2 * (3 * t + 3);
            if (2 * n) as i64 <= need {
                continue;
            }
            let den = if rng.gen_bool(0.5) { 2 } else { rng.gen_range(1..=6) };
            let mut num: Vec<i64> = (0..n).map(|_| rng.gen_range(-den..=den)).collect();
            // raise weights until the mass condition holds
            let mut idx: Vec<usize> = (0..n).collect();
            idx.shuffle(&mut rng);
            let mut k = 0;
            while num.iter().sum::<i64>() < (3 * t + 3) * den && k < n {
                num[idx[k]] = den;
                k += 1;
            }
            if num.iter().sum::<i64>() < (3 * t + 3) * den {
                continue;
            }
            let w = WeightFunction::new(num, den)?;
            let sep = balanced_separation(&g, &td, &w)?;
            let total = w.total();
            let mass = w.mass(&sep.k_minus_l());
            let ok = sep.is_separation(&g)
                && 3 * mass >= total
                && 3 * mass <= 2 * total
                && sep.intersection().len() as i64 <= t + 1;
            return Ok((1, (!ok) as u64, 0));
        }
        Ok((0, 0, 1))
    });
    let parts: Vec<_> = parts.into_iter().collect::<Result<_>>()?;
    Ok(SuiteStats::new("separation", "sampled", "draws without a valid instance").absorb(parts))
}

fn random_path(g: &GridGraph, rng: &mut ChaCha8Rng, max_len: usize) -> Vec<usize> {
    let mut vs = vec![rng.gen_range(0..g.vertex_count())];
    let target = rng.gen_range(2..=max_len);
    while vs.len() < target {
        let options: Vec<usize> = g
            .neighbors(*vs.last().unwrap())
            .into_iter()
            .filter(|u| !vs.contains(u))
            .collect();
        match options.choose(rng) {
            Some(&u) => vs.push(u),
            None => break,
        }
    }
    vs
}

/// `½∫_P dg = λ_{P,f}(X)` for `X = g^{-1}(0) ∩ V(P)`, and integrality when
/// `g` is holomorphic on `P`.
pub fn path_weight_identity(n: u32, samples: usize, seed: u64, exec: Execution) -> Result<SuiteStats> {
    let g = build_qn(n.max(2))?;
    let oe = OrientedEdges::canonical(&g);
    let parts = exec.map_range(samples, |j| -> Result<(u64, u64, u64)> {
        let mut rng = job_rng(seed, j as u64);
        for _ in 0..200 {
            let p = random_path(&g, &mut rng, 12);
            if p.len() < 2 {
                continue;
            }
            let mut f = LFunction::constant(g.vertex_count(), LValue::Zero);
            for v in 0..g.vertex_count() {
                f.set(v, *ALL.choose(&mut rng).unwrap());
            }
            let stay = rng.gen_range(0.3..0.9);
            let mut cur = if rng.gen_bool(0.5) { -1i64 } else { 1 };
            for &v in &p {
                if !rng.gen_bool(stay) {
                    cur = (cur + if rng.gen_bool(0.5) { 1 } else { -1 }).clamp(-1, 1);
                }
                f.set(v, LValue::from_int(cur).unwrap());
            }
            let (first, last) = (f.get(p[0]), f.get(*p.last().unwrap()));
            if first == LValue::Zero || last == LValue::Zero || !f.is_entire_on(&g, &p) {
                continue;
            }
            let mut gf = f.clone();
            let star_rate = rng.gen_range(0.0..1.0);
            for &v in &p {
                if f.get(v) == LValue::Zero && rng.gen_bool(star_rate) {
                    gf.set(v, LValue::Star);
                }
            }
            for v in 0..g.vertex_count() {
                if !p.contains(&v) {
                    gf.set(v, *ALL.choose(&mut rng).unwrap());
                }
            }
            let walk = Walk::from_vertices(&oe, &p)?;
            let doubled_integral = dense_integral(&walk, &dense_d(&gf, &oe), &oe);
            let weights = path_weights(&walk, &f, &g)?;
            let lambda_x: i64 = weights
                .iter()
                .filter(|(v, _)| gf.get(*v) == LValue::Zero)
                .map(|(_, w)| w.doubled())
                .sum();
            let holo = gf.is_holomorphic_on(&g, &p);
            let ok = doubled_integral == lambda_x && (!holo || lambda_x % 2 == 0);
            return Ok((1, (!ok) as u64, holo as u64));
        }
        Ok((0, 0, 0))
    });
    let parts: Vec<_> = parts.into_iter().collect::<Result<_>>()?;
    Ok(SuiteStats::new("path_weight", "sampled", "holomorphic instances").absorb(parts))
}

fn random_staircase(rng: &mut ChaCha8Rng, len: usize) -> Staircase {
    let mut c = Coord::new(0, rng.gen_range(0..3), rng.gen_range(0..3));
    let mut vs = vec![c];
    for _ in 1..len {
        c = Coord::new(c.x + 1, c.y + rng.gen_range(0..=1), c.z + rng.gen_range(0..=1));
        vs.push(c);
    }
    Staircase::new(vs).expect("steps are staircase steps")
}

/// Minimal side separators of random b-enlargements (`b <= 2`, length
/// `<= 10`) induce connected subgraphs, and for a pair of their vertices the
/// constructive witness certifies the homotopy argument.
pub fn enlargement_separators(samples: usize, seed: u64, exec: Execution) -> Result<SuiteStats> {
    let host = build_qn(16)?;
    let parts = exec.map_range(samples, |j| -> Result<(u64, u64, u64)> {
        let mut rng = job_rng(seed, j as u64);
        let b = rng.gen_range(0..=2);
        let len = rng.gen_range(3..=10);
        let p = random_staircase(&mut rng, len);
        let e = enlarge(&host, &p, b)?;
        let xs = sample_separators(e.graph(), e.left(), e.right(), 1, true, &mut rng)?;
        let x = &xs[0];
        let minimal = is_minimal_separator(e.graph(), e.left(), e.right(), x)?;
        let connected = is_connected_subset(e.graph(), x);
        let (a, c) = (*x.choose(&mut rng).unwrap(), *x.choose(&mut rng).unwrap());
        let w = connectivity_witness(&e, x, a, c)?;
        let ok = minimal && connected && w.certified && w.integral_x == 2 && w.integral_y == 2;
        Ok((1, (!ok) as u64, x.len() as u64))
    });
    let parts: Vec<_> = parts.into_iter().collect::<Result<_>>()?;
    Ok(SuiteStats::new("enlargement", "sampled", "total separator size").absorb(parts))
}
