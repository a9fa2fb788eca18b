//! Acceptance suite: one PASS/FAIL line per criterion, with wall-clock limits.
//!
//! Checks lean on oracles written here rather than on library internals:
//! coordinate adjacency, brute-force elimination orderings, a subset dynamic
//! program for treewidth, hitting sets by enumeration and a forest-partition
//! backtracker.

use std::collections::{HashMap, HashSet, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use slabwidth::builder::{find_blocked_or_bramble, required_side, verify_outcome, BuildOutcome, BuildParams};
use slabwidth::calculus::{d, integrate, LFunction, LValue, OrientedEdges, Walk};
use slabwidth::decomposition::{bramble_order, crosses_bramble, exact_treewidth, triangulated_plane, validate_bramble};
use slabwidth::exec::Execution;
use slabwidth::graph::{Adjacency, Graph};
use slabwidth::grid::{build_qn, Coord, GridGraph};
use slabwidth::harness::audit::mass_identity;
use slabwidth::harness::search::{exhaustive_search, SearchReport};
use slabwidth::harness::suites;
use slabwidth::separators::Partition2;
use slabwidth::slab::{audit_separator, box_grid, qn_as_slab, AuditOptions, TwStatus};

type Outcome = Result<String, String>;

/// Number, name, time limit in seconds, check.
type Criterion = (u32, &'static str, u64, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn exec() -> Execution {
    Execution::best()
}

// ---------------------------------------------------------------------------
// oracles

fn cube_adjacent(a: Coord, b: Coord) -> bool {
    let d = [b.x as i64 - a.x as i64, b.y as i64 - a.y as i64, b.z as i64 - a.z as i64];
    d != [0, 0, 0] && (d.iter().all(|&c| c == 0 || c == 1) || d.iter().all(|&c| c == 0 || c == -1))
}

/// Bitmask adjacency of a graph with at most 64 vertices.
fn masks<G: Adjacency>(g: &G) -> Vec<u64> {
    (0..g.vertex_count())
        .map(|v| g.neighbors(v).into_iter().fold(0u64, |m, u| m | 1 << u))
        .collect()
}

fn elimination_width(adj: &[u64], order: &[usize]) -> i64 {
    let mut adj = adj.to_vec();
    let mut alive: u64 = if adj.len() == 64 { !0 } else { (1 << adj.len()) - 1 };
    let mut width = -1;
    for &v in order {
        let nb = adj[v] & alive & !(1 << v);
        width = width.max(nb.count_ones() as i64);
        let mut rest = nb;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            adj[u] |= nb & !(1 << u);
        }
        alive &= !(1 << v);
    }
    width
}

/// Minimum over every elimination ordering (Heap's algorithm).
fn brute_force_treewidth(adj: &[u64]) -> i64 {
    let n = adj.len();
    if n == 0 {
        return -1;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0; n];
    let mut best = elimination_width(adj, &perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            best = best.min(elimination_width(adj, &perm));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best
}

/// `TW(S) = min_v max(TW(S - v), |Q(S - v, v)|)` over vertex subsets, where
/// `Q(S, v)` is the set of vertices outside `S + v` reachable from `v` through `S`.
fn subset_dp_treewidth(adj: &[u64]) -> i64 {
    let n = adj.len();
    assert!(n <= 22, "subset oracle is exponential");
    if n == 0 {
        return -1;
    }
    let q = |s: u64, v: usize| -> i64 {
        let mut seen = 1u64 << v;
        let mut stack = vec![v];
        let mut out = 0u64;
        while let Some(u) = stack.pop() {
            let mut nb = adj[u] & !seen;
            seen |= nb;
            while nb != 0 {
                let w = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                if s >> w & 1 == 1 {
                    stack.push(w);
                } else {
                    out |= 1 << w;
                }
            }
        }
        out.count_ones() as i64
    };
    let full = (1usize << n) - 1;
    let mut tw = vec![i64::MAX; full + 1];
    tw[0] = -1;
    for s in 1..=full {
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let without = s & !(1 << v);
            tw[s] = tw[s].min(tw[without].max(q(without as u64, v)));
        }
    }
    tw[full]
}

fn induced_masks(adj: &[u64], members: &[usize]) -> Vec<u64> {
    members
        .iter()
        .map(|&v| {
            members
                .iter()
                .enumerate()
                .filter(|&(_, &u)| adj[v] >> u & 1 == 1)
                .fold(0u64, |m, (i, _)| m | 1 << i)
        })
        .collect()
}

/// Whether the vertex set of `g` splits into two induced forests.
fn splits_into_two_forests(g: &GridGraph) -> (bool, u64) {
    let n = g.vertex_count();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|v| (0..v).filter(|&u| cube_adjacent(g.coord(u), g.coord(v))).collect())
        .collect();
    fn closes_cycle(adj: &[Vec<usize>], colour: &[u8], v: usize, c: u8) -> bool {
        // v joins class c; a cycle appears iff two earlier c-neighbours are already connected
        let earlier: Vec<usize> = adj[v].iter().copied().filter(|&u| colour[u] == c).collect();
        let mut comp = vec![usize::MAX; colour.len()];
        for (id, &s) in earlier.iter().enumerate() {
            if comp[s] != usize::MAX {
                return true;
            }
            let mut queue = VecDeque::from([s]);
            comp[s] = id;
            while let Some(u) = queue.pop_front() {
                for w in (0..colour.len()).filter(|&w| colour[w] == c && w != v) {
                    let linked = adj[u].contains(&w) || adj[w].contains(&u);
                    if linked && comp[w] == usize::MAX {
                        comp[w] = id;
                        queue.push_back(w);
                    }
                }
            }
        }
        false
    }
    fn go(adj: &[Vec<usize>], colour: &mut Vec<u8>, v: usize, nodes: &mut u64) -> bool {
        *nodes += 1;
        if v == colour.len() {
            return true;
        }
        for c in [1u8, 2] {
            if !closes_cycle(adj, colour, v, c) {
                colour[v] = c;
                if go(adj, colour, v + 1, nodes) {
                    return true;
                }
                colour[v] = 0;
            }
        }
        false
    }
    let mut colour = vec![0u8; n];
    let mut nodes = 0;
    let found = go(&adj, &mut colour, 0, &mut nodes);
    (found, nodes)
}

fn coords_connected(set: &[Coord]) -> bool {
    if set.is_empty() {
        return false;
    }
    let mut seen = vec![false; set.len()];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        for j in 0..set.len() {
            if !seen[j] && cube_adjacent(set[i], set[j]) {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    seen.iter().all(|&s| s)
}

fn touch(a: &[Coord], b: &[Coord]) -> bool {
    a.iter().any(|&x| b.iter().any(|&y| x == y || cube_adjacent(x, y)))
}

/// Smallest hitting set of `sets`, by enumeration of candidate subsets up to
/// size `limit`; `None` when every hitting set is larger.
fn min_hitting_set<T: Copy + Eq + std::hash::Hash + Ord>(sets: &[Vec<T>], limit: usize) -> Option<usize> {
    let mut universe: Vec<T> = sets.iter().flatten().copied().collect();
    universe.sort();
    universe.dedup();
    let members: Vec<HashSet<T>> = sets.iter().map(|s| s.iter().copied().collect()).collect();
    fn hits<T: Eq + std::hash::Hash>(members: &[HashSet<T>], chosen: &[T]) -> bool {
        members.iter().all(|m| chosen.iter().any(|c| m.contains(c)))
    }
    fn choose<T: Copy + Eq + std::hash::Hash>(
        universe: &[T],
        members: &[HashSet<T>],
        k: usize,
        start: usize,
        chosen: &mut Vec<T>,
    ) -> bool {
        if chosen.len() == k {
            return hits(members, chosen);
        }
        for i in start..universe.len() {
            chosen.push(universe[i]);
            if choose(universe, members, k, i + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    (0..=limit).find(|&k| choose(&universe, &members, k, 0, &mut Vec::new()))
}

fn random_graph(rng: &mut ChaCha8Rng) -> Graph {
    let n = rng.gen_range(1..=8);
    let p = rng.gen_range(0.1..0.9);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

// ---------------------------------------------------------------------------
// criteria

fn walk_integrals() -> Outcome {
    let g = build_qn(2).map_err(|e| e.to_string())?;
    let oe = OrientedEdges::canonical(&g);
    let n = g.vertex_count();
    let mut fs_by_set: HashMap<Vec<usize>, Vec<(Vec<i64>, slabwidth::calculus::OneChain)>> = HashMap::new();
    let (mut walks, mut cases, mut bad) = (0u64, 0u64, 0u64);
    let mut stack: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    while let Some(vs) = stack.pop() {
        walks += 1;
        let mut set = vs.clone();
        set.sort_unstable();
        set.dedup();
        let fs = fs_by_set.entry(set.clone()).or_insert_with(|| {
            let mut out = Vec::new();
            for code in 0..3usize.pow(set.len() as u32) {
                let mut vals = vec![0i64; n];
                let mut c = code;
                for &v in &set {
                    vals[v] = (c % 3) as i64 - 1;
                    c /= 3;
                }
                let entire = set
                    .iter()
                    .all(|&a| set.iter().all(|&b| !cube_adjacent(g.coord(a), g.coord(b)) || (vals[a] - vals[b]).abs() < 2));
                if entire {
                    let f = LFunction::new(vals.iter().map(|&x| LValue::from_int(x).unwrap()).collect());
                    out.push((vals, d(&f, &oe)));
                }
            }
            out
        });
        let w = Walk::from_vertices(&oe, &vs).map_err(|e| e.to_string())?;
        for (vals, df) in fs.iter() {
            cases += 1;
            if integrate(&w, df, &oe) != vals[*vs.last().unwrap()] - vals[vs[0]] {
                bad += 1;
            }
        }
        if vs.len() <= 5 {
            for u in 0..n {
                if cube_adjacent(g.coord(*vs.last().unwrap()), g.coord(u)) {
                    let mut next = vs.clone();
                    next.push(u);
                    stack.push(next);
                }
            }
        }
    }
    let suite = suites::walk_integrals_exhaustive(2, 5, exec()).map_err(|e| e.to_string())?;
    ensure!(bad == 0, "{bad} of {cases} walk/function pairs disagree");
    ensure!(suite.violations == 0, "suite reports {} violations", suite.violations);
    ensure!(suite.cases == cases && suite.extra == walks, "suite covered {} cases over {} walks, oracle {cases} over {walks}", suite.cases, suite.extra);
    Ok(format!("{walks} walks, {cases} walk/function pairs, 0 violations"))
}

fn triangle_integrals() -> Outcome {
    let g = build_qn(3).map_err(|e| e.to_string())?;
    let oe = OrientedEdges::canonical(&g);
    let n = g.vertex_count();
    let all = [LValue::Neg, LValue::Zero, LValue::Pos, LValue::Star];
    let (mut triangles, mut cases, mut contractible, mut bad) = (0u64, 0u64, 0u64, 0u64);
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let (ca, cb, cc) = (g.coord(a), g.coord(b), g.coord(c));
                if !(cube_adjacent(ca, cb) && cube_adjacent(cb, cc) && cube_adjacent(ca, cc)) {
                    continue;
                }
                triangles += 1;
                let t = [a, b, c];
                for code in 0..64 {
                    let vals = [all[code % 4], all[code / 4 % 4], all[code / 16]];
                    let pairs = [(vals[0], vals[1]), (vals[1], vals[2]), (vals[0], vals[2])];
                    let signed = |x: LValue, y: LValue| {
                        matches!((x, y), (LValue::Neg, LValue::Pos) | (LValue::Pos, LValue::Neg))
                    };
                    let zero_star = |x: LValue, y: LValue| {
                        matches!((x, y), (LValue::Zero, LValue::Star) | (LValue::Star, LValue::Zero))
                    };
                    if pairs.iter().any(|&(x, y)| signed(x, y)) {
                        continue;
                    }
                    let holo = !pairs.iter().any(|&(x, y)| zero_star(x, y));
                    let mut f = LFunction::constant(n, LValue::Zero);
                    for i in 0..3 {
                        f.set(t[i], vals[i]);
                    }
                    let df = d(&f, &oe);
                    for [x, y, z] in [[a, b, c], [b, c, a], [c, a, b], [a, c, b], [c, b, a], [b, a, c]] {
                        let w = Walk::from_vertices(&oe, &[x, y, z, x]).map_err(|e| e.to_string())?;
                        let v = integrate(&w, &df, &oe);
                        cases += 1;
                        contractible += holo as u64;
                        if v.abs() > 1 || (holo && v != 0) {
                            bad += 1;
                        }
                    }
                }
            }
        }
    }
    let suite = suites::triangle_integrals_exhaustive(3, exec()).map_err(|e| e.to_string())?;
    ensure!(bad == 0, "{bad} triangle cases out of bounds");
    ensure!(suite.violations == 0, "suite reports {} violations", suite.violations);
    ensure!(suite.cases == cases && suite.extra == contractible, "suite covered {}/{} cases, oracle {cases}/{contractible}", suite.cases, suite.extra);
    Ok(format!("{triangles} triangles, {cases} oriented cases, {contractible} contractible, 0 violations"))
}

fn strip_homotopies() -> Outcome {
    let s = suites::strip_homotopies(3, 1500, 101, exec()).map_err(|e| e.to_string())?;
    ensure!(s.cases >= 1000, "only {} pairs", s.cases);
    ensure!(s.violations == 0, "{} violations", s.violations);
    ensure!(s.extra < s.cases, "no pair with k > 0");
    Ok(format!("{} certified pairs ({} with k = 0), 0 violations", s.cases, s.extra))
}

fn path_weights() -> Outcome {
    let s = suites::path_weight_identity(3, 1200, 202, exec()).map_err(|e| e.to_string())?;
    ensure!(s.cases >= 1000, "only {} instances", s.cases);
    ensure!(s.violations == 0, "{} violations", s.violations);
    ensure!(s.extra > 0 && s.extra < s.cases, "instances are all or none holomorphic");
    Ok(format!("{} instances ({} holomorphic), 0 violations", s.cases, s.extra))
}

fn balanced_separations() -> Outcome {
    let s = suites::balanced_separations(10_000, 303, exec()).map_err(|e| e.to_string())?;
    ensure!(s.cases >= 10_000, "only {} instances ({} empty draws)", s.cases, s.extra);
    ensure!(s.violations == 0, "{} violations", s.violations);
    Ok(format!("{} instances, 0 violations", s.cases))
}

fn mass_identity_check() -> Outcome {
    let mut notes = Vec::new();
    for n in [2u32, 3] {
        let len = 6;
        let s = mass_identity(n, len, 100, 404 + n as u64, exec()).map_err(|e| e.to_string())?;
        let n2 = (n * n) as usize;
        ensure!(s.lambda_exact == 100, "n = {n}: λ(X) = n² in {} of 100", s.lambda_exact);
        ensure!(s.integrals_exact == 100, "n = {n}: path integrals exact in {} of 100", s.integrals_exact);
        // packing: the x-lines are n² vertex-disjoint side-to-side paths, so no
        // separator is smaller; the plane x = 1 is a separator of size n²
        let g = box_grid(len, n).map_err(|e| e.to_string())?;
        let mut used = HashSet::new();
        let mut packed = 0;
        for y in 0..n {
            for z in 0..n {
                let line: Vec<Coord> = (0..len).map(|x| Coord::new(x, y, z)).collect();
                let ok = line.windows(2).all(|w| cube_adjacent(w[0], w[1])) && line.iter().all(|c| g.contains(*c) && used.insert(*c));
                packed += ok as usize;
            }
        }
        let plane_separates = (0..g.vertex_count()).all(|u| {
            (0..g.vertex_count()).all(|v| !cube_adjacent(g.coord(u), g.coord(v)) || !(g.coord(u).x == 0 && g.coord(v).x >= 2))
        });
        ensure!(packed == n2 && plane_separates, "n = {n}: packing {packed}");
        ensure!(s.min_cut == n2 && s.disjoint_paths == n2, "n = {n}: max-flow {} vs packing {}", s.min_cut, s.disjoint_paths);
        notes.push(format!("n = {n}: 100/100 exact, min cut {} = packing {packed}", s.min_cut));
    }
    Ok(notes.join("; "))
}

fn enlargement_separators() -> Outcome {
    let s = suites::enlargement_separators(120, 505, exec()).map_err(|e| e.to_string())?;
    ensure!(s.cases >= 100, "only {} separators", s.cases);
    ensure!(s.violations == 0, "{} separators minimal-but-disconnected or uncertified", s.violations);
    Ok(format!("{} minimal separators, all connected, mean size {:.1}", s.cases, s.extra as f64 / s.cases as f64))
}

fn treewidth_oracle() -> Outcome {
    let mut graphs: Vec<(String, Graph)> = vec![
        ("Q_2".into(), Graph::from_adjacency(&build_qn(2).map_err(|e| e.to_string())?)),
        ("plane 2".into(), Graph::from_adjacency(&triangulated_plane(2).map_err(|e| e.to_string())?)),
        ("plane 3".into(), Graph::from_adjacency(&triangulated_plane(3).map_err(|e| e.to_string())?)),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    for i in 0..50 {
        graphs.push((format!("random {i}"), random_graph(&mut rng)));
    }
    let mut widths = Vec::new();
    for (name, g) in &graphs {
        let (w, td) = exact_treewidth(g).map_err(|e| e.to_string())?;
        let oracle = brute_force_treewidth(&masks(g));
        ensure!(w == oracle, "{name}: solver {w}, brute force {oracle}");
        ensure!(td.validate(g) && td.width() == w, "{name}: decomposition invalid");
        widths.push(w);
    }
    Ok(format!(
        "{} graphs agree (Q_2 {}, planes {} and {})",
        graphs.len(),
        widths[0],
        widths[1],
        widths[2]
    ))
}

fn bramble_duality() -> Outcome {
    let mut notes = Vec::new();
    for t in [2u32, 3] {
        let (g, b) = crosses_bramble(t).map_err(|e| e.to_string())?;
        let coords: Vec<Vec<Coord>> = b.sets.iter().map(|s| s.iter().map(|&v| g.coord(v)).collect()).collect();
        ensure!(coords.iter().all(|s| coords_connected(s)), "t = {t}: a cross is disconnected");
        ensure!(coords.iter().all(|a| coords.iter().all(|c| touch(a, c))), "t = {t}: crosses do not touch");
        let oracle = min_hitting_set(&b.sets, t as usize).ok_or("no hitting set of size t")?;
        let order = bramble_order(&g, &b).map_err(|e| e.to_string())?;
        let tw = exact_treewidth(&g).map_err(|e| e.to_string())?.0;
        ensure!(validate_bramble(&g, &b), "t = {t}: library rejects the bramble");
        ensure!(order == t as usize && oracle == t as usize, "t = {t}: order {order}, oracle {oracle}");
        ensure!(tw >= t as i64 - 1, "t = {t}: treewidth {tw}");
        notes.push(format!("crosses t = {t}: order {order}, tw {tw}"));
    }
    let biases = [0.01, 0.03, 0.05, 0.1, 0.2, 0.35, 0.5, 0.65, 0.8, 0.95];
    for (t, b) in [(0u32, 1u32), (1, 1)] {
        let side = required_side(t, b) as u32;
        let host = build_qn(side).map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(707 + t as u64);
        let (mut brambles, mut blocked) = (0, 0);
        for k in 0..60 {
            let bias = biases[k % biases.len()];
            let class = (0..host.vertex_count()).map(|_| if rng.gen_bool(bias) { 1 } else { 2 }).collect();
            let part = Partition2::new(side, class).map_err(|e| e.to_string())?;
            let colour = 1 + (k / biases.len() % 2) as u8;
            let params = BuildParams {
                t,
                b,
                colour,
                override_schedule: false,
                exec: exec(),
            };
            let outcome = find_blocked_or_bramble(&host, &part, &params).map_err(|e| e.to_string())?;
            let check = verify_outcome(&host, &part, &outcome, t).map_err(|e| e.to_string())?;
            ensure!(check.valid, "(t, b) = ({t}, {b}), partition {k}: {:?}", check.notes);
            match &outcome {
                BuildOutcome::Bramble(cert) => {
                    brambles += 1;
                    let sets = &cert.sets;
                    ensure!(sets.iter().flatten().all(|&c| part.of(c) == cert.colour), "partition {k}: bramble leaves its class");
                    ensure!(sets.iter().all(|s| coords_connected(s)), "partition {k}: disconnected bramble set");
                    ensure!(sets.iter().all(|a| sets.iter().all(|c| touch(a, c))), "partition {k}: bramble sets do not touch");
                    ensure!(min_hitting_set(sets, t as usize).is_none(), "partition {k}: hit by {} or fewer vertices", t);
                }
                BuildOutcome::Blocked { .. } => blocked += 1,
                BuildOutcome::Inconclusive { reason } => return Err(format!("partition {k}: inconclusive ({reason})")),
            }
        }
        notes.push(format!("(t, b) = ({t}, {b}) on Q_{side}: {brambles} brambles, {blocked} blocked, all verified"));
    }
    Ok(notes.join("; "))
}

fn partition_search() -> Outcome {
    let g2 = build_qn(2).map_err(|e| e.to_string())?;
    let adj2 = masks(&g2);
    let mut best = i64::MAX;
    for mask in 0u32..256 {
        let class1: Vec<usize> = (0..8).filter(|&v| mask >> v & 1 == 1).collect();
        let class2: Vec<usize> = (0..8).filter(|&v| mask >> v & 1 == 0).collect();
        let w1 = brute_force_treewidth(&induced_masks(&adj2, &class1));
        let w2 = brute_force_treewidth(&induced_masks(&adj2, &class2));
        best = best.min(w1.max(w2));
    }
    let r2 = exhaustive_search(2, exec()).map_err(|e| e.to_string())?;
    ensure!(r2.value == best && best >= 1, "Q_2: search {}, brute force {best}", r2.value);

    let g3 = build_qn(3).map_err(|e| e.to_string())?;
    let a = exhaustive_search(3, Execution::Parallel).map_err(|e| e.to_string())?;
    let b = exhaustive_search(3, Execution::Sequential).map_err(|e| e.to_string())?;
    ensure!(a == b, "Q_3 runs differ");
    let archived: SearchReport = serde_json::from_str(
        &std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../results/q3_exhaustive.json")).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    ensure!(archived == a, "Q_3 result differs from the archived run");
    // independent bounds: the witness classes have width <= value, and no split
    // into two forests exists when value >= 2
    let adj3 = masks(&g3);
    for colour in [1, 2] {
        let w = subset_dp_treewidth(&induced_masks(&adj3, &a.witness.members(colour)));
        ensure!(w <= a.value && w == a.class_widths[colour as usize - 1], "Q_3 witness class {colour} has width {w}");
    }
    let (forests, nodes) = splits_into_two_forests(&g3);
    ensure!((a.value >= 2) == !forests, "Q_3 value {} but forest split exists: {forests}", a.value);
    Ok(format!(
        "Q_2 min-max width {} (brute force {best}); Q_3 value {} stable and archived, witness classes {:?}, no two-forest split ({nodes} nodes)",
        r2.value, a.value, a.class_widths
    ))
}

fn middle_plane_certificate() -> Outcome {
    let s = qn_as_slab(9).map_err(|e| e.to_string())?;
    let coords = s.coords.clone().ok_or("slab without coordinates")?;
    let x: Vec<usize> = (0..coords.len()).filter(|&v| coords[v].x == 4).collect();
    let opts = AuditOptions {
        guard: 40,
        certify_width: Some(2),
        ..AuditOptions::default()
    };
    let r = audit_separator(&s, &x, &opts).map_err(|e| e.to_string())?;
    let expected = (9.0 / 18f64.sqrt() - 1.0).ceil() as i64;
    ensure!(r.bound == expected, "bound {} vs {expected}", r.bound);
    ensure!(r.tw.status == TwStatus::Certified && r.tw.lower >= 2, "width not certified: {:?}", r.tw);
    ensure!(r.pass, "audit did not pass");
    // a triangle in G[X] already rules out width 1
    let xc: Vec<Coord> = x.iter().map(|&v| coords[v]).collect();
    let triangle = xc.iter().any(|&a| {
        xc.iter()
            .any(|&b| cube_adjacent(a, b) && xc.iter().any(|&c| cube_adjacent(a, c) && cube_adjacent(b, c)))
    });
    ensure!(triangle, "G[X] has no triangle");
    Ok(format!("|X| = {}, certified tw >= {} = bound {expected}", x.len(), r.tw.lower))
}

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "walk integrals telescope in Q_2", 10, walk_integrals),
        (2, "triangle integrals in Q_3", 10, triangle_integrals),
        (3, "almost-homotopic strip pairs", 60, strip_homotopies),
        (4, "path weights recover integrals", 60, path_weights),
        (5, "balanced separations", 120, balanced_separations),
        (6, "separator mass identity", 60, mass_identity_check),
        (7, "minimal separators of enlargements are connected", 120, enlargement_separators),
        (8, "exact treewidth matches brute force", 300, treewidth_oracle),
        (9, "bramble duality", 300, bramble_duality),
        (10, "partition search probe", 1800, partition_search),
        (11, "middle-plane width certificate", 60, middle_plane_certificate),
    ];
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > Duration::from_secs(limit) => Err(format!("{detail}; over the {limit} s limit")),
            r => r,
        };
        let (tag, detail) = match &result {
            Ok(d) => ("PASS", d),
            Err(e) => {
                failed += 1;
                ("FAIL", e)
            }
        };
        println!("{tag} criterion {id:>2} {name} ({:.2} s): {detail}", elapsed.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
