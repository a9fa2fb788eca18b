//! Partitions of `Q_n` minimising the larger class treewidth.
//!
//! The exhaustive search raises a threshold `k` from 0 and looks for a
//! 2-colouring in which both classes have treewidth at most `k`. Colours are
//! assigned vertex by vertex and a branch dies as soon as the component of the
//! new vertex in its class exceeds width `k` (treewidth is monotone under
//! induced subgraphs). Corner colourings are reduced to orbit representatives
//! under the verified cube automorphisms and the colour swap, and the orbits
//! are searched in parallel.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::decomposition::{min_fill_ordering, ordering_width, treewidth_at_most, Decision};
use crate::error::{Error, Result};
use crate::exec::{job_rng, Execution};
use crate::graph::{induced, Adjacency};
use crate::grid::{build_qn, verified_symmetries, Coord, GridGraph};
use crate::separators::Partition2;

/// Largest side searched exhaustively.
pub const EXHAUSTIVE_GUARD: u32 = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub n: u32,
    pub mode: String,
    /// Exhaustive: the exact minimum over partitions of the larger class
    /// treewidth. Heuristic: the best upper bound found.
    pub value: i64,
    pub witness: Partition2,
    /// Widths of the witness classes (exact for exhaustive, upper bounds for
    /// heuristic).
    pub class_widths: [i64; 2],
    pub symmetries: usize,
    pub orbits: usize,
    pub nodes: u64,
    pub seed: Option<u64>,
}

struct Dfs<'a> {
    g: &'a GridGraph,
    order: &'a [usize],
    k: i64,
    nodes: u64,
}

impl Dfs<'_> {
    /// Whether the class of `v` still has width at most `k` around `v`.
    fn fits(&self, assign: &[u8], v: usize) -> bool {
        let c = assign[v];
        let mut comp = vec![v];
        let mut seen = vec![false; assign.len()];
        seen[v] = true;
        let mut head = 0;
        while head < comp.len() {
            let u = comp[head];
            head += 1;
            self.g.for_each_neighbor(u, |w| {
                if !seen[w] && assign[w] == c {
                    seen[w] = true;
                    comp.push(w);
                }
            });
        }
        if comp.len() as i64 <= self.k + 1 {
            return true;
        }
        let (h, _) = induced(self.g, &comp);
        !matches!(treewidth_at_most(&h, self.k, None), Ok(Decision::No))
    }

    fn run(&mut self, assign: &mut Vec<u8>, pos: usize) -> bool {
        self.nodes += 1;
        if pos == self.order.len() {
            return true;
        }
        let v = self.order[pos];
        for c in [1u8, 2] {
            assign[v] = c;
            if self.fits(assign, v) && self.run(assign, pos + 1) {
                return true;
            }
        }
        assign[v] = 0;
        false
    }
}

fn corners(n: u32) -> Vec<Coord> {
    let m = n - 1;
    let mut out = Vec::new();
    for &x in &[0, m] {
        for &y in &[0, m] {
            for &z in &[0, m] {
                out.push(Coord::new(x, y, z));
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Corner colourings (bit `i` set = corner `i` in class 1) that are minimal
/// in their orbit under the symmetries and the colour swap.
fn orbit_representatives(g: &GridGraph, corners: &[Coord], syms: &[crate::grid::CubeSymmetry]) -> Vec<u32> {
    let m = corners.len();
    let full = (1u32 << m) - 1;
    let perms: Vec<Vec<usize>> = syms
        .iter()
        .map(|s| {
            corners
                .iter()
                .map(|&c| corners.iter().position(|&d| d == s.apply(g.side(), c)).expect("corners map to corners"))
                .collect()
        })
        .collect();
    (0..=full)
        .filter(|&mask| {
            perms.iter().all(|p| {
                let mut img = 0u32;
                for (i, &j) in p.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        img |= 1 << j;
                    }
                }
                img >= mask && (full & !img) >= mask
            })
        })
        .collect()
}

fn class_width(g: &GridGraph, part: &Partition2, colour: u8, exact: bool) -> Result<i64> {
    let members = part.members(colour);
    if members.is_empty() {
        return Ok(-1);
    }
    let (h, _) = induced(g, &members);
    if exact {
        Ok(crate::decomposition::exact_treewidth_with(&h, 128)?.0)
    } else {
        Ok(ordering_width(&h, &min_fill_ordering(&h)))
    }
}

/// Exact minimum over all 2-colourings of `Q_n` of the larger class
/// treewidth.
pub fn exhaustive_search(n: u32, exec: Execution) -> Result<SearchReport> {
    if n == 0 {
        return Err(Error::EmptyGrid);
    }
    if n > EXHAUSTIVE_GUARD {
        return Err(Error::GuardExceeded {
            what: "exhaustive search side",
            actual: n as usize,
            limit: EXHAUSTIVE_GUARD as usize,
        });
    }
    let g = build_qn(n)?;
    let syms = verified_symmetries(&g);
    let cs = corners(n);
    let corner_idx: Vec<usize> = cs.iter().map(|&c| g.index(c).unwrap()).collect();
    let mut order = corner_idx.clone();
    order.extend((0..g.vertex_count()).filter(|v| !corner_idx.contains(v)));
    let reps = orbit_representatives(&g, &cs, &syms);
    let mut nodes = 0;
    for k in 0.. {
        let results = exec.map_slice(&reps, |&mask| {
            let mut assign = vec![0u8; g.vertex_count()];
            let mut dfs = Dfs {
                g: &g,
                order: &order[corner_idx.len()..],
                k,
                nodes: 0,
            };
            for (i, &v) in corner_idx.iter().enumerate() {
                assign[v] = if mask >> i & 1 == 1 { 1 } else { 2 };
            }
            if corner_idx.iter().any(|&v| !dfs.fits(&assign, v)) {
                return (None, 1);
            }
            let found = dfs.run(&mut assign, 0);
            (found.then_some(assign), dfs.nodes)
        });
        nodes += results.iter().map(|r| r.1).sum::<u64>();
        if let Some(assign) = results.into_iter().find_map(|r| r.0) {
            let witness = Partition2::new(n, assign)?;
            let class_widths = [class_width(&g, &witness, 1, true)?, class_width(&g, &witness, 2, true)?];
            if class_widths.iter().copied().max() != Some(k) {
                return Err(Error::Invariant(format!("witness widths {class_widths:?} disagree with threshold {k}")));
            }
            return Ok(SearchReport {
                n,
                mode: "exhaustive".into(),
                value: k,
                witness,
                class_widths,
                symmetries: syms.len(),
                orbits: reps.len(),
                nodes,
                seed: None,
            });
        }
    }
    unreachable!("the all-one-class colouring fits once k reaches tw(Q_n)")
}

/// Seeded local search: `restarts` independent chains of single-vertex flips,
/// each accepting a flip unless it worsens (larger width, then width sum) of
/// the min-fill upper bounds. Returns the best chain, ties to the lowest
/// restart index.
pub fn heuristic_search(n: u32, iterations: usize, restarts: usize, seed: u64, exec: Execution) -> Result<SearchReport> {
    let g = build_qn(n)?;
    let score = |p: &Partition2| -> Result<(i64, i64, [i64; 2])> {
        let w = [class_width(&g, p, 1, false)?, class_width(&g, p, 2, false)?];
        Ok((w[0].max(w[1]), w[0] + w[1], w))
    };
    let chains = exec.map_range(restarts.max(1), |r| -> Result<(i64, i64, [i64; 2], Partition2)> {
        let mut rng = job_rng(seed, r as u64);
        let mut part = Partition2::random(n, &mut rng);
        let mut cur = score(&part)?;
        let mut best = (cur.0, cur.1, cur.2, part.clone());
        for _ in 0..iterations {
            let v = rng.gen_range(0..part.class.len());
            part.class[v] = 3 - part.class[v];
            let next = score(&part)?;
            if (next.0, next.1) <= (cur.0, cur.1) {
                cur = next;
                if (cur.0, cur.1) < (best.0, best.1) {
                    best = (cur.0, cur.1, cur.2, part.clone());
                }
            } else {
                part.class[v] = 3 - part.class[v];
            }
        }
        Ok(best)
    });
    let chains: Vec<_> = chains.into_iter().collect::<Result<_>>()?;
    let best = chains
        .into_iter()
        .min_by_key(|c| (c.0, c.1))
        .expect("at least one restart");
    Ok(SearchReport {
        n,
        mode: "heuristic".into(),
        value: best.0,
        witness: best.3,
        class_widths: best.2,
        symmetries: 0,
        orbits: 0,
        nodes: (iterations * restarts.max(1)) as u64,
        seed: Some(seed),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q1_and_q2_values() {
        let r = exhaustive_search(1, Execution::Sequential).unwrap();
        assert_eq!(r.value, 0);
        let r = exhaustive_search(2, Execution::best()).unwrap();
        assert!(r.value >= 1);
    }

    #[test]
    fn q2_matches_brute_force() {
        let g = build_qn(2).unwrap();
        let mut best = i64::MAX;
        for mask in 0u32..256 {
            let p = Partition2::new(2, (0..8).map(|v| if mask >> v & 1 == 1 { 1 } else { 2 }).collect()).unwrap();
            let w = class_width(&g, &p, 1, true).unwrap().max(class_width(&g, &p, 2, true).unwrap());
            best = best.min(w);
        }
        assert_eq!(exhaustive_search(2, Execution::best()).unwrap().value, best);
    }

    #[test]
    fn orbits_cover_all_corner_colourings() {
        let g = build_qn(3).unwrap();
        let syms = verified_symmetries(&g);
        let reps = orbit_representatives(&g, &corners(3), &syms);
        assert!(reps.len() < 256 / 4);
        assert!(reps.contains(&0));
    }

    #[test]
    fn heuristic_is_reproducible() {
        let a = heuristic_search(3, 60, 2, 4, Execution::Parallel).unwrap();
        let b = heuristic_search(3, 60, 2, 4, Execution::Sequential).unwrap();
        assert_eq!(a, b);
    }
}
