use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{is_connected_subset, Adjacency};
use crate::grid::{build_qn, Coord, GridGraph};

/// A family of vertex sets that pairwise touch.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Bramble {
    pub sets: Vec<Vec<usize>>,
}

impl Bramble {
    pub fn new(mut sets: Vec<Vec<usize>>) -> Self {
        for s in &mut sets {
            s.sort_unstable();
            s.dedup();
        }
        Bramble { sets }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// Every set is non-empty and, for every pair (a set paired with itself
/// included), the union induces a connected subgraph.
pub fn validate_bramble<G: Adjacency>(g: &G, b: &Bramble) -> bool {
    let n = g.vertex_count();
    if b.sets.iter().any(|s| s.is_empty() || s.iter().any(|&v| v >= n)) {
        return false;
    }
    for (i, a) in b.sets.iter().enumerate() {
        for c in &b.sets[i..] {
            let mut union = a.clone();
            union.extend_from_slice(c);
            union.sort_unstable();
            union.dedup();
            if !is_connected_subset(g, &union) {
                return false;
            }
        }
    }
    true
}

/// Largest number of bramble sets handled by the exact hitting-set search.
const MAX_SETS: usize = 128;

struct Cover {
    masks: Vec<u128>,
    best: usize,
}

impl Cover {
    fn search(&mut self, uncovered: u128, used: usize) {
        if uncovered == 0 {
            self.best = self.best.min(used);
            return;
        }
        let widest = self.masks.iter().map(|m| (m & uncovered).count_ones()).max().unwrap_or(0) as usize;
        if widest == 0 {
            return;
        }
        let need = (uncovered.count_ones() as usize).div_ceil(widest);
        if used + need >= self.best {
            return;
        }
        // branch on the vertices hitting the lowest unhit set
        let target = uncovered & uncovered.wrapping_neg();
        let mut options: Vec<u128> = self.masks.iter().copied().filter(|m| m & target != 0).collect();
        options.sort_by_key(|m| std::cmp::Reverse((m & uncovered).count_ones()));
        for m in options {
            self.search(uncovered & !m, used + 1);
        }
    }
}

/// Order of the bramble: the size of a smallest vertex set meeting every
/// member. Exact; vertices are grouped by which members they meet and dominated
/// groups are dropped before a branch and bound set-cover search.
pub fn bramble_order<G: Adjacency>(g: &G, b: &Bramble) -> Result<usize> {
    if b.sets.len() > MAX_SETS {
        return Err(Error::GuardExceeded {
            what: "bramble size",
            actual: b.sets.len(),
            limit: MAX_SETS,
        });
    }
    let n = g.vertex_count();
    let mut hits = vec![0u128; n];
    for (i, s) in b.sets.iter().enumerate() {
        if s.is_empty() {
            return Err(Error::Precondition("bramble has an empty set".into()));
        }
        for &v in s {
            if v >= n {
                return Err(Error::Precondition(format!("vertex {v} out of range")));
            }
            hits[v] |= 1u128 << i;
        }
    }
    let mut masks: Vec<u128> = hits.into_iter().filter(|&m| m != 0).collect();
    masks.sort_unstable_by_key(|m| std::cmp::Reverse(m.count_ones()));
    masks.dedup();
    let mut kept: Vec<u128> = Vec::new();
    for m in masks {
        if !kept.iter().any(|k| k & m == m) {
            kept.push(m);
        }
    }
    let universe = if b.sets.len() == 128 { u128::MAX } else { (1u128 << b.sets.len()) - 1 };
    let mut cover = Cover {
        masks: kept,
        best: b.sets.len(),
    };
    cover.search(universe, 0);
    Ok(cover.best)
}

/// The triangulated `m x m` grid: the plane `z = 0` of `Q_m`.
pub fn triangulated_plane(m: u32) -> Result<GridGraph> {
    let q = build_qn(m)?;
    q.induced((0..m).flat_map(|y| (0..m).map(move |x| Coord { x, y, z: 0 })))
}

/// The crosses bramble of the triangulated `t x t` grid: one set per pair
/// `(i, j)`, the union of row `i` and column `j`. Its order is `t`.
pub fn crosses_bramble(t: u32) -> Result<(GridGraph, Bramble)> {
    let g = triangulated_plane(t)?;
    let mut sets = Vec::with_capacity((t * t) as usize);
    for i in 0..t {
        for j in 0..t {
            let row = (0..t).map(|x| Coord { x, y: i, z: 0 });
            let col = (0..t).map(|y| Coord { x: j, y, z: 0 });
            sets.push(row.chain(col).map(|c| g.index(c).unwrap()).collect());
        }
    }
    Ok((g, Bramble::new(sets)))
}
