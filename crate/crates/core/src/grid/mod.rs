//! The cube grid `Q_n`: vertices `[0, n)^3`, with `u ~ v` whenever `v - u` (or
//! `u - v`) is a non-zero vector of `{0, 1}^3`.
//!
//! Full grids compute adjacency from coordinates; induced subgraphs store their
//! adjacency lists.

mod io;
mod staircase;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Adjacency;

pub use io::{GraphJson, VertexSpec, EdgeSpec};
pub use staircase::{anchor, b_square, enlarge, join_staircases, project, Enlargement, Staircase};

/// Lattice point. Ordered lexicographically by `(x, y, z)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[u32; 3]", into = "[u32; 3]")]
pub struct Coord {
    pub x: u32,
    pub y: u32,
    pub z: u32,
}

impl Coord {
    pub const fn new(x: u32, y: u32, z: u32) -> Self {
        Coord { x, y, z }
    }

    pub fn offset(self, d: [i64; 3]) -> Option<Coord> {
        let x = i64::from(self.x) + d[0];
        let y = i64::from(self.y) + d[1];
        let z = i64::from(self.z) + d[2];
        if x < 0 || y < 0 || z < 0 || x > u32::MAX as i64 || y > u32::MAX as i64 || z > u32::MAX as i64 {
            return None;
        }
        Some(Coord::new(x as u32, y as u32, z as u32))
    }


    pub fn in_cube(self, n: u32) -> bool {
        self.x < n && self.y < n && self.z < n
    }

    pub fn as_array(self) -> [u32; 3] {
        [self.x, self.y, self.z]
    }
}

impl From<[u32; 3]> for Coord {
    fn from(a: [u32; 3]) -> Self {
        Coord::new(a[0], a[1], a[2])
    }
}

impl From<Coord> for [u32; 3] {
    fn from(c: Coord) -> Self {
        c.as_array()
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

/// The seven non-zero vectors of `{0,1}^3`.
pub const FORWARD: [[i64; 3]; 7] = [
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
    [1, 1, 0],
    [1, 0, 1],
    [0, 1, 1],
    [1, 1, 1],
];

/// The adjacency rule of `Q_n` on bare coordinates.
impl std::ops::Add for Coord {
    type Output = Coord;

    fn add(self, o: Coord) -> Coord {
        Coord::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

pub fn coords_adjacent(a: Coord, b: Coord) -> bool {
    if a == b {
        return false;
    }
    let d = [
        i64::from(b.x) - i64::from(a.x),
        i64::from(b.y) - i64::from(a.y),
        i64::from(b.z) - i64::from(a.z),
    ];
    d.iter().all(|&c| c == 0 || c == 1) || d.iter().all(|&c| c == 0 || c == -1)
}

#[derive(Clone, Debug)]
enum Lookup {
    Full,
    Sparse(HashMap<Coord, usize>, Vec<Vec<usize>>),
}

/// `Q_n` or an induced subgraph of it, addressed by coordinates.
///
/// In a full grid vertex `(x, y, z)` has index `x + n*y + n^2*z`. Induced
/// subgraphs index their vertices in lexicographic coordinate order.
#[derive(Clone, Debug)]
pub struct GridGraph {
    n: u32,
    coords: Vec<Coord>,
    lookup: Lookup,
}

/// Builds `Q_n`.
pub fn build_qn(n: u32) -> Result<GridGraph> {
    if n == 0 {
        return Err(Error::EmptyGrid);
    }
    let mut coords = Vec::with_capacity((n as usize).pow(3));
    for z in 0..n {
        for y in 0..n {
            for x in 0..n {
                coords.push(Coord::new(x, y, z));
            }
        }
    }
    Ok(GridGraph {
        n,
        coords,
        lookup: Lookup::Full,
    })
}

/// The subgraph of `g` induced by the `m^3` cube with lowest corner `v`.
pub fn subgrid(g: &GridGraph, v: Coord, m: u32) -> Result<GridGraph> {
    if m == 0 {
        return Err(Error::Precondition("subgrid side must be positive".into()));
    }
    let far = Coord::new(v.x + m - 1, v.y + m - 1, v.z + m - 1);
    for c in [v, far] {
        if !g.contains(c) {
            return Err(Error::OutOfBounds(c, g.n));
        }
    }
    let mut cube = Vec::with_capacity((m as usize).pow(3));
    for x in v.x..v.x + m {
        for y in v.y..v.y + m {
            for z in v.z..v.z + m {
                cube.push(Coord::new(x, y, z));
            }
        }
    }
    g.induced(cube)
}

impl GridGraph {
    /// Side length of the ambient cube.
    pub fn side(&self) -> u32 {
        self.n
    }

    pub fn is_full(&self) -> bool {
        matches!(self.lookup, Lookup::Full)
    }

    pub fn coords(&self) -> &[Coord] {
        &self.coords
    }

    pub fn coord(&self, v: usize) -> Coord {
        self.coords[v]
    }

    pub fn index(&self, c: Coord) -> Option<usize> {
        match &self.lookup {
            Lookup::Full => c.in_cube(self.n).then(|| full_index(self.n, c)),
            Lookup::Sparse(map, _) => map.get(&c).copied(),
        }
    }

    pub fn contains(&self, c: Coord) -> bool {
        self.index(c).is_some()
    }

    /// Induced subgraph on the given coordinates (duplicates ignored). Every
    /// coordinate must be a vertex of `self`.
    pub fn induced<I: IntoIterator<Item = Coord>>(&self, coords: I) -> Result<GridGraph> {
        let mut coords: Vec<Coord> = coords.into_iter().collect();
        coords.sort_unstable();
        coords.dedup();
        if let Some(&bad) = coords.iter().find(|c| !self.contains(**c)) {
            return Err(Error::OutOfBounds(bad, self.n));
        }
        let map: HashMap<Coord, usize> = coords.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let adj = coords
            .iter()
            .map(|&c| {
                let mut l: Vec<usize> = grid_neighbors(c)
                    .filter_map(|d| map.get(&d).copied())
                    .collect();
                l.sort_unstable();
                l
            })
            .collect();
        Ok(GridGraph {
            n: self.n,
            coords,
            lookup: Lookup::Sparse(map, adj),
        })
    }

    /// Indices of the given coordinates, skipping those not in the graph.
    pub fn indices_of<'a, I: IntoIterator<Item = &'a Coord>>(&self, coords: I) -> Vec<usize> {
        coords.into_iter().filter_map(|&c| self.index(c)).collect()
    }

    /// Vertices with the given value on `axis` (0 = x, 1 = y, 2 = z).
    pub fn layer(&self, axis: usize, value: u32) -> Vec<usize> {
        (0..self.coords.len())
            .filter(|&v| self.coords[v].as_array()[axis] == value)
            .collect()
    }

    /// Number of forward neighbours (`v + d`, `d` in `{0,1}^3`).
    pub fn forward_degree(&self, v: usize) -> usize {
        let c = self.coords[v];
        FORWARD
            .iter()
            .filter(|d| c.offset(**d).is_some_and(|u| self.contains(u)))
            .count()
    }
}

pub(crate) fn full_index(n: u32, c: Coord) -> usize {
    let n = n as usize;
    c.x as usize + n * c.y as usize + n * n * c.z as usize
}

fn grid_neighbors(c: Coord) -> impl Iterator<Item = Coord> {
    FORWARD.iter().flat_map(move |d| {
        let back = [-d[0], -d[1], -d[2]];
        [c.offset(*d), c.offset(back)].into_iter().flatten()
    })
}

impl Adjacency for GridGraph {
    fn vertex_count(&self) -> usize {
        self.coords.len()
    }

    fn for_each_neighbor<F: FnMut(usize)>(&self, v: usize, mut f: F) {
        match &self.lookup {
            Lookup::Full => {
                let c = self.coords[v];
                for u in grid_neighbors(c) {
                    if u.in_cube(self.n) {
                        f(full_index(self.n, u));
                    }
                }
            }
            Lookup::Sparse(_, adj) => {
                for &u in &adj[v] {
                    f(u);
                }
            }
        }
    }

    fn adjacent(&self, u: usize, v: usize) -> bool {
        coords_adjacent(self.coords[u], self.coords[v])
    }
}

/// A coordinate map of the cube: permute the axes, then optionally reflect
/// every axis (`c -> n-1-c`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CubeSymmetry {
    pub perm: [usize; 3],
    pub reflect: bool,
}

impl CubeSymmetry {
    pub const IDENTITY: CubeSymmetry = CubeSymmetry {
        perm: [0, 1, 2],
        reflect: false,
    };

    /// The twelve candidates: axis permutations, with and without reflection.
    pub fn candidates() -> Vec<CubeSymmetry> {
        const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let mut out = Vec::new();
        for reflect in [false, true] {
            for perm in PERMS {
                out.push(CubeSymmetry { perm, reflect });
            }
        }
        out
    }

    pub fn apply(&self, n: u32, c: Coord) -> Coord {
        let a = c.as_array();
        let mut b = [a[self.perm[0]], a[self.perm[1]], a[self.perm[2]]];
        if self.reflect {
            for v in &mut b {
                *v = n - 1 - *v;
            }
        }
        Coord::from(b)
    }

    /// Checks that the map is a bijection of `V(g)` preserving adjacency and
    /// non-adjacency.
    pub fn is_automorphism(&self, g: &GridGraph) -> bool {
        let n = g.side();
        let image: Option<Vec<usize>> = g.coords().iter().map(|&c| g.index(self.apply(n, c))).collect();
        let Some(image) = image else {
            return false;
        };
        let mut seen = vec![false; image.len()];
        for &i in &image {
            if seen[i] {
                return false;
            }
            seen[i] = true;
        }
        let edges = g.edges();
        edges.len() == g.edge_count() && edges.iter().all(|&(u, v)| g.adjacent(image[u], image[v]))
    }
}

/// Candidate symmetries that pass the automorphism check on `g`.
pub fn verified_symmetries(g: &GridGraph) -> Vec<CubeSymmetry> {
    CubeSymmetry::candidates()
        .into_iter()
        .filter(|s| s.is_automorphism(g))
        .collect()
}

/// Closed form for the number of edges of `Q_n`: a vector `d` with `k` ones
/// contributes `(n-1)^k n^(3-k)` pairs.
pub fn qn_edge_count(n: u64) -> u64 {
    FORWARD
        .iter()
        .map(|d| {
            let k = d.iter().filter(|&&c| c == 1).count() as u32;
            (n - 1).pow(k) * n.pow(3 - k)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_edges(n: u32) -> usize {
        let g = build_qn(n).unwrap();
        let cs = g.coords();
        let mut count = 0;
        for i in 0..cs.len() {
            for j in i + 1..cs.len() {
                let (a, b) = (cs[i], cs[j]);
                let le = |p: u32, q: u32| p <= q && q <= p + 1;
                let fwd = le(a.x, b.x) && le(a.y, b.y) && le(a.z, b.z);
                let bwd = le(b.x, a.x) && le(b.y, a.y) && le(b.z, a.z);
                if fwd || bwd {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn small_grids() {
        let q1 = build_qn(1).unwrap();
        assert_eq!(q1.vertex_count(), 1);
        assert_eq!(q1.edge_count(), 0);
        let q2 = build_qn(2).unwrap();
        assert_eq!(q2.vertex_count(), 8);
        assert_eq!(q2.edge_count(), 19);
        assert_eq!(brute_edges(2), 19);
        let q3 = build_qn(3).unwrap();
        assert_eq!(q3.vertex_count(), 27);
        assert_eq!(q3.edge_count(), brute_edges(3));
        assert_eq!(q3.edge_count() as u64, qn_edge_count(3));
        assert!(matches!(build_qn(0), Err(Error::EmptyGrid)));
    }

    #[test]
    fn adjacency_matches_pair_oracle() {
        for n in 1..=4 {
            let g = build_qn(n).unwrap();
            assert_eq!(g.edge_count(), brute_edges(n), "n = {n}");
            assert_eq!(g.edge_count() as u64, qn_edge_count(n as u64));
            for v in 0..g.vertex_count() {
                assert!(g.forward_degree(v) <= 7);
                assert!(g.degree(v) <= 14);
                for u in g.neighbors(v) {
                    assert!(g.neighbors(u).contains(&v));
                    assert!(coords_adjacent(g.coord(u), g.coord(v)));
                }
            }
        }
    }

    #[test]
    fn subgrids() {
        let q3 = build_qn(3).unwrap();
        let same = subgrid(&q3, Coord::new(0, 0, 0), 3).unwrap();
        assert_eq!(same.vertex_count(), 27);
        assert_eq!(same.edge_count(), q3.edge_count());
        let small = subgrid(&q3, Coord::new(1, 1, 1), 2).unwrap();
        assert_eq!(small.edge_count(), 19);
        // isomorphism to Q_2 via translation
        let q2 = build_qn(2).unwrap();
        for (u, v) in small.edges() {
            let shift = |c: Coord| Coord::new(c.x - 1, c.y - 1, c.z - 1);
            let (a, b) = (q2.index(shift(small.coord(u))).unwrap(), q2.index(shift(small.coord(v))).unwrap());
            assert!(q2.adjacent(a, b));
        }
        let q2 = build_qn(2).unwrap();
        assert!(matches!(subgrid(&q2, Coord::new(1, 1, 1), 2), Err(Error::OutOfBounds(..))));
    }

    #[test]
    fn coordinate_symmetries_are_automorphisms() {
        for n in 1..=3 {
            let g = build_qn(n).unwrap();
            assert_eq!(verified_symmetries(&g).len(), 12, "n = {n}");
        }
        // an axis reflection alone is not an automorphism
        let g = build_qn(2).unwrap();
        let a = g.index(Coord::new(0, 0, 0)).unwrap();
        let b = g.index(Coord::new(1, 1, 0)).unwrap();
        assert!(g.adjacent(a, b));
        assert!(!coords_adjacent(Coord::new(1, 0, 0), Coord::new(0, 1, 0)));
    }

    #[test]
    fn layers() {
        let g = build_qn(3).unwrap();
        let plane = g.layer(0, 1);
        assert_eq!(plane.len(), 9);
        let h = g.induced(plane.iter().map(|&v| g.coord(v))).unwrap();
        assert_eq!(h.edge_count(), 2 * 3 * 2 + 4);
        assert_eq!(h.max_degree(), 6);
    }
}
