use serde::{Deserialize, Serialize};

use super::{coords_adjacent, Coord, GridGraph};
use crate::error::{Error, Result};

/// An x-monotone path: each step raises `x` by one and raises `y` and `z` by
/// zero or one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Coord>", into = "Vec<Coord>")]
pub struct Staircase {
    vertices: Vec<Coord>,
}

impl Staircase {
    pub fn new(vertices: Vec<Coord>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidStaircase("empty".into()));
        }
        for w in vertices.windows(2) {
            let (a, b) = (w[0], w[1]);
            let ok = b.x == a.x + 1
                && (b.y == a.y || b.y == a.y + 1)
                && (b.z == a.z || b.z == a.z + 1)
                && coords_adjacent(a, b);
            if !ok {
                return Err(Error::InvalidStaircase(format!("bad step {a} -> {b}")));
            }
        }
        Ok(Staircase { vertices })
    }

    /// `len` vertices along the x-axis starting at `start`.
    pub fn straight(start: Coord, len: u32) -> Result<Self> {
        Staircase::new((0..len).map(|i| Coord::new(start.x + i, start.y, start.z)).collect())
    }

    pub fn vertices(&self) -> &[Coord] {
        &self.vertices
    }

    pub fn first(&self) -> Coord {
        self.vertices[0]
    }

    pub fn last(&self) -> Coord {
        *self.vertices.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The vertex with the given x-coordinate, if the staircase reaches it.
    pub fn at_x(&self, x: u32) -> Option<Coord> {
        let first = self.first().x;
        (x >= first).then(|| self.vertices.get((x - first) as usize).copied()).flatten()
    }
}

impl TryFrom<Vec<Coord>> for Staircase {
    type Error = Error;
    fn try_from(v: Vec<Coord>) -> Result<Self> {
        Staircase::new(v)
    }
}

impl From<Staircase> for Vec<Coord> {
    fn from(s: Staircase) -> Self {
        s.vertices
    }
}

/// The `(b+1)^2` points `(x, y + dy, z + dz)`, `0 <= dy, dz <= b`, ordered by
/// `(dy, dz)`. No bounds are applied here.
pub fn b_square(v: Coord, b: u32) -> Vec<Coord> {
    let mut out = Vec::with_capacity(((b + 1) * (b + 1)) as usize);
    for dy in 0..=b {
        for dz in 0..=b {
            out.push(Coord::new(v.x, v.y + dy, v.z + dz));
        }
    }
    out
}

/// The subgraph induced by the b-squares around the vertices of a staircase,
/// with its left and right sides.
#[derive(Clone, Debug)]
pub struct Enlargement {
    base: Staircase,
    b: u32,
    graph: GridGraph,
    left: Vec<usize>,
    right: Vec<usize>,
}

/// Builds the b-enlargement of `base` inside `host`. Squares that leave `host`
/// are rejected rather than clipped.
pub fn enlarge(host: &GridGraph, base: &Staircase, b: u32) -> Result<Enlargement> {
    let mut all = Vec::with_capacity(base.len() * ((b + 1) * (b + 1)) as usize);
    for &v in base.vertices() {
        for c in b_square(v, b) {
            if !host.contains(c) {
                return Err(Error::OutOfBounds(c, host.side()));
            }
            all.push(c);
        }
    }
    let graph = host.induced(all)?;
    let left = graph.indices_of(&b_square(base.first(), b));
    let right = graph.indices_of(&b_square(base.last(), b));
    Ok(Enlargement {
        base: base.clone(),
        b,
        graph,
        left,
        right,
    })
}

impl Enlargement {
    pub fn base(&self) -> &Staircase {
        &self.base
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn graph(&self) -> &GridGraph {
        &self.graph
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    pub fn is_side(&self, v: usize) -> bool {
        let x = self.graph.coord(v).x;
        x == self.base.first().x || x == self.base.last().x
    }

    /// Vertices on neither side.
    pub fn interior(&self) -> Vec<usize> {
        (0..self.graph.coords().len()).filter(|&v| !self.is_side(v)).collect()
    }

    /// Offset `(dy, dz)` of a vertex inside the square of its x-layer.
    pub fn offset_of(&self, v: usize) -> (u32, u32) {
        let c = self.graph.coord(v);
        let s = self.base.at_x(c.x).expect("vertex belongs to the enlargement");
        (c.y - s.y, c.z - s.z)
    }

    /// The line parallel to the base at offset `(dy, dz)`, from left to right.
    pub fn line(&self, dy: u32, dz: u32) -> Vec<usize> {
        self.base
            .vertices()
            .iter()
            .map(|s| {
                self.graph
                    .index(Coord::new(s.x, s.y + dy, s.z + dz))
                    .expect("offset within the square")
            })
            .collect()
    }

    /// Whether `c` lies in the enlargement.
    pub fn contains(&self, c: Coord) -> bool {
        self.graph.contains(c)
    }
}

/// Projection of the `(b+1)`-enlargement `outer` onto the b-enlargement of the
/// same staircase: `(x, y, z) -> (x, min(y, y0 + b), min(z, z0 + b))` where
/// `(x, y0, z0)` is the staircase vertex in the same x-layer.
pub fn project(u: Coord, outer: &Enlargement) -> Result<Coord> {
    if outer.b() == 0 {
        return Err(Error::Precondition("projection needs a (b+1)-enlargement with b+1 >= 1".into()));
    }
    if !outer.contains(u) {
        return Err(Error::Precondition(format!("{u} is outside the enlargement")));
    }
    let b = outer.b() - 1;
    let s = outer.base().at_x(u.x).expect("x-layer of the enlargement");
    Ok(Coord::new(u.x, u.y.min(s.y + b), u.z.min(s.z + b)))
}

/// The anchor point `p_d(j, k) = (4dj + 4dk, 2dj + dk, dj + 2dk)`.
pub fn anchor(d: u32, j: u32, k: u32) -> Coord {
    Coord::new(4 * d * j + 4 * d * k, 2 * d * j + d * k, d * j + 2 * d * k)
}

/// A staircase containing `a` as its initial segment and `c` as its final
/// segment (or the other way round, whichever is x-ordered), with a greedy
/// connector: every step advances x, and y and z each rise while they are
/// below the target corner. The b-enlargement of the result must fit `host`.
pub fn join_staircases(host: &GridGraph, a: &Staircase, c: &Staircase, b: u32) -> Result<Staircase> {
    let (first, second) = if a.last().x < c.first().x {
        (a, c)
    } else if c.last().x < a.first().x {
        (c, a)
    } else {
        return Err(Error::NoRoute(a.last(), c.first()));
    };
    let (from, to) = (first.last(), second.first());
    let run = to.x - from.x;
    if to.y < from.y || to.z < from.z || to.y - from.y > run || to.z - from.z > run {
        return Err(Error::NoRoute(from, to));
    }
    let mut vertices = first.vertices().to_vec();
    let mut cur = from;
    for _ in 1..run {
        cur = Coord::new(
            cur.x + 1,
            if cur.y < to.y { cur.y + 1 } else { cur.y },
            if cur.z < to.z { cur.z + 1 } else { cur.z },
        );
        vertices.push(cur);
    }
    vertices.extend_from_slice(second.vertices());
    let joined = Staircase::new(vertices)?;
    for &v in joined.vertices() {
        let far = Coord::new(v.x, v.y + b, v.z + b);
        if !host.contains(far) {
            return Err(Error::OutOfBounds(far, host.side()));
        }
    }
    Ok(joined)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Adjacency;
    use crate::grid::build_qn;

    fn c(x: u32, y: u32, z: u32) -> Coord {
        Coord::new(x, y, z)
    }

    #[test]
    fn staircase_validation() {
        assert!(Staircase::new(vec![c(0, 0, 0), c(1, 1, 0), c(2, 1, 1)]).is_ok());
        assert!(Staircase::new(vec![c(0, 0, 0), c(1, 2, 0)]).is_err());
        assert!(Staircase::new(vec![c(0, 1, 0), c(1, 0, 0)]).is_err());
        assert!(Staircase::new(vec![c(0, 0, 0), c(0, 1, 0)]).is_err());
        assert!(Staircase::new(vec![]).is_err());
        let s: Staircase = serde_json::from_str("[[0,0,0],[1,0,1]]").unwrap();
        assert_eq!(s.len(), 2);
        assert!(serde_json::from_str::<Staircase>("[[0,0,0],[2,0,1]]").is_err());
    }

    #[test]
    fn squares() {
        assert_eq!(b_square(c(0, 0, 0), 0), vec![c(0, 0, 0)]);
        let mut sq = b_square(c(2, 1, 1), 1);
        sq.sort();
        assert_eq!(sq, vec![c(2, 1, 1), c(2, 1, 2), c(2, 2, 1), c(2, 2, 2)]);
        assert_eq!(b_square(c(0, 0, 0), 2).len(), 9);
    }

    #[test]
    fn enlargements() {
        let q = build_qn(5).unwrap();
        let p = Staircase::new(vec![c(0, 0, 0), c(1, 1, 0), c(2, 1, 1)]).unwrap();
        let e0 = enlarge(&q, &p, 0).unwrap();
        assert_eq!(e0.graph().vertex_count(), 3);
        assert_eq!(e0.left().len(), 1);
        assert_eq!(e0.graph().coord(e0.right()[0]), c(2, 1, 1));

        let straight = Staircase::straight(c(0, 0, 0), 5).unwrap();
        let e1 = enlarge(&q, &straight, 1).unwrap();
        assert_eq!(e1.graph().vertex_count(), 20);
        assert!(e1.graph().coords().iter().all(|v| v.y <= 1 && v.z <= 1));
        assert_eq!(e1.interior().len(), 12);

        let single = Staircase::new(vec![c(2, 2, 2)]).unwrap();
        let e = enlarge(&q, &single, 1).unwrap();
        assert_eq!(e.graph().vertex_count(), 4);
        assert_eq!(e.left(), e.right());

        let edge = Staircase::straight(c(0, 3, 3), 2).unwrap();
        assert!(matches!(enlarge(&q, &edge, 2), Err(Error::OutOfBounds(..))));
    }

    #[test]
    fn lines_and_offsets() {
        let q = build_qn(6).unwrap();
        let p = Staircase::new(vec![c(0, 0, 0), c(1, 1, 0), c(2, 1, 1), c(3, 2, 2)]).unwrap();
        let e = enlarge(&q, &p, 2).unwrap();
        let line = e.line(1, 2);
        assert_eq!(line.len(), 4);
        for w in line.windows(2) {
            assert!(e.graph().adjacent(w[0], w[1]));
        }
        for &v in &line {
            assert_eq!(e.offset_of(v), (1, 2));
        }
    }

    #[test]
    fn projection_basics() {
        let q = build_qn(6).unwrap();
        let p = Staircase::new(vec![c(0, 0, 0), c(1, 1, 0), c(2, 1, 1)]).unwrap();
        let outer = enlarge(&q, &p, 2).unwrap();
        for &v in p.vertices() {
            assert_eq!(project(v, &outer).unwrap(), v);
        }
        assert_eq!(project(c(1, 3, 0), &outer).unwrap(), c(1, 2, 0));
        assert!(project(c(1, 0, 0), &outer).is_err());
        let flat = enlarge(&q, &p, 0).unwrap();
        assert!(project(c(0, 0, 0), &flat).is_err());
    }

    #[test]
    fn anchors() {
        assert_eq!(anchor(3, 0, 0), c(0, 0, 0));
        assert_eq!(anchor(3, 1, 0), c(12, 6, 3));
        assert_eq!(anchor(3, 1, 1), c(24, 9, 9));
    }

    #[test]
    fn join_two_points() {
        let d = 2;
        let q = build_qn(12).unwrap();
        let a = Staircase::new(vec![anchor(d, 0, 0)]).unwrap();
        let z = Staircase::new(vec![anchor(d, 1, 0)]).unwrap();
        let j = join_staircases(&q, &a, &z, 0).unwrap();
        assert_eq!(j.len() as u32, 4 * d + 1);
        assert_eq!(j.first(), a.first());
        assert_eq!(j.last(), z.first());
        // either argument order yields the same x-ordered staircase
        assert_eq!(join_staircases(&q, &z, &a, 0).unwrap(), j);
    }

    #[test]
    fn join_adjacent_is_concatenation() {
        let q = build_qn(6).unwrap();
        let a = Staircase::new(vec![c(0, 0, 0), c(1, 1, 0)]).unwrap();
        let z = Staircase::new(vec![c(2, 1, 1), c(3, 2, 1)]).unwrap();
        let j = join_staircases(&q, &a, &z, 0).unwrap();
        assert_eq!(j.vertices(), &[c(0, 0, 0), c(1, 1, 0), c(2, 1, 1), c(3, 2, 1)]);
        let up = Staircase::new(vec![c(2, 3, 0)]).unwrap();
        assert!(matches!(join_staircases(&q, &a, &up, 0), Err(Error::NoRoute(..))));
    }
}
