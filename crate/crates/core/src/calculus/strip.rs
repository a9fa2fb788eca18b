use super::{LFunction, OrientedEdges, Walk};
use crate::error::{Error, Result};

/// Triangulates the strip between two parallel lines `p` and `p2` of equal
/// length, where `p[i]` is adjacent to `p2[i]` for every `i`. Each cell
/// `p[i], p[i+1], p2[i], p2[i+1]` is split along whichever diagonal exists.
/// The triangle indicators sum to the indicator of `q p2 r^-1 p^-1`, with `q`
/// the first rung and `r` the last.
pub fn strip_triangles(oe: &OrientedEdges, p: &[usize], p2: &[usize]) -> Result<Vec<Walk>> {
    if p.len() != p2.len() || p.is_empty() {
        return Err(Error::InvalidWalk("strip sides must be non-empty and of equal length".into()));
    }
    for (&a, &c) in p.iter().zip(p2) {
        if oe.edge_between(a, c).is_none() {
            return Err(Error::InvalidWalk(format!("rung {a}-{c} is not an edge")));
        }
    }
    let mut out = Vec::with_capacity(2 * (p.len() - 1));
    for i in 0..p.len() - 1 {
        let (a, b, c, d) = (p[i], p[i + 1], p2[i], p2[i + 1]);
        if oe.edge_between(a, d).is_some() {
            out.push(Walk::from_vertices(oe, &[a, c, d, a])?);
            out.push(Walk::from_vertices(oe, &[a, d, b, a])?);
        } else if oe.edge_between(c, b).is_some() {
            out.push(Walk::from_vertices(oe, &[a, c, b, a])?);
            out.push(Walk::from_vertices(oe, &[c, d, b, c])?);
        } else {
            return Err(Error::InvalidWalk(format!("cell {a},{b},{c},{d} has no diagonal")));
        }
    }
    Ok(out)
}

/// Certificate that the first and last of a sequence of parallel lines are
/// almost homotopic.
#[derive(Clone, Debug)]
pub struct StripHomotopy {
    pub w1: Walk,
    pub w2: Walk,
    pub q: Walk,
    pub r: Walk,
    /// Non-contractible triangles come first; `k` counts them.
    pub triangles: Vec<Walk>,
    pub k: usize,
}

/// Stacks the strips between consecutive `lines`. `q` runs through the first
/// vertex of every line and `r` through the last.
pub fn strip_homotopy(oe: &OrientedEdges, lines: &[Vec<usize>], f: &LFunction) -> Result<StripHomotopy> {
    if lines.len() < 2 {
        return Err(Error::InvalidWalk("need at least two lines".into()));
    }
    let mut triangles = Vec::new();
    for pair in lines.windows(2) {
        triangles.extend(strip_triangles(oe, &pair[0], &pair[1])?);
    }
    let (mut bad, good): (Vec<Walk>, Vec<Walk>) = triangles
        .into_iter()
        .partition(|t| !super::is_contractible(t, f).unwrap_or(false));
    let k = bad.len();
    bad.extend(good);
    let firsts: Vec<usize> = lines.iter().map(|l| l[0]).collect();
    let lasts: Vec<usize> = lines.iter().map(|l| *l.last().unwrap()).collect();
    Ok(StripHomotopy {
        w1: Walk::from_vertices(oe, &lines[0])?,
        w2: Walk::from_vertices(oe, lines.last().unwrap())?,
        q: Walk::from_vertices(oe, &firsts)?,
        r: Walk::from_vertices(oe, &lasts)?,
        triangles: bad,
        k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{indicator, verify_almost_contractible, verify_almost_homotopic, LValue, OneChain};
    use crate::graph::Adjacency;
    use crate::grid::{build_qn, Coord};

    fn line(q: &crate::grid::GridGraph, y: u32, z: u32) -> Vec<usize> {
        (0..q.side()).map(|x| q.index(Coord { x, y, z }).unwrap()).collect()
    }

    #[test]
    fn strip_sums_to_boundary() {
        let q = build_qn(3).unwrap();
        let oe = OrientedEdges::canonical(&q);
        for (p, p2) in [(line(&q, 0, 0), line(&q, 1, 0)), (line(&q, 1, 1), line(&q, 0, 1)), (line(&q, 0, 0), line(&q, 1, 1))] {
            let tris = strip_triangles(&oe, &p, &p2).unwrap();
            assert_eq!(tris.len(), 4);
            let boundary = Walk::from_vertices(&oe, &[p[0], p2[0]])
                .unwrap()
                .concat(&Walk::from_vertices(&oe, &p2).unwrap())
                .unwrap()
                .concat(&Walk::from_vertices(&oe, &[p2[2], p[2]]).unwrap())
                .unwrap()
                .concat(&Walk::from_vertices(&oe, &p).unwrap().reversed())
                .unwrap();
            let mut sum = OneChain::zero();
            for t in &tris {
                sum += &indicator(t, &oe);
            }
            assert_eq!(sum, indicator(&boundary, &oe));
            let f = LFunction::constant(q.vertex_count(), LValue::Zero);
            assert!(verify_almost_contractible(&boundary, &tris, &f, 0, &oe));
        }
    }

    #[test]
    fn stacked_strips_certify_homotopy() {
        let q = build_qn(3).unwrap();
        let oe = OrientedEdges::canonical(&q);
        let lines = vec![line(&q, 0, 0), line(&q, 1, 0), line(&q, 2, 0)];
        let mut f = LFunction::constant(q.vertex_count(), LValue::Zero);
        f.set(lines[1][1], LValue::Star);
        let h = strip_homotopy(&oe, &lines, &f).unwrap();
        assert!(h.k > 0);
        assert!(verify_almost_homotopic(&h.w1, &h.w2, &h.q, &h.r, &h.triangles, &f, h.k, &oe).unwrap());
        assert!(!verify_almost_homotopic(&h.w1, &h.w2, &h.q, &h.r, &h.triangles, &f, h.k - 1, &oe).unwrap());
    }

    #[test]
    fn rejects_non_adjacent_lines() {
        let q = build_qn(3).unwrap();
        let oe = OrientedEdges::canonical(&q);
        assert!(strip_triangles(&oe, &line(&q, 0, 0), &line(&q, 2, 0)).is_err());
    }
}
