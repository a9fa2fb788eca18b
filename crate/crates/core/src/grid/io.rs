use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{build_qn, coords_adjacent, Coord, GridGraph};
use crate::error::{Error, Result};
use crate::graph::Adjacency;

/// `"full"` or an explicit vertex list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VertexSpec {
    Keyword(String),
    List(Vec<Coord>),
}

/// `"implicit"` or an explicit index-pair list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EdgeSpec {
    Keyword(String),
    List(Vec<[usize; 2]>),
}

/// JSON form of a grid graph:
/// `{"n": 3, "vertices": "full" | [[x,y,z],...], "edges": "implicit" | [[i,j],...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: u32,
    pub vertices: VertexSpec,
    pub edges: EdgeSpec,
}

impl GridGraph {
    pub fn to_json(&self, explicit_edges: bool) -> GraphJson {
        let vertices = if self.is_full() {
            VertexSpec::Keyword("full".into())
        } else {
            VertexSpec::List(self.coords.clone())
        };
        let edges = if explicit_edges {
            EdgeSpec::List(self.edges().into_iter().map(|(u, v)| [u, v]).collect())
        } else {
            EdgeSpec::Keyword("implicit".into())
        };
        GraphJson {
            n: self.side(),
            vertices,
            edges,
        }
    }

    /// Rebuilds the graph. Explicit edge lists must agree with the adjacency rule.
    pub fn from_json(j: &GraphJson) -> Result<GridGraph> {
        let full = build_qn(j.n)?;
        let g = match &j.vertices {
            VertexSpec::Keyword(k) if k == "full" => full,
            VertexSpec::Keyword(k) => return Err(Error::Parse(format!("unknown vertex keyword {k:?}"))),
            VertexSpec::List(list) => {
                let g = full.induced(list.iter().copied())?;
                if g.vertex_count() != list.len() {
                    return Err(Error::Parse("duplicate vertices".into()));
                }
                g
            }
        };
        match &j.edges {
            EdgeSpec::Keyword(k) if k == "implicit" => {}
            EdgeSpec::Keyword(k) => return Err(Error::Parse(format!("unknown edge keyword {k:?}"))),
            EdgeSpec::List(list) => {
                // indices refer to the listed vertex order; map through coordinates
                let order: Vec<Coord> = match &j.vertices {
                    VertexSpec::List(l) => l.clone(),
                    _ => g.coords().to_vec(),
                };
                let mut given = Vec::with_capacity(list.len());
                for &[a, b] in list {
                    let (ca, cb) = match (order.get(a), order.get(b)) {
                        (Some(ca), Some(cb)) => (*ca, *cb),
                        _ => return Err(Error::Parse(format!("edge [{a},{b}] out of range"))),
                    };
                    if !coords_adjacent(ca, cb) {
                        return Err(Error::Parse(format!("edge {ca}-{cb} violates the adjacency rule")));
                    }
                    let (u, v) = (g.index(ca).unwrap(), g.index(cb).unwrap());
                    given.push((u.min(v), u.max(v)));
                }
                given.sort_unstable();
                given.dedup();
                if given != g.edges() {
                    return Err(Error::Parse("edge list is not the induced edge set".into()));
                }
            }
        }
        Ok(g)
    }

    /// Graphviz rendering; vertices are labelled with their coordinates.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph Q {\n");
        for (i, c) in self.coords.iter().enumerate() {
            let _ = writeln!(s, "  {i} [label=\"{},{},{}\"];", c.x, c.y, c.z);
        }
        for (u, v) in self.edges() {
            let _ = writeln!(s, "  {u} -- {v};");
        }
        s.push_str("}\n");
        s
    }
}
