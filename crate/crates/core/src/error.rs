use thiserror::Error;

use crate::grid::Coord;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid side must be positive")]
    EmptyGrid,
    #[error("coordinate {0:?} lies outside the grid of side {1}")]
    OutOfBounds(Coord, u32),
    #[error("invalid staircase: {0}")]
    InvalidStaircase(String),
    #[error("invalid walk: {0}")]
    InvalidWalk(String),
    #[error("not a triangle: {0}")]
    NotTriangle(String),
    #[error("function is not entire on the path")]
    NotEntire,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("size guard exceeded: {what} is {actual}, limit {limit}")]
    GuardExceeded {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
    #[error("separator intersects a side")]
    SeparatorTouchesSide,
    #[error("set does not separate the sides")]
    NotSeparator,
    #[error("sides are adjacent or overlap; no separator exists")]
    NoSeparatorExists,
    #[error("staircase is not blocked")]
    NotBlocked,
    #[error("no staircase route between {0:?} and {1:?}")]
    NoRoute(Coord, Coord),
    #[error("invalid slab: {0}")]
    InvalidSlab(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("internal invariant broken: {0}")]
    Invariant(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
