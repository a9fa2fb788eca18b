//! Treewidth of separators in the triangulated cube grid `Q_n`.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`] and [`grid`] build `Q_n`, its subgrids, staircases and their
//!   enlargements.
//! * [`calculus`] is the `{-1, 0, +1, *}`-valued vertex calculus: the `d`
//!   operator, walk indicators, integrals and triangle-based homotopy
//!   certificates.
//! * [`decomposition`] holds tree decompositions, the exact treewidth solver,
//!   weighted balanced separations and brambles.
//! * [`separators`] finds, minimalises and inspects side-to-side separators.
//! * [`slab`] checks slab structure and audits separator treewidth.
//! * [`builder`] runs the blocked-staircase / bramble recursion on 2-colourings.
//! * [`harness`] drives the property suites, audits, searches and builds used by
//!   the command line tool.
//!
//! Batch work (sampled suites, partition search, subgrid recursion) goes through
//! [`exec::Execution`], which uses rayon when the `parallel` feature is on and
//! falls back to plain iteration otherwise.

pub mod builder;
pub mod calculus;
pub mod decomposition;
pub mod error;
pub mod exec;
pub mod graph;
pub mod grid;
pub mod harness;
pub mod separators;
pub mod slab;

pub use error::{Error, Result};
