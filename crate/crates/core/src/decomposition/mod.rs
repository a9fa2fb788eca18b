//! Tree decompositions, exact treewidth, weighted balanced separations and
//! brambles.

mod balance;
mod bramble;
mod tree;
mod treewidth;

pub use balance::{balanced_separation, Separation, WeightFunction};
pub use bramble::{bramble_order, crosses_bramble, triangulated_plane, validate_bramble, Bramble};
pub use tree::TreeDecomposition;
pub use treewidth::{
    decomposition_from_ordering, exact_treewidth, exact_treewidth_with, min_fill_ordering, minor_min_width,
    ordering_width, treewidth_at_most, Decision, DEFAULT_GUARD, HARD_CAP,
};
