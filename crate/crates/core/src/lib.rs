//! Lattices of partitions whose synchrony subspaces are invariant under a set
//! of exact rational matrices, and of tactical decompositions of rectangular
//! ones, computed by splitting classes and taking the coarsest invariant
//! refinement.
//!
//! ```
//! use synclat::{invariant_lattice, MatrixFamily, RationalMatrix};
//!
//! let m = RationalMatrix::from_ints(&[[0, 1, 0], [1, 0, 1], [0, 1, 0]]).unwrap();
//! let lattice = invariant_lattice(&MatrixFamily::single(m)).unwrap();
//! let bars: Vec<String> = lattice.elements().iter().map(|p| p.to_bar()).collect();
//! assert_eq!(bars, ["13|2", "1|2|3"]);
//! ```
//!
//! The crate is `no_std` with `alloc` when the default `std` feature is off.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

mod error;
pub mod lattice;
pub mod linalg;
pub mod networks;
#[cfg(feature = "oracle")]
pub mod oracle;
pub mod partition;
pub mod refine;

pub use error::{Error, Result};
pub use lattice::{
    hasse_edges, invariant_lattice, invariant_lattice_with, tactical_lattice, tactical_lattice_with,
    EnumConfig, EnumStats, InvariantLattice, LatticeElement,
};
pub use linalg::{column_space_contains, parse_rational, ratio, rational, Rational, RationalMatrix};
pub use partition::{induced_partition, Partition, PartitionPair, Refines};
pub use refine::{
    cir, cir_dense, cir_trace, directed_containment, is_invariant, is_tactical, tactical_cir,
    MatrixFamily,
};
