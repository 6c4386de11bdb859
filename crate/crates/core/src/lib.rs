//! Special p-forms and the graphs that characterise them.
//!
//! A special p-form on R^d has coordinate components in {-1, 0, 1}. Its
//! support, a set of oriented p-subsets of `{1..d}`, carries a natural
//! metric `p - #(s ∩ t)`; the complete graph on the support labeled by
//! that metric is the form's graph. This crate
//!
//! - represents special forms and the signed permutation group acting on them
//!   ([`forms`]),
//! - builds and analyses distance matrices: admissibility, automorphisms,
//!   democracy ([`graphs`]),
//! - solves for graph functions and reconstructs realisations and the special
//!   forms they induce ([`realization`]),
//! - constructs and classifies democratic matrix families ([`democratic`]),
//! - estimates the comass of a form numerically ([`calibration`]).

pub mod calibration;
pub mod combinatorics;
pub mod democratic;
pub mod error;
pub mod fixtures;
pub mod forms;
mod gf2;
pub mod graphs;
pub mod realization;

pub use error::{Error, Result};
pub use forms::{OrientedSubset, Sign, SignedPermutation, SpecialForm, Term};
pub use graphs::{DistanceMatrix, SymmetryGroupReport, VertexPermutation};
