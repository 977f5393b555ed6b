//! Constructive removal for directed and partite hypergraphs.
//!
//! The crate counts homomorphisms between hypergraphs, finds edge sets whose
//! removal leaves a host free of a template, and symmetrizes such sets under
//! a group of automorphisms so that the result is a union of orbits. On top
//! of that it builds Cayley graphs and Cayley hypergraphs over finite groups
//! and runs two end-to-end pipelines: killing the solutions of `ab = c` in a
//! connection set, and shrinking sets so that no diagonal arithmetic
//! progression remains.

pub mod cayley;
pub mod cayley_hyper;
pub mod error;
pub mod format;
pub mod groups;
pub mod hypergraph;
pub mod label;
pub mod removal;

pub use error::{Error, Result};
pub use label::Label;
