//! Permutations, group actions on tuple universes, and finite groups.

mod action;
mod finite;

pub use action::{GroupAction, OrbitInfo, PartitePermutation, Permutation};
pub use finite::{symmetric_group_3, Element, FiniteGroup};
