//! Permutation-group engine for regular cyclic subgroups.
//!
//! Given generators of a group `K ≤ Sym(n)`, the crate builds a solvable
//! subgroup `M ≤ K` into which every regular cyclic subgroup of `K` can be
//! conjugated, and from `M` a cycle base of `K`: one full cycle per
//! `K`-conjugacy class of regular cyclic subgroups.

pub mod arith;
pub mod blocks;
pub mod control;
pub mod corpus;
pub mod cycle_base;
pub mod error;
pub mod feasible;
pub mod group;
pub mod io;
pub mod oracle;
pub mod perm;
pub mod primitive;
pub mod wreath;

pub use error::{Error, ParseError, Result};
pub use group::Group;
pub use perm::{CycleType, Perm};
pub use control::{control_subgroup, Conclusion, ControlResult};
pub use cycle_base::{cycle_base, CycleBaseResult};
