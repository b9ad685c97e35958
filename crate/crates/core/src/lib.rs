//! Numbering of irregular arrays.
//!
//! A positive integer sequence `b_1, b_2, ...` partitions the natural
//! numbers into consecutive blocks. This crate locates any index inside such
//! an array, both by exact search over partial sums and by the closed-form
//! root formulas available for polynomial and geometric block lengths. On
//! top of that numbering it builds permutations of the naturals that act
//! inside each block, and generalized reluctant sequences.

pub mod closed_forms;
pub mod diagonals;
pub mod error;
pub mod oeis;
pub mod partition;
pub mod perm;
pub mod reluctant;

pub use closed_forms::{ClosedForm, ClosedFormResult, RootWork};
pub use diagonals::DiagonalPair;
pub use error::{Error, Result};
pub use partition::{validate, Family, PartialSumTable, PartitionSpec, Position, Validation};
pub use perm::{IntraBlockPermutation, OrderReport, Rule};
pub use reluctant::{ReluctantSpec, TermSource};


