//! Complete solution sets for `U_n + U_m = V_k` over binary recurrences,
//! certified by Matveev's lower bound for linear forms in logarithms and the
//! Dujella–Pethő reduction.
//!
//! - [`bigseq`]: exact recurrences, Binet cross-checks, growth predicates
//! - [`certreal`]: interval arithmetic with outward rounding and a small
//!   expression language
//! - [`contfrac`]: certified continued fractions and Legendre's criterion
//! - [`linforms`]: heights, the Matveev coefficient, index-bound solving
//! - [`reduction`]: the reduction lemma, single instances and shift sweeps
//! - [`solver`]: search, index relations and the end-to-end pipelines

pub mod bigseq;
pub mod certreal;
pub mod cli;
pub mod contfrac;
pub mod error;
pub mod linforms;
pub mod reduction;
mod ser;
pub mod solver;
pub mod surd;

pub use error::{Error, Result};
