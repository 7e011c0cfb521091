//! Numerical laboratory for weighted shift operators on `ℓ²(ℤ)`.
//!
//! The crate builds the weighted bilateral shift, its defect operator and
//! diagonal similarity, and a two-block upper-triangular shift; evaluates
//! their resolvents in closed form with certified truncation; computes Hardy
//! norms of resolvent matrix elements; and cross-checks everything against
//! dense finite sections.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod hardy;
pub mod linemodel;
pub mod operators;
pub mod oracle;
pub mod quadrature;
pub mod report;
pub mod resolvent;
pub mod schatten;
pub mod sequences;
pub mod series;
pub mod smoothness;
pub mod suite;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = nalgebra::Complex<f64>;
