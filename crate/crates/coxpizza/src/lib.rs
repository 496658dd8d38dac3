//! Exact computations with finite reflection arrangements: pizza identities,
//! 2-structures, the cone algebra and weighted sums over chambers.

// Matrix and permutation code reads better with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod complex;
pub mod conealg;
pub mod error;
pub mod linalg;
pub mod rootsys;
pub mod sample;
pub mod scalar;
pub mod shelling;
pub mod twostruct;
pub mod verify;
pub mod weighted;

pub use error::{Error, Result};
