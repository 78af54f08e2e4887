//! Exact ranking toolkit core.
//!
//! Dominance matrices, exact linear ordering with full enumeration of
//! alternate optima, the rankability measures `(k, p, tau, beta)`, the Massey
//! and Colley rating systems, and seeded generators for structured
//! artificial instances.
//!
//! The crate is `no_std` and only needs `alloc`. IO, file formats and the
//! command line live in the `ordo` crate.
#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

mod error;
pub mod generators;
pub mod linalg;
pub mod lop;
mod matrix;
pub mod rankability;
pub mod rational;
mod ranking;

pub use error::{Error, Result};
pub use matrix::DominanceMatrix;
pub use rational::Rational;
pub use ranking::{kendall_tau, rank_vector, Measures, OptimalSet, Ranking, Sense};

/// Enumeration cap used when the caller does not pick one.
pub const DEFAULT_CAP: usize = 10_000;
