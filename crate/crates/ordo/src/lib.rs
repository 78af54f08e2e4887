//! Files, model cards, catalogs, plots and parallel solving on top of
//! [`ordo_core`].

pub mod card;
pub mod catalog;
pub mod ingest;
pub mod parallel;
pub mod plot;
pub mod query;

pub use ordo_core as core;
