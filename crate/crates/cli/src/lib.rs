//! Experiment companion for the `gmrd-core` library: configuration
//! loading, deterministic CSV emission, sweep drivers, plot rendering, and
//! the acceptance verifier.

pub mod config;
pub mod csvio;
pub mod svg;
pub mod sweeps;
pub mod verify;
