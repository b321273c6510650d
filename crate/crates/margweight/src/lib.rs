//! File formats, a rayon-backed simulation runner and the `margweight`
//! command-line tool on top of [`margweight_core`].

pub mod cli;
pub mod format;
pub mod parallel;

pub use margweight_core as core;
