//! Drivers around `veech-core`: seeded sampling, parallel property suites,
//! file formats and the `veech` command line tool.

pub mod cli;
pub mod format;
pub mod sampling;
pub mod suites;

pub use veech_core as core;
