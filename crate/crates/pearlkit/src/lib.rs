//! Text formats, catalog self-test and command line for `pearlkit-core`.

pub mod cli;
pub mod commands;
pub mod formats;
pub mod report;
pub mod selftest;
