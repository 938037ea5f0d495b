//! Scenario and solution files, the benchmark harness and the command-line
//! front end of `aerial-mec-core`.

pub mod cli;
pub mod format;
pub mod harness;
pub mod record;
