//! Configuration, orchestration and reporting for the `polarlp` binary.

pub mod cli;
pub mod config;
pub mod report;
pub mod suite;
