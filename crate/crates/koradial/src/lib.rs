//! File formats, pipelines and the command line for `koradial-core`.

pub mod artifacts;
pub mod cli;
pub mod config;
pub mod pipeline;
pub mod report;
