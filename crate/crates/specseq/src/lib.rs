//! Fixtures, configuration, reports and charts around `specseq-core`.

pub mod chart;
pub mod config;
pub mod fixtures;
pub mod pipeline;
