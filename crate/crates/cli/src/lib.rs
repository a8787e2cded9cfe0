//! File formats, the analysis pipeline and reports behind the `dp4` binary.

pub mod expr;
pub mod pipeline;
pub mod report;
pub mod spec;
