//! File handling, reports and experiments behind the `tropfw` binary.

pub mod experiment;
pub mod io;
pub mod report;
