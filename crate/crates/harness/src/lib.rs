//! Proposition suite runner, paper-scenario reproductions and report
//! emission for the measurement-inequality laboratory.

pub mod generate;
pub mod suites;
