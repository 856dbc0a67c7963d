//! Command-line front end: input parsing, parallel analysis, JSON reports and
//! the random verification sweeps.

pub mod commands;
pub mod error;
pub mod input;
pub mod parallel;
pub mod report;
pub mod sweep;
