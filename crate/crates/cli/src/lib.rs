//! Command-line front-end for `bjortho`: orthogonality checks, best
//! approximations, seeded property suites and exact example reproduction.

pub mod commands;
pub mod config;
pub mod error;
pub mod repro;
pub mod report;
pub mod suites;
