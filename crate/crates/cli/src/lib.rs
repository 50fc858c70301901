//! Command-line front end for `octo-rank-core`: JSON export of the form
//! families and of `ker ω`, symmetry audits, and the acceptance runner.

pub mod cli;
pub mod config;
pub mod export;
pub mod report;
pub mod verify;
