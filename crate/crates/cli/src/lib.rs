//! Library half of the command-line front end: label grammar, report types
//! with their renderings, scenario configurations and sweeps. The binary in
//! `main.rs` is a thin dispatcher over these.

pub mod label;
pub mod report;
pub mod scenario;
pub mod sweep;
