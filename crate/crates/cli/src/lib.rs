//! Command-line front end: single-prime verification, parallel sweeps,
//! reproduction of the worked examples, and a persistent unit cache.

pub mod app;
pub mod cache;
pub mod examples;
pub mod report;
pub mod sweep;
