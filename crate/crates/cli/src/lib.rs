//! Support code for the `randtri` binary: run records, terminal output and
//! the acceptance checks behind `randtri report`.

pub mod acceptance;
pub mod output;
pub mod record;
