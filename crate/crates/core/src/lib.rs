//! Finite geometry and extremal graph toolkit for 4-cycles.

pub mod field;
pub mod graph;
pub mod incidence;
pub mod plane;
pub mod primes;
pub mod polarity;
pub mod extremal;
pub mod report;
pub mod supersat;
pub mod suite;
