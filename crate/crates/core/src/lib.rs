//! Enumeration, classification, construction and verification of 3-phase
//! Golay sequence and array triads over Z3.

pub mod arrays;
pub mod catalog;
pub mod construct;
pub mod equivalence;
pub mod error;
pub mod search;
pub mod theory;
pub mod z3core;

pub use error::{Error, Result};
pub use z3core::{
    aperiodic_autocorrelation, cross_correlation, is_golay_triad, periodic_autocorrelation, CorrelationTable,
    EisensteinInt, Triad, Z3Array, Z3Digit,
};
