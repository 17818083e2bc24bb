//! Z3 digits, Eisenstein integers, arrays, triads and their correlations.

mod array;
mod correlation;
mod eisenstein;
mod triad;

pub use array::{Z3Array, Z3Digit};
pub(crate) use array::strides_of;
pub(crate) use triad::member_order;
pub use correlation::{
    aperiodic_autocorrelation, cross_correlation, is_golay_sequences, is_golay_triad, periodic_autocorrelation,
    triad_autocorrelation_sum, CorrelationTable,
};
pub use eisenstein::EisensteinInt;
pub use triad::Triad;
