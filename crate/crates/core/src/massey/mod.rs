//! Massey product decisions for presented pro-p groups, trace maps, and the
//! coefficient criteria that certify non-vanishing triple products.

mod character;
mod check;
mod obstruction;
mod trace;

pub use character::Character;
pub use check::{massey_check, validate_lift, MasseyError, MasseyOptions, MasseyReport, Verdict};
pub use obstruction::{obstruction_scan, ObstructionPattern, ObstructionWitness};
pub use trace::{cup_trace, cup_trace_characters, cup_trace_of, decompose_relator, trace_of_value};
