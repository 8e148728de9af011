//! Triple Massey products of Kummer characters `χ_a` over Q: Hilbert symbols,
//! norms from quadratic fields, and explicit rational points on splitting
//! varieties.

mod hilbert;
mod norm;
mod splitting;
mod square_class;

pub use hilbert::{cup_vanishes, hilbert_symbol, hilbert_symbol_int, obstructing_place, support, Place};
pub use norm::{holzer_height, norm_solve, NormRepresentation, DEFAULT_HEIGHT_CAP};
pub use splitting::{
    galois_triple_check, splitting_point, triple_defined, GaloisReport, IdentitySides,
    SplittingCase, SplittingCertificate, SplittingOutcome, SplittingPoint,
};
pub use square_class::{SquareClass, MAX_INPUT};

use num_rational::BigRational;
use serde::Serializer;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaloisError {
    #[error("0 has no square class")]
    Zero,
    #[error("{value} exceeds the supported magnitude {MAX_INPUT}")]
    TooLarge { value: i64 },
    #[error("{b} is not a norm from Q(sqrt({a}))")]
    NotANorm { a: i64, b: i64 },
    #[error("no norm representation of {b} from Q(sqrt({a})) up to height {height}")]
    HeightCapExceeded { a: i64, b: i64, height: u64 },
    #[error("triple not defined: cup product of {} and {} is nonzero at {place}", pair.0, pair.1)]
    NotDefined { pair: (i64, i64), place: Place },
    #[error("norm representations have alpha1 + gamma1 = 0")]
    Degenerate,
    #[error("constructed point does not satisfy the splitting equation")]
    VerificationFailed,
}

/// Rationals serialize as exact fraction strings such as `"-3/4"`.
pub(crate) fn ser_rational<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}
