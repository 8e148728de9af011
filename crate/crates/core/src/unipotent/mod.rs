//! Upper unitriangular matrix groups `U_{n+1}(F_p)` and their quotients `Ū_{n+1}(F_p)`
//! by the center, homomorphisms from presented groups into them, and Dwyer-style
//! lifting from `Ū` to `U`.

pub(crate) mod lift;
mod matrix;
mod rep;
mod search;
mod separate;

pub use lift::{lift_exists, LiftError, LiftObstruction, LiftOutcome};
pub use matrix::{
    mat_commutator, mat_invert, mat_multiply, BarUnipotent, MatrixError, UnipotentGroup,
    UnipotentMatrix,
};
pub use rep::{evaluate_word, RepAssignment};
pub use search::{
    defining_candidate_count, enumerate_defining_reps, enumerate_reps, RepSearch, SearchError,
    DEFAULT_BUDGET,
};
pub use separate::separating_rep;
