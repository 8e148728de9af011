use super::matrix::UnipotentMatrix;
use super::rep::{evaluate_word, RepAssignment};
use super::search::{enumerate_reps, SearchError};
use crate::words::{FreeWord, PresentationSpec};

/// Looks for `ρ: G -> U_{n+1}(F_p)` with `ρ(w) != 1`, trying every homomorphism.
///
/// # Errors
/// `BudgetExceeded` if there are more than `budget` candidate assignments.
pub fn separating_rep(
    spec: &PresentationSpec,
    w: &FreeWord,
    n: usize,
    budget: u64,
) -> Result<Option<RepAssignment<UnipotentMatrix>>, SearchError> {
    let search = enumerate_reps(spec, n + 1, budget)?;
    Ok(search
        .into_iter()
        .find(|rep| !evaluate_word(rep, w).expect("word over the same generators").is_identity()))
}
