use super::{Character, MasseyError};
use crate::magnus::{canonical_decompose, CanonicalDecomposition};
use crate::unipotent::{evaluate_word, BarUnipotent, LiftError, RepAssignment};
use crate::words::PresentationSpec;

fn relator_checked(spec: &PresentationSpec, index: usize) -> Result<(), MasseyError> {
    if index >= spec.relators().len() {
        return Err(MasseyError::RelatorIndex {
            index,
            count: spec.relators().len(),
        });
    }
    Ok(())
}

/// `tr_r` of the Massey product value attached to the defining system `rep`:
/// minus the corner of the zero-corner lift evaluated on relator `relator`.
pub fn trace_of_value(
    spec: &PresentationSpec,
    rep: &RepAssignment<BarUnipotent>,
    relator: usize,
) -> Result<u32, MasseyError> {
    relator_checked(spec, relator)?;
    let lift = rep.zero_lift();
    let value = evaluate_word(&lift, &spec.relators()[relator])
        .map_err(|_| LiftError::GeneratorCount {
            expected: spec.generator_count(),
            found: rep.generator_count(),
        })?;
    if !value.is_identity_except_corner() {
        return Err(LiftError::RelatorNotKilled { index: relator }.into());
    }
    Ok(spec.prime().neg(value.corner()))
}

pub fn decompose_relator(
    spec: &PresentationSpec,
    relator: usize,
) -> Result<CanonicalDecomposition, MasseyError> {
    relator_checked(spec, relator)?;
    canonical_decompose(&spec.relators()[relator], spec.prime())
        .map_err(|source| MasseyError::Decompose { relator, source })
}

/// `tr_r(χ_i ∪ χ_j)` read off the decomposition: `u_ij` for `i < j`, `-u_ij` for
/// `i > j`, and on the diagonal `a_i` when `p = 2`, else 0. Equivalently the
/// coefficient of `X_i X_j` in the Magnus image of `r`.
pub fn cup_trace_of(dec: &CanonicalDecomposition, i: usize, j: usize) -> u32 {
    let p = dec.prime();
    if i < j {
        dec.b(i, j)
    } else if i > j {
        p.neg(dec.b(j, i))
    } else if p.get() == 2 {
        dec.a(i)
    } else {
        0
    }
}

/// [`cup_trace_of`] for relator `relator` of `spec`, with 0-based indices.
pub fn cup_trace(
    spec: &PresentationSpec,
    relator: usize,
    i: usize,
    j: usize,
) -> Result<u32, MasseyError> {
    Ok(cup_trace_of(&decompose_relator(spec, relator)?, i, j))
}

/// Bilinear extension of [`cup_trace_of`] to arbitrary characters.
pub fn cup_trace_characters(dec: &CanonicalDecomposition, a: &Character, b: &Character) -> u32 {
    let p = dec.prime();
    let d = dec.generator_count();
    let mut acc = 0;
    for i in 0..d {
        if a.value(i) == 0 {
            continue;
        }
        for j in 0..d {
            let t = p.mul(p.mul(a.value(i), b.value(j)), cup_trace_of(dec, i, j));
            acc = p.add(acc, t);
        }
    }
    acc
}
