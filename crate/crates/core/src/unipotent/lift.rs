use super::matrix::{BarUnipotent, UnipotentMatrix};
use super::rep::{evaluate_word, RepAssignment};
use crate::fp::FpMatrix;
use crate::words::PresentationSpec;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("relator {index} is not killed by the representation outside the corner")]
    RelatorNotKilled { index: usize },
    #[error("representation has {found} generator images, presentation has {expected}")]
    GeneratorCount { expected: usize, found: usize },
}

/// Why a representation into `Ū` does not lift: evaluating the zero-corner lift on
/// `relator` leaves `corner` in the top-right entry, and no choice of generator
/// corners can clear it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftObstruction {
    pub relator: usize,
    pub corner: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LiftOutcome {
    Lift(RepAssignment<UnipotentMatrix>),
    Obstructed(LiftObstruction),
}

impl LiftOutcome {
    pub fn lifts(&self) -> bool {
        matches!(self, LiftOutcome::Lift(_))
    }
}

/// The affine system deciding whether a representation into `Ū` lifts.
///
/// Changing the corner of generator `g` by `t_g` changes the corner of the image
/// of a relator `r` by `sum_g exponent_sum(r, g) * t_g`, so lifting is an affine
/// system over F_p in the unknowns `t_g`.
#[derive(Debug, Clone)]
pub(crate) struct LiftSystem {
    p: crate::fp::Prime,
    sigma: FpMatrix,
    homogeneous: bool,
}

impl LiftSystem {
    pub(crate) fn new(spec: &PresentationSpec) -> Self {
        let p = spec.prime();
        let d = spec.generator_count();
        let relators = spec.relators();
        let mut sigma = FpMatrix::zeros(relators.len(), d);
        let mut homogeneous = true;
        for (index, r) in relators.iter().enumerate() {
            for g in 0..d {
                let v = p.reduce(r.exponent_sum(g));
                homogeneous &= v == 0;
                sigma[(index, g)] = v;
            }
        }
        LiftSystem {
            p,
            sigma,
            homogeneous,
        }
    }

    /// Generator corners clearing the given relator corners, or the obstruction.
    pub(crate) fn solve(&self, corners: &[u32]) -> Result<Vec<u32>, LiftObstruction> {
        if self.homogeneous {
            return match corners.iter().position(|&c| c != 0) {
                None => Ok(vec![0; self.sigma.cols()]),
                Some(relator) => Err(LiftObstruction {
                    relator,
                    corner: corners[relator],
                }),
            };
        }
        let rhs: Vec<u32> = corners.iter().map(|&c| self.p.neg(c)).collect();
        self.sigma.solve(self.p, &rhs).map_err(|bad| LiftObstruction {
            relator: bad.row,
            corner: corners[bad.row],
        })
    }

    /// Sets the corners of zero-corner generator images to `t`.
    pub(crate) fn lift(images: &[UnipotentMatrix], t: &[u32]) -> RepAssignment<UnipotentMatrix> {
        let images = images
            .iter()
            .zip(t)
            .map(|(m, &tg)| {
                let mut m = m.clone();
                let size = m.size();
                if size > 1 {
                    m.set(0, size - 1, tg);
                }
                m
            })
            .collect();
        RepAssignment::new(images).expect("uniform shapes")
    }
}

/// Decides whether `rep` extends to a homomorphism `G -> U_{n+1}(F_p)`.
///
/// # Errors
/// `RelatorNotKilled` if `rep` does not send every relator into the center.
pub fn lift_exists(
    spec: &PresentationSpec,
    rep: &RepAssignment<BarUnipotent>,
) -> Result<LiftOutcome, LiftError> {
    let d = spec.generator_count();
    if rep.generator_count() != d {
        return Err(LiftError::GeneratorCount {
            expected: d,
            found: rep.generator_count(),
        });
    }
    let zero = rep.zero_lift();
    let mut corners = Vec::with_capacity(spec.relators().len());
    for (index, r) in spec.relators().iter().enumerate() {
        let value = evaluate_word(&zero, r).expect("generator counts checked");
        if !value.is_identity_except_corner() {
            return Err(LiftError::RelatorNotKilled { index });
        }
        corners.push(value.corner());
    }
    Ok(match LiftSystem::new(spec).solve(&corners) {
        Ok(t) => LiftOutcome::Lift(LiftSystem::lift(zero.images(), &t)),
        Err(o) => LiftOutcome::Obstructed(o),
    })
}
