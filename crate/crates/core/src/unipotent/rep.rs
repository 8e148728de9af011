use super::matrix::{BarUnipotent, MatrixError, UnipotentGroup, UnipotentMatrix};
use crate::fp::Prime;
use crate::words::{FreeWord, WordError};
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

/// Images of the generators `x1..xd` under a homomorphism into `U` or `Ū`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RepAssignment<M> {
    images: Vec<M>,
}

impl<M: UnipotentGroup> RepAssignment<M> {
    /// # Errors
    /// `DimensionMismatch`/`PrimeMismatch` if the images differ in shape.
    pub fn new(images: Vec<M>) -> Result<Self, MatrixError> {
        if let Some(first) = images.first() {
            let (p, n) = (first.as_full().prime(), first.as_full().size());
            for m in &images[1..] {
                let f = m.as_full();
                if f.prime() != p {
                    return Err(MatrixError::PrimeMismatch {
                        left: p.get(),
                        right: f.prime().get(),
                    });
                }
                if f.size() != n {
                    return Err(MatrixError::DimensionMismatch {
                        left: n,
                        right: f.size(),
                    });
                }
            }
        }
        Ok(RepAssignment { images })
    }

    pub fn images(&self) -> &[M] {
        &self.images
    }

    pub fn generator_count(&self) -> usize {
        self.images.len()
    }

    pub fn prime(&self) -> Option<Prime> {
        self.images.first().map(|m| m.as_full().prime())
    }

    pub fn size(&self) -> Option<usize> {
        self.images.first().map(|m| m.as_full().size())
    }

    pub fn into_images(self) -> Vec<M> {
        self.images
    }
}

impl RepAssignment<BarUnipotent> {
    /// The lift to `U` whose generator images all have zero corner.
    pub fn zero_lift(&self) -> RepAssignment<UnipotentMatrix> {
        RepAssignment {
            images: self.images.iter().map(|m| m.zero_lift().clone()).collect(),
        }
    }
}

impl RepAssignment<UnipotentMatrix> {
    pub fn to_bar(&self) -> RepAssignment<BarUnipotent> {
        RepAssignment {
            images: self.images.iter().map(|m| BarUnipotent::new(m.clone())).collect(),
        }
    }
}

/// Evaluates `w` on generator images, using `inverses[g]` for negative exponents.
pub(crate) fn evaluate_with<M: UnipotentGroup>(images: &[M], inverses: &[M], w: &FreeWord) -> M {
    let first = images[0].as_full();
    let mut acc = M::identity(first.prime(), first.size());
    for l in w.letters() {
        let (base, e) = if l.exp < 0 {
            (&inverses[l.gen], -l.exp)
        } else {
            (&images[l.gen], l.exp)
        };
        acc = if e == 1 {
            acc.mul(base)
        } else {
            acc.mul(&base.power(e))
        };
    }
    acc
}

/// Homomorphic image of `w` under the assignment.
///
/// # Errors
/// `Index` if `w` uses a generator the assignment does not cover.
pub fn evaluate_word<M: UnipotentGroup>(
    assignment: &RepAssignment<M>,
    w: &FreeWord,
) -> Result<M, WordError> {
    let d = assignment.generator_count();
    if let Some(g) = w.max_generator() {
        if g >= d {
            return Err(WordError::Index { index: g + 1, d });
        }
    }
    if d == 0 {
        return Err(WordError::Index { index: 1, d: 0 });
    }
    let inverses: Vec<M> = assignment.images.iter().map(|m| m.inv()).collect();
    Ok(evaluate_with(&assignment.images, &inverses, w))
}

/// Serializes as a list of generator images, each a list of rows.
impl<M: UnipotentGroup> Serialize for RepAssignment<M> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.images.len()))?;
        for m in &self.images {
            seq.serialize_element(&m.as_full().rows())?;
        }
        seq.end()
    }
}
