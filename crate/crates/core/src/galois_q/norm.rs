use super::hilbert::cup_vanishes;
use super::{GaloisError, SquareClass};
use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

/// Default cap on the search height of [`norm_solve`].
pub const DEFAULT_HEIGHT_CAP: u64 = 10_000;

/// `value = α1² - field·α2²`, i.e. `value` is the norm of `α1 + α2·√field`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormRepresentation {
    pub field: i64,
    pub value: i64,
    #[serde(serialize_with = "super::ser_rational")]
    pub alpha1: BigRational,
    #[serde(serialize_with = "super::ser_rational")]
    pub alpha2: BigRational,
}

impl NormRepresentation {
    pub fn verify(&self) -> bool {
        let a = BigRational::from_integer(BigInt::from(self.field));
        let b = BigRational::from_integer(BigInt::from(self.value));
        &self.alpha1 * &self.alpha1 - a * &self.alpha2 * &self.alpha2 == b
    }
}

fn int(n: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Height below which a solution is guaranteed once one exists: for
/// `x² = a y² + b z²` with squarefree `a`, `b`, and `a` not a square, some
/// solution has `0 < z <= √|a|` and `|y| <= √|b|`.
pub fn holzer_height(a: &SquareClass, b: &SquareClass) -> u64 {
    let ra = a.rep().unsigned_abs().sqrt();
    let rb = b.rep().unsigned_abs().sqrt();
    ra.max(rb).max(1)
}

/// Writes `b` as a norm from `Q(√a)`: finds `α1, α2` with `b = α1² - a·α2²`.
///
/// Searches integer points `x² = a y² + b z²` with `z >= 1`, `y >= 0` in order of
/// height `max(y, z)`, returning `(x/z, y/z)` for the first hit.
///
/// # Errors
/// `NotANorm` when no such representation exists; `HeightCapExceeded` when the
/// search would have to go above `height_cap`.
pub fn norm_solve(
    a: &SquareClass,
    b: &SquareClass,
    height_cap: u64,
) -> Result<NormRepresentation, GaloisError> {
    if !cup_vanishes(a, b) {
        return Err(GaloisError::NotANorm {
            a: a.rep(),
            b: b.rep(),
        });
    }
    let (ar, br) = (a.rep() as i128, b.rep() as i128);
    if a.is_square() {
        // ((b+1)/2)² - ((b-1)/2)² = b
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        return Ok(NormRepresentation {
            field: a.rep(),
            value: b.rep(),
            alpha1: (int(br) + BigRational::one()) * &half,
            alpha2: (int(br) - BigRational::one()) * &half,
        });
    }
    let bound = holzer_height(a, b);
    let limit = bound.min(height_cap);
    for h in 1..=limit as i128 {
        for z in 1..=h {
            let ys: Box<dyn Iterator<Item = i128>> = if z == h {
                Box::new(0..=h)
            } else {
                Box::new(std::iter::once(h))
            };
            for y in ys {
                let rhs = ar * y * y + br * z * z;
                if rhs < 0 {
                    continue;
                }
                let x = rhs.sqrt();
                if x * x == rhs {
                    let zq = int(z);
                    return Ok(NormRepresentation {
                        field: a.rep(),
                        value: b.rep(),
                        alpha1: int(x) / &zq,
                        alpha2: int(y) / zq,
                    });
                }
            }
        }
    }
    Err(GaloisError::HeightCapExceeded {
        a: a.rep(),
        b: b.rep(),
        height: limit,
    })
}
