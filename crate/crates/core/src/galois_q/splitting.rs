use super::hilbert::{cup_vanishes, obstructing_place, Place};
use super::norm::{norm_solve, NormRepresentation};
use super::{GaloisError, SquareClass};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

/// A rational point `(x, y1, y2, y3, y4)` with `x != 0` on
/// `b x² = (y1² - a y2² + c y3² - ac y4²)² - 4c (y1 y3 - a y2 y4)²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingPoint {
    #[serde(serialize_with = "super::ser_rational")]
    pub x: BigRational,
    #[serde(serialize_with = "super::ser_rational")]
    pub y1: BigRational,
    #[serde(serialize_with = "super::ser_rational")]
    pub y2: BigRational,
    #[serde(serialize_with = "super::ser_rational")]
    pub y3: BigRational,
    #[serde(serialize_with = "super::ser_rational")]
    pub y4: BigRational,
}

/// Both sides of the defining equation of the splitting variety.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentitySides {
    #[serde(serialize_with = "super::ser_rational")]
    pub lhs: BigRational,
    #[serde(serialize_with = "super::ser_rational")]
    pub rhs: BigRational,
}

impl SplittingPoint {
    /// Evaluates `b x²` and the quartic in the `y`s.
    pub fn evaluate(&self, a: i64, b: i64, c: i64) -> IdentitySides {
        let q = |n: i64| BigRational::from_integer(BigInt::from(n));
        let (a, b, c) = (q(a), q(b), q(c));
        let (y1, y2, y3, y4) = (&self.y1, &self.y2, &self.y3, &self.y4);
        let first = y1 * y1 - &a * y2 * y2 + &c * y3 * y3 - &a * &c * y4 * y4;
        let second = y1 * y3 - &a * y2 * y4;
        let rhs = &first * &first - q(4) * &c * &second * &second;
        let lhs = b * &self.x * &self.x;
        IdentitySides { lhs, rhs }
    }

    pub fn verify(&self, a: i64, b: i64, c: i64) -> bool {
        let s = self.evaluate(a, b, c);
        !self.x.is_zero() && s.lhs == s.rhs
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SplittingCase {
    /// `a = c` in `Q^*/(Q^*)^2`, `α1 != 0`.
    SameClass,
    /// `a = c` in `Q^*/(Q^*)^2`, `α1 = 0`.
    SameClassDegenerate,
    /// `a != c` in `Q^*/(Q^*)^2`.
    DistinctClasses,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingCertificate {
    pub case: SplittingCase,
    pub point: SplittingPoint,
    /// `b` as a norm from `Q(√a)`, then (for distinct classes) from `Q(√c)`.
    pub norms: Vec<NormRepresentation>,
    pub identity: IdentitySides,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SplittingOutcome {
    /// One of the characters is trivial, so the product contains 0 for free.
    TrivialVanishing { square: char },
    Point(Box<SplittingCertificate>),
}

/// Finds a rational point on the splitting variety of `<χ_a, χ_b, χ_c>`.
///
/// # Errors
/// `NotDefined` if `χ_a ∪ χ_b` or `χ_b ∪ χ_c` is nonzero; norm-solver errors
/// otherwise.
pub fn splitting_point(
    a: &SquareClass,
    b: &SquareClass,
    c: &SquareClass,
    height_cap: u64,
) -> Result<SplittingOutcome, GaloisError> {
    for (x, y) in [(a, b), (b, c)] {
        if let Some(place) = obstructing_place(x, y) {
            return Err(GaloisError::NotDefined {
                pair: (x.rep(), y.rep()),
                place,
            });
        }
    }
    for (name, s) in [('a', a), ('b', b), ('c', c)] {
        if s.is_square() {
            return Ok(SplittingOutcome::TrivialVanishing { square: name });
        }
    }
    let alpha = norm_solve(a, b, height_cap)?;
    let (case, point, norms) = if a == c {
        let av = BigRational::from_integer(BigInt::from(a.rep()));
        let (a1, a2) = (alpha.alpha1.clone(), alpha.alpha2.clone());
        let q = |n: i64| BigRational::from_integer(BigInt::from(n));
        if !a1.is_zero() {
            let point = SplittingPoint {
                x: q(4) * &a1,
                y1: q(2) * &a1,
                y2: a2.clone(),
                y3: a2,
                y4: BigRational::zero(),
            };
            (SplittingCase::SameClass, point, vec![alpha])
        } else {
            let point = SplittingPoint {
                x: q(4) * &av,
                y1: av,
                y2: a2.clone(),
                y3: a2,
                y4: q(-1),
            };
            (SplittingCase::SameClassDegenerate, point, vec![alpha])
        }
    } else {
        let gamma = norm_solve(c, b, height_cap)?;
        let sum = &alpha.alpha1 + &gamma.alpha1;
        if sum.is_zero() {
            return Err(GaloisError::Degenerate);
        }
        let two = BigRational::from_integer(BigInt::from(2));
        let point = SplittingPoint {
            x: two * &sum,
            y1: sum,
            y2: alpha.alpha2.clone(),
            y3: gamma.alpha2.clone(),
            y4: BigRational::zero(),
        };
        (SplittingCase::DistinctClasses, point, vec![alpha, gamma])
    };
    let identity = point.evaluate(a.rep(), b.rep(), c.rep());
    if point.x.is_zero() || identity.lhs != identity.rhs {
        return Err(GaloisError::VerificationFailed);
    }
    Ok(SplittingOutcome::Point(Box::new(SplittingCertificate {
        case,
        point,
        norms,
        identity,
    })))
}

/// Result of [`galois_triple_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GaloisReport {
    /// The cup product of the named pair is nonzero at `place`.
    NotDefined { pair: (i64, i64), place: Place },
    /// Defined, with a certificate that the product contains 0.
    Defined(SplittingOutcome),
}

impl GaloisReport {
    pub fn is_defined(&self) -> bool {
        matches!(self, GaloisReport::Defined(_))
    }
}

/// Decides whether `<χ_a, χ_b, χ_c>` over Q is defined and, if so, certifies
/// that it contains 0.
pub fn galois_triple_check(
    a: &SquareClass,
    b: &SquareClass,
    c: &SquareClass,
    height_cap: u64,
) -> Result<GaloisReport, GaloisError> {
    match splitting_point(a, b, c, height_cap) {
        Err(GaloisError::NotDefined { pair, place }) => Ok(GaloisReport::NotDefined { pair, place }),
        Err(e) => Err(e),
        Ok(outcome) => Ok(GaloisReport::Defined(outcome)),
    }
}

/// `χ_a ∪ χ_b = 0` and `χ_b ∪ χ_c = 0`.
pub fn triple_defined(a: &SquareClass, b: &SquareClass, c: &SquareClass) -> bool {
    cup_vanishes(a, b) && cup_vanishes(b, c)
}
