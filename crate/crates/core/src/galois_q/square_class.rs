use serde::Serialize;
use std::fmt;

use super::GaloisError;

/// Inputs are factored by trial division, so their size is capped.
pub const MAX_INPUT: u64 = 1_000_000_000_000;

/// A class in `Q^* / (Q^*)^2`, represented by its squarefree integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(into = "i64")]
pub struct SquareClass {
    rep: i64,
    primes: Vec<u64>,
}

impl From<SquareClass> for i64 {
    fn from(s: SquareClass) -> i64 {
        s.rep
    }
}

impl SquareClass {
    /// The class of the nonzero integer `n`.
    pub fn new(n: i64) -> Result<Self, GaloisError> {
        if n == 0 {
            return Err(GaloisError::Zero);
        }
        let mut m = n.unsigned_abs();
        if m > MAX_INPUT {
            return Err(GaloisError::TooLarge { value: n });
        }
        let mut primes = Vec::new();
        let mut q = 2u64;
        while q * q <= m {
            if m.is_multiple_of(q) {
                let mut e = 0;
                while m.is_multiple_of(q) {
                    m /= q;
                    e += 1;
                }
                if e % 2 == 1 {
                    primes.push(q);
                }
            }
            q += if q == 2 { 1 } else { 2 };
        }
        if m > 1 {
            primes.push(m);
        }
        let mag: u64 = primes.iter().product();
        let rep = if n < 0 { -(mag as i64) } else { mag as i64 };
        Ok(SquareClass { rep, primes })
    }

    pub fn rep(&self) -> i64 {
        self.rep
    }

    /// Primes dividing the squarefree representative, ascending.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn is_square(&self) -> bool {
        self.rep == 1
    }

    pub fn product(&self, other: &SquareClass) -> SquareClass {
        let mut primes: Vec<u64> = self
            .primes
            .iter()
            .filter(|q| !other.primes.contains(q))
            .chain(other.primes.iter().filter(|q| !self.primes.contains(q)))
            .copied()
            .collect();
        primes.sort_unstable();
        let mag: u64 = primes.iter().product();
        let neg = (self.rep < 0) != (other.rep < 0);
        SquareClass {
            rep: if neg { -(mag as i64) } else { mag as i64 },
            primes,
        }
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}
