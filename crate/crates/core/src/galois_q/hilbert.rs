use super::SquareClass;
use serde::Serialize;
use std::fmt;

/// A place of Q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Place {
    Infinity,
    Prime(u64),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Prime(q) => write!(f, "{q}"),
        }
    }
}

fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let m = m as u128;
    let mut acc = 1u128 % m;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Legendre symbol `(u / q)` for an odd prime `q` not dividing `u`.
fn legendre(u: i64, q: u64) -> i8 {
    let r = u.rem_euclid(q as i64) as u64;
    if pow_mod(r, (q - 1) / 2, q) == 1 {
        1
    } else {
        -1
    }
}

/// Splits `n = q^v * u` with `q` not dividing `u`.
fn valuation(n: i64, q: u64) -> (u32, i64) {
    let mut u = n;
    let mut v = 0;
    while u % q as i64 == 0 {
        u /= q as i64;
        v += 1;
    }
    (v, u)
}

/// The local Hilbert symbol `(a, b)_v` of two nonzero integers.
pub fn hilbert_symbol_int(a: i64, b: i64, place: Place) -> i8 {
    assert!(a != 0 && b != 0, "Hilbert symbol of zero");
    match place {
        Place::Infinity => {
            if a < 0 && b < 0 {
                -1
            } else {
                1
            }
        }
        Place::Prime(2) => {
            let (alpha, u) = valuation(a, 2);
            let (beta, v) = valuation(b, 2);
            let eps = |x: i64| ((x.rem_euclid(4) - 1) / 2) as u32;
            let omega = |x: i64| match x.rem_euclid(8) {
                1 | 7 => 0,
                _ => 1,
            };
            let e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Place::Prime(q) => {
            let (alpha, u) = valuation(a, q);
            let (beta, v) = valuation(b, q);
            let mut s: i8 = if (alpha * beta) % 2 == 1 && (q - 1) / 2 % 2 == 1 { -1 } else { 1 };
            if beta % 2 == 1 {
                s *= legendre(u, q);
            }
            if alpha % 2 == 1 {
                s *= legendre(v, q);
            }
            s
        }
    }
}

pub fn hilbert_symbol(a: &SquareClass, b: &SquareClass, place: Place) -> i8 {
    hilbert_symbol_int(a.rep(), b.rep(), place)
}

/// Places where `(a, b)_v` can be nontrivial: infinity, 2, and the odd primes of `a b`.
pub fn support(a: &SquareClass, b: &SquareClass) -> Vec<Place> {
    let mut primes: Vec<u64> = a.primes().iter().chain(b.primes()).copied().collect();
    primes.push(2);
    primes.sort_unstable();
    primes.dedup();
    std::iter::once(Place::Infinity)
        .chain(primes.into_iter().map(Place::Prime))
        .collect()
}

/// `χ_a ∪ χ_b = 0`, i.e. `b` is a norm from `Q(√a)`: all local symbols are trivial.
pub fn cup_vanishes(a: &SquareClass, b: &SquareClass) -> bool {
    support(a, b).into_iter().all(|v| hilbert_symbol(a, b, v) == 1)
}

/// First place where `(a, b)_v = -1`, if any.
pub fn obstructing_place(a: &SquareClass, b: &SquareClass) -> Option<Place> {
    support(a, b).into_iter().find(|&v| hilbert_symbol(a, b, v) == -1)
}
