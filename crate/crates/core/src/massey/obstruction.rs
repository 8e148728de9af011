use super::trace::decompose_relator;
use super::{Character, MasseyError};
use crate::magnus::CanonicalDecomposition;
use serde::Serialize;
use std::fmt;

use crate::words::PresentationSpec;

/// Which non-vanishing criterion matched; indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ObstructionPattern {
    /// `c_ijk != 0` with distinct `i < j`, `k < j`.
    Ob1 { i: usize, j: usize, k: usize },
    /// `c_iji != 0`, `i < j`.
    Ob2a { i: usize, j: usize },
    /// `c_ijj != 0`, `i < j`.
    Ob2b { i: usize, j: usize },
}

impl fmt::Display for ObstructionPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ObstructionPattern::Ob1 { i, j, k } => write!(f, "Ob1(i={}, j={}, k={})", i + 1, j + 1, k + 1),
            ObstructionPattern::Ob2a { i, j } => write!(f, "Ob2a(i={}, j={})", i + 1, j + 1),
            ObstructionPattern::Ob2b { i, j } => write!(f, "Ob2b(i={}, j={})", i + 1, j + 1),
        }
    }
}

/// A relator whose canonical decomposition forces a non-vanishing triple Massey product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObstructionWitness {
    pub relator: usize,
    pub pattern: ObstructionPattern,
    /// The triple that is defined but does not contain 0.
    pub triple: Vec<Character>,
    /// The nonzero triple-commutator exponent.
    pub coefficient: u32,
    /// Set for `p = 2`: the group is then not the maximal pro-2 quotient of any
    /// absolute Galois group.
    pub not_realizable: bool,
}

fn vanish(dec: &CanonicalDecomposition, pairs: impl IntoIterator<Item = (usize, usize)>) -> bool {
    pairs.into_iter().all(|(x, y)| dec.u(x, y) == 0)
}

/// Matches every relator against the two obstruction criteria, checking the
/// side conditions on all other relators.
pub fn obstruction_scan(spec: &PresentationSpec) -> Result<Vec<ObstructionWitness>, MasseyError> {
    let p = spec.prime();
    let d = spec.generator_count();
    let two = p.get() == 2;
    let decs = (0..spec.relators().len())
        .map(|r| decompose_relator(spec, r))
        .collect::<Result<Vec<_>, _>>()?;
    let neg_dual = |i: usize| Character::dual(p, d, i).neg();
    let mut out = Vec::new();
    for (ri, dec) in decs.iter().enumerate() {
        let others = || decs.iter().enumerate().filter(move |(s, _)| *s != ri).map(|(_, s)| s);
        for j in 0..d {
            for i in 0..j {
                for k in 0..j {
                    if k == i {
                        continue;
                    }
                    let c = dec.c(i, j, k);
                    if c == 0 {
                        continue;
                    }
                    let outside = (0..d).filter(|&l| l != i && l != j && l != k);
                    let own = vanish(dec, [(i, j), (k, j), (k, i)])
                        && outside.clone().all(|l| dec.u(k, l) == 0 && dec.u(j, l) == 0)
                        && (!two || (dec.a(k) == 0 && dec.a(j) == 0));
                    let rest = others().all(|s| vanish(s, [(k, i), (i, j)]));
                    if own && rest {
                        out.push(ObstructionWitness {
                            relator: ri,
                            pattern: ObstructionPattern::Ob1 { i, j, k },
                            triple: vec![neg_dual(k), neg_dual(i), neg_dual(j)],
                            coefficient: c,
                            not_realizable: two,
                        });
                    }
                }
            }
        }
        for i in 0..d {
            for j in i + 1..d {
                let own = dec.u(i, j) == 0
                    && (0..d)
                        .filter(|&l| l != i && l != j)
                        .all(|l| dec.u(i, l) == 0 && dec.u(j, l) == 0)
                    && (!two || (dec.a(i) == 0 && dec.a(j) == 0));
                if !own {
                    continue;
                }
                let cases = [
                    (dec.c(i, j, i), i, ObstructionPattern::Ob2a { i, j }, [j, i, i]),
                    (dec.c(i, j, j), j, ObstructionPattern::Ob2b { i, j }, [i, j, j]),
                ];
                for (c, squared, pattern, triple) in cases {
                    if c == 0 {
                        continue;
                    }
                    let rest = others().all(|s| s.u(i, j) == 0 && (!two || s.a(squared) == 0));
                    if rest {
                        out.push(ObstructionWitness {
                            relator: ri,
                            pattern,
                            triple: triple.iter().map(|&t| neg_dual(t)).collect(),
                            coefficient: c,
                            not_realizable: two,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}
