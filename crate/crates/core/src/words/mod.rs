//! Words in a finitely generated free group.
//!
//! Generators are indexed from 0 in the API and printed as `x1..xd`. Commutators
//! follow the convention `[x, y] = x^-1 y^-1 x y`.

mod parse;
mod presentation;

pub use parse::parse_word;
pub use presentation::{parse_presentation, PresentationError, PresentationSpec};

use serde::Serialize;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("generator x{index} out of range (generators = {d})")]
    Index { index: usize, d: usize },
    #[error("words over {left} and {right} generators cannot be combined")]
    DimensionMismatch { left: usize, right: usize },
}

/// One syllable `x_gen^exp` of a word; `exp` is never zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Letter {
    pub gen: usize,
    pub exp: i64,
}

/// A freely reduced word over `d` generators, stored as syllables whose adjacent
/// generators differ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreeWord {
    d: usize,
    letters: Vec<Letter>,
}

impl FreeWord {
    pub fn identity(d: usize) -> Self {
        FreeWord {
            d,
            letters: Vec::new(),
        }
    }

    /// The word `x_gen`.
    pub fn generator(d: usize, gen: usize) -> Result<Self, WordError> {
        Self::power_of_generator(d, gen, 1)
    }

    pub fn power_of_generator(d: usize, gen: usize, exp: i64) -> Result<Self, WordError> {
        if gen >= d {
            return Err(WordError::Index { index: gen + 1, d });
        }
        let mut w = Self::identity(d);
        w.push(Letter { gen, exp });
        Ok(w)
    }

    /// Builds a word from syllables, reducing as it goes.
    pub fn from_letters(
        d: usize,
        letters: impl IntoIterator<Item = (usize, i64)>,
    ) -> Result<Self, WordError> {
        let mut w = Self::identity(d);
        for (gen, exp) in letters {
            if gen >= d {
                return Err(WordError::Index { index: gen + 1, d });
            }
            w.push(Letter { gen, exp });
        }
        Ok(w)
    }

    pub fn generator_count(&self) -> usize {
        self.d
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of syllables.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Sum of absolute exponents, i.e. the length as a string of `x_i^{+-1}`.
    pub fn letter_count(&self) -> u64 {
        self.letters.iter().map(|l| l.exp.unsigned_abs()).sum()
    }

    fn push(&mut self, letter: Letter) {
        if letter.exp == 0 {
            return;
        }
        match self.letters.last_mut() {
            Some(last) if last.gen == letter.gen => {
                last.exp += letter.exp;
                if last.exp == 0 {
                    self.letters.pop();
                }
            }
            _ => self.letters.push(letter),
        }
    }

    fn check_same(&self, other: &FreeWord) -> Result<(), WordError> {
        if self.d != other.d {
            return Err(WordError::DimensionMismatch {
                left: self.d,
                right: other.d,
            });
        }
        Ok(())
    }

    pub fn multiply(&self, other: &FreeWord) -> Result<FreeWord, WordError> {
        self.check_same(other)?;
        let mut w = self.clone();
        for &l in &other.letters {
            w.push(l);
        }
        Ok(w)
    }

    pub fn invert(&self) -> FreeWord {
        FreeWord {
            d: self.d,
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter {
                    gen: l.gen,
                    exp: -l.exp,
                })
                .collect(),
        }
    }

    /// `self^-1 other^-1 self other`
    pub fn commutator(&self, other: &FreeWord) -> Result<FreeWord, WordError> {
        self.check_same(other)?;
        let mut w = self.invert();
        for l in other.invert().letters.into_iter().chain(self.letters.iter().copied()) {
            w.push(l);
        }
        for &l in &other.letters {
            w.push(l);
        }
        Ok(w)
    }

    /// `self^e`; negative exponents invert.
    pub fn pow(&self, e: i64) -> FreeWord {
        let base = if e < 0 { self.invert() } else { self.clone() };
        let mut w = FreeWord::identity(self.d);
        for _ in 0..e.unsigned_abs() {
            for &l in &base.letters {
                w.push(l);
            }
        }
        w
    }

    /// `other^-1 self other`
    pub fn conjugate_by(&self, other: &FreeWord) -> Result<FreeWord, WordError> {
        other.invert().multiply(self)?.multiply(other)
    }

    /// Total signed exponent of generator `gen`.
    pub fn exponent_sum(&self, gen: usize) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.gen == gen)
            .map(|l| l.exp)
            .sum()
    }

    /// Largest generator index occurring in the word.
    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.gen).max()
    }

    /// Re-indexes the word as a word over `new_d` generators with every index
    /// shifted by `offset`.
    pub fn shifted(&self, offset: usize, new_d: usize) -> Result<FreeWord, WordError> {
        FreeWord::from_letters(new_d, self.letters.iter().map(|l| (l.gen + offset, l.exp)))
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "x{}", l.gen + 1)?;
            if l.exp != 1 {
                write!(f, "^{}", l.exp)?;
            }
        }
        Ok(())
    }
}

/// `[x_i, x_j]`
pub fn simple_commutator(d: usize, i: usize, j: usize) -> Result<FreeWord, WordError> {
    FreeWord::generator(d, i)?.commutator(&FreeWord::generator(d, j)?)
}

/// `[[x_i, x_j], x_k]`
pub fn triple_commutator(d: usize, i: usize, j: usize, k: usize) -> Result<FreeWord, WordError> {
    simple_commutator(d, i, j)?.commutator(&FreeWord::generator(d, k)?)
}
