//! Finite presentations `<x1..xd | relators>` over a prime `p`, and their text format:
//!
//! ```text
//! # comment
//! p = 2
//! generators = 5
//! relator = [x4,x5]*[[x2,x3],x1]
//! ```

use super::{parse_word, FreeWord, WordError};
use crate::fp::Prime;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("{value} is not a prime")]
    NotPrime { value: u64 },
    #[error("a presentation needs at least one generator")]
    NoGenerators,
    #[error("relator {index} ({word}) has exponent sum {sum} in x{gen}, not divisible by p")]
    NotInS2 {
        index: usize,
        word: String,
        gen: usize,
        sum: i64,
    },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("line {line}: {source}")]
    Word { line: usize, source: WordError },
    #[error(transparent)]
    Dimension(#[from] WordError),
}

/// A pro-p presentation with generators `x1..xd`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationSpec {
    p: Prime,
    d: usize,
    relators: Vec<FreeWord>,
}

impl PresentationSpec {
    /// Validates that `p` is prime, `d >= 1`, and every relator lies in the
    /// Frattini kernel (all exponent sums divisible by `p`).
    pub fn new(p: u32, d: usize, relators: Vec<FreeWord>) -> Result<Self, PresentationError> {
        let prime = Prime::new(p).ok_or(PresentationError::NotPrime { value: p as u64 })?;
        if d == 0 {
            return Err(PresentationError::NoGenerators);
        }
        for (index, r) in relators.iter().enumerate() {
            if r.generator_count() != d {
                return Err(WordError::DimensionMismatch {
                    left: d,
                    right: r.generator_count(),
                }
                .into());
            }
            for gen in 0..d {
                let sum = r.exponent_sum(gen);
                if sum.rem_euclid(p as i64) != 0 {
                    return Err(PresentationError::NotInS2 {
                        index,
                        word: r.to_string(),
                        gen: gen + 1,
                        sum,
                    });
                }
            }
        }
        Ok(PresentationSpec {
            p: prime,
            d,
            relators,
        })
    }

    /// Convenience constructor parsing each relator with [`parse_word`].
    pub fn from_strs(p: u32, d: usize, relators: &[&str]) -> Result<Self, PresentationError> {
        let words = relators
            .iter()
            .enumerate()
            .map(|(i, t)| {
                parse_word(t, d).map_err(|source| PresentationError::Word { line: i + 1, source })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(p, d, words)
    }

    /// The free pro-p group on `d` generators.
    pub fn free(p: u32, d: usize) -> Result<Self, PresentationError> {
        Self::new(p, d, Vec::new())
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn p(&self) -> u32 {
        self.p.get()
    }

    pub fn generator_count(&self) -> usize {
        self.d
    }

    pub fn relators(&self) -> &[FreeWord] {
        &self.relators
    }

    /// Presentation of the free product: generators of `other` follow those of `self`.
    pub fn free_product(&self, other: &PresentationSpec) -> Result<Self, PresentationError> {
        if self.p != other.p {
            return Err(PresentationError::Format {
                line: 0,
                message: format!("cannot combine p = {} with p = {}", self.p, other.p),
            });
        }
        let d = self.d + other.d;
        let mut relators = Vec::with_capacity(self.relators.len() + other.relators.len());
        for r in &self.relators {
            relators.push(r.shifted(0, d)?);
        }
        for r in &other.relators {
            relators.push(r.shifted(self.d, d)?);
        }
        Self::new(self.p(), d, relators)
    }

    /// Same group with one more relator appended.
    pub fn with_relator(&self, r: FreeWord) -> Result<Self, PresentationError> {
        let mut relators = self.relators.clone();
        relators.push(r);
        Self::new(self.p(), self.d, relators)
    }
}

impl fmt::Display for PresentationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p = {}", self.p)?;
        writeln!(f, "generators = {}", self.d)?;
        for r in &self.relators {
            writeln!(f, "relator = {r}")?;
        }
        Ok(())
    }
}

/// Parses the presentation file format. `p` and `generators` must both appear
/// before the first relator.
pub fn parse_presentation(text: &str) -> Result<PresentationSpec, PresentationError> {
    let mut p: Option<u32> = None;
    let mut d: Option<usize> = None;
    let mut relators = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| PresentationError::Format {
            line,
            message: format!("expected 'key = value', found {content:?}"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        let number = |what: &str| -> Result<u64, PresentationError> {
            value.parse::<u64>().map_err(|_| PresentationError::Format {
                line,
                message: format!("{what} must be a non-negative integer, found {value:?}"),
            })
        };
        match key {
            "p" => {
                if p.is_some() {
                    return Err(duplicate(line, "p"));
                }
                let v = number("p")?;
                let v = u32::try_from(v).map_err(|_| PresentationError::NotPrime { value: v })?;
                Prime::new(v).ok_or(PresentationError::NotPrime { value: v as u64 })?;
                p = Some(v);
            }
            "generators" => {
                if d.is_some() {
                    return Err(duplicate(line, "generators"));
                }
                let v = number("generators")? as usize;
                if v == 0 {
                    return Err(PresentationError::NoGenerators);
                }
                d = Some(v);
            }
            "relator" => {
                let (Some(_), Some(d)) = (p, d) else {
                    return Err(PresentationError::Format {
                        line,
                        message: "'p' and 'generators' must precede relators".into(),
                    });
                };
                let w = parse_word(value, d).map_err(|source| PresentationError::Word { line, source })?;
                relators.push(w);
            }
            other => {
                return Err(PresentationError::Format {
                    line,
                    message: format!("unknown key {other:?}"),
                })
            }
        }
    }
    let p = p.ok_or(PresentationError::Format {
        line: 0,
        message: "missing 'p = <prime>'".into(),
    })?;
    let d = d.ok_or(PresentationError::Format {
        line: 0,
        message: "missing 'generators = <d>'".into(),
    })?;
    PresentationSpec::new(p, d, relators)
}

fn duplicate(line: usize, key: &str) -> PresentationError {
    PresentationError::Format {
        line,
        message: format!("duplicate '{key}'"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX1: &str = "\
# five generators, one relator
p = 2
generators = 5

relator = [x4,x5]*[[x2,x3],x1]   # trailing comment
";

    #[test]
    fn parses_file() {
        let spec = parse_presentation(EX1).unwrap();
        assert_eq!(spec.p(), 2);
        assert_eq!(spec.generator_count(), 5);
        assert_eq!(spec.relators().len(), 1);
        assert_eq!(spec.relators()[0].len(), 14);
    }

    #[test]
    fn display_round_trip() {
        let spec = parse_presentation(EX1).unwrap();
        assert_eq!(parse_presentation(&spec.to_string()).unwrap(), spec);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse_presentation("p = 4\ngenerators = 1\n"),
            Err(PresentationError::NotPrime { value: 4 })
        ));
        assert!(matches!(
            parse_presentation("p = 2\ngenerators = 0\n"),
            Err(PresentationError::NoGenerators)
        ));
        assert!(matches!(
            parse_presentation("p = 3\ngenerators = 1\nrelator = x1^2\n"),
            Err(PresentationError::NotInS2 { gen: 1, sum: 2, .. })
        ));
        assert!(matches!(
            parse_presentation("p = 2\ngenerators = 2\nrelator = [x1,x3]\n"),
            Err(PresentationError::Word { line: 3, .. })
        ));
        assert!(matches!(
            parse_presentation("relator = x1\n"),
            Err(PresentationError::Format { line: 1, .. })
        ));
        assert!(matches!(
            parse_presentation("p = 2\n"),
            Err(PresentationError::Format { .. })
        ));
        assert!(matches!(
            parse_presentation("p = 2\ngenerators = 1\ny = 3"),
            Err(PresentationError::Format { line: 3, .. })
        ));
    }

    #[test]
    fn p_th_powers_are_allowed() {
        let spec = PresentationSpec::from_strs(3, 1, &["x1^3"]).unwrap();
        assert_eq!(spec.relators()[0].exponent_sum(0), 3);
    }

    #[test]
    fn free_product_shifts_second_factor() {
        let a = PresentationSpec::from_strs(2, 2, &["[x1,x2]"]).unwrap();
        let b = PresentationSpec::from_strs(2, 1, &["x1^2"]).unwrap();
        let ab = a.free_product(&b).unwrap();
        assert_eq!(ab.generator_count(), 3);
        assert_eq!(ab.relators()[1].to_string(), "x3^2");
    }
}
