use crate::fp::Prime;
use serde::Serialize;
use std::fmt;

/// A homomorphism `G -> F_p`, given by its values on `x1..xd`.
///
/// Every such vector is a character of `G`, since relators lie in the Frattini
/// subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Character {
    p: Prime,
    values: Vec<u32>,
}

impl Character {
    pub fn new(p: Prime, values: &[i64]) -> Self {
        Character {
            p,
            values: values.iter().map(|&v| p.reduce(v)).collect(),
        }
    }

    pub fn zero(p: Prime, d: usize) -> Self {
        Character {
            p,
            values: vec![0; d],
        }
    }

    /// `chi_i`, dual to the generator `x_i` (0-based `i`).
    pub fn dual(p: Prime, d: usize, i: usize) -> Self {
        let mut c = Self::zero(p, d);
        c.values[i] = 1;
        c
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn generator_count(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn value(&self, g: usize) -> u32 {
        self.values[g]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn neg(&self) -> Self {
        self.scale(self.p.get() as i64 - 1)
    }

    pub fn scale(&self, s: i64) -> Self {
        let s = self.p.reduce(s);
        Character {
            p: self.p,
            values: self.values.iter().map(|&v| self.p.mul(v, s)).collect(),
        }
    }

    /// # Panics
    /// If the characters live on different generator sets.
    pub fn add(&self, other: &Character) -> Self {
        assert_eq!(self.values.len(), other.values.len());
        Character {
            p: self.p,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| self.p.add(a, b))
                .collect(),
        }
    }
}

/// Linear-combination notation such as `x1`, `-x2`, `2*x1+x3`; zero prints as `0`.
impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (g, &v) in self.values.iter().enumerate() {
            if v == 0 {
                continue;
            }
            let s = self.p.signed(v);
            let sign = if s < 0 { "-" } else if first { "" } else { "+" };
            let mag = s.unsigned_abs();
            if mag == 1 {
                write!(f, "{sign}x{}", g + 1)?;
            } else {
                write!(f, "{sign}{mag}*x{}", g + 1)?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
