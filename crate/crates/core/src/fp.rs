//! Arithmetic and dense linear algebra over the prime field F_p.
//!
//! Residues are stored as `u32` in `0..p`; products are formed in `u64`, so any
//! prime below 2^32 is supported.

use serde::Serialize;
use std::fmt;

/// A prime modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Prime(u32);

impl Prime {
    /// Returns `None` unless `p` is prime.
    pub fn new(p: u32) -> Option<Prime> {
        if p < 2 {
            return None;
        }
        let mut q = 2u64;
        while q * q <= p as u64 {
            if (p as u64).is_multiple_of(q) {
                return None;
            }
            q += 1;
        }
        Some(Prime(p))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.0 as u64 - b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.0;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero residue.
    pub fn inv(self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.0), "zero has no inverse mod {}", self.0);
        self.pow(a, self.0 as u64 - 2)
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn reduce_i128(self, x: i128) -> u32 {
        x.rem_euclid(self.0 as i128) as u32
    }

    /// The representative of `a` in `(-p/2, p/2]`, used for display.
    pub fn signed(self, a: u32) -> i64 {
        let a = a as i64;
        let p = self.0 as i64;
        if a > p / 2 {
            a - p
        } else {
            a
        }
    }

    /// Smallest power `p^k` with `p^k >= m`. Every unipotent `m x m` matrix over F_p,
    /// and every element `(1 + X)^e` of the degree-`< m` truncated power series ring,
    /// has order dividing this number.
    pub fn unipotent_exponent(self, m: usize) -> u64 {
        let mut q = self.0 as u64;
        while q < m as u64 {
            q = q.saturating_mul(self.0 as u64);
        }
        q
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Dense row-major matrix over F_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Returned by [`FpMatrix::solve`] when the system has no solution. `row` is the
/// original index of an equation that reduced to `0 = residue`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inconsistent {
    pub row: usize,
    pub residue: u32,
}

impl FpMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FpMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, p: Prime, r: usize, s: u32) {
        for v in &mut self.data[r * self.cols..(r + 1) * self.cols] {
            *v = p.mul(*v, s);
        }
    }

    /// `row[target] -= factor * row[source]`
    fn eliminate(&mut self, p: Prime, target: usize, source: usize, factor: u32) {
        if factor == 0 {
            return;
        }
        let cols = self.cols;
        for c in 0..cols {
            let s = self.data[source * cols + c];
            if s != 0 {
                let t = &mut self.data[target * cols + c];
                *t = p.sub(*t, p.mul(factor, s));
            }
        }
    }

    /// Reduces to reduced row echelon form over the first `limit` columns, using the
    /// first nonzero entry in each column as pivot. Returns the pivot columns and
    /// the permutation of original row indices.
    fn rref(&mut self, p: Prime, limit: usize) -> (Vec<usize>, Vec<usize>) {
        let mut origin: Vec<usize> = (0..self.rows).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..limit {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self[(i, c)] != 0) else {
                continue;
            };
            self.swap_rows(r, pr);
            origin.swap(r, pr);
            let inv = p.inv(self[(r, c)]);
            self.scale_row(p, r, inv);
            for i in 0..self.rows {
                if i != r {
                    let f = self[(i, c)];
                    self.eliminate(p, i, r, f);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (pivots, origin)
    }

    pub fn rank(&self, p: Prime) -> usize {
        let mut m = self.clone();
        let cols = m.cols;
        m.rref(p, cols).0.len()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    /// Indices of a maximal set of linearly independent rows, smallest first.
    pub fn independent_rows(&self, p: Prime) -> Vec<usize> {
        let mut t = self.transpose();
        let cols = t.cols;
        t.rref(p, cols).0
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            m.data[i * self.cols..(i + 1) * self.cols].copy_from_slice(self.row(r));
        }
        m
    }

    pub fn inverse(&self, p: Prime) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)];
            }
            aug[(r, n + r)] = 1;
        }
        let (pivots, _) = aug.rref(p, n);
        if pivots.len() < n {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv[(r, c)] = aug[(r, n + c)];
            }
        }
        Some(inv)
    }

    pub fn mul_vec(&self, p: Prime, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let acc = self
                    .row(r)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p.get() as u64);
                acc as u32
            })
            .collect()
    }

    /// Solves `self * x = rhs`, returning the solution with all free variables zero.
    pub fn solve(&self, p: Prime, rhs: &[u32]) -> Result<Vec<u32>, Inconsistent> {
        assert_eq!(rhs.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            aug.data[r * (self.cols + 1)..r * (self.cols + 1) + self.cols]
                .copy_from_slice(self.row(r));
            aug[(r, self.cols)] = rhs[r] % p.get();
        }
        let (pivots, origin) = aug.rref(p, self.cols);
        for r in pivots.len()..self.rows {
            let residue = aug[(r, self.cols)];
            if residue != 0 {
                return Err(Inconsistent {
                    row: origin[r],
                    residue,
                });
            }
        }
        let mut x = vec![0; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug[(r, self.cols)];
        }
        Ok(x)
    }
}

impl std::ops::Index<(usize, usize)> for FpMatrix {
    type Output = u32;
    fn index(&self, (r, c): (usize, usize)) -> &u32 {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for FpMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut u32 {
        &mut self.data[r * self.cols + c]
    }
}
