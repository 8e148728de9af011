use crate::fp::Prime;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrices of size {left} and {right} cannot be combined")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrices over F_{left} and F_{right} cannot be combined")]
    PrimeMismatch { left: u32, right: u32 },
    #[error("entry ({row},{col}) breaks upper unitriangularity")]
    NotUnipotent { row: usize, col: usize },
}

/// An element of `U_size(F_p)`: upper triangular with unit diagonal.
///
/// Entries are stored row-major for the full square, including the zeros below
/// the diagonal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UnipotentMatrix {
    p: Prime,
    size: usize,
    entries: Vec<u32>,
}

impl UnipotentMatrix {
    pub fn identity(p: Prime, size: usize) -> Self {
        assert!(size >= 1, "matrices have at least one row");
        let mut entries = vec![0; size * size];
        for i in 0..size {
            entries[i * size + i] = 1;
        }
        UnipotentMatrix { p, size, entries }
    }

    /// Builds a matrix from rows of integers, reducing them mod `p`.
    pub fn from_rows(p: Prime, rows: &[Vec<i64>]) -> Result<Self, MatrixError> {
        let size = rows.len();
        let mut m = Self::identity(p, size);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(MatrixError::DimensionMismatch {
                    left: size,
                    right: row.len(),
                });
            }
            for (c, &v) in row.iter().enumerate() {
                let v = p.reduce(v);
                let expected = if r == c { Some(1) } else if c < r { Some(0) } else { None };
                match expected {
                    Some(e) if e != v => return Err(MatrixError::NotUnipotent { row: r, col: c }),
                    _ => m.entries[r * size + c] = v,
                }
            }
        }
        Ok(m)
    }

    /// Identity plus `value` at each listed strictly-upper position.
    pub fn with_entries(p: Prime, size: usize, entries: &[((usize, usize), u32)]) -> Self {
        let mut m = Self::identity(p, size);
        for &((r, c), v) in entries {
            m.set(r, c, v);
        }
        m
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.entries[r * self.size + c]
    }

    /// Sets a strictly-upper entry.
    ///
    /// # Panics
    /// If `(r, c)` is not strictly above the diagonal.
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        assert!(r < c && c < self.size, "({r},{c}) is not strictly upper");
        self.entries[r * self.size + c] = v % self.p.get();
    }

    /// The top-right entry.
    pub fn corner(&self) -> u32 {
        self.get(0, self.size - 1)
    }

    /// Entry `(r, c)` as a representative in `(-p/2, p/2]`.
    pub fn signed(&self, r: usize, c: usize) -> i64 {
        self.p.signed(self.get(r, c))
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.size).map(|r| r.to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.is_identity_except_corner() && (self.size == 1 || self.corner() == 0)
    }

    /// True when every strictly-upper entry other than the corner is zero.
    pub fn is_identity_except_corner(&self) -> bool {
        let n = self.size;
        (0..n).all(|r| (r + 1..n).all(|c| (r == 0 && c == n - 1) || self.get(r, c) == 0))
    }

    fn check(&self, other: &Self) -> Result<(), MatrixError> {
        if self.p != other.p {
            return Err(MatrixError::PrimeMismatch {
                left: self.p.get(),
                right: other.p.get(),
            });
        }
        if self.size != other.size {
            return Err(MatrixError::DimensionMismatch {
                left: self.size,
                right: other.size,
            });
        }
        Ok(())
    }

    /// Product without shape checks.
    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.size;
        let p = self.p.get() as u64;
        let mut out = Self::identity(self.p, n);
        // Below 2^28 a row of up to 256 products fits in a u64 without reduction.
        let lazy = p < 1 << 28 && n <= 256;
        for i in 0..n {
            let row = &self.entries[i * n..(i + 1) * n];
            for j in i + 1..n {
                let mut acc = 0u64;
                for (l, &x) in row.iter().enumerate().take(j + 1).skip(i) {
                    let t = x as u64 * other.entries[l * n + j] as u64;
                    acc += if lazy { t } else { t % p };
                }
                out.entries[i * n + j] = (acc % p) as u32;
            }
        }
        out
    }

    pub(crate) fn inv_unchecked(&self) -> Self {
        // Solve A * B = I row by row from the bottom: B_ij = -sum_{i<l<=j} A_il B_lj.
        let n = self.size;
        let p = self.p;
        let mut b = Self::identity(p, n);
        for i in (0..n).rev() {
            for j in i + 1..n {
                let mut acc = 0u64;
                for l in i + 1..=j {
                    acc += self.entries[i * n + l] as u64 * b.entries[l * n + j] as u64
                        % p.get() as u64;
                }
                b.entries[i * n + j] = p.neg((acc % p.get() as u64) as u32);
            }
        }
        b
    }

    pub fn multiply(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn invert(&self) -> Self {
        self.inv_unchecked()
    }

    /// `self^-1 other^-1 self other`
    pub fn commutator(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check(other)?;
        Ok(self
            .inv_unchecked()
            .mul_unchecked(&other.inv_unchecked())
            .mul_unchecked(self)
            .mul_unchecked(other))
    }

    /// Integer power; the exponent is first reduced modulo the group exponent.
    pub fn pow(&self, e: i64) -> Self {
        let order = self.p.unipotent_exponent(self.size) as i128;
        let mut e = (e as i128).rem_euclid(order) as u128;
        let mut base = self.clone();
        let mut acc = Self::identity(self.p, self.size);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }
}

impl fmt::Debug for UnipotentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U{}(F_{}){:?}", self.size, self.p, self.rows())
    }
}

impl fmt::Display for UnipotentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows().iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            write!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// An element of `U_size(F_p)` modulo its center: the top-right entry is always
/// stored as zero, so equality and identity tests ignore it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BarUnipotent(UnipotentMatrix);

impl BarUnipotent {
    pub fn new(mut m: UnipotentMatrix) -> Self {
        if m.size > 1 {
            let last = m.size - 1;
            m.entries[last] = 0;
        }
        BarUnipotent(m)
    }

    /// The lift with zero corner.
    pub fn zero_lift(&self) -> &UnipotentMatrix {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.size
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.0.get(r, c)
    }

    pub fn multiply(&self, other: &Self) -> Result<Self, MatrixError> {
        Ok(BarUnipotent::new(self.0.multiply(&other.0)?))
    }

    pub fn invert(&self) -> Self {
        BarUnipotent::new(self.0.invert())
    }

    pub fn commutator(&self, other: &Self) -> Result<Self, MatrixError> {
        Ok(BarUnipotent::new(self.0.commutator(&other.0)?))
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_identity_except_corner()
    }
}

impl fmt::Debug for BarUnipotent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bar{:?}", self.0)
    }
}

/// Shared interface of [`UnipotentMatrix`] and [`BarUnipotent`] used by word
/// evaluation and representation search.
pub trait UnipotentGroup: Clone + PartialEq + Eq + std::hash::Hash + fmt::Debug + Send + Sync {
    fn identity(p: Prime, size: usize) -> Self;
    fn from_full(m: UnipotentMatrix) -> Self;
    fn as_full(&self) -> &UnipotentMatrix;
    fn mul(&self, other: &Self) -> Self;
    fn inv(&self) -> Self;
    fn power(&self, e: i64) -> Self;
    fn is_trivial(&self) -> bool;
}

impl UnipotentGroup for UnipotentMatrix {
    fn identity(p: Prime, size: usize) -> Self {
        UnipotentMatrix::identity(p, size)
    }
    fn from_full(m: UnipotentMatrix) -> Self {
        m
    }
    fn as_full(&self) -> &UnipotentMatrix {
        self
    }
    fn mul(&self, other: &Self) -> Self {
        self.mul_unchecked(other)
    }
    fn inv(&self) -> Self {
        self.inv_unchecked()
    }
    fn power(&self, e: i64) -> Self {
        self.pow(e)
    }
    fn is_trivial(&self) -> bool {
        self.is_identity()
    }
}

impl UnipotentGroup for BarUnipotent {
    fn identity(p: Prime, size: usize) -> Self {
        BarUnipotent(UnipotentMatrix::identity(p, size))
    }
    fn from_full(m: UnipotentMatrix) -> Self {
        BarUnipotent::new(m)
    }
    fn as_full(&self) -> &UnipotentMatrix {
        &self.0
    }
    fn mul(&self, other: &Self) -> Self {
        BarUnipotent::new(self.0.mul_unchecked(&other.0))
    }
    fn inv(&self) -> Self {
        BarUnipotent::new(self.0.inv_unchecked())
    }
    fn power(&self, e: i64) -> Self {
        BarUnipotent::new(self.0.pow(e))
    }
    fn is_trivial(&self) -> bool {
        self.0.is_identity_except_corner()
    }
}

pub fn mat_multiply(x: &UnipotentMatrix, y: &UnipotentMatrix) -> Result<UnipotentMatrix, MatrixError> {
    x.multiply(y)
}

pub fn mat_invert(x: &UnipotentMatrix) -> UnipotentMatrix {
    x.invert()
}

/// `x^-1 y^-1 x y`
pub fn mat_commutator(x: &UnipotentMatrix, y: &UnipotentMatrix) -> Result<UnipotentMatrix, MatrixError> {
    x.commutator(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn prime(p: u32) -> Prime {
        Prime::new(p).unwrap()
    }

    pub(crate) fn arb_matrix(p: u32, size: usize) -> impl Strategy<Value = UnipotentMatrix> {
        prop::collection::vec(0..p, size * (size - 1) / 2).prop_map(move |vals| {
            let mut m = UnipotentMatrix::identity(prime(p), size);
            let mut it = vals.into_iter();
            for r in 0..size {
                for c in r + 1..size {
                    m.set(r, c, it.next().unwrap());
                }
            }
            m
        })
    }

    #[test]
    fn from_rows_validates() {
        let p = prime(3);
        assert!(UnipotentMatrix::from_rows(p, &[vec![1, 2], vec![0, 1]]).is_ok());
        assert!(matches!(
            UnipotentMatrix::from_rows(p, &[vec![1, 2], vec![1, 1]]),
            Err(MatrixError::NotUnipotent { row: 1, col: 0 })
        ));
        assert!(matches!(
            UnipotentMatrix::from_rows(p, &[vec![2, 0], vec![0, 1]]),
            Err(MatrixError::NotUnipotent { row: 0, col: 0 })
        ));
    }

    #[test]
    fn shape_errors() {
        let a = UnipotentMatrix::identity(prime(2), 3);
        let b = UnipotentMatrix::identity(prime(2), 4);
        let c = UnipotentMatrix::identity(prime(3), 3);
        assert!(matches!(
            mat_multiply(&a, &b),
            Err(MatrixError::DimensionMismatch { left: 3, right: 4 })
        ));
        assert!(matches!(mat_commutator(&a, &c), Err(MatrixError::PrimeMismatch { .. })));
    }

    #[test]
    fn powers_reach_identity() {
        let p = prime(3);
        let mut m = UnipotentMatrix::identity(p, 5);
        for i in 0..4 {
            m.set(i, i + 1, 1);
        }
        // order of a regular unipotent in U_5(F_3) is 9
        assert!(!m.pow(3).is_identity());
        assert!(m.pow(9).is_identity());
        assert_eq!(m.pow(-1), m.invert());
        assert_eq!(m.pow(4), m.mul_unchecked(&m).mul_unchecked(&m).mul_unchecked(&m));
    }

    #[test]
    fn bar_ignores_corner() {
        let p = prime(5);
        let m = UnipotentMatrix::with_entries(p, 4, &[((0, 3), 2)]);
        assert!(!m.is_identity());
        assert!(BarUnipotent::new(m).is_identity());
    }

    proptest! {
        #[test]
        fn group_laws(a in arb_matrix(3, 4), b in arb_matrix(3, 4), c in arb_matrix(3, 4)) {
            let ab_c = a.multiply(&b).unwrap().multiply(&c).unwrap();
            let a_bc = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            prop_assert!(a.multiply(&a.invert()).unwrap().is_identity());
            prop_assert!(a.invert().multiply(&a).unwrap().is_identity());
        }

        #[test]
        fn bar_product_matches_full_product(a in arb_matrix(2, 5), b in arb_matrix(2, 5)) {
            let full = BarUnipotent::new(a.multiply(&b).unwrap());
            let bar = BarUnipotent::new(a.clone()).multiply(&BarUnipotent::new(b.clone())).unwrap();
            prop_assert_eq!(full, bar);
        }
    }
}
