//! The Magnus embedding `x_i -> 1 + X_i` into noncommutative power series over F_p,
//! truncated above degree 3. Two words have the same image exactly when they agree
//! modulo the fourth Zassenhaus subgroup `S_(4)`.

use crate::fp::{FpMatrix, Prime};
use crate::words::{simple_commutator, triple_commutator, FreeWord};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

/// Degree `<= 3` truncated series in `X_1..X_d` with coefficients mod `p`.
///
/// Coefficients are stored densely: the constant term, then `X_i`, then `X_iX_j`
/// (row-major in `(i, j)`), then `X_iX_jX_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    p: Prime,
    d: usize,
    coeffs: Vec<u32>,
}

impl TruncatedSeries {
    pub fn zero(p: Prime, d: usize) -> Self {
        TruncatedSeries {
            p,
            d,
            coeffs: vec![0; 1 + d + d * d + d * d * d],
        }
    }

    pub fn identity(p: Prime, d: usize) -> Self {
        let mut s = Self::zero(p, d);
        s.coeffs[0] = 1;
        s
    }

    /// `(1 + X_g)^e`, expanded binomially.
    pub fn generator_power(p: Prime, d: usize, g: usize, e: i64) -> Self {
        assert!(g < d, "generator index out of range");
        // (1+X)^q = 1 + X^q mod p, which truncates to 1 once q >= 4.
        let order = p.unipotent_exponent(4) as i128;
        let e = (e as i128).rem_euclid(order);
        let mut s = Self::identity(p, d);
        let (i1, i2, i3) = (s.idx1(g), s.idx2(g, g), s.idx3(g, g, g));
        s.coeffs[i1] = p.reduce_i128(e);
        s.coeffs[i2] = p.reduce_i128(e * (e - 1) / 2);
        s.coeffs[i3] = p.reduce_i128(e * (e - 1) * (e - 2) / 6);
        s
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn variable_count(&self) -> usize {
        self.d
    }

    fn idx1(&self, i: usize) -> usize {
        1 + i
    }

    fn idx2(&self, i: usize, j: usize) -> usize {
        1 + self.d + i * self.d + j
    }

    fn idx3(&self, i: usize, j: usize, k: usize) -> usize {
        1 + self.d + self.d * self.d + (i * self.d + j) * self.d + k
    }

    pub fn constant(&self) -> u32 {
        self.coeffs[0]
    }

    pub fn deg1(&self, i: usize) -> u32 {
        self.coeffs[self.idx1(i)]
    }

    pub fn deg2(&self, i: usize, j: usize) -> u32 {
        self.coeffs[self.idx2(i, j)]
    }

    pub fn deg3(&self, i: usize, j: usize, k: usize) -> u32 {
        self.coeffs[self.idx3(i, j, k)]
    }

    pub fn set_deg1(&mut self, i: usize, v: u32) {
        let at = self.idx1(i);
        self.coeffs[at] = v % self.p.get();
    }

    pub fn set_deg2(&mut self, i: usize, j: usize, v: u32) {
        let at = self.idx2(i, j);
        self.coeffs[at] = v % self.p.get();
    }

    pub fn set_deg3(&mut self, i: usize, j: usize, k: usize, v: u32) {
        let at = self.idx3(i, j, k);
        self.coeffs[at] = v % self.p.get();
    }

    /// Coefficients of degree exactly `deg` (`0..=3`) in index order.
    pub fn degree_part(&self, deg: usize) -> &[u32] {
        let d = self.d;
        match deg {
            0 => &self.coeffs[..1],
            1 => &self.coeffs[1..1 + d],
            2 => &self.coeffs[1 + d..1 + d + d * d],
            3 => &self.coeffs[1 + d + d * d..],
            _ => panic!("degree {deg} is truncated away"),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Product truncated above degree 3.
    ///
    /// # Panics
    /// If the operands differ in `p` or in the number of variables.
    pub fn multiply(&self, other: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!(self.p, other.p, "series over different primes");
        assert_eq!(self.d, other.d, "series in different numbers of variables");
        let p = self.p.get() as u128;
        let d = self.d;
        let (a, b) = (self, other);
        let a1 = |i| a.deg1(i) as u128;
        let b1 = |i| b.deg1(i) as u128;
        let a2 = |i, j| a.deg2(i, j) as u128;
        let b2 = |i, j| b.deg2(i, j) as u128;
        let mut out = Self::zero(self.p, d);
        let a0 = a.constant() as u128;
        let b0 = b.constant() as u128;
        out.coeffs[0] = ((a0 * b0) % p) as u32;
        for i in 0..d {
            let v = a0 * b1(i) + a1(i) * b0;
            let at = out.idx1(i);
            out.coeffs[at] = (v % p) as u32;
        }
        for i in 0..d {
            for j in 0..d {
                let v = a0 * b2(i, j) + a1(i) * b1(j) + a2(i, j) * b0;
                let at = out.idx2(i, j);
                out.coeffs[at] = (v % p) as u32;
            }
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let v = a0 * b.deg3(i, j, k) as u128
                        + a1(i) * b2(j, k)
                        + a2(i, j) * b1(k)
                        + a.deg3(i, j, k) as u128 * b0;
                    let at = out.idx3(i, j, k);
                    out.coeffs[at] = (v % p) as u32;
                }
            }
        }
        out
    }

    /// Inverse of a series with constant term 1: `1 - N + N^2 - N^3`.
    ///
    /// # Panics
    /// If the constant term is not 1.
    pub fn inverse(&self) -> TruncatedSeries {
        assert_eq!(self.constant(), 1, "only unit series are inverted here");
        let mut n = self.clone();
        n.coeffs[0] = 0;
        let n2 = n.multiply(&n);
        let n3 = n2.multiply(&n);
        let mut out = Self::identity(self.p, self.d);
        for idx in 1..out.coeffs.len() {
            let v = self.p.sub(n2.coeffs[idx], self.p.add(n.coeffs[idx], n3.coeffs[idx]));
            out.coeffs[idx] = v;
        }
        out
    }

    /// Lowest `n` such that the series is congruent to 1 modulo degree `n + 1`
    /// fails, i.e. the Zassenhaus level of any word with this image.
    pub fn level(&self) -> ZassenhausLevel {
        if self.degree_part(1).iter().any(|&c| c != 0) {
            ZassenhausLevel::One
        } else if self.degree_part(2).iter().any(|&c| c != 0) {
            ZassenhausLevel::Two
        } else if self.degree_part(3).iter().any(|&c| c != 0) {
            ZassenhausLevel::Three
        } else {
            ZassenhausLevel::AtLeastFour
        }
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.d;
        let mut terms = Vec::new();
        if self.constant() != 0 {
            terms.push(self.constant().to_string());
        }
        let mut push = |c: u32, vars: &[usize]| {
            if c != 0 {
                let mono: String = vars.iter().map(|v| format!("X{}", v + 1)).collect();
                terms.push(if c == 1 { mono } else { format!("{c}{mono}") });
            }
        };
        for i in 0..d {
            push(self.deg1(i), &[i]);
        }
        for i in 0..d {
            for j in 0..d {
                push(self.deg2(i, j), &[i, j]);
            }
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    push(self.deg3(i, j, k), &[i, j, k]);
                }
            }
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Position of a word in the Zassenhaus filtration, as far as `S/S_(4)` can see.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ZassenhausLevel {
    One,
    Two,
    Three,
    AtLeastFour,
}

impl ZassenhausLevel {
    /// Lower bound on `n` with `w` in `S_(n)`.
    pub fn at_least(self) -> usize {
        match self {
            ZassenhausLevel::One => 1,
            ZassenhausLevel::Two => 2,
            ZassenhausLevel::Three => 3,
            ZassenhausLevel::AtLeastFour => 4,
        }
    }
}

impl fmt::Display for ZassenhausLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZassenhausLevel::AtLeastFour => write!(f, ">=4"),
            other => write!(f, "{}", other.at_least()),
        }
    }
}

pub fn magnus_image(w: &FreeWord, p: Prime) -> TruncatedSeries {
    let d = w.generator_count();
    let mut s = TruncatedSeries::identity(p, d);
    for l in w.letters() {
        s = s.multiply(&TruncatedSeries::generator_power(p, d, l.gen, l.exp));
    }
    s
}

pub fn zassenhaus_level(w: &FreeWord, p: Prime) -> ZassenhausLevel {
    magnus_image(w, p).level()
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error("word is not in S_(2): its image has degree-1 coefficient {coeff} at X{gen}")]
    NotInS2 { gen: usize, coeff: u32 },
    #[error("degree-{degree} coefficients could not be matched against the commutator basis")]
    InternalBasis { degree: usize },
}

/// The exponents of `w = prod x_i^{p a_i} prod [x_i,x_j]^{b_ij} prod [[x_i,x_j],x_k]^{c_ijk} * r'`
/// with `r'` in `S_(4)`. Products run over index tuples in lexicographic order;
/// for `p = 3` the power block sits between the commutator blocks, for `p = 2` it
/// comes first, and for `p > 3` it is absent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalDecomposition {
    p: Prime,
    d: usize,
    a: Vec<u32>,
    b: Vec<u32>,
    c: HashMap<(usize, usize, usize), u32>,
    residual: TruncatedSeries,
}

/// One nontrivial factor of a canonical decomposition; indices are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    Power { i: usize, exp: u32 },
    Commutator { i: usize, j: usize, exp: u32 },
    Triple { i: usize, j: usize, k: usize, exp: u32 },
}

impl CanonicalDecomposition {
    /// Builds a decomposition from prescribed exponents; the residual is the identity.
    /// `a` is ignored unless `p` is 2 or 3. Entries of `b` below the diagonal and
    /// `c` entries outside `i < j, k <= j` are ignored.
    pub fn from_parts(
        p: Prime,
        d: usize,
        a: &[u32],
        b: &dyn Fn(usize, usize) -> u32,
        c: &dyn Fn(usize, usize, usize) -> u32,
    ) -> Self {
        let has_a = p.get() <= 3;
        let a = (0..d)
            .map(|i| if has_a { a[i] % p.get() } else { 0 })
            .collect();
        let mut bv = vec![0; d * d];
        for i in 0..d {
            for j in i + 1..d {
                bv[i * d + j] = b(i, j) % p.get();
            }
        }
        let mut cm = HashMap::new();
        for (i, j, k) in triple_indices(d) {
            let v = c(i, j, k) % p.get();
            if v != 0 {
                cm.insert((i, j, k), v);
            }
        }
        CanonicalDecomposition {
            p,
            d,
            a,
            b: bv,
            c: cm,
            residual: TruncatedSeries::identity(p, d),
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn generator_count(&self) -> usize {
        self.d
    }

    /// Exponent `a_i` of `x_i^p`; always 0 for `p > 3`.
    pub fn a(&self, i: usize) -> u32 {
        self.a[i]
    }

    /// `b_ij` for `i < j`; 0 otherwise.
    pub fn b(&self, i: usize, j: usize) -> u32 {
        if i < j {
            self.b[i * self.d + j]
        } else {
            0
        }
    }

    /// Symmetric `u_ij = b_{min,max}`; 0 on the diagonal.
    pub fn u(&self, i: usize, j: usize) -> u32 {
        self.b(i.min(j), i.max(j))
    }

    /// `c_ijk` for `i < j, k <= j`; 0 for index triples outside that range.
    pub fn c(&self, i: usize, j: usize, k: usize) -> u32 {
        self.c.get(&(i, j, k)).copied().unwrap_or(0)
    }

    pub fn residual(&self) -> &TruncatedSeries {
        &self.residual
    }

    /// Nonzero factors in product order.
    pub fn factors(&self) -> Vec<Factor> {
        let d = self.d;
        let powers = (0..d)
            .filter(|&i| self.a[i] != 0)
            .map(|i| Factor::Power { i, exp: self.a[i] });
        let commutators = (0..d)
            .flat_map(|i| (i + 1..d).map(move |j| (i, j)))
            .filter(|&(i, j)| self.b(i, j) != 0)
            .map(|(i, j)| Factor::Commutator {
                i,
                j,
                exp: self.b(i, j),
            });
        let triples = triple_indices(d)
            .into_iter()
            .filter(|&(i, j, k)| self.c(i, j, k) != 0)
            .map(|(i, j, k)| Factor::Triple {
                i,
                j,
                k,
                exp: self.c(i, j, k),
            });
        if self.p.get() == 2 {
            powers.chain(commutators).chain(triples).collect()
        } else {
            commutators.chain(powers).chain(triples).collect()
        }
    }

    /// The product word, without the residual.
    pub fn to_word(&self) -> FreeWord {
        let d = self.d;
        let p = self.p.get() as i64;
        let mut w = FreeWord::identity(d);
        for f in self.factors() {
            let piece = match f {
                Factor::Power { i, exp } => {
                    FreeWord::power_of_generator(d, i, p * exp as i64).unwrap()
                }
                Factor::Commutator { i, j, exp } => {
                    simple_commutator(d, i, j).unwrap().pow(exp as i64)
                }
                Factor::Triple { i, j, k, exp } => {
                    triple_commutator(d, i, j, k).unwrap().pow(exp as i64)
                }
            };
            w = w.multiply(&piece).unwrap();
        }
        w
    }
}

fn index_label(idx: &[usize], d: usize) -> String {
    let parts: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
    if d < 10 {
        parts.concat()
    } else {
        format!("({})", parts.join(","))
    }
}

impl fmt::Display for CanonicalDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.d;
        let parts: Vec<String> = self
            .factors()
            .into_iter()
            .map(|fac| match fac {
                Factor::Power { i, exp } => format!("a{}={exp}", index_label(&[i], d)),
                Factor::Commutator { i, j, exp } => format!("b{}={exp}", index_label(&[i, j], d)),
                Factor::Triple { i, j, k, exp } => {
                    format!("c{}={exp}", index_label(&[i, j, k], d))
                }
            })
            .collect();
        if parts.is_empty() {
            write!(f, "trivial")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// Index triples `(i, j, k)` with `i < j` and `k <= j`, lexicographically.
pub fn triple_indices(d: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::with_capacity((d * d * d - d) / 3);
    for i in 0..d {
        for j in i + 1..d {
            for k in 0..=j {
                out.push((i, j, k));
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug)]
enum Column {
    Power(usize),
    Triple(usize, usize, usize),
}

/// Solves for degree-3 exponents against the images of the basis elements
/// `[[x_i,x_j],x_k]` (and `x_i^3` when `p = 3`).
#[derive(Debug)]
struct Decomposer {
    p: Prime,
    columns: Vec<Column>,
    basis: FpMatrix,
    pivot_rows: Vec<usize>,
    pivot_inverse: FpMatrix,
}

impl Decomposer {
    fn new(p: Prime, d: usize) -> Self {
        let mut columns = Vec::new();
        if p.get() == 3 {
            columns.extend((0..d).map(Column::Power));
        }
        columns.extend(triple_indices(d).into_iter().map(|(i, j, k)| Column::Triple(i, j, k)));
        let rows = d * d * d;
        let mut basis = FpMatrix::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            let w = match *col {
                Column::Power(i) => FreeWord::power_of_generator(d, i, 3).unwrap(),
                Column::Triple(i, j, k) => triple_commutator(d, i, j, k).unwrap(),
            };
            let img = magnus_image(&w, p);
            for (r, &v) in img.degree_part(3).iter().enumerate() {
                basis[(r, c)] = v;
            }
        }
        let pivot_rows = basis.independent_rows(p);
        assert_eq!(
            pivot_rows.len(),
            columns.len(),
            "degree-3 basis is not of full column rank (p = {p}, d = {d})"
        );
        let pivot_inverse = basis
            .select_rows(&pivot_rows)
            .inverse(p)
            .expect("independent rows form an invertible block");
        Decomposer {
            p,
            columns,
            basis,
            pivot_rows,
            pivot_inverse,
        }
    }

    fn solve(&self, deg3: &[u32]) -> Result<Vec<u32>, DecomposeError> {
        let rhs: Vec<u32> = self.pivot_rows.iter().map(|&r| deg3[r]).collect();
        let x = self.pivot_inverse.mul_vec(self.p, &rhs);
        if self.basis.mul_vec(self.p, &x) != deg3 {
            return Err(DecomposeError::InternalBasis { degree: 3 });
        }
        Ok(x)
    }
}

fn decomposer(p: Prime, d: usize) -> Arc<Decomposer> {
    type Cache = Mutex<HashMap<(u32, usize), Arc<Decomposer>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(found) = cache.lock().unwrap().get(&(p.get(), d)) {
        return found.clone();
    }
    let built = Arc::new(Decomposer::new(p, d));
    cache
        .lock()
        .unwrap()
        .entry((p.get(), d))
        .or_insert(built)
        .clone()
}

/// Checks that the degree-3 basis has full column rank for `(p, d)`; panics otherwise.
pub fn assert_basis_full_rank(p: Prime, d: usize) {
    decomposer(p, d);
}

pub fn canonical_decompose(w: &FreeWord, p: Prime) -> Result<CanonicalDecomposition, DecomposeError> {
    let d = w.generator_count();
    let image = magnus_image(w, p);
    if let Some(gen) = (0..d).find(|&i| image.deg1(i) != 0) {
        return Err(DecomposeError::NotInS2 {
            gen: gen + 1,
            coeff: image.deg1(gen),
        });
    }
    let zeros = vec![0u32; d];
    let a2: Vec<u32> = if p.get() == 2 {
        (0..d).map(|i| image.deg2(i, i)).collect()
    } else {
        zeros.clone()
    };
    let lower = CanonicalDecomposition::from_parts(p, d, &a2, &|i, j| image.deg2(i, j), &|_, _, _| 0);
    let rest = magnus_image(&lower.to_word(), p).inverse().multiply(&image);
    if rest.degree_part(2).iter().any(|&c| c != 0) {
        return Err(DecomposeError::InternalBasis { degree: 2 });
    }
    let dec = decomposer(p, d);
    let x = dec.solve(rest.degree_part(3))?;
    let mut a = a2;
    let mut c = HashMap::new();
    for (col, &v) in dec.columns.iter().zip(&x) {
        match *col {
            Column::Power(i) => a[i] = v,
            Column::Triple(i, j, k) => {
                c.insert((i, j, k), v);
            }
        }
    }
    let mut out = CanonicalDecomposition::from_parts(
        p,
        d,
        &a,
        &|i, j| image.deg2(i, j),
        &|i, j, k| c.get(&(i, j, k)).copied().unwrap_or(0),
    );
    let residual = magnus_image(&out.to_word(), p).inverse().multiply(&image);
    if !residual.is_identity() {
        return Err(DecomposeError::InternalBasis { degree: 4 });
    }
    out.residual = residual;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    fn prime(p: u32) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn generator_images() {
        let p = prime(3);
        let x1 = parse_word("x1", 2).unwrap();
        let s = magnus_image(&x1, p);
        assert_eq!(s.to_string(), "1 + X1");
        assert!(magnus_image(&parse_word("x1*x1^-1", 2).unwrap(), p).is_identity());
        let inv = magnus_image(&parse_word("x1^-1", 1).unwrap(), p);
        // 1 - X + X^2 - X^3 mod 3
        assert_eq!(inv.to_string(), "1 + 2X1 + X1X1 + 2X1X1X1");
    }

    #[test]
    fn square_mod_two() {
        let s = magnus_image(&parse_word("x1^2", 1).unwrap(), prime(2));
        assert_eq!(s.to_string(), "1 + X1X1");
    }

    #[test]
    fn levels() {
        let p2 = prime(2);
        let lv = |t: &str, d, p| zassenhaus_level(&parse_word(t, d).unwrap(), p);
        assert_eq!(lv("[x1,x2]", 2, p2), ZassenhausLevel::Two);
        assert_eq!(lv("[[x1,x2],x3]", 3, p2), ZassenhausLevel::Three);
        assert_eq!(lv("x1^4", 1, p2), ZassenhausLevel::AtLeastFour);
        assert_eq!(lv("x1^2", 1, p2), ZassenhausLevel::Two);
        assert_eq!(lv("x1^3", 1, prime(3)), ZassenhausLevel::Three);
        assert_eq!(lv("x1^5", 1, prime(5)), ZassenhausLevel::AtLeastFour);
        assert_eq!(lv("x1", 1, p2), ZassenhausLevel::One);
    }

    #[test]
    fn inverse_is_two_sided() {
        let p = prime(5);
        let s = magnus_image(&parse_word("x1^2*x2*[x1,x3]^3", 3).unwrap(), p);
        assert!(s.multiply(&s.inverse()).is_identity());
        assert!(s.inverse().multiply(&s).is_identity());
    }

    #[test]
    fn first_example_decomposition() {
        let w = parse_word("[x4,x5]*[[x2,x3],x1]", 5).unwrap();
        let dec = canonical_decompose(&w, prime(2)).unwrap();
        assert_eq!(dec.to_string(), "b45=1 c231=1");
        assert!(dec.residual().is_identity());
        assert_eq!(dec.u(4, 3), 1);
        assert_eq!(dec.u(1, 2), 0);
    }

    #[test]
    fn change_of_basis_decomposition() {
        let w = parse_word("[x1*x2,x3]", 3).unwrap();
        let dec = canonical_decompose(&w, prime(2)).unwrap();
        assert_eq!(dec.to_string(), "b13=1 b23=1 c132=1");
    }

    #[test]
    fn squares_and_errors() {
        let dec = canonical_decompose(&parse_word("x1^2", 2).unwrap(), prime(2)).unwrap();
        assert_eq!(dec.to_string(), "a1=1");
        assert!(matches!(
            canonical_decompose(&parse_word("x1", 2).unwrap(), prime(2)),
            Err(DecomposeError::NotInS2 { gen: 1, coeff: 1 })
        ));
        let dec = canonical_decompose(&parse_word("x2^3", 2).unwrap(), prime(3)).unwrap();
        assert_eq!(dec.to_string(), "a2=1");
        let dec = canonical_decompose(&parse_word("x2^5", 2).unwrap(), prime(5)).unwrap();
        assert_eq!(dec.to_string(), "trivial");
    }

    #[test]
    fn triple_counts() {
        for d in 1..=6 {
            assert_eq!(triple_indices(d).len(), (d * d * d - d) / 3);
        }
    }

    #[test]
    fn basis_has_full_rank() {
        for p in [2, 3, 5] {
            for d in 1..=8 {
                assert_basis_full_rank(prime(p), d);
            }
        }
    }
}
