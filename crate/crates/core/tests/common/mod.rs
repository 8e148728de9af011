#![allow(dead_code)]

use massey::fp::Prime;
use massey::massey::Character;
use massey::unipotent::{BarUnipotent, RepAssignment, UnipotentGroup, UnipotentMatrix};
use massey::words::{FreeWord, PresentationSpec};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn prime(p: u32) -> Prime {
    Prime::new(p).unwrap()
}

pub fn spec(p: u32, d: usize, relators: &[&str]) -> PresentationSpec {
    PresentationSpec::from_strs(p, d, relators).unwrap()
}

/// Presentations over p = 2 and p = 3 with every relator in the Frattini subgroup.
/// Kept small enough that exhaustive triple checks stay cheap.
pub const CORPUS: &[(u32, usize, &[&str])] = &[
    (2, 5, &["[x4,x5]*[[x2,x3],x1]"]),
    (2, 7, &["[x4,x5]*[[x2,x3],x1]", "[x6,x7]"]),
    (2, 3, &["[x1,x3]*[x2,x3]*[[x1,x3],x2]"]),
    (2, 4, &["[x1,x2]*[x3,x4]"]),
    (2, 2, &["[[x1,x2],x2]"]),
    (2, 2, &["[[x1,x2],x1]"]),
    (2, 3, &["[[x2,x3],x1]"]),
    (2, 4, &["x1^2*[x2,x3]*[[x2,x4],x1]"]),
    (2, 3, &["x1^2*[[x1,x2],x3]"]),
    (2, 4, &["[[x1,x3],x2]*[[x2,x4],x3]"]),
    (2, 5, &["[x1,x2]*[[x3,x4],x5]"]),
    (2, 4, &["x4^4*[[x1,x2],x3]"]),
    (2, 3, &["[[x1,x2],x1]", "[[x2,x3],x2]"]),
    (2, 6, &["[[x2,x3],x1]*[x4,x5]", "[[x4,x6],x5]"]),
    (2, 2, &["x1^2*[x1,x2]"]),
    (3, 1, &["x1^3"]),
    (3, 2, &["[[x1,x2],x1]"]),
    (3, 2, &["[[x1,x2],x2]"]),
    (3, 3, &["[[x2,x3],x1]"]),
    (3, 4, &["[x1,x2]*[x3,x4]"]),
    (3, 3, &["x1^3*[[x2,x3],x1]^2"]),
    (3, 4, &["[[x2,x3],x1]*[x1,x4]"]),
    (3, 3, &["[[x1,x2],x1]*[[x1,x3],x2]", "x3^3"]),
    (3, 2, &["[[x1,x2],x2]^2*x1^3"]),
];

pub fn corpus() -> Vec<PresentationSpec> {
    CORPUS.iter().map(|&(p, d, r)| spec(p, d, r)).collect()
}

pub fn duals(p: Prime, d: usize, idx: &[usize]) -> Vec<Character> {
    idx.iter().map(|&i| Character::dual(p, d, i)).collect()
}

/// All `d^3` triples of dual-basis characters.
pub fn dual_triples(p: Prime, d: usize) -> Vec<Vec<Character>> {
    let mut out = Vec::new();
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                out.push(duals(p, d, &[i, j, k]));
            }
        }
    }
    out
}

pub fn random_word<R: Rng>(rng: &mut R, d: usize, max_len: usize) -> FreeWord {
    let len = rng.gen_range(0..=max_len);
    let letters: Vec<(usize, i64)> = (0..len)
        .map(|_| (rng.gen_range(0..d), [-2i64, -1, 1, 2][rng.gen_range(0..4)]))
        .collect();
    FreeWord::from_letters(d, letters).unwrap()
}

/// Appends generator powers so every exponent sum is divisible by `p`.
pub fn into_frattini(w: FreeWord, p: u32) -> FreeWord {
    let d = w.generator_count();
    let mut out = w;
    for g in 0..d {
        let s = out.exponent_sum(g).rem_euclid(p as i64);
        if s != 0 {
            let fix = FreeWord::power_of_generator(d, g, -s).unwrap();
            out = out.multiply(&fix).unwrap();
        }
    }
    out
}

pub fn random_character<R: Rng>(rng: &mut R, p: Prime, d: usize) -> Character {
    let values: Vec<i64> = (0..d).map(|_| rng.gen_range(0..p.get() as i64)).collect();
    Character::new(p, &values)
}

/// Sets the corners of the zero-corner lift of `rep` to `t`.
pub fn with_corners(rep: &RepAssignment<BarUnipotent>, t: &[u32]) -> RepAssignment<UnipotentMatrix> {
    let images = rep
        .images()
        .iter()
        .zip(t)
        .map(|(m, &c)| {
            let mut full = m.as_full().clone();
            let n = full.size();
            full.set(0, n - 1, c);
            full
        })
        .collect();
    RepAssignment::new(images).unwrap()
}

/// Every tuple in `0..p` of length `len`, in odometer order.
pub fn tuples(p: u32, len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..p).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

pub fn mat(p: Prime, rows: &[[i64; 4]]) -> UnipotentMatrix {
    let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
    UnipotentMatrix::from_rows(p, &rows).unwrap()
}
