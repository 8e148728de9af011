mod common;

use common::{mat, prime, rng, tuples, with_corners};
use massey::fp::Prime;
use massey::magnus::zassenhaus_level;
use massey::massey::{massey_check, MasseyOptions, Verdict};
use massey::unipotent::{
    enumerate_defining_reps, enumerate_reps, evaluate_word, lift_exists, mat_commutator, mat_invert,
    mat_multiply, separating_rep, UnipotentMatrix,
};
use massey::words::{parse_word, FreeWord, PresentationSpec};
use proptest::prelude::*;
use rand::Rng;
use std::collections::HashSet;

fn corner_only(p: Prime, v: i64) -> UnipotentMatrix {
    UnipotentMatrix::with_entries(p, 4, &[((0, 3), p.reduce(v))])
}

fn triple_commutator_holds(p: u32) -> usize {
    let pr = prime(p);
    let expected = corner_only(pr, -1);
    let mut checked = 0;
    for t in tuples(p, 9) {
        let v: Vec<i64> = t.iter().map(|&x| x as i64).collect();
        let a = mat(pr, &[[1, 1, v[0], v[3]], [0, 1, 0, v[6]], [0, 0, 1, 0], [0, 0, 0, 1]]);
        let b = mat(pr, &[[1, 0, v[1], v[4]], [0, 1, 1, v[7]], [0, 0, 1, 0], [0, 0, 0, 1]]);
        let c = mat(pr, &[[1, 0, v[2], v[5]], [0, 1, 0, v[8]], [0, 0, 1, 1], [0, 0, 0, 1]]);
        let bc = mat_commutator(&b, &c).unwrap();
        assert_eq!(mat_commutator(&bc, &a).unwrap(), expected, "parameters {v:?}");
        checked += 1;
    }
    checked
}

#[test]
fn triple_commutator_lemma_mod_2() {
    assert_eq!(triple_commutator_holds(2), 512);
}

#[test]
fn triple_commutator_lemma_mod_3() {
    assert_eq!(triple_commutator_holds(3), 19683);
}

#[test]
fn second_commutator_lemma() {
    for p in [2u32, 3, 5, 7] {
        let pr = prime(p);
        let u = mat(pr, &[[1, 0, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1], [0, 0, 0, 1]]);
        let v = mat(pr, &[[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);
        let uv = mat_commutator(&u, &v).unwrap();
        assert_eq!(mat_commutator(&uv, &u).unwrap(), corner_only(pr, -1));
        assert!(mat_commutator(&uv, &v).unwrap().is_identity());
        assert!(v.pow(p as i64).is_identity());
        if p >= 3 {
            assert!(u.pow(p as i64).is_identity());
        } else {
            assert!(!u.pow(2).is_identity());
        }
    }
}

fn closure(gens: &[UnipotentMatrix]) -> HashSet<UnipotentMatrix> {
    let mut seen: HashSet<UnipotentMatrix> = HashSet::new();
    let mut frontier = vec![UnipotentMatrix::identity(gens[0].prime(), gens[0].size())];
    seen.insert(frontier[0].clone());
    while let Some(m) = frontier.pop() {
        for g in gens {
            let next = mat_multiply(&m, g).unwrap();
            if seen.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }
    seen
}

#[test]
fn case_six_matrices_generate_u4_mod_2() {
    let p = prime(2);
    let x = mat(p, &[[1, 0, 0, 0], [0, 1, 1, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);
    let y = mat(p, &[[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);
    let z = mat(p, &[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 1], [0, 0, 0, 1]]);
    let comm = |a: &UnipotentMatrix, b: &UnipotentMatrix| mat_commutator(a, b).unwrap();
    for m in [&x, &y, &z] {
        assert!(m.pow(2).is_identity());
    }
    assert!(comm(&x, &y).pow(2).is_identity());
    assert!(comm(&x, &z).pow(2).is_identity());
    assert!(comm(&y, &z).is_identity());
    let left = comm(&y, &comm(&x, &z));
    let right = comm(&z, &comm(&x, &y));
    assert_eq!(left, right);
    assert!(left.is_identity_except_corner() && left.pow(2).is_identity());
    assert_eq!(closure(&[x, y, z]).len(), 64);
}

proptest! {
    #[test]
    fn multiplication_is_associative(
        (a, b, c) in (prop::sample::select(vec![2u32, 3, 5]), 1usize..6).prop_flat_map(|(p, n)| {
            let m = move || prop::collection::vec(0..p, n * n).prop_map(move |v| {
                let pr = Prime::new(p).unwrap();
                let entries: Vec<_> = (0..n)
                    .flat_map(|r| (r + 1..n).map(move |c| (r, c)))
                    .map(|(r, c)| ((r, c), v[r * n + c]))
                    .collect();
                UnipotentMatrix::with_entries(pr, n, &entries)
            });
            (m(), m(), m())
        })
    ) {
        let left = mat_multiply(&mat_multiply(&a, &b).unwrap(), &c).unwrap();
        let right = mat_multiply(&a, &mat_multiply(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let inv = mat_invert(&a);
        prop_assert!(mat_multiply(&a, &inv).unwrap().is_identity());
        prop_assert!(mat_multiply(&inv, &a).unwrap().is_identity());
    }
}

/// Random specs over p in {2, 3} with d <= 3 and at most two relators.
fn random_spec<R: Rng>(rng: &mut R) -> PresentationSpec {
    let p = if rng.gen_bool(0.5) { 2 } else { 3 };
    let d = rng.gen_range(1..=3);
    let count = rng.gen_range(0..=2);
    let relators: Vec<FreeWord> = (0..count)
        .map(|_| common::into_frattini(common::random_word(rng, d, 8), p))
        .collect();
    PresentationSpec::new(p, d, relators).unwrap()
}

#[test]
fn lift_matches_brute_force() {
    let mut rng = rng(7);
    let mut compared = 0;
    let mut lifted = 0;
    for _ in 0..200 {
        let spec = random_spec(&mut rng);
        let p = spec.prime();
        let d = spec.generator_count();
        let chars: Vec<_> = (0..3).map(|_| common::random_character(&mut rng, p, d)).collect();
        let reps = enumerate_defining_reps(&spec, &chars, 1 << 20).unwrap();
        for rep in reps.take(20) {
            let fast = lift_exists(&spec, &rep).unwrap().lifts();
            let slow = tuples(p.get(), d).iter().any(|t| {
                let full = with_corners(&rep, t);
                spec.relators()
                    .iter()
                    .all(|r| evaluate_word(&full, r).unwrap().is_identity())
            });
            assert_eq!(fast, slow, "spec {spec}, rep {rep:?}");
            compared += 1;
            lifted += fast as usize;
        }
    }
    assert!(compared > 200 && lifted > 0 && lifted < compared);
}

/// Words of filtration weight at least 4 built from nested commutators and p-th powers.
fn deep_words(d: usize, p: u32) -> Vec<FreeWord> {
    let g = |i| FreeWord::generator(d, i).unwrap();
    let c = |u: &FreeWord, v: &FreeWord| u.commutator(v).unwrap();
    let mut out = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let ij = c(&g(i), &g(j));
            for k in 0..d {
                for l in 0..d {
                    out.push(c(&c(&ij, &g(k)), &g(l)));
                }
                out.push(c(&ij, &g(k)).pow(p as i64));
            }
            out.push(c(&ij, &c(&g(j), &g(i))));
            out.push(ij.pow(p as i64 * p as i64));
        }
        out.push(g(i).pow((p * p) as i64));
    }
    out
}

#[test]
fn unipotent_reps_kill_level_four() {
    for (p, d) in [(2u32, 2usize), (3, 2), (2, 3)] {
        let pr = prime(p);
        let words: Vec<_> = deep_words(d, p)
            .into_iter()
            .filter(|w| zassenhaus_level(w, pr).at_least() >= 4)
            .collect();
        assert!(words.len() > d * d * d);
        let spec = PresentationSpec::free(p, d).unwrap();
        let reps = enumerate_reps(&spec, 4, 1 << 20).unwrap();
        let mut count = 0;
        for rep in reps.step_by(if p == 2 && d == 2 { 1 } else { 37 }) {
            for w in &words {
                assert!(evaluate_word(&rep, w).unwrap().is_identity(), "{w} survives {rep:?}");
            }
            count += 1;
        }
        assert!(count > 100);
    }
}

#[test]
fn separation_examples() {
    let spec = PresentationSpec::free(2, 3).unwrap();
    let w = parse_word("[[x2,x3],x1]", 3).unwrap();
    assert!(separating_rep(&spec, &w, 2, 1 << 20).unwrap().is_none());
    let rep = separating_rep(&spec, &w, 3, 1 << 20).unwrap().unwrap();
    assert!(!evaluate_word(&rep, &w).unwrap().is_identity());
    let deep = parse_word("[[[x1,x2],x3],x1]", 3).unwrap();
    assert!(separating_rep(&spec, &deep, 3, 1 << 20).unwrap().is_none());
}

fn all_verdicts(spec: &PresentationSpec) -> Vec<Verdict> {
    common::dual_triples(spec.prime(), spec.generator_count())
        .iter()
        .map(|t| massey_check(spec, t, &MasseyOptions::default()).unwrap().verdict())
        .collect()
}

#[test]
fn equivalent_presentations_agree() {
    let pairs: &[(u32, usize, &[&str], &[&str])] = &[
        // differ by an element of the fourth filtration step
        (2, 3, &["[[x2,x3],x1]"], &["[[x2,x3],x1]*[[[x1,x2],x3],x1]"]),
        (3, 3, &["[[x2,x3],x1]"], &["[[x2,x3],x1]*[[x1,x2],x3]^3"]),
        // inverse and conjugate generate the same normal subgroup
        (2, 3, &["[x1,x2]*[[x1,x3],x2]"], &["([x1,x2]*[[x1,x3],x2])^-1"]),
        (3, 2, &["[[x1,x2],x2]"], &["x1^-1*[[x1,x2],x2]*x1"]),
        // multiplying one relator by another
        (2, 3, &["[x1,x2]", "[[x2,x3],x1]"], &["[x1,x2]*[[x2,x3],x1]", "[[x2,x3],x1]"]),
        (2, 4, &["[x1,x2]*[x3,x4]"], &["[x3,x4]*[x1,x2]"]),
    ];
    for &(p, d, left, right) in pairs {
        let l = common::spec(p, d, left);
        let r = common::spec(p, d, right);
        assert_eq!(all_verdicts(&l), all_verdicts(&r), "{l} vs {r}");
    }
}
