use super::Character;
use crate::unipotent::{
    enumerate_defining_reps, evaluate_word, BarUnipotent, LiftError, LiftObstruction,
    RepAssignment, RepSearch, SearchError, UnipotentMatrix, DEFAULT_BUDGET,
};
use crate::unipotent::lift::LiftSystem;
use crate::words::PresentationSpec;
use serde::Serialize;
use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MasseyError {
    #[error("Massey products need at least 3 characters, got {n}")]
    FoldTooSmall { n: usize },
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error("relator {index} does not exist (presentation has {count})")]
    RelatorIndex { index: usize, count: usize },
    #[error("relator {relator}: {source}")]
    Decompose {
        relator: usize,
        source: crate::magnus::DecomposeError,
    },
    #[error("lift witness failed re-validation")]
    InvalidWitness,
    #[error("could not build a thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MasseyOptions {
    /// Largest number of candidate defining systems the search may visit.
    pub budget: u64,
    /// Worker threads; 1 runs on the calling thread.
    pub threads: usize,
}

impl Default for MasseyOptions {
    fn default() -> Self {
        MasseyOptions {
            budget: DEFAULT_BUDGET,
            threads: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    NotDefined,
    Vanishes,
    DoesNotVanish,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::NotDefined => "NotDefined",
            Verdict::Vanishes => "Vanishes",
            Verdict::DoesNotVanish => "DoesNotVanish",
        };
        write!(f, "{s}")
    }
}

/// Outcome of [`massey_check`] together with its certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MasseyReport {
    /// No homomorphism to `Ū_{n+1}` has the prescribed near-diagonal entries.
    NotDefined { candidates: u128 },
    /// `lift` is a homomorphism to `U_{n+1}` with near-diagonal entries `-α_i`;
    /// `examined` defining systems were tried before it was found.
    Vanishes {
        lift: RepAssignment<UnipotentMatrix>,
        examined: u64,
    },
    /// All `exhausted` defining systems fail to lift; `witness` is the first one
    /// in search order, with the relator whose corner cannot be cleared.
    DoesNotVanish {
        exhausted: u64,
        witness: RepAssignment<BarUnipotent>,
        obstruction: LiftObstruction,
    },
}

impl MasseyReport {
    pub fn verdict(&self) -> Verdict {
        match self {
            MasseyReport::NotDefined { .. } => Verdict::NotDefined,
            MasseyReport::Vanishes { .. } => Verdict::Vanishes,
            MasseyReport::DoesNotVanish { .. } => Verdict::DoesNotVanish,
        }
    }
}

struct PartResult {
    found: u64,
    lift: Option<(RepAssignment<UnipotentMatrix>, u64)>,
    first_failure: Option<(RepAssignment<BarUnipotent>, LiftObstruction)>,
}

fn run_part(
    system: &LiftSystem,
    mut search: RepSearch<BarUnipotent>,
    stop: &AtomicBool,
) -> PartResult {
    let mut out = PartResult {
        found: 0,
        lift: None,
        first_failure: None,
    };
    while let Some((images, corners)) = search.next_raw() {
        if stop.load(Ordering::Relaxed) {
            break;
        }
        out.found += 1;
        match system.solve(corners) {
            Ok(t) => {
                out.lift = Some((LiftSystem::lift(images, &t), out.found));
                stop.store(true, Ordering::Relaxed);
                break;
            }
            Err(o) => {
                if out.first_failure.is_none() {
                    let bar = images.iter().cloned().map(BarUnipotent::new).collect();
                    let rep = RepAssignment::new(bar).expect("uniform shapes");
                    out.first_failure = Some((rep, o));
                }
            }
        }
    }
    out
}

/// Decides whether the Massey product `<α_1, ..., α_n>` of `G` is defined and
/// whether it contains 0, by enumerating all defining systems (homomorphisms
/// `G -> Ū_{n+1}(F_p)` with `(i, i+1)` entries `-α_i`) and testing each for a lift
/// to `U_{n+1}(F_p)`.
pub fn massey_check(
    spec: &PresentationSpec,
    chars: &[Character],
    options: &MasseyOptions,
) -> Result<MasseyReport, MasseyError> {
    if chars.len() < 3 {
        return Err(MasseyError::FoldTooSmall { n: chars.len() });
    }
    let search = enumerate_defining_reps(spec, chars, options.budget)?;
    let candidates = search.candidate_count();
    let system = LiftSystem::new(spec);
    let stop = AtomicBool::new(false);
    let parts: Vec<PartResult> = if options.threads <= 1 {
        vec![run_part(&system, search, &stop)]
    } else {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.threads)
            .build()
            .map_err(|e| MasseyError::ThreadPool(e.to_string()))?;
        let pieces = search.partitions(options.threads * 8);
        pool.install(|| {
            pieces
                .into_par_iter()
                .map(|s| run_part(&system, s, &stop))
                .collect::<Vec<_>>()
        })
    };

    let examined: u64 = parts.iter().map(|r| r.found).sum();
    let mut failure = None;
    for part in parts {
        if let Some((lift, _)) = part.lift {
            validate_lift(spec, chars, &lift)?;
            return Ok(MasseyReport::Vanishes { lift, examined });
        }
        if failure.is_none() {
            failure = part.first_failure;
        }
    }
    Ok(match failure {
        None => MasseyReport::NotDefined { candidates },
        Some((witness, obstruction)) => MasseyReport::DoesNotVanish {
            exhausted: examined,
            witness,
            obstruction,
        },
    })
}

/// Checks that `lift` kills every relator and has `-α_i` on the superdiagonal.
pub fn validate_lift(
    spec: &PresentationSpec,
    chars: &[Character],
    lift: &RepAssignment<UnipotentMatrix>,
) -> Result<(), MasseyError> {
    let p = spec.prime();
    if lift.generator_count() != spec.generator_count() || lift.size() != Some(chars.len() + 1) {
        return Err(MasseyError::InvalidWitness);
    }
    for (g, m) in lift.images().iter().enumerate() {
        for (i, c) in chars.iter().enumerate() {
            if m.get(i, i + 1) != p.neg(c.value(g)) {
                return Err(MasseyError::InvalidWitness);
            }
        }
    }
    for r in spec.relators() {
        let v = evaluate_word(lift, r).map_err(|_| MasseyError::InvalidWitness)?;
        if !v.is_identity() {
            return Err(MasseyError::InvalidWitness);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::Prime;

    fn duals(p: Prime, d: usize, idx: &[usize]) -> Vec<Character> {
        idx.iter().map(|&i| Character::dual(p, d, i)).collect()
    }

    #[test]
    fn first_example_does_not_vanish() {
        let spec = PresentationSpec::from_strs(2, 5, &["[x4,x5]*[[x2,x3],x1]"]).unwrap();
        let chars = duals(spec.prime(), 5, &[0, 1, 2]);
        match massey_check(&spec, &chars, &MasseyOptions::default()).unwrap() {
            MasseyReport::DoesNotVanish {
                exhausted,
                obstruction,
                ..
            } => {
                assert_eq!(exhausted, 1024);
                assert_eq!(obstruction.relator, 0);
                assert_eq!(obstruction.corner, 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn free_groups_vanish() {
        for p in [2, 3, 5] {
            let spec = PresentationSpec::free(p, 2).unwrap();
            let pr = spec.prime();
            let chars = vec![
                Character::new(pr, &[1, 0]),
                Character::new(pr, &[1, 1]),
                Character::new(pr, &[0, 1]),
            ];
            let r = massey_check(&spec, &chars, &MasseyOptions::default()).unwrap();
            assert_eq!(r.verdict(), Verdict::Vanishes);
        }
    }

    #[test]
    fn cyclic_group_of_order_three() {
        let spec = PresentationSpec::from_strs(3, 1, &["x1^3"]).unwrap();
        let chars = duals(spec.prime(), 1, &[0, 0, 0]);
        let r = massey_check(&spec, &chars, &MasseyOptions::default()).unwrap();
        assert_eq!(r.verdict(), Verdict::DoesNotVanish);
    }

    #[test]
    fn undefined_when_cup_product_survives() {
        let spec = PresentationSpec::from_strs(2, 2, &["[x1,x2]"]).unwrap();
        let chars = duals(spec.prime(), 2, &[0, 1, 1]);
        let r = massey_check(&spec, &chars, &MasseyOptions::default()).unwrap();
        assert_eq!(r, MasseyReport::NotDefined { candidates: 16 });
    }

    #[test]
    fn threads_agree_with_sequential() {
        let spec = PresentationSpec::from_strs(2, 5, &["[x4,x5]*[[x2,x3],x1]"]).unwrap();
        let chars = duals(spec.prime(), 5, &[0, 1, 2]);
        let seq = massey_check(&spec, &chars, &MasseyOptions::default()).unwrap();
        let par = massey_check(
            &spec,
            &chars,
            &MasseyOptions {
                threads: 4,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(seq, par);
        let demushkin = PresentationSpec::from_strs(2, 4, &["[x1,x2]*[x3,x4]"]).unwrap();
        let chars = duals(demushkin.prime(), 4, &[0, 2, 0]);
        let par = massey_check(
            &demushkin,
            &chars,
            &MasseyOptions {
                threads: 3,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(par.verdict(), Verdict::Vanishes);
    }

    #[test]
    fn too_few_characters() {
        let spec = PresentationSpec::free(2, 1).unwrap();
        let chars = duals(spec.prime(), 1, &[0, 0]);
        assert!(matches!(
            massey_check(&spec, &chars, &MasseyOptions::default()),
            Err(MasseyError::FoldTooSmall { n: 2 })
        ));
    }
}
