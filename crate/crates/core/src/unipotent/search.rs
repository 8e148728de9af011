//! Exhaustive depth-first search for homomorphisms into unipotent groups.

use super::matrix::{BarUnipotent, UnipotentGroup, UnipotentMatrix};
use super::rep::{evaluate_with, RepAssignment};
use crate::fp::Prime;
use crate::massey::Character;
use crate::words::{FreeWord, PresentationSpec};
use std::marker::PhantomData;
use std::ops::Range;
use std::sync::Arc;
use thiserror::Error;

/// Default cap on the number of candidate assignments a search may visit.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search space has {required} candidates, above the budget of {budget}")]
    FoldTooLarge { required: u128, budget: u64 },
    #[error("search space has {required} candidates, above the budget of {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
    #[error("expected characters on {expected} generators, got {found}")]
    CharacterLength { expected: usize, found: usize },
    #[error("a defining system needs at least 2 characters, got {n}")]
    TooFewCharacters { n: usize },
    #[error("characters over F_{found} used with a presentation over F_{expected}")]
    PrimeMismatch { expected: u32, found: u32 },
}

#[derive(Debug)]
struct Template {
    fixed: Vec<((usize, usize), u32)>,
    free: Vec<(usize, usize)>,
    count: u64,
}

#[derive(Debug)]
struct SearchSpace {
    p: Prime,
    size: usize,
    templates: Vec<Template>,
    /// Relators with their index, grouped by their largest generator.
    checks: Vec<Vec<(usize, FreeWord)>>,
    relator_count: usize,
    /// Relator images only need to be central rather than trivial.
    modulo_center: bool,
}

impl SearchSpace {
    fn new(spec: &PresentationSpec, size: usize, templates: Vec<Template>, modulo_center: bool) -> Self {
        let mut checks = vec![Vec::new(); spec.generator_count()];
        for (i, r) in spec.relators().iter().enumerate() {
            if let Some(g) = r.max_generator() {
                checks[g].push((i, r.clone()));
            }
        }
        SearchSpace {
            p: spec.prime(),
            size,
            templates,
            checks,
            relator_count: spec.relators().len(),
            modulo_center,
        }
    }

    fn total(&self) -> u128 {
        let p = self.p.get() as u128;
        let free: u32 = self.templates.iter().map(|t| t.free.len() as u32).sum();
        p.checked_pow(free).unwrap_or(u128::MAX)
    }

    fn matrix(&self, g: usize, mut index: u64) -> UnipotentMatrix {
        let t = &self.templates[g];
        let mut m = UnipotentMatrix::with_entries(self.p, self.size, &t.fixed);
        let p = self.p.get() as u64;
        for &(r, c) in t.free.iter().rev() {
            m.set(r, c, (index % p) as u32);
            index /= p;
        }
        m
    }
}

fn count_for(p: Prime, free: usize) -> u64 {
    (p.get() as u64).checked_pow(free as u32).unwrap_or(u64::MAX)
}

/// Iterator over every assignment of the generators satisfying all relators.
///
/// Generators are assigned in order; a relator is checked as soon as its largest
/// generator has been assigned. Internally every image is a full matrix with zero
/// corner (for searches into `Ū`), so the corners of the relator images under
/// that lift come for free.
#[derive(Debug)]
pub struct RepSearch<M> {
    space: Arc<SearchSpace>,
    range0: Range<u64>,
    counters: Vec<u64>,
    level: usize,
    images: Vec<UnipotentMatrix>,
    inverses: Vec<UnipotentMatrix>,
    corners: Vec<u32>,
    done: bool,
    _kind: PhantomData<M>,
}

impl<M: UnipotentGroup> RepSearch<M> {
    fn start(space: Arc<SearchSpace>, range0: Range<u64>) -> Self {
        let d = space.templates.len();
        let id = UnipotentMatrix::identity(space.p, space.size);
        let mut counters = vec![0; d];
        counters[0] = range0.start;
        let done = range0.is_empty();
        RepSearch {
            images: vec![id.clone(); d],
            inverses: vec![id; d],
            corners: vec![0; space.relator_count],
            space,
            range0,
            counters,
            level: 0,
            done,
            _kind: PhantomData,
        }
    }

    /// Number of candidate assignments before relator pruning.
    pub fn candidate_count(&self) -> u128 {
        self.space.total()
    }

    /// Matrix size of the target group.
    pub fn size(&self) -> usize {
        self.space.size
    }

    /// Splits the not-yet-started search into up to `parts` disjoint searches by
    /// the choice for the first generator. Concatenating their outputs in order
    /// reproduces this search's output.
    pub fn partitions(&self, parts: usize) -> Vec<RepSearch<M>> {
        let Range { start, end } = self.range0.clone();
        let len = end - start;
        let parts = (parts.max(1) as u64).min(len.max(1));
        (0..parts)
            .map(|i| {
                let lo = start + len * i / parts;
                let hi = start + len * (i + 1) / parts;
                RepSearch::start(self.space.clone(), lo..hi)
            })
            .collect()
    }

    fn limit(&self, g: usize) -> u64 {
        if g == 0 {
            self.range0.end
        } else {
            self.space.templates[g].count
        }
    }

    fn backtrack(&mut self) {
        loop {
            if self.level == 0 {
                self.done = true;
                return;
            }
            self.level -= 1;
            self.counters[self.level] += 1;
            if self.counters[self.level] < self.limit(self.level) {
                return;
            }
        }
    }

    fn relators_hold(&mut self, g: usize) -> bool {
        let space = &self.space;
        for (i, r) in &space.checks[g] {
            let v = evaluate_with(&self.images, &self.inverses, r);
            let ok = if space.modulo_center {
                v.is_identity_except_corner()
            } else {
                v.is_identity()
            };
            if !ok {
                return false;
            }
            self.corners[*i] = v.corner();
        }
        true
    }

    /// Advances to the next valid assignment and returns the generator images
    /// (zero-corner lifts for searches into `Ū`) together with the corner of
    /// each relator's image.
    pub(crate) fn next_raw(&mut self) -> Option<(&[UnipotentMatrix], &[u32])> {
        let d = self.space.templates.len();
        while !self.done {
            let g = self.level;
            if self.counters[g] >= self.limit(g) {
                self.backtrack();
                continue;
            }
            let m = self.space.matrix(g, self.counters[g]);
            self.inverses[g] = m.inv_unchecked();
            self.images[g] = m;
            if !self.relators_hold(g) {
                self.counters[g] += 1;
                continue;
            }
            if g + 1 < d {
                self.level = g + 1;
                self.counters[g + 1] = 0;
                continue;
            }
            self.counters[g] += 1;
            return Some((&self.images, &self.corners));
        }
        None
    }
}

impl<M: UnipotentGroup> Iterator for RepSearch<M> {
    type Item = RepAssignment<M>;

    fn next(&mut self) -> Option<Self::Item> {
        let (images, _) = self.next_raw()?;
        let images = images.iter().cloned().map(M::from_full).collect();
        Some(RepAssignment::new(images).expect("uniform shapes"))
    }
}

fn check_characters(spec: &PresentationSpec, chars: &[Character]) -> Result<(), SearchError> {
    if chars.len() < 2 {
        return Err(SearchError::TooFewCharacters { n: chars.len() });
    }
    for c in chars {
        if c.prime() != spec.prime() {
            return Err(SearchError::PrimeMismatch {
                expected: spec.p(),
                found: c.prime().get(),
            });
        }
        if c.generator_count() != spec.generator_count() {
            return Err(SearchError::CharacterLength {
                expected: spec.generator_count(),
                found: c.generator_count(),
            });
        }
    }
    Ok(())
}

/// Search space size for defining systems of an `n`-fold product on `d` generators.
pub fn defining_candidate_count(p: Prime, d: usize, n: usize) -> u128 {
    let free = (n + 1) * n / 2 - n - 1;
    (p.get() as u128).checked_pow((free * d) as u32).unwrap_or(u128::MAX)
}

/// All `ρ̄: G -> Ū_{n+1}(F_p)` with `ρ̄_{i,i+1} = -α_i` on each generator, where
/// `n = chars.len()`.
///
/// # Errors
/// `FoldTooLarge` if the unpruned search space exceeds `budget`.
pub fn enumerate_defining_reps(
    spec: &PresentationSpec,
    chars: &[Character],
    budget: u64,
) -> Result<RepSearch<BarUnipotent>, SearchError> {
    check_characters(spec, chars)?;
    let p = spec.prime();
    let n = chars.len();
    let size = n + 1;
    let templates: Vec<Template> = (0..spec.generator_count())
        .map(|g| {
            let fixed = (0..n).map(|i| ((i, i + 1), p.neg(chars[i].value(g)))).collect();
            let free: Vec<_> = (0..size)
                .flat_map(|r| (r + 2..size).map(move |c| (r, c)))
                .filter(|&(r, c)| !(r == 0 && c == n))
                .collect();
            let count = count_for(p, free.len());
            Template { fixed, free, count }
        })
        .collect();
    let space = SearchSpace::new(spec, size, templates, true);
    let required = space.total();
    if required > budget as u128 {
        return Err(SearchError::FoldTooLarge { required, budget });
    }
    let first = space.templates[0].count;
    Ok(RepSearch::start(Arc::new(space), 0..first))
}

/// All homomorphisms `G -> U_size(F_p)`.
///
/// # Errors
/// `BudgetExceeded` if the unpruned search space exceeds `budget`.
pub fn enumerate_reps(
    spec: &PresentationSpec,
    size: usize,
    budget: u64,
) -> Result<RepSearch<UnipotentMatrix>, SearchError> {
    let p = spec.prime();
    let templates: Vec<Template> = (0..spec.generator_count())
        .map(|_| {
            let free: Vec<_> = (0..size)
                .flat_map(|r| (r + 1..size).map(move |c| (r, c)))
                .collect();
            let count = count_for(p, free.len());
            Template {
                fixed: Vec::new(),
                free,
                count,
            }
        })
        .collect();
    let space = SearchSpace::new(spec, size, templates, false);
    let required = space.total();
    if required > budget as u128 {
        return Err(SearchError::BudgetExceeded { required, budget });
    }
    let first = space.templates[0].count;
    Ok(RepSearch::start(Arc::new(space), 0..first))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unipotent::evaluate_word;

    fn chars(p: Prime, d: usize, idx: &[usize]) -> Vec<Character> {
        idx.iter().map(|&i| Character::dual(p, d, i)).collect()
    }

    #[test]
    fn free_group_streams_everything() {
        for p in [2, 3] {
            let spec = PresentationSpec::free(p, 2).unwrap();
            let pr = spec.prime();
            let reps: Vec<_> = enumerate_defining_reps(&spec, &chars(pr, 2, &[0, 1, 0]), DEFAULT_BUDGET)
                .unwrap()
                .collect();
            assert_eq!(reps.len() as u32, p.pow(4));
            let distinct: std::collections::HashSet<_> = reps.iter().collect();
            assert_eq!(distinct.len(), reps.len());
            for rep in &reps {
                let a = &rep.images()[0];
                assert_eq!(a.get(0, 1), pr.neg(1));
                assert_eq!(a.get(1, 2), 0);
                assert_eq!(a.get(2, 3), pr.neg(1));
            }
        }
    }

    #[test]
    fn nonvanishing_cup_product_gives_empty_stream() {
        let spec = PresentationSpec::from_strs(2, 2, &["[x1,x2]"]).unwrap();
        let pr = spec.prime();
        let mut it = enumerate_defining_reps(&spec, &chars(pr, 2, &[0, 1, 1]), DEFAULT_BUDGET).unwrap();
        assert!(it.next().is_none());
    }

    #[test]
    fn first_example_has_all_assignments() {
        let spec = PresentationSpec::from_strs(2, 5, &["[x4,x5]*[[x2,x3],x1]"]).unwrap();
        let pr = spec.prime();
        let reps: Vec<_> = enumerate_defining_reps(&spec, &chars(pr, 5, &[0, 1, 2]), DEFAULT_BUDGET)
            .unwrap()
            .collect();
        assert_eq!(reps.len(), 1024);
        let plain = reps.iter().find(|r| {
            r.images()
                .iter()
                .all(|m| (0..4).all(|i| (i + 2..4).all(|j| m.get(i, j) == 0)))
        });
        assert!(plain.is_some());
    }

    #[test]
    fn partitions_cover_the_search() {
        let spec = PresentationSpec::from_strs(3, 3, &["[x1,x2]*[x2,x3]^2"]).unwrap();
        let pr = spec.prime();
        let cs = vec![Character::new(pr, &[1, 0, 2]), Character::new(pr, &[0, 0, 1]), Character::new(pr, &[1, 1, 0])];
        let whole: Vec<_> = enumerate_defining_reps(&spec, &cs, DEFAULT_BUDGET).unwrap().collect();
        let search = enumerate_defining_reps(&spec, &cs, DEFAULT_BUDGET).unwrap();
        for parts in [1, 2, 4, 7, 50] {
            let joined: Vec<_> = search.partitions(parts).into_iter().flatten().collect();
            assert_eq!(joined, whole);
        }
        for rep in &whole {
            for r in spec.relators() {
                assert!(evaluate_word(rep, r).unwrap().is_identity());
            }
        }
    }

    #[test]
    fn budget_guard() {
        let spec = PresentationSpec::free(5, 3).unwrap();
        let pr = spec.prime();
        let cs = chars(pr, 3, &[0, 1, 2, 0, 1]);
        assert!(matches!(
            enumerate_defining_reps(&spec, &cs, DEFAULT_BUDGET),
            Err(SearchError::FoldTooLarge { .. })
        ));
        assert_eq!(defining_candidate_count(pr, 3, 5), 5u128.pow(27));
        assert!(matches!(
            enumerate_reps(&spec, 4, 1000),
            Err(SearchError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn character_validation() {
        let spec = PresentationSpec::free(2, 2).unwrap();
        let pr = spec.prime();
        assert!(matches!(
            enumerate_defining_reps(&spec, &chars(pr, 3, &[0, 1, 2]), DEFAULT_BUDGET),
            Err(SearchError::CharacterLength { expected: 2, found: 3 })
        ));
        assert!(matches!(
            enumerate_defining_reps(&spec, &chars(pr, 2, &[0]), DEFAULT_BUDGET),
            Err(SearchError::TooFewCharacters { n: 1 })
        ));
    }
}
