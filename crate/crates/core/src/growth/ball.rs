//! Breadth-first ball enumeration with normal-form deduplication.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::GrowthError;
use crate::model::GroupModel;
use crate::word::{Generator, Word};

/// Largest number of words held in memory by default (current sphere plus
/// candidates for the next one).
pub const DEFAULT_ELEMENT_BUDGET: usize = 40_000_000;

/// Cumulative ball cardinalities `card B(R)` for `R = 0..=radius_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallTable {
    pub model: String,
    counts: Vec<BigUint>,
}

impl BallTable {
    /// Builds a table from cumulative counts. Panics unless the counts start
    /// at 1 and never decrease.
    pub fn from_counts(model: impl Into<String>, counts: Vec<BigUint>) -> Self {
        assert!(
            counts.first().is_some_and(|c| *c == BigUint::from(1u8)),
            "B(0) must be 1"
        );
        assert!(counts.windows(2).all(|w| w[0] <= w[1]), "ball counts must not decrease");
        BallTable {
            model: model.into(),
            counts,
        }
    }

    pub fn from_spheres(model: impl Into<String>, spheres: &[BigUint]) -> Self {
        let mut total = BigUint::zero();
        let counts = spheres
            .iter()
            .map(|s| {
                total += s;
                total.clone()
            })
            .collect();
        Self::from_counts(model, counts)
    }

    pub fn radius_max(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn count(&self, radius: usize) -> &BigUint {
        &self.counts[radius]
    }

    pub fn spheres(&self) -> Vec<BigUint> {
        let mut out = vec![self.counts[0].clone()];
        out.extend(self.counts.windows(2).map(|w| &w[1] - &w[0]));
        out
    }

    /// Counts as `u64` when they all fit.
    pub fn counts_u64(&self) -> Option<Vec<u64>> {
        self.counts.iter().map(ToPrimitive::to_u64).collect()
    }
}

/// Next sphere from the current one: normal forms of `w·g` one letter
/// longer, sorted shortlex and deduplicated.
fn next_sphere(model: &dyn GroupModel, sphere: &[Word], radius: usize) -> Vec<Word> {
    let letters: Vec<Word> = Generator::alphabet(model.rank()).map(Word::letter).collect();
    let mut next: Vec<Word> = sphere
        .par_iter()
        .flat_map_iter(|w| {
            letters
                .iter()
                .map(move |g| model.mul(w, g))
                .filter(|v| v.len() == radius + 1)
        })
        .collect();
    next.par_sort_unstable();
    next.dedup();
    next
}

/// Walks the spheres `0..=radius`, handing each to `visit`. Fails once a
/// sphere and its candidate successors would exceed `budget` words.
pub fn for_each_sphere(
    model: &dyn GroupModel,
    radius: usize,
    budget: usize,
    mut visit: impl FnMut(usize, &[Word]),
) -> Result<(), GrowthError> {
    let mut sphere = vec![Word::empty()];
    visit(0, &sphere);
    for r in 0..radius {
        if sphere.len().saturating_mul(2 * model.rank() + 1) > budget {
            return Err(GrowthError::MemoryBudgetExceeded {
                completed_radius: r,
                budget,
            });
        }
        sphere = next_sphere(model, &sphere, r);
        visit(r + 1, &sphere);
    }
    Ok(())
}

/// Exact `card B(R)` for `R = 0..=radius`.
pub fn ball_count(model: &dyn GroupModel, radius: usize) -> Result<BallTable, GrowthError> {
    ball_count_with_budget(model, radius, DEFAULT_ELEMENT_BUDGET)
}

pub fn ball_count_with_budget(model: &dyn GroupModel, radius: usize, budget: usize) -> Result<BallTable, GrowthError> {
    let mut spheres = Vec::with_capacity(radius + 1);
    for_each_sphere(model, radius, budget, |_, s| spheres.push(BigUint::from(s.len())))?;
    Ok(BallTable::from_spheres(model.name(), &spheres))
}

/// Ball table from closed-form sphere counts when the model has them,
/// otherwise by enumeration.
pub fn ball_table(model: &dyn GroupModel, radius: usize) -> Result<BallTable, GrowthError> {
    match model.sphere_counts(radius) {
        Some(s) => Ok(BallTable::from_spheres(model.name(), &s)),
        None => ball_count(model, radius),
    }
}

/// Largest `r ≤ want` whose ball can be enumerated within `budget`: the
/// ball has at most `budget` elements and no sphere before it has more
/// than `budget` candidate successors.
pub fn affordable_radius(model: &dyn GroupModel, want: usize, budget: usize) -> usize {
    let branching = 2 * model.rank() + 1;
    let fits = |spheres: &[BigUint]| {
        let mut total = BigUint::zero();
        for (r, s) in spheres.iter().enumerate() {
            total += s;
            if total > BigUint::from(budget) {
                return r.saturating_sub(1);
            }
            if r < want && s * branching > BigUint::from(budget) {
                return r;
            }
        }
        want
    };
    match model.sphere_counts(want) {
        Some(s) => fits(&s),
        None => match ball_count_with_budget(model, want, budget) {
            Ok(t) => fits(&t.spheres()),
            Err(GrowthError::MemoryBudgetExceeded { completed_radius, .. }) => completed_radius,
            Err(_) => 0,
        },
    }
}

/// All normal forms of norm at most `radius`, in shortlex order.
pub fn enumerate_ball(model: &dyn GroupModel, radius: usize, budget: usize) -> Result<Vec<Word>, GrowthError> {
    let mut out = Vec::new();
    let mut total = 0usize;
    let mut over = None;
    for_each_sphere(model, radius, budget, |r, s| {
        total += s.len();
        if total > budget && over.is_none() {
            over = Some(r.saturating_sub(1));
        }
        if over.is_none() {
            out.extend_from_slice(s);
        }
    })?;
    match over {
        Some(completed_radius) => Err(GrowthError::MemoryBudgetExceeded {
            completed_radius,
            budget,
        }),
        None => Ok(out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CyclicFreeProduct, FreeAbelian, FreeGroup};
    use crate::word::{all_words_up_to, w};
    use std::collections::HashSet;

    fn small(table: &BallTable) -> Vec<u64> {
        table.counts_u64().unwrap()
    }

    #[test]
    fn spec_examples() {
        assert_eq!(small(&ball_count(&FreeGroup::new(2), 2).unwrap()), [1, 5, 17]);
        assert_eq!(small(&ball_count(&FreeAbelian::new(2), 2).unwrap()), [1, 5, 13]);
        let z2z = CyclicFreeProduct::new(vec![2, 0]);
        assert_eq!(small(&ball_count(&z2z, 2).unwrap()), [1, 4, 10]);
    }

    #[test]
    fn agrees_with_brute_force_images() {
        // Oracle: image of every word of length ≤ R under the model.
        let models: Vec<Box<dyn GroupModel>> = vec![
            Box::new(FreeGroup::new(2)),
            Box::new(FreeAbelian::new(2)),
            Box::new(CyclicFreeProduct::new(vec![2, 0])),
            Box::new(CyclicFreeProduct::new(vec![3, 0])),
        ];
        for m in &models {
            let table = ball_count(m.as_ref(), 5).unwrap();
            for r in 0..=5 {
                let image: HashSet<Word> = all_words_up_to(2, r).iter().map(|u| m.normal_form(u)).collect();
                assert_eq!(table.count(r), &BigUint::from(image.len()), "{} R={r}", m.name());
            }
        }
    }

    #[test]
    fn finite_groups_saturate() {
        let z3 = CyclicFreeProduct::new(vec![3]);
        assert_eq!(small(&ball_count(&z3, 4).unwrap()), [1, 3, 3, 3, 3]);
    }

    #[test]
    fn budget_reports_completed_radius() {
        let err = ball_count_with_budget(&FreeGroup::new(2), 10, 1000).unwrap_err();
        assert_eq!(
            err,
            GrowthError::MemoryBudgetExceeded {
                completed_radius: 5,
                budget: 1000
            }
        );
    }

    #[test]
    fn closed_forms_and_budgets() {
        let z2z = CyclicFreeProduct::new(vec![2, 0]);
        assert_eq!(ball_table(&z2z, 12).unwrap(), ball_count(&z2z, 12).unwrap());
        assert_eq!(affordable_radius(&FreeAbelian::new(2), 100, 13), 1);
        assert_eq!(affordable_radius(&FreeGroup::new(2), 100, 161), 3);
        for budget in [50, 1000, 50_000] {
            let m = CyclicFreeProduct::new(vec![2, 0]);
            let r = affordable_radius(&m, 100, budget);
            assert!(enumerate_ball(&m, r, budget).is_ok());
            assert!(enumerate_ball(&m, r + 1, budget).is_err());
        }
    }

    #[test]
    fn enumeration_is_shortlex() {
        let ball = enumerate_ball(&FreeAbelian::new(2), 2, 1000).unwrap();
        assert_eq!(ball.len(), 13);
        assert!(ball.windows(2).all(|p| p[0] < p[1]));
        assert_eq!(ball[..5], [w(""), w("a"), w("A"), w("b"), w("B")]);
    }
}
