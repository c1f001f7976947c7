//! Validators for the orbit constructions: cells, equivariance, symmetric
//! elements, twisted products, the separation lemma, insertion and the
//! collision distance guard.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{ConstantsBundle, OrbitContext, OrbitError, Sign, SignedIndex, TwistedProduct};
use crate::report::big_rational_str;
use crate::rng::{random_reduced_word, sample_rng};
use crate::word::{free_mul, reduced_words_up_to, Generator, Word};

fn floor_i64(q: &BigRational) -> i64 {
    q.floor().to_integer().to_i64().expect("constant fits i64")
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CellReport {
    pub checked: usize,
    /// Vertices whose cells by raw distance differ from the axis formula.
    pub index_mismatches: usize,
    /// Vertices lying in two cells with non-adjacent indices.
    pub nonadjacent_overlaps: usize,
    pub first_failure: Option<String>,
}

impl CellReport {
    pub fn holds(&self) -> bool {
        self.index_mismatches == 0 && self.nonadjacent_overlaps == 0
    }

    fn merge(mut self, other: CellReport) -> CellReport {
        self.checked += other.checked;
        self.index_mismatches += other.index_mismatches;
        self.nonadjacent_overlaps += other.nonadjacent_overlaps;
        self.first_failure = self.first_failure.or(other.first_failure);
        self
    }
}

/// Every vertex lies in a cell (nonempty nearest set by construction), only
/// adjacent cells overlap, and the axis formula agrees with raw distances.
pub fn check_cells(ctx: &OrbitContext, vertices: &[Word]) -> CellReport {
    vertices
        .par_iter()
        .map(|v| {
            let raw = ctx.cells_by_distance(v);
            let mut r = CellReport {
                checked: 1,
                ..CellReport::default()
            };
            if raw != ctx.cells(v) {
                r.index_mismatches = 1;
                r.first_failure = Some(format!("{v}: cells {raw:?} vs {:?}", ctx.cells(v)));
            }
            let lo = raw.iter().map(|c| c.position()).min().expect("nonempty");
            let hi = raw.iter().map(|c| c.position()).max().expect("nonempty");
            if hi - lo > 1 {
                r.nonadjacent_overlaps = 1;
                r.first_failure = Some(format!("{v}: cells {raw:?}"));
            }
            r
        })
        .reduce(CellReport::default, CellReport::merge)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EquivarianceReport {
    pub checked: usize,
    pub violations: usize,
    pub first_failure: Option<String>,
}

impl EquivarianceReport {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// `ξ(D_i) = D_{i+1}` for `i ≠ −1` and `ξ(D₋₁) = D₁`: the cells of `ξv`
/// are those of `v` shifted by one position. Uses raw distances.
pub fn check_equivariance(ctx: &OrbitContext, vertices: &[Word]) -> EquivarianceReport {
    vertices
        .par_iter()
        .map(|v| {
            let moved = ctx.cells_by_distance(&free_mul(ctx.xi(), v));
            let shifted: Vec<SignedIndex> = ctx
                .cells_by_distance(v)
                .iter()
                .map(|c| SignedIndex::from_position(c.position() + 1))
                .collect();
            let ok = moved == shifted;
            EquivarianceReport {
                checked: 1,
                violations: usize::from(!ok),
                first_failure: (!ok).then(|| format!("{v}: {moved:?} vs {shifted:?}")),
            }
        })
        .reduce(EquivarianceReport::default, |a, b| EquivarianceReport {
            checked: a.checked + b.checked,
            violations: a.violations + b.violations,
            first_failure: a.first_failure.or(b.first_failure),
        })
}

/// One vertex per pair (axis position, height) with norm at most
/// `max_norm`. Distances to every orbit point depend only on that pair, so
/// cell and equivariance checks over these cover the whole ball.
pub fn axis_class_representatives(ctx: &OrbitContext, max_norm: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let max = max_norm as i64;
    for t in -max..=max {
        let mut v = if t >= 0 {
            let mut p = ctx.xi().pow(t / ctx.displacement() as i64 + 1);
            p = Word::from_letters(p.letters()[..t as usize].to_vec());
            p
        } else {
            let n = (-t) as usize;
            let p = ctx.xi().pow(-(n as i64 / ctx.displacement() as i64 + 1));
            Word::from_letters(p.letters()[..n].to_vec())
        };
        out.push(v.clone());
        for h in 1..=(max_norm - t.unsigned_abs() as usize) {
            let next = Generator::alphabet(ctx.rank()).find(|&g| {
                v.last() != Some(g.inverse()) && {
                    let mut u = v.clone();
                    u.push(g);
                    let c = ctx.coordinates(&u);
                    c.position == t && c.height == h
                }
            });
            match next {
                Some(g) => {
                    v.push(g);
                    out.push(v.clone());
                }
                None => break,
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetricCheck {
    pub beta: Word,
    pub index: SignedIndex,
    pub symmetric: Word,
    /// `β₋(O) ∈ D_{−j−2}` (positive `β`) or `D_{−j+2}` (negative `β`).
    pub lands_in_mirror_cell: bool,
    pub sign_flipped: bool,
    /// `‖β₋‖ − ‖β‖`.
    pub defect: i64,
    pub within_bound: bool,
}

impl SymmetricCheck {
    pub fn holds(&self) -> bool {
        self.lands_in_mirror_cell && self.sign_flipped && self.within_bound
    }
}

pub fn check_symmetric(ctx: &OrbitContext, constants: &ConstantsBundle, beta: &Word) -> SymmetricCheck {
    let index = ctx.voronoi_index(beta);
    let j = index.get();
    let symmetric = ctx.symmetric_element(beta);
    let mirror = SignedIndex(if j > 0 { -j - 2 } else { -j + 2 });
    let defect = ctx.norm(&symmetric) as i64 - ctx.norm(beta) as i64;
    SymmetricCheck {
        beta: beta.clone(),
        index,
        lands_in_mirror_cell: ctx.cells(&symmetric).contains(&mirror),
        sign_flipped: ctx.sign(&symmetric) == index.sign().flip(),
        defect,
        within_bound: defect.abs() <= floor_i64(&constants.symmetric_defect),
        symmetric,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistedCheck {
    pub alpha: Word,
    pub beta: Word,
    pub product: TwistedProduct,
    /// `D_{±1}` or `D_{±2}` separates `α⁻¹(O)` and `β_ε(O)`.
    pub separated: bool,
    /// `‖α⋆β‖ − ‖α‖ − ‖β‖`.
    pub defect: i64,
    pub within_bound: bool,
}

impl TwistedCheck {
    pub fn holds(&self) -> bool {
        self.separated && self.within_bound
    }
}

pub fn check_twisted(ctx: &OrbitContext, constants: &ConstantsBundle, alpha: &Word, beta: &Word) -> TwistedCheck {
    let product = ctx.twisted_product_detailed(alpha, beta);
    let chosen = ctx.voronoi_index(&ctx.signed(beta, product.choice));
    let separated = [1, -1, 2, -2]
        .iter()
        .any(|&k| SignedIndex(k).separates(product.alpha_inverse_cell, chosen));
    let defect = ctx.norm(&product.word) as i64 - ctx.norm(alpha) as i64 - ctx.norm(beta) as i64;
    TwistedCheck {
        alpha: alpha.clone(),
        beta: beta.clone(),
        separated,
        within_bound: defect.abs() <= floor_i64(&constants.twisted_defect),
        defect,
        product,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SeparationReport {
    /// No cell `D_{±1}`, `D_{±2}` lies strictly between the two cells.
    HypothesesUnmet,
    /// `|xy| − (|Ox| + |Oy| − 4L − 294δ − 4ε)`.
    Checked { slack: i64 },
}

impl SeparationReport {
    pub fn holds(&self) -> bool {
        !matches!(self, SeparationReport::Checked { slack } if *slack < 0)
    }
}

pub fn check_separation_lemma(ctx: &OrbitContext, constants: &ConstantsBundle, x: &Word, y: &Word) -> SeparationReport {
    let (cx, cy) = (ctx.voronoi_index(x), ctx.voronoi_index(y));
    if ![1, -1, 2, -2].iter().any(|&k| SignedIndex(k).separates(cx, cy)) {
        return SeparationReport::HypothesesUnmet;
    }
    let loss = &constants.displacement * BigRational::from_integer(4.into())
        + &constants.delta * BigRational::from_integer(294.into())
        + &constants.epsilon * BigRational::from_integer(4.into());
    let lhs = BigRational::from_integer((ctx.distance(x, y) as i64).into());
    let rhs = BigRational::from_integer(((ctx.norm(x) + ctx.norm(y)) as i64).into()) - loss;
    SeparationReport::Checked {
        slack: floor_i64(&(lhs - rhs)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InsertionReport {
    pub alpha: Word,
    pub beta: Word,
    pub kappa: i64,
    /// `ξ^κ ⋆ β = ξ^κ β₊` (positive `β`) or `ξ^κ β₋` (negative `β`).
    pub plus_formula: bool,
    /// `(ξ^κ ⋆ β)₋ = ξ^{−κ} β₋` (positive `β`) or `ξ^{−κ−4} β₊` (negative).
    pub minus_formula: bool,
    pub plus_is_positive: bool,
    pub minus_is_negative: bool,
    /// `α ⋆ (ξ^κ ⋆ β) = α ξ^{κ*} β_ε` with the reported `κ*`, `ε`.
    pub decomposition: bool,
    pub kappa_star: i64,
}

impl InsertionReport {
    pub fn holds(&self) -> bool {
        self.plus_formula && self.minus_formula && self.plus_is_positive && self.minus_is_negative && self.decomposition
    }
}

pub fn check_kappa_insertion(
    ctx: &OrbitContext,
    alpha: &Word,
    beta: &Word,
    kappa: i64,
) -> Result<InsertionReport, OrbitError> {
    let inner = ctx.kappa_insert(beta, kappa)?;
    let sign = inner.beta_sign;
    let plus = free_mul(&ctx.xi_power(kappa), &ctx.signed(beta, sign));
    let minus_expected = match sign {
        Sign::Positive => free_mul(&ctx.xi_power(-kappa), &ctx.symmetric_element(beta)),
        Sign::Negative => free_mul(&ctx.xi_power(-kappa - 4), beta),
    };
    let minus = ctx.symmetric_element(&inner.word);
    let d = ctx.decompose(alpha, beta, kappa)?;
    let rebuilt = free_mul(
        alpha,
        &free_mul(&ctx.xi_power(d.kappa_star), &ctx.signed(beta, d.epsilon)),
    );
    Ok(InsertionReport {
        alpha: alpha.clone(),
        beta: beta.clone(),
        kappa,
        plus_formula: inner.word == plus,
        plus_is_positive: ctx.sign(&inner.word) == Sign::Positive,
        minus_is_negative: ctx.sign(&minus) == Sign::Negative,
        minus_formula: minus == minus_expected,
        decomposition: d.word == rebuilt,
        kappa_star: d.kappa_star,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollisionGuard {
    pub distance: usize,
    #[serde(serialize_with = "big_rational_str")]
    pub bound: BigRational,
    pub holds: bool,
}

/// `d(α₁, α₂) ≤ (κ+4)L + 4(Δ⋆ + ½Δ₋ + 8δ)` for the leading factors of a
/// collision `α₁⋆(ξ^κ⋆β₁) = α₂⋆(ξ^κ⋆β₂)`.
pub fn collision_guard(
    ctx: &OrbitContext,
    constants: &ConstantsBundle,
    alpha1: &Word,
    alpha2: &Word,
) -> CollisionGuard {
    let distance = ctx.distance(alpha1, alpha2);
    let bound = constants.collision_bound();
    CollisionGuard {
        distance,
        holds: BigRational::from_integer((distance as i64).into()) <= bound,
        bound,
    }
}

/// Outcome of a randomized or exhaustive sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub seed: Option<u64>,
    pub samples: usize,
    /// Samples meeting the hypotheses of the checked statement.
    pub checked: usize,
    /// Largest defect seen (or smallest slack, for the separation lemma).
    pub worst: i64,
    pub bound: i64,
    pub violations: usize,
    pub first_violation: Option<String>,
}

impl SweepReport {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

struct Outcome {
    checked: bool,
    value: i64,
    failure: Option<String>,
}

fn sweep(
    seed: Option<u64>,
    samples: usize,
    bound: i64,
    keep_max: bool,
    run: impl Fn(usize) -> Outcome + Sync + Send,
) -> SweepReport {
    let outcomes: Vec<Outcome> = (0..samples).into_par_iter().map(run).collect();
    let checked: Vec<&Outcome> = outcomes.iter().filter(|o| o.checked).collect();
    let values = checked.iter().map(|o| o.value);
    let worst = if keep_max { values.max() } else { values.min() };
    SweepReport {
        seed,
        samples,
        checked: checked.len(),
        worst: worst.unwrap_or(0),
        bound,
        violations: outcomes.iter().filter(|o| o.failure.is_some()).count(),
        first_violation: outcomes.iter().find_map(|o| o.failure.clone()),
    }
}

fn random_word(rng: &mut impl Rng, rank: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    random_reduced_word(rng, rank, len)
}

/// Symmetric-element checks on `samples` random reduced words of length at
/// most `max_len`; `worst` is the largest `|‖β₋‖ − ‖β‖|`.
pub fn symmetric_sweep(
    ctx: &OrbitContext,
    constants: &ConstantsBundle,
    samples: usize,
    max_len: usize,
    seed: u64,
) -> SweepReport {
    let bound = floor_i64(&constants.symmetric_defect);
    sweep(Some(seed), samples, bound, true, |i| {
        let beta = random_word(&mut sample_rng(seed, i as u64), ctx.rank(), max_len);
        let c = check_symmetric(ctx, constants, &beta);
        Outcome {
            checked: true,
            value: c.defect.abs(),
            failure: (!c.holds()).then(|| format!("{c:?}")),
        }
    })
}

/// Twisted-product checks on random pairs; `worst` is the largest
/// `|‖α⋆β‖ − ‖α‖ − ‖β‖|`.
pub fn twisted_sweep(
    ctx: &OrbitContext,
    constants: &ConstantsBundle,
    samples: usize,
    max_len: usize,
    seed: u64,
) -> SweepReport {
    let bound = floor_i64(&constants.twisted_defect);
    sweep(Some(seed), samples, bound, true, |i| {
        let mut rng = sample_rng(seed, i as u64);
        let alpha = random_word(&mut rng, ctx.rank(), max_len);
        let beta = random_word(&mut rng, ctx.rank(), max_len);
        let c = check_twisted(ctx, constants, &alpha, &beta);
        Outcome {
            checked: true,
            value: c.defect.abs(),
            failure: (!c.holds()).then(|| format!("{c:?}")),
        }
    })
}

/// Separation-lemma checks on random pairs of vertices; pairs whose cells
/// are not separated are skipped. `worst` is the smallest slack.
pub fn separation_sweep(
    ctx: &OrbitContext,
    constants: &ConstantsBundle,
    samples: usize,
    max_len: usize,
    seed: u64,
) -> SweepReport {
    sweep(Some(seed), samples, 0, false, |i| {
        let mut rng = sample_rng(seed, i as u64);
        let x = random_word(&mut rng, ctx.rank(), max_len);
        let y = random_word(&mut rng, ctx.rank(), max_len);
        match check_separation_lemma(ctx, constants, &x, &y) {
            SeparationReport::HypothesesUnmet => Outcome {
                checked: false,
                value: 0,
                failure: None,
            },
            SeparationReport::Checked { slack } => Outcome {
                checked: true,
                value: slack,
                failure: (slack < 0).then(|| format!("x={x} y={y} slack={slack}")),
            },
        }
    })
}

/// Insertion checks for every reduced `β` of length at most `max_beta`,
/// every `κ` in `kappas` and every reduced `α` of length at most
/// `max_alpha`.
pub fn kappa_insertion_sweep(
    ctx: &OrbitContext,
    max_beta: usize,
    max_alpha: usize,
    kappas: std::ops::RangeInclusive<i64>,
) -> Result<SweepReport, OrbitError> {
    if *kappas.start() < 4 {
        return Err(OrbitError::KappaTooSmall { kappa: *kappas.start() });
    }
    let betas = reduced_words_up_to(ctx.rank(), max_beta);
    let alphas = reduced_words_up_to(ctx.rank(), max_alpha);
    let cases: Vec<(usize, i64)> = (0..betas.len())
        .flat_map(|b| kappas.clone().map(move |k| (b, k)))
        .collect();
    let report = sweep(None, cases.len(), 0, true, |i| {
        let (b, kappa) = cases[i];
        let failure = alphas.iter().find_map(|alpha| {
            let r = check_kappa_insertion(ctx, alpha, &betas[b], kappa).expect("κ ≥ 4");
            (!r.holds()).then(|| format!("{r:?}"))
        });
        Outcome {
            checked: true,
            value: 0,
            failure,
        }
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CyclicFreeProduct;
    use crate::orbit::ConstantOverrides;
    use crate::word::w;

    fn setup(xi: &str) -> (OrbitContext, ConstantsBundle) {
        let ctx = OrbitContext::new(2, &w(xi)).unwrap();
        let z = CyclicFreeProduct::new(vec![0, 1]);
        let c = ConstantsBundle::for_tree(ctx.displacement(), &ConstantOverrides::default(), &z, 2);
        (ctx, c)
    }

    #[test]
    fn cells_and_equivariance_on_small_balls() {
        for xi in ["b", "ab", "aab"] {
            let (ctx, _) = setup(xi);
            let ball = reduced_words_up_to(2, 7);
            assert!(check_cells(&ctx, &ball).holds());
            assert!(check_equivariance(&ctx, &ball).holds());
        }
    }

    #[test]
    fn class_representatives_cover_every_coordinate_pair() {
        let (ctx, _) = setup("b");
        let reps = axis_class_representatives(&ctx, 6);
        // (t, h) with |t| + h ≤ 6.
        assert_eq!(reps.len(), 49);
        let (ctx, _) = setup("ab");
        let mut seen: Vec<(i64, usize)> = axis_class_representatives(&ctx, 5)
            .iter()
            .map(|v| {
                let c = ctx.coordinates(v);
                (c.position, c.height)
            })
            .collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 36);
    }

    #[test]
    fn symmetric_spot_values() {
        let (ctx, c) = setup("b");
        let r = check_symmetric(&ctx, &c, &w("a"));
        assert_eq!((r.defect, r.holds()), (3, true));
        assert!(check_symmetric(&ctx, &c, &w("aba")).holds());
    }

    #[test]
    fn twisted_spot_values() {
        let (ctx, c) = setup("b");
        let r = check_twisted(&ctx, &c, &w("A"), &w("a"));
        assert!(r.holds());
        assert!(r.defect.abs() <= 12);
        let r = check_twisted(&ctx, &c, &w("aBBBBB"), &w("BBBBa"));
        assert_eq!(r.product.choice, Sign::Positive);
        assert!(r.holds());
    }

    #[test]
    fn separation_lemma_examples() {
        let (ctx, c) = setup("b");
        assert_eq!(
            check_separation_lemma(&ctx, &c, &w("bbbbba"), &w("BBBBBa")),
            SeparationReport::Checked { slack: 4 }
        );
        assert_eq!(
            check_separation_lemma(&ctx, &c, &w("ab"), &w("ab")),
            SeparationReport::HypothesesUnmet
        );
    }

    #[test]
    fn sweeps_are_clean_and_reproducible() {
        let (ctx, c) = setup("b");
        let s = symmetric_sweep(&ctx, &c, 300, 40, 11);
        assert!(s.holds() && s.worst <= 8, "{s:?}");
        assert_eq!(s, symmetric_sweep(&ctx, &c, 300, 40, 11));
        let t = twisted_sweep(&ctx, &c, 300, 60, 11);
        assert!(t.holds() && t.worst <= 12, "{t:?}");
        let p = separation_sweep(&ctx, &c, 300, 40, 11);
        assert!(p.holds() && p.checked > 0, "{p:?}");
    }

    #[test]
    fn insertion_small_exhaustive() {
        for xi in ["b", "ab"] {
            let (ctx, _) = setup(xi);
            let r = kappa_insertion_sweep(&ctx, 3, 2, 4..=6).unwrap();
            assert!(r.holds(), "{r:?}");
        }
        let (ctx, _) = setup("b");
        assert!(kappa_insertion_sweep(&ctx, 1, 1, 3..=4).is_err());
    }

    #[test]
    fn collision_guard_bound() {
        let (ctx, c) = setup("b");
        let g = collision_guard(&ctx, &c, &w("a"), &w("A"));
        assert_eq!(g.distance, 2);
        assert!(g.holds);
        assert_eq!(g.bound, BigRational::from_integer(228.into()));
    }
}
