//! The free product `Ḡ ∗ ℤ₂` with the norm `Σ ‖γᵢ‖ + mλ`.
//!
//! Elements are alternating words `γ₁ ∗ 1 ∗ γ₂ ∗ ⋯ ∗ 1 ∗ γ_{m+1}` where
//! `1` is the generator of `ℤ₂`. In reduced form the interior blocks are
//! nontrivial; the two end blocks may be trivial.
//!
//! With `S(x)` the sphere series of `Ḡ` and `N = S − 1`, the reduced words
//! have generating function `T = S + x^λ S² / (1 − x^λ N)`.

use num_bigint::BigUint;
use num_rational::Rational64;
use num_traits::Zero;
use serde::Serialize;

use super::rate::{big_ln, default_window, growth_rate, EstimateMethod, GrowthEstimate};
use super::{BallTable, GrowthError};
use crate::model::GroupModel;
use crate::word::Word;

/// A reduced element of `Ḡ ∗ ℤ₂` given by its blocks in normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeProductWord {
    blocks: Vec<Word>,
}

impl FreeProductWord {
    /// Normalises the blocks and fuses around trivial interior blocks
    /// (`γ ∗ 1 ∗ e ∗ 1 ∗ γ′ = γγ′`). Panics on an empty block list.
    pub fn new(model: &dyn GroupModel, blocks: Vec<Word>) -> Self {
        assert!(!blocks.is_empty(), "a free-product word has at least one block");
        let mut blocks: Vec<Word> = blocks.iter().map(|b| model.normal_form(b)).collect();
        while let Some(i) = (1..blocks.len().saturating_sub(1)).find(|&i| blocks[i].is_empty()) {
            let fused = model.mul(&blocks[i - 1], &blocks[i + 1]);
            blocks.splice(i - 1..=i + 1, [fused]);
        }
        FreeProductWord { blocks }
    }

    pub fn single(block: Word) -> Self {
        FreeProductWord { blocks: vec![block] }
    }

    /// Wraps blocks already in reduced form (normal forms, nontrivial
    /// interior).
    pub fn from_reduced(blocks: Vec<Word>) -> Self {
        assert!(!blocks.is_empty());
        debug_assert!(blocks.len() < 3 || blocks[1..blocks.len() - 1].iter().all(|b| !b.is_empty()));
        FreeProductWord { blocks }
    }

    pub fn blocks(&self) -> &[Word] {
        &self.blocks
    }

    pub fn separators(&self) -> usize {
        self.blocks.len() - 1
    }

    /// The element after the first separator, `γ₂ ∗ ⋯ ∗ γ_{m+1}`.
    pub fn tail(&self) -> Option<FreeProductWord> {
        (self.blocks.len() > 1).then(|| FreeProductWord {
            blocks: self.blocks[1..].to_vec(),
        })
    }
}

impl std::fmt::Display for FreeProductWord {
    /// Blocks joined by ` * 1 * `, the identity written `e`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(" * 1 * ")?;
            }
            if b.is_empty() {
                f.write_str("e")?;
            } else {
                write!(f, "{b}")?;
            }
        }
        Ok(())
    }
}

/// `Σ ‖γᵢ‖ + mλ`.
pub fn lambda_norm(word: &FreeProductWord, lambda: Rational64, model: &dyn GroupModel) -> Rational64 {
    let blocks: usize = word.blocks.iter().map(|b| model.geodesic_length(b)).sum();
    Rational64::from_integer(blocks as i64) + lambda * Rational64::from_integer(word.separators() as i64)
}

/// λ as `num/den` with positive integers.
fn lambda_units(lambda: Rational64) -> Result<(usize, usize), GrowthError> {
    if lambda <= Rational64::zero() {
        return Err(GrowthError::NonPositiveLambda);
    }
    Ok((*lambda.numer() as usize, *lambda.denom() as usize))
}

/// Sphere counts of `Ḡ ∗ ℤ₂` in units of `1/den` for norms `0..=top`.
fn free_product_spheres(spheres: &[BigUint], lambda: Rational64, top: usize) -> Result<Vec<BigUint>, GrowthError> {
    let (p, q) = lambda_units(lambda)?;
    let radius = top / q;
    if spheres.len() <= radius {
        return Err(GrowthError::TableTooShort {
            have: spheres.len().saturating_sub(1),
            need: radius,
        });
    }
    // Block series S in scaled units: nonzero only at multiples of q.
    let s_at = |u: usize| -> Option<&BigUint> { u.is_multiple_of(q).then(|| &spheres[u / q]) };
    // A = S², indexed by scaled units.
    let mut square = vec![BigUint::zero(); top + 1];
    for i in 0..=radius {
        for j in 0..=radius - i {
            square[(i + j) * q] += &spheres[i] * &spheres[j];
        }
    }
    // C = x^p A + x^p N C.
    let mut tail = vec![BigUint::zero(); top + 1];
    for u in p..=top {
        let mut c = square[u - p].clone();
        let budget = u - p;
        for v in (q..=budget).step_by(q) {
            if let Some(n) = s_at(v) {
                if !n.is_zero() && !tail[budget - v].is_zero() {
                    c += n * &tail[budget - v];
                }
            }
        }
        tail[u] = c;
    }
    Ok((0..=top)
        .map(|u| match s_at(u) {
            Some(s) => s + &tail[u],
            None => tail[u].clone(),
        })
        .collect())
}

/// `card B_{Ḡ∗ℤ₂,λ}(R)` for `R = 0..=radius`, given the sphere counts of
/// `Ḡ` up to `radius`.
pub fn free_product_ball_counts(
    spheres: &[BigUint],
    lambda: Rational64,
    radius: usize,
) -> Result<Vec<BigUint>, GrowthError> {
    let (_, q) = lambda_units(lambda)?;
    let scaled = free_product_spheres(spheres, lambda, radius * q)?;
    let mut total = BigUint::zero();
    let mut out = Vec::with_capacity(radius + 1);
    for (u, s) in scaled.iter().enumerate() {
        total += s;
        if u % q == 0 {
            out.push(total.clone());
        }
    }
    Ok(out)
}

/// `card B_{Ḡ∗ℤ₂,λ}(r)` for a rational radius, given sphere counts of `Ḡ`
/// up to `⌊r⌋`.
pub fn free_product_ball_count_upto(
    spheres: &[BigUint],
    lambda: Rational64,
    radius: Rational64,
) -> Result<BigUint, GrowthError> {
    let (_, q) = lambda_units(lambda)?;
    if radius < Rational64::zero() {
        return Ok(BigUint::zero());
    }
    let top = (radius * Rational64::from_integer(q as i64)).floor().to_integer() as usize;
    Ok(free_product_spheres(spheres, lambda, top)?.iter().sum())
}

/// `card B_{Ḡ∗ℤ₂,λ}(R)` from a ball table of `Ḡ` reaching radius `R`.
pub fn free_product_ball_count(table: &BallTable, lambda: Rational64, radius: usize) -> Result<BigUint, GrowthError> {
    let spheres = table.spheres();
    Ok(free_product_ball_counts(&spheres, lambda, radius)?
        .pop()
        .expect("radius + 1 entries"))
}

/// Tail-slope growth rate of `(Ḡ ∗ ℤ₂, λ)` from ball counts up to `radius`.
pub fn free_product_tail_slope(
    spheres: &[BigUint],
    lambda: Rational64,
    radius: usize,
) -> Result<GrowthEstimate, GrowthError> {
    let counts = free_product_ball_counts(spheres, lambda, radius)?;
    let table = BallTable::from_counts("free-product", counts);
    growth_rate(&table, Some(default_window(radius)))
}

/// Growth rate of `(Ḡ ∗ ℤ₂, λ)` from the smallest positive root `z*` of
/// `z^λ N_K(z) = 1`, where `N_K` is the non-identity part of the block
/// sphere series truncated at `K = spheres.len() − 1`; `ω = −log z*`.
///
/// Adding terms can only move the root down, so the estimate never
/// decreases as `K` grows. Without a root in `(0, 1]` (trivial `Ḡ`) the
/// estimate is 0.
pub fn free_product_growth_rate(spheres: &[BigUint], lambda: Rational64) -> Result<GrowthEstimate, GrowthError> {
    let k = spheres.len().saturating_sub(1);
    let omega = series_root_rate(spheres, lambda)?;
    let half = series_root_rate(&spheres[..=k / 2], lambda)?;
    Ok(GrowthEstimate {
        omega,
        window: (0, k),
        method: EstimateMethod::SeriesRoot,
        residual: omega - half,
    })
}

fn series_root_rate(spheres: &[BigUint], lambda: Rational64) -> Result<f64, GrowthError> {
    let (p, q) = lambda_units(lambda)?;
    let logs: Vec<Option<f64>> = spheres.iter().map(|s| (!s.is_zero()).then(|| big_ln(s))).collect();
    // With y = z^{1/q}: f(y) = Σ_{n≥1} s_n y^{p + nq} − 1, increasing in y.
    let f = |y: f64| -> f64 {
        let ly = y.ln();
        let mut sum = 0.0;
        for (n, l) in logs.iter().enumerate().skip(1) {
            if let Some(l) = l {
                sum += (l + (p + n * q) as f64 * ly).exp();
            }
        }
        sum - 1.0
    };
    if f(1.0) <= 0.0 {
        return Ok(0.0);
    }
    if f(f64::MIN_POSITIVE) > 0.0 {
        return Err(GrowthError::SeriesDiverged);
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(-(q as f64) * hi.ln())
}

/// `ω̄ + (1/4λ)·log(1 + e^{−λω̄})`, the lower bound for the growth rate of
/// `(Ḡ ∗ ℤ₂, λ)` in terms of the growth rate `ω̄` of `Ḡ`.
pub fn gap_lower_bound(omega_bar: f64, lambda: f64) -> f64 {
    omega_bar + (-lambda * omega_bar).exp().ln_1p() / (4.0 * lambda)
}

/// Natural log of the excess `(1/4λ)·log(1 + e^{−λω̄})` over `ω̄`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "form", content = "value", rename_all = "kebab-case")]
pub enum LogExcess {
    /// The log of the excess itself.
    Finite(f64),
    /// The log of the excess is `−e^v`, too negative for an f64.
    DoublyExponential(f64),
}

impl LogExcess {
    /// The excess as an f64, 0 when it underflows.
    pub fn value(self) -> f64 {
        match self {
            LogExcess::Finite(l) => l.exp(),
            LogExcess::DoublyExponential(_) => 0.0,
        }
    }
}

/// The gap lower bound in log-space, for λ given by its natural logarithm
/// so that astronomically large λ stay representable.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GapBound {
    pub omega_bar: f64,
    pub ln_lambda: f64,
    pub excess: LogExcess,
    /// `ω̄ + excess`; equal to `ω̄` in floating point once the excess
    /// underflows.
    pub value: f64,
}

pub fn gap_bound_log(omega_bar: f64, ln_lambda: f64) -> GapBound {
    let ln4 = 4f64.ln();
    // t = λω̄ in log form.
    let excess = if omega_bar <= 0.0 {
        LogExcess::Finite(std::f64::consts::LN_2.ln() - ln4 - ln_lambda)
    } else {
        let ln_t = ln_lambda + omega_bar.ln();
        if ln_t < 30f64.ln() {
            let t = ln_t.exp();
            LogExcess::Finite((-t).exp().ln_1p().ln() - ln4 - ln_lambda)
        } else if ln_t < 700.0 {
            // log(1 + e^{−t}) = e^{−t} to f64 precision.
            LogExcess::Finite(-ln_t.exp() - ln4 - ln_lambda)
        } else {
            LogExcess::DoublyExponential(ln_t)
        }
    };
    GapBound {
        omega_bar,
        ln_lambda,
        excess,
        value: omega_bar + excess.value(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CyclicFreeProduct, FreeAbelian};
    use crate::word::w;
    use num_traits::ToPrimitive;
    use std::collections::HashSet;

    fn big(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    fn z() -> CyclicFreeProduct {
        // ℤ as F₂/⟨⟨b⟩⟩.
        CyclicFreeProduct::new(vec![0, 1])
    }

    fn z_spheres(radius: usize) -> Vec<BigUint> {
        z().sphere_counts(radius).unwrap()
    }

    fn q(n: i64) -> Rational64 {
        Rational64::from_integer(n)
    }

    #[test]
    fn reduction_and_norms() {
        let m = z();
        let word = FreeProductWord::new(&m, vec![w("aa"), w("AAA")]);
        assert_eq!(lambda_norm(&word, q(4), &m), q(9));
        let lone = FreeProductWord::new(&m, vec![w(""), w("")]);
        assert_eq!(lambda_norm(&lone, q(5), &m), q(5));
        assert_eq!(lambda_norm(&FreeProductWord::single(w("aaa")), q(5), &m), q(3));
        // a ∗ 1 ∗ e ∗ 1 ∗ A collapses to the identity block.
        let fused = FreeProductWord::new(&m, vec![w("a"), w("b"), w("A")]);
        assert_eq!(fused.blocks(), &[w("")]);
        let fused = FreeProductWord::new(&m, vec![w("a"), w(""), w("A"), w(""), w("aa")]);
        assert_eq!(fused.blocks(), &[w("aa")]);
        let keep = FreeProductWord::new(&m, vec![w(""), w("a"), w("")]);
        assert_eq!(keep.separators(), 2);
    }

    /// Oracle: reduced words generated block by block, counted by norm.
    fn brute_force(model: &dyn GroupModel, ball: &[Word], lambda: Rational64, radius: i64) -> Vec<u64> {
        let r = Rational64::from_integer(radius);
        let mut seen: HashSet<Vec<Word>> = HashSet::new();
        let mut frontier: Vec<Vec<Word>> = ball.iter().map(|b| vec![b.clone()]).collect();
        while let Some(blocks) = frontier.pop() {
            let fw = FreeProductWord::from_reduced(blocks.clone());
            if lambda_norm(&fw, lambda, model) > r || !seen.insert(blocks.clone()) {
                continue;
            }
            if blocks.last().is_some_and(|b| !b.is_empty()) || blocks.len() == 1 {
                for b in ball {
                    let mut next = blocks.clone();
                    next.push(b.clone());
                    frontier.push(next);
                }
            }
        }
        (0..=radius)
            .map(|rr| {
                seen.iter()
                    .filter(|bl| lambda_norm(&FreeProductWord::from_reduced((*bl).clone()), lambda, model) <= q(rr))
                    .count() as u64
            })
            .collect()
    }

    #[test]
    fn counts_match_brute_force() {
        let cases: Vec<(Box<dyn GroupModel>, Rational64)> = vec![
            (Box::new(z()), q(2)),
            (Box::new(z()), Rational64::new(3, 2)),
            (Box::new(FreeAbelian::new(2)), q(1)),
            (Box::new(CyclicFreeProduct::new(vec![2, 0])), q(3)),
        ];
        for (m, lambda) in cases {
            let radius = 6;
            let ball = crate::growth::enumerate_ball(m.as_ref(), radius, 100_000).unwrap();
            let spheres = m.sphere_counts(radius).unwrap();
            let dp: Vec<u64> = free_product_ball_counts(&spheres, lambda, radius)
                .unwrap()
                .iter()
                .map(|c| c.to_u64().unwrap())
                .collect();
            assert_eq!(
                dp,
                brute_force(m.as_ref(), &ball, lambda, radius as i64),
                "{} λ={lambda}",
                m.name()
            );
        }
    }

    #[test]
    fn spec_counts() {
        let table = BallTable::from_spheres("z", &z_spheres(2));
        assert_eq!(free_product_ball_count(&table, q(2), 2).unwrap(), BigUint::from(6u8));
        // λ > R: separators unaffordable.
        let s = z_spheres(10);
        let counts = free_product_ball_counts(&s, q(11), 10).unwrap();
        assert_eq!(counts, BallTable::from_spheres("z", &s).counts());
        // Trivial Ḡ: only e and the lone separator.
        let trivial = big(&[1, 0, 0, 0, 0, 0, 0]);
        let counts = free_product_ball_counts(&trivial, q(2), 6).unwrap();
        assert_eq!(counts, big(&[1, 1, 2, 2, 2, 2, 2]));
        assert!(free_product_ball_counts(&trivial, q(2), 9).is_err());
    }

    #[test]
    fn series_root_examples() {
        let trivial = big(&[1, 0, 0, 0]);
        assert_eq!(free_product_growth_rate(&trivial, q(1)).unwrap().omega, 0.0);
        // ℤ, λ = 1: z · 2z/(1−z) = 1 gives z = 1/2.
        let est = free_product_growth_rate(&z_spheres(400), q(1)).unwrap();
        assert!((est.omega - 2f64.ln()).abs() < 1e-9, "{est:?}");
        let slow = free_product_growth_rate(&z_spheres(400), q(3)).unwrap();
        assert!(slow.omega <= est.omega && slow.omega > 0.0);
    }

    #[test]
    fn series_root_is_monotone_in_truncation() {
        let s = z_spheres(200);
        let mut prev = 0.0;
        for k in [5, 10, 20, 40, 80, 200] {
            let est = free_product_growth_rate(&s[..=k], Rational64::new(5, 2)).unwrap().omega;
            assert!(est >= prev);
            prev = est;
        }
    }

    #[test]
    fn series_root_and_tail_slope_agree() {
        for lambda in [1, 2, 5] {
            let k = 40 * lambda as usize;
            let s = z_spheres(k);
            let root = free_product_growth_rate(&s, q(lambda)).unwrap().omega;
            let slope = free_product_tail_slope(&s, q(lambda), k).unwrap().omega;
            assert!((root - slope).abs() < 0.05, "λ={lambda}: {root} vs {slope}");
        }
    }

    #[test]
    fn gap_bound_values() {
        assert!((gap_lower_bound(0.0, 1.0) - 0.25 * 2f64.ln()).abs() < 1e-12);
        assert!((gap_lower_bound(2f64.ln(), 2.0) - 0.72104).abs() < 1e-5);
        let mut prev = f64::INFINITY;
        for lambda in [1.0, 2.0, 5.0, 10.0, 20.0] {
            let b = gap_lower_bound(0.5, lambda);
            assert!(b > 0.5 && b < prev);
            prev = b;
        }
        // The excess e^{-50}/400 is below f64 resolution at 0.5.
        assert_eq!(gap_lower_bound(0.5, 100.0), 0.5);
    }

    #[test]
    fn log_space_gap_bound() {
        let direct = gap_lower_bound(0.3, 7.0);
        let logged = gap_bound_log(0.3, 7f64.ln());
        assert!((logged.value - direct).abs() < 1e-12);
        match gap_bound_log(0.7, 1e6f64.ln()).excess {
            LogExcess::Finite(l) => assert!((l - (-0.7e6 - 4f64.ln() - 1e6f64.ln())).abs() < 1e-6),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            gap_bound_log(0.7, 1200.0).excess,
            LogExcess::DoublyExponential(_)
        ));
        assert!(matches!(gap_bound_log(0.0, 1200.0).excess, LogExcess::Finite(_)));
    }
}
