//! The map Φ from `Ḡ_ρ ∗ ℤ₂` into the ambient free group, its validators,
//! and the end-to-end growth-tightness report.
//!
//! A single block maps to its 0-minimal representative. Longer words map by
//! `Φ(γ₁ ∗ 1 ∗ rest) = Φ(γ₁)_ε ⋆ (ξ^κ ⋆ Φ(rest))`, where `ε` is the sign of
//! `Φ(rest)`, or `+` when `γ₁` is the identity.

mod report;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::growth::{FreeProductWord, GrowthError, RhoNet};
use crate::model::{GroupModel, SharedModel};
use crate::orbit::{
    collision_guard, eta_minimal_representative, CollisionGuard, ConstantsBundle, OrbitContext, OrbitError, Sign,
};
use crate::word::{reduced_words_of_length, Word};

pub use report::{find_kernel_element, tightness_report, TightnessOptions, TightnessReport};

#[derive(Debug, Error)]
pub enum EmbeddingError {
    #[error("ξ = {0} is not in the kernel of the quotient")]
    XiNotInKernel(Word),
    #[error("block {0} is not a member of the net")]
    BlockNotInNet(Word),
    #[error("no nontrivial kernel element of length at most {0}")]
    NoKernelElement(usize),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error(transparent)]
    Growth(#[from] GrowthError),
}

/// Everything Φ depends on.
#[derive(Clone, Debug)]
pub struct EmbeddingConfig {
    pub quotient: SharedModel,
    pub orbit: OrbitContext,
    pub constants: ConstantsBundle,
    pub net: RhoNet,
    representatives: HashMap<Word, Word>,
}

impl EmbeddingConfig {
    pub fn new(
        quotient: SharedModel,
        orbit: OrbitContext,
        constants: ConstantsBundle,
        net: RhoNet,
    ) -> Result<Self, EmbeddingError> {
        if !quotient.is_identity(orbit.supplied()) {
            return Err(EmbeddingError::XiNotInKernel(orbit.supplied().clone()));
        }
        let representatives = net
            .members()
            .iter()
            .map(|m| Ok((m.clone(), eta_minimal_representative(quotient.as_ref(), m, m.len())?)))
            .collect::<Result<HashMap<_, _>, OrbitError>>()?;
        Ok(EmbeddingConfig {
            quotient,
            orbit,
            constants,
            net,
            representatives,
        })
    }

    pub fn representative(&self, block: &Word) -> Result<&Word, EmbeddingError> {
        self.representatives
            .get(block)
            .ok_or_else(|| EmbeddingError::BlockNotInNet(block.clone()))
    }

    /// `Σ ‖γᵢ‖ + mλ` with the configured λ.
    pub fn lambda_norm(&self, word: &FreeProductWord) -> BigRational {
        let blocks: usize = word.blocks().iter().map(|b| self.quotient.geodesic_length(b)).sum();
        BigRational::from_integer(BigInt::from(blocks)) + &self.constants.lambda * BigInt::from(word.separators())
    }
}

/// Φ(w) together with the leading factor and tail of the last step, so
/// that collisions can be traced to `α₁⋆(ξ^κ⋆β₁) = α₂⋆(ξ^κ⋆β₂)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiImage {
    pub word: Word,
    /// `(Φ(γ₁)_ε, Φ(rest))` when there is at least one separator.
    pub split: Option<(Word, Word)>,
}

pub fn build_phi_detailed(cfg: &EmbeddingConfig, w: &FreeProductWord) -> Result<PhiImage, EmbeddingError> {
    let blocks = w.blocks();
    let last = blocks.last().expect("at least one block");
    let mut acc = cfg.representative(last)?.clone();
    let mut split = None;
    for block in blocks[..blocks.len() - 1].iter().rev() {
        let alpha = cfg.representative(block)?;
        let epsilon = if block.is_empty() {
            Sign::Positive
        } else {
            cfg.orbit.sign(&acc)
        };
        let lead = cfg.orbit.signed(alpha, epsilon);
        let inserted = cfg.orbit.kappa_insert(&acc, cfg.constants.kappa)?.word;
        let next = cfg.orbit.twisted_product(&lead, &inserted);
        split = Some((lead, acc));
        acc = next;
    }
    Ok(PhiImage { word: acc, split })
}

pub fn build_phi(cfg: &EmbeddingConfig, w: &FreeProductWord) -> Result<Word, EmbeddingError> {
    Ok(build_phi_detailed(cfg, w)?.word)
}

/// Reduced words over the net with at most `max_blocks` blocks and λ-norm
/// at most `max_norm`, by block count and then lexicographically by
/// blocks. Enumeration stops once `limit` words have been produced.
pub fn net_words(
    cfg: &EmbeddingConfig,
    max_blocks: usize,
    max_norm: &BigRational,
    limit: usize,
) -> Vec<FreeProductWord> {
    // Exact integer arithmetic in units of 1/den.
    let den = num_integer::Integer::lcm(cfg.constants.lambda.denom(), max_norm.denom());
    let units = |q: &BigRational| (q * &den).floor().to_integer().to_i128().unwrap_or(i128::MAX);
    let (lambda, cap) = (units(&cfg.constants.lambda), units(max_norm));
    let den = den.to_i128().unwrap_or(i128::MAX);
    let members: Vec<(&Word, i128)> = cfg
        .net
        .members()
        .iter()
        .map(|m| (m, (m.len() as i128).saturating_mul(den)))
        .filter(|&(_, n)| n <= cap)
        .collect();
    let mut out = Vec::new();
    let mut layer: Vec<(Vec<&Word>, i128)> = members.iter().map(|&(m, n)| (vec![m], n)).collect();
    for blocks in 1..=max_blocks {
        layer.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        for (word, _) in &layer {
            if out.len() == limit {
                return out;
            }
            out.push(FreeProductWord::from_reduced(word.iter().map(|&b| b.clone()).collect()));
        }
        if blocks == max_blocks {
            break;
        }
        let mut next = Vec::new();
        for (word, norm) in &layer {
            // A trivial block may open or close a word but not sit inside it.
            if word.len() > 1 && word.last().is_some_and(|b| b.is_empty()) {
                continue;
            }
            let with_sep = norm.saturating_add(lambda);
            for &(m, n) in &members {
                let total = with_sep.saturating_add(n);
                if total <= cap {
                    let mut extended = word.clone();
                    extended.push(m);
                    next.push((extended, total));
                }
            }
            if next.len() > limit.saturating_sub(out.len()) {
                break;
            }
        }
        layer = next;
    }
    out
}

/// `count` seeded random net words with between 1 and `max_blocks`
/// blocks; interior blocks are drawn from the nontrivial members.
pub fn random_net_words(cfg: &EmbeddingConfig, seed: u64, count: usize, max_blocks: usize) -> Vec<FreeProductWord> {
    use rand::Rng;
    let members = cfg.net.members();
    let nontrivial: Vec<&Word> = members.iter().filter(|m| !m.is_empty()).collect();
    (0..count)
        .map(|i| {
            let mut rng = crate::rng::sample_rng(seed, i as u64);
            let len = if nontrivial.is_empty() {
                rng.gen_range(1..=max_blocks.min(2))
            } else {
                rng.gen_range(1..=max_blocks)
            };
            let blocks = (0..len)
                .map(|k| {
                    if k == 0 || k + 1 == len || nontrivial.is_empty() {
                        members[rng.gen_range(0..members.len())].clone()
                    } else {
                        nontrivial[rng.gen_range(0..nontrivial.len())].clone()
                    }
                })
                .collect();
            FreeProductWord::from_reduced(blocks)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonexpansionReport {
    pub checked: usize,
    pub violations: usize,
    /// Smallest `‖w‖_λ − ‖Φ(w)‖` over the sample.
    #[serde(serialize_with = "crate::report::big_rational_opt_str")]
    pub min_slack: Option<BigRational>,
    pub first_violation: Option<String>,
    pub guaranteed: bool,
}

impl NonexpansionReport {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// `‖Φ(w)‖ ≤ ‖w‖_λ` over `words`.
pub fn check_phi_nonexpanding(
    cfg: &EmbeddingConfig,
    words: &[FreeProductWord],
) -> Result<NonexpansionReport, EmbeddingError> {
    let slacks: Vec<(BigRational, &FreeProductWord)> = words
        .par_iter()
        .map(|w| {
            let image = build_phi(cfg, w)?;
            let slack = cfg.lambda_norm(w) - BigRational::from_integer(BigInt::from(image.len()));
            Ok((slack, w))
        })
        .collect::<Result<_, EmbeddingError>>()?;
    let negative = |s: &BigRational| *s < BigRational::from_integer(BigInt::from(0));
    Ok(NonexpansionReport {
        checked: words.len(),
        violations: slacks.iter().filter(|(s, _)| negative(s)).count(),
        min_slack: slacks.iter().map(|(s, _)| s.clone()).min(),
        first_violation: slacks
            .iter()
            .find(|(s, _)| negative(s))
            .map(|(s, w)| format!("{w}: slack {s}")),
        guaranteed: cfg.constants.lambda >= cfg.constants.nonexpansion_threshold(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollisionRecord {
    pub first: String,
    pub second: String,
    pub image: Word,
    /// Distance bound on the leading factors, when both words have a
    /// separator.
    pub guard: Option<CollisionGuard>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InjectivityStatus {
    Injective,
    /// Collisions occurred but the constants do not meet the hypotheses.
    CollisionsNotGuaranteed,
    /// Collisions occurred although the hypotheses hold.
    Violated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InjectivityReport {
    pub checked: usize,
    pub duplicate_inputs: usize,
    pub distinct_images: usize,
    pub collisions: Vec<CollisionRecord>,
    pub guard_failures: usize,
    pub guaranteed: bool,
    pub status: InjectivityStatus,
}

impl InjectivityReport {
    pub fn holds(&self) -> bool {
        self.status == InjectivityStatus::Injective
    }
}

/// Maps every word through Φ and joins on the image. Collisions are kept
/// (up to `max_records`) with the distance guard on their leading factors.
pub fn check_phi_injective(
    cfg: &EmbeddingConfig,
    words: &[FreeProductWord],
    max_records: usize,
) -> Result<InjectivityReport, EmbeddingError> {
    let images: Vec<PhiImage> = words
        .par_iter()
        .map(|w| build_phi_detailed(cfg, w))
        .collect::<Result<_, _>>()?;
    let mut seen: HashMap<&Word, usize> = HashMap::with_capacity(images.len());
    let mut collisions = Vec::new();
    let mut collision_count = 0usize;
    let mut guard_failures = 0usize;
    // Random samples may repeat a word; only distinct inputs can collide.
    let mut duplicate_inputs = 0usize;
    for (i, image) in images.iter().enumerate() {
        match seen.get(&image.word) {
            None => {
                seen.insert(&image.word, i);
            }
            Some(&j) if words[j] == words[i] => duplicate_inputs += 1,
            Some(&j) => {
                collision_count += 1;
                let guard = match (&images[j].split, &image.split) {
                    (Some((a1, _)), Some((a2, _))) => Some(collision_guard(&cfg.orbit, &cfg.constants, a1, a2)),
                    _ => None,
                };
                if guard.as_ref().is_some_and(|g| !g.holds) {
                    guard_failures += 1;
                }
                if collisions.len() < max_records {
                    collisions.push(CollisionRecord {
                        first: words[j].to_string(),
                        second: words[i].to_string(),
                        image: image.word.clone(),
                        guard,
                    });
                }
            }
        }
    }
    let guaranteed = cfg.constants.guaranteed();
    let status = match (collision_count, guaranteed) {
        (0, _) => InjectivityStatus::Injective,
        (_, true) => InjectivityStatus::Violated,
        (_, false) => InjectivityStatus::CollisionsNotGuaranteed,
    };
    Ok(InjectivityReport {
        checked: words.len(),
        duplicate_inputs,
        distinct_images: seen.len(),
        collisions,
        guard_failures,
        guaranteed,
        status,
    })
}

/// Shortlex-least nontrivial element of the kernel of `quotient` among
/// reduced words of length at most `radius`.
pub(crate) fn shortest_kernel_element(quotient: &dyn GroupModel, rank: usize, radius: usize) -> Option<Word> {
    (1..=radius).find_map(|len| {
        reduced_words_of_length(rank, len)
            .into_iter()
            .find(|w| quotient.is_identity(w))
    })
}
