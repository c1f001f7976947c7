//! The constants of the embedding argument, as exact rationals.

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Rational64};
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::growth::{ball_count_with_budget, big_rational};
use crate::model::{FreeGroup, GroupModel};
use crate::report::{big_rational_str, biguint_str};

/// Largest enumeration attempted when a quotient has no closed-form ball
/// counts.
const ENUMERATION_BUDGET: usize = 4_000_000;

/// Which group the ball cardinality in `r_σ`, `R_ρ` and `λ̃` was taken from.
/// The ambient count is at least the quotient count, so it is a valid
/// substitute when the quotient ball is out of reach.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BallSource {
    Quotient,
    Ambient,
}

/// User choices replacing the default `κ = 160`, `λ = 210L`, `ρ = 270L`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstantOverrides {
    pub kappa: Option<i64>,
    pub lambda: Option<Rational64>,
    pub rho: Option<Rational64>,
}

impl ConstantOverrides {
    pub fn is_empty(&self) -> bool {
        self.kappa.is_none() && self.lambda.is_none() && self.rho.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hypothesis {
    pub name: &'static str,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstantsBundle {
    #[serde(serialize_with = "big_rational_str")]
    pub delta: BigRational,
    #[serde(serialize_with = "big_rational_str")]
    pub epsilon: BigRational,
    /// `L`, the displacement of `ξ`.
    #[serde(serialize_with = "big_rational_str")]
    pub displacement: BigRational,
    /// `Δ`, the diameter of the quotient of the space by the group.
    #[serde(serialize_with = "big_rational_str")]
    pub diameter: BigRational,
    pub kappa: i64,
    /// `8L + 464δ + 8ε`.
    #[serde(serialize_with = "big_rational_str")]
    pub symmetric_defect: BigRational,
    /// `12L + 758δ + 12ε`.
    #[serde(serialize_with = "big_rational_str")]
    pub twisted_defect: BigRational,
    #[serde(serialize_with = "big_rational_str")]
    pub lambda: BigRational,
    #[serde(serialize_with = "big_rational_str")]
    pub rho: BigRational,
    /// `3(Δ + ρ)`.
    #[serde(serialize_with = "big_rational_str")]
    pub sigma: BigRational,
    /// `card B(⌊σ⌋)` in the group named by `ball_source`.
    #[serde(serialize_with = "biguint_str")]
    pub card_ball_sigma: BigUint,
    pub ball_source: BallSource,
    /// `3(Δ + σ)·card B(σ)`.
    #[serde(serialize_with = "big_rational_str")]
    pub r_sigma: BigRational,
    /// `15(Δ + ρ)·card B(3(Δ + ρ))`.
    #[serde(serialize_with = "big_rational_str")]
    pub comparison_threshold: BigRational,
    /// `2λ + R_ρ`.
    #[serde(serialize_with = "big_rational_str")]
    pub lambda_tilde: BigRational,
    /// True when any default was overridden.
    pub scaled: bool,
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn card_ball(quotient: &dyn GroupModel, ambient_rank: usize, radius: usize) -> (BigUint, BallSource) {
    if let Some(s) = quotient.sphere_counts(radius) {
        return (s.iter().sum(), BallSource::Quotient);
    }
    if let Ok(table) = ball_count_with_budget(quotient, radius, ENUMERATION_BUDGET) {
        return (table.count(radius).clone(), BallSource::Quotient);
    }
    let free = FreeGroup::new(ambient_rank);
    let s = free.sphere_counts(radius).expect("free groups have closed-form counts");
    (s.iter().sum(), BallSource::Ambient)
}

impl ConstantsBundle {
    /// Constants for a free group of rank `ambient_rank` acting on its tree
    /// (`δ = ε = 0`, `Δ = ½`), an element of displacement `displacement`,
    /// and the quotient whose balls enter `r_σ`, `R_ρ` and `λ̃`.
    pub fn for_tree(
        displacement: usize,
        overrides: &ConstantOverrides,
        quotient: &dyn GroupModel,
        ambient_rank: usize,
    ) -> Self {
        let l = int(displacement as i64);
        let delta = BigRational::zero();
        let epsilon = BigRational::zero();
        let diameter = BigRational::new(BigInt::from(1), BigInt::from(2));
        let symmetric_defect = &l * int(8) + &delta * int(464) + &epsilon * int(8);
        let twisted_defect = &l * int(12) + &delta * int(758) + &epsilon * int(12);
        let kappa = overrides.kappa.unwrap_or(160);
        let lambda = overrides.lambda.map(big_rational).unwrap_or_else(|| &l * int(210));
        let rho = overrides.rho.map(big_rational).unwrap_or_else(|| &l * int(270));
        let sigma = (&diameter + &rho) * int(3);
        let floor_sigma = sigma.floor().to_integer().to_usize().unwrap_or(0);
        let (card_ball_sigma, ball_source) = card_ball(quotient, ambient_rank, floor_sigma);
        let card = BigRational::from_integer(BigInt::from(card_ball_sigma.clone()));
        let r_sigma = (&diameter + &sigma) * int(3) * &card;
        let comparison_threshold = (&diameter + &rho) * int(15) * &card;
        let lambda_tilde = &lambda * int(2) + &comparison_threshold;
        ConstantsBundle {
            delta,
            epsilon,
            displacement: l,
            diameter,
            kappa,
            symmetric_defect,
            twisted_defect,
            lambda,
            rho,
            sigma,
            card_ball_sigma,
            ball_source,
            r_sigma,
            comparison_threshold,
            lambda_tilde,
            scaled: !overrides.is_empty(),
        }
    }

    /// `κL + 2Δ⋆ + Δ₋`: the least λ for which Φ does not expand norms.
    pub fn nonexpansion_threshold(&self) -> BigRational {
        int(self.kappa) * &self.displacement + &self.twisted_defect * int(2) + &self.symmetric_defect
    }

    /// `(κ+4)L + 4(Δ⋆ + ½Δ₋ + 8δ)`: the collision distance bound, and the
    /// least ρ for injectivity.
    pub fn collision_bound(&self) -> BigRational {
        int(self.kappa + 4) * &self.displacement
            + (&self.twisted_defect + &self.symmetric_defect / int(2) + &self.delta * int(8)) * int(4)
    }

    /// `κ ≥ (5Δ⋆ + 5/2·Δ₋ + 40δ + η)/‖ξ‖∞` with `η = Δ₋`, for a given
    /// stable norm.
    pub fn kappa_sufficient(&self, stable_norm: &BigRational) -> bool {
        let need = &self.twisted_defect * int(5)
            + &self.symmetric_defect * BigRational::new(BigInt::from(5), BigInt::from(2))
            + &self.delta * int(40)
            + &self.symmetric_defect;
        int(self.kappa) * stable_norm >= need
    }

    /// The standing hypotheses of the embedding argument, with the stable
    /// norm equal to `L` on the tree.
    pub fn hypotheses(&self) -> Vec<Hypothesis> {
        vec![
            Hypothesis {
                name: "displacement >= 300 delta",
                holds: self.displacement >= &self.delta * int(300),
            },
            Hypothesis {
                name: "kappa >= 4",
                holds: self.kappa >= 4,
            },
            Hypothesis {
                name: "kappa * stable_norm >= 5 twisted_defect + 7/2 symmetric_defect + 40 delta",
                holds: self.kappa_sufficient(&self.displacement),
            },
            Hypothesis {
                name: "lambda >= kappa L + 2 twisted_defect + symmetric_defect",
                holds: self.lambda >= self.nonexpansion_threshold(),
            },
            Hypothesis {
                name: "rho >= (kappa + 4) L + 4 (twisted_defect + symmetric_defect / 2 + 8 delta)",
                holds: self.rho >= self.collision_bound(),
            },
        ]
    }

    /// All hypotheses hold, so nonexpansion and injectivity are guaranteed.
    pub fn guaranteed(&self) -> bool {
        self.hypotheses().iter().all(|h| h.holds)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CyclicFreeProduct, RewritingModel};
    use crate::rewriting::complete_presentation;
    use crate::word::w;

    fn z() -> CyclicFreeProduct {
        CyclicFreeProduct::new(vec![0, 1])
    }

    #[test]
    fn default_constants_for_the_integers() {
        let c = ConstantsBundle::for_tree(1, &ConstantOverrides::default(), &z(), 2);
        assert_eq!(c.symmetric_defect, int(8));
        assert_eq!(c.twisted_defect, int(12));
        assert_eq!((c.kappa, c.lambda.clone(), c.rho.clone()), (160, int(210), int(270)));
        assert_eq!(c.nonexpansion_threshold(), int(192));
        assert_eq!(c.collision_bound(), int(228));
        assert_eq!(c.sigma, BigRational::new(BigInt::from(1623), BigInt::from(2)));
        assert_eq!(c.card_ball_sigma, BigUint::from(1623u32));
        assert_eq!(c.ball_source, BallSource::Quotient);
        // 15 · 270.5 · 1623 = 6585322.5, plus 2λ = 420.
        assert_eq!(
            c.lambda_tilde,
            BigRational::new(BigInt::from(13171485), BigInt::from(2))
        );
        assert!(c.guaranteed());
        assert!(!c.scaled);
    }

    #[test]
    fn scaled_constants_flag_unmet_hypotheses() {
        let overrides = ConstantOverrides {
            kappa: Some(4),
            lambda: Some(Rational64::from_integer(36)),
            rho: Some(Rational64::from_integer(10)),
        };
        let c = ConstantsBundle::for_tree(1, &overrides, &z(), 2);
        assert!(c.scaled);
        assert_eq!(c.nonexpansion_threshold(), int(36));
        let failing: Vec<_> = c
            .hypotheses()
            .into_iter()
            .filter(|h| !h.holds)
            .map(|h| h.name)
            .collect();
        assert_eq!(failing.len(), 2, "{failing:?}");
        assert!(!c.guaranteed());
    }

    #[test]
    fn quotients_without_closed_forms() {
        // A finite quotient (order 12) is enumerated completely.
        let finite = RewritingModel::new(complete_presentation(2, &[w("aaa"), w("bbb"), w("abab")], 2000).unwrap());
        let c = ConstantsBundle::for_tree(2, &ConstantOverrides::default(), &finite, 2);
        assert_eq!(c.ball_source, BallSource::Quotient);
        assert_eq!(c.card_ball_sigma, BigUint::from(12u8));
        // An exponentially growing one is out of reach; the free group's
        // ball stands in.
        let big = RewritingModel::new(complete_presentation(2, &[w("aaa")], 2000).unwrap());
        let c = ConstantsBundle::for_tree(1, &ConstantOverrides::default(), &big, 2);
        assert_eq!(c.ball_source, BallSource::Ambient);
        assert_eq!(c.card_ball_sigma, BigUint::from(3u8).pow(811) * 2u8 - 1u8);
    }
}
