//! ρ-nets of a quotient group and the counting comparison between
//! `Ḡ ∗ ℤ₂` and `Ḡ_ρ ∗ ℤ₂`.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Rational64};
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::ball::{enumerate_ball, DEFAULT_ELEMENT_BUDGET};
use super::free_product::free_product_ball_count_upto;
use super::{ball_count, GrowthError};
use crate::model::GroupModel;
use crate::word::Word;

/// A ρ-separated, ρ-covering subset of the ball of radius
/// `enumerated_radius`, containing the identity.
#[derive(Clone, Debug)]
pub struct RhoNet {
    pub rho: Rational64,
    members: Vec<Word>,
    /// First non-identity member in shortlex order.
    pub theta: Option<Word>,
    pub enumerated_radius: usize,
    /// True when `ρ < 1`, so the net is the whole group.
    pub whole_group: bool,
}

pub fn big_rational(q: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

fn floor_usize(q: Rational64) -> usize {
    q.floor().to_integer().max(0) as usize
}

/// Greedy net over the ball of radius `radius`: elements are taken in
/// shortlex order (norm, then lexicographic) and kept unless within `ρ` of
/// an earlier member.
pub fn build_rho_net(model: &dyn GroupModel, rho: Rational64, radius: usize) -> Result<RhoNet, GrowthError> {
    build_rho_net_with_budget(model, rho, radius, DEFAULT_ELEMENT_BUDGET)
}

pub fn build_rho_net_with_budget(
    model: &dyn GroupModel,
    rho: Rational64,
    radius: usize,
    budget: usize,
) -> Result<RhoNet, GrowthError> {
    let whole_group = rho < Rational64::from_integer(1);
    if !whole_group && radius <= floor_usize(rho) {
        // Everything in the ball is within ρ of the identity.
        return Ok(RhoNet {
            rho,
            members: vec![Word::empty()],
            theta: None,
            enumerated_radius: radius,
            whole_group,
        });
    }
    let ball = enumerate_ball(model, radius, budget)?;
    let members = if whole_group {
        ball
    } else {
        // Offsets longer than twice the radius cannot land in the ball.
        let offsets = enumerate_ball(model, floor_usize(rho).min(2 * radius), budget)?;
        let mut covered: HashSet<Word> = HashSet::new();
        let mut members = Vec::new();
        for x in ball {
            if covered.contains(&x) {
                continue;
            }
            for b in &offsets {
                let y = model.mul(&x, b);
                if y.len() <= radius {
                    covered.insert(y);
                }
            }
            members.push(x);
        }
        members
    };
    let theta = members.get(1).cloned();
    Ok(RhoNet {
        rho,
        members,
        theta,
        enumerated_radius: radius,
        whole_group,
    })
}

/// Result of an independent exhaustive check of a net.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NetCertificate {
    pub members: usize,
    pub elements: usize,
    /// Smallest distance between two members (`None` with one member).
    pub min_separation: Option<usize>,
    /// Largest distance from an element of the ball to the nearest member.
    pub covering_radius: usize,
    pub separated: bool,
    pub covering: bool,
}

impl RhoNet {
    pub fn members(&self) -> &[Word] {
        &self.members
    }

    pub fn contains(&self, word: &Word) -> bool {
        self.members.binary_search(word).is_ok()
    }

    /// `‖θ̊‖ ≤ 2(Δ + ρ)`.
    pub fn theta_within(&self, delta_cap: Rational64) -> bool {
        self.theta.as_ref().is_some_and(|t| {
            Rational64::from_integer(t.len() as i64) <= (delta_cap + self.rho) * Rational64::from_integer(2)
        })
    }

    /// Members per norm for norms `0..=radius`, and whether the counts are
    /// exact. Beyond the enumerated radius they are exact only for a
    /// whole-group net over a model with closed-form sphere counts.
    pub fn sphere_counts(&self, model: &dyn GroupModel, radius: usize) -> (Vec<BigUint>, bool) {
        if radius > self.enumerated_radius && self.whole_group {
            if let Some(s) = model.sphere_counts(radius) {
                return (s, true);
            }
        }
        let mut out = vec![BigUint::zero(); radius + 1];
        for m in &self.members {
            if m.len() <= radius {
                out[m.len()] += 1u8;
            }
        }
        (out, radius <= self.enumerated_radius)
    }

    /// Exhaustive separation and covering check against the ball.
    pub fn certify(&self, model: &dyn GroupModel) -> Result<NetCertificate, GrowthError> {
        let ball = enumerate_ball(model, self.enumerated_radius, DEFAULT_ELEMENT_BUDGET)?;
        let rho = self.rho;
        let within = |d: usize| Rational64::from_integer(d as i64) <= rho;
        let mut min_separation: Option<usize> = None;
        for (i, a) in self.members.iter().enumerate() {
            for b in &self.members[i + 1..] {
                let d = model.distance(a, b);
                min_separation = Some(min_separation.map_or(d, |m| m.min(d)));
            }
        }
        let covering_radius = ball
            .iter()
            .map(|x| {
                self.members
                    .iter()
                    .map(|m| model.distance(x, m))
                    .min()
                    .unwrap_or(usize::MAX)
            })
            .max()
            .unwrap_or(0);
        Ok(NetCertificate {
            members: self.members.len(),
            elements: ball.len(),
            min_separation,
            covering_radius,
            separated: min_separation.is_none_or(|d| !within(d)),
            covering: within(covering_radius),
        })
    }
}

/// `r_ρ = 3(Δ + ρ)·card B_Ḡ(ρ)`.
pub fn packing_radius(delta_cap: Rational64, rho: Rational64, card_ball_rho: &BigUint) -> BigRational {
    big_rational((delta_cap + rho) * 3) * BigRational::from_integer(BigInt::from(card_ball_rho.clone()))
}

/// `R_ρ = 15(Δ + ρ)·card B_Ḡ(3(Δ + ρ))`.
pub fn comparison_threshold(delta_cap: Rational64, rho: Rational64, card_ball_sigma: &BigUint) -> BigRational {
    big_rational((delta_cap + rho) * 15) * BigRational::from_integer(BigInt::from(card_ball_sigma.clone()))
}

/// Smallest `r` with `card B_{Ḡ_ρ}(r) ≥ card B_Ḡ(ρ)` within the enumerated
/// radius.
pub fn tight_packing_radius(
    model: &dyn GroupModel,
    net: &RhoNet,
    rho: Rational64,
) -> Result<Option<usize>, GrowthError> {
    let target = card_ball(model, floor_usize(rho))?;
    let (spheres, _) = net.sphere_counts(model, net.enumerated_radius);
    let mut total = BigUint::zero();
    for (r, s) in spheres.iter().enumerate() {
        total += s;
        if total >= target {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

fn sphere_counts(model: &dyn GroupModel, radius: usize) -> Result<Vec<BigUint>, GrowthError> {
    match model.sphere_counts(radius) {
        Some(s) => Ok(s),
        None => Ok(ball_count(model, radius)?.spheres()),
    }
}

pub fn card_ball(model: &dyn GroupModel, radius: usize) -> Result<BigUint, GrowthError> {
    Ok(sphere_counts(model, radius)?.iter().sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComparisonStatus {
    Holds,
    Violated,
    /// The net side is only a lower bound and it fell short.
    Inconclusive,
    HypothesisUnmet,
}

/// Inputs of the counting comparison. `sigma` and `r_sigma` default to
/// `3(Δ + ρ)` and `3(Δ + σ)·card B_Ḡ(σ)`.
#[derive(Clone, Debug)]
pub struct ComparisonParams {
    pub delta_cap: Rational64,
    pub lambda: Rational64,
    pub lambda_prime: Rational64,
    pub radius: usize,
    pub sigma: Option<Rational64>,
    pub r_sigma: Option<BigRational>,
}

#[derive(Clone, Debug)]
pub struct RhoComparison {
    pub sigma: Rational64,
    pub r_sigma: BigRational,
    /// `½(λ + λ′ − σ − r_σ)`, the separator weight on the net side.
    pub net_lambda: Option<Rational64>,
    /// `card B_{Ḡ∗ℤ₂, λ+λ′}(R)`.
    pub lhs: Option<BigUint>,
    /// `card B_{Ḡ_ρ∗ℤ₂, net_lambda}(R + λ + λ′)`.
    pub rhs: Option<BigUint>,
    pub rhs_is_lower_bound: bool,
    pub status: ComparisonStatus,
}

/// Evaluates both sides of
/// `card B_{Ḡ∗ℤ₂,λ+λ′}(R) ≤ card B_{Ḡ_ρ∗ℤ₂, ½(λ+λ′−σ−r_σ)}(R+λ+λ′)`
/// exactly, under the working hypothesis `λ′ ≥ r_σ + σ`.
pub fn verify_rho_comparison(
    model: &dyn GroupModel,
    net: &RhoNet,
    params: &ComparisonParams,
) -> Result<RhoComparison, GrowthError> {
    let sigma = params.sigma.unwrap_or((params.delta_cap + net.rho) * 3);
    let r_sigma = match &params.r_sigma {
        Some(r) => r.clone(),
        None => packing_radius(params.delta_cap, sigma, &card_ball(model, floor_usize(sigma))?),
    };
    let unmet = |net_lambda| RhoComparison {
        sigma,
        r_sigma: r_sigma.clone(),
        net_lambda,
        lhs: None,
        rhs: None,
        rhs_is_lower_bound: false,
        status: ComparisonStatus::HypothesisUnmet,
    };
    if big_rational(params.lambda_prime) < &r_sigma + big_rational(sigma) {
        return Ok(unmet(None));
    }
    let total = params.lambda + params.lambda_prime;
    let net_lambda_big = (big_rational(total) - big_rational(sigma) - &r_sigma) / BigRational::from_integer(2.into());
    let net_lambda = match (net_lambda_big.numer().to_i64(), net_lambda_big.denom().to_i64()) {
        (Some(n), Some(d)) if n > 0 => Rational64::new(n, d),
        _ => return Ok(unmet(None)),
    };
    let radius = Rational64::from_integer(params.radius as i64);
    let lhs = free_product_ball_count_upto(&sphere_counts(model, params.radius)?, total, radius)?;
    let rhs_radius = radius + total;
    let (net_spheres, exact) = net.sphere_counts(model, floor_usize(rhs_radius));
    let rhs = free_product_ball_count_upto(&net_spheres, net_lambda, rhs_radius)?;
    let status = if lhs <= rhs {
        ComparisonStatus::Holds
    } else if exact {
        ComparisonStatus::Violated
    } else {
        ComparisonStatus::Inconclusive
    };
    Ok(RhoComparison {
        sigma,
        r_sigma,
        net_lambda: Some(net_lambda),
        lhs: Some(lhs),
        rhs: Some(rhs),
        rhs_is_lower_bound: !exact,
        status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CyclicFreeProduct, FreeAbelian};
    use crate::word::w;

    fn q(n: i64) -> Rational64 {
        Rational64::from_integer(n)
    }

    fn z() -> CyclicFreeProduct {
        CyclicFreeProduct::new(vec![0, 1])
    }

    #[test]
    fn integer_net() {
        let net = build_rho_net(&z(), q(3), 10).unwrap();
        let expected: Vec<Word> = ["", "aaaa", "AAAA", "aaaaaaaa", "AAAAAAAA"]
            .iter()
            .map(|s| w(s))
            .collect();
        assert_eq!(net.members(), &expected[..]);
        assert_eq!(net.theta, Some(w("aaaa")));
        assert!(net.theta_within(Rational64::new(1, 2)));
        let cert = net.certify(&z()).unwrap();
        assert!(cert.separated && cert.covering);
        assert_eq!(cert.min_separation, Some(4));
    }

    #[test]
    fn small_rho_takes_everything() {
        let net = build_rho_net(&FreeAbelian::new(2), Rational64::new(1, 2), 3).unwrap();
        assert!(net.whole_group);
        assert_eq!(net.members().len(), 25);
    }

    #[test]
    fn lattice_net_is_certified() {
        let m = FreeAbelian::new(2);
        let net = build_rho_net(&m, q(2), 3).unwrap();
        let cert = net.certify(&m).unwrap();
        assert!(cert.separated && cert.covering, "{cert:?}");
        assert!(cert.min_separation.unwrap() > 2 && cert.covering_radius <= 2);
    }

    #[test]
    fn packing_radius_values() {
        let r = packing_radius(Rational64::new(1, 2), q(3), &BigUint::from(7u8));
        assert_eq!(r, big_rational(Rational64::new(147, 2)));
        assert_eq!(
            packing_radius(Rational64::new(1, 2), q(0), &BigUint::from(1u8)),
            big_rational(Rational64::new(3, 2))
        );
        // card B_{net}(r_ρ) ≥ card B(ρ) on ℤ with ρ = 3.
        let net = build_rho_net(&z(), q(3), 73).unwrap();
        let (s, exact) = net.sphere_counts(&z(), 73);
        assert!(exact);
        assert!(s.iter().sum::<BigUint>() >= BigUint::from(7u8));
        assert_eq!(tight_packing_radius(&z(), &net, q(3)).unwrap(), Some(12));
    }

    #[test]
    fn comparison_on_integers() {
        let m = z();
        let delta_cap = Rational64::new(1, 2);
        let net = build_rho_net(&m, q(3), 736).unwrap();
        for radius in [0, 5, 30] {
            let cmp = verify_rho_comparison(
                &m,
                &net,
                &ComparisonParams {
                    delta_cap,
                    lambda: q(2),
                    lambda_prime: q(704),
                    radius,
                    sigma: None,
                    r_sigma: None,
                },
            )
            .unwrap();
            assert_eq!(cmp.r_sigma, big_rational(q(693)));
            assert_eq!(cmp.net_lambda, Some(Rational64::new(5, 4)));
            assert_eq!(cmp.status, ComparisonStatus::Holds);
            assert!(!cmp.rhs_is_lower_bound);
        }
        let short = verify_rho_comparison(
            &m,
            &net,
            &ComparisonParams {
                delta_cap,
                lambda: q(2),
                lambda_prime: q(703),
                radius: 3,
                sigma: None,
                r_sigma: None,
            },
        )
        .unwrap();
        assert_eq!(short.status, ComparisonStatus::HypothesisUnmet);
    }

    #[test]
    fn trivial_quotient_comparison() {
        let trivial = CyclicFreeProduct::new(vec![1, 1]);
        let net = build_rho_net(&trivial, q(2), 5).unwrap();
        assert_eq!(net.members().len(), 1);
        let cmp = verify_rho_comparison(
            &trivial,
            &net,
            &ComparisonParams {
                delta_cap: Rational64::new(1, 2),
                lambda: q(1),
                lambda_prime: q(40),
                radius: 5,
                sigma: None,
                r_sigma: None,
            },
        )
        .unwrap();
        assert_eq!(cmp.status, ComparisonStatus::Holds);
    }
}
