//! End-to-end growth comparison between the ambient free group and a
//! quotient, with Φ checked on a finite sample.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::ToPrimitive;
use serde::Serialize;

use super::{
    check_phi_injective, check_phi_nonexpanding, net_words, shortest_kernel_element, EmbeddingConfig, EmbeddingError,
    InjectivityStatus,
};
use crate::growth::{
    affordable_radius, ball_table, build_rho_net_with_budget, gap_bound_log, growth_rate, GapBound, GrowthEstimate,
};
use crate::model::{FreeGroup, SharedModel};
use crate::orbit::{ConstantOverrides, ConstantsBundle, OrbitContext};
use crate::report::{big_rational_ln, big_rational_str};
use crate::word::Word;

#[derive(Clone, Debug)]
pub struct TightnessOptions {
    /// Ball radius for the ambient growth estimate.
    pub radius_ambient: usize,
    /// Ball radius for the quotient growth estimate.
    pub radius_quotient: usize,
    /// Kernel element to use; searched for when absent.
    pub xi: Option<Word>,
    pub xi_search_radius: usize,
    pub overrides: ConstantOverrides,
    pub phi_max_blocks: usize,
    /// λ-norm cap of the Φ sample; `2λ + 3ρ` when absent.
    pub phi_max_norm: Option<BigRational>,
    /// Largest quotient ball enumerated for the net.
    pub net_budget: usize,
    /// Largest number of net words pushed through Φ; the shortest words
    /// in block count come first.
    pub phi_max_words: usize,
}

impl Default for TightnessOptions {
    fn default() -> Self {
        TightnessOptions {
            radius_ambient: 12,
            radius_quotient: 20,
            xi: None,
            xi_search_radius: 8,
            overrides: ConstantOverrides::default(),
            phi_max_blocks: 3,
            phi_max_norm: None,
            net_budget: 500_000,
            phi_max_words: 200_000,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TightnessReport {
    pub quotient: String,
    pub xi: Word,
    #[serde(rename = "omega_G")]
    pub omega_g: GrowthEstimate,
    pub omega_quotient: GrowthEstimate,
    pub constants: ConstantsBundle,
    #[serde(serialize_with = "big_rational_str")]
    pub lambda_tilde: BigRational,
    /// `ω̄ + (1/4λ̃)·log(1 + e^{−λ̃ω̄})` in floating point.
    #[serde(serialize_with = "crate::report::sig12")]
    pub gap_bound: f64,
    /// The same bound with its excess over `ω̄` kept in log form.
    pub gap_bound_detail: GapBound,
    pub strict_gap_observed: bool,
    pub phi_injective_on_sample: bool,
    pub phi_nonexpanding_on_sample: bool,
    pub phi_sample_size: usize,
    pub injectivity_status: InjectivityStatus,
    /// All hypotheses on `κ`, `λ`, `ρ` hold.
    pub guaranteed: bool,
}

/// Shortlex-least nontrivial kernel element of length at most `radius`.
pub fn find_kernel_element(quotient: &SharedModel, radius: usize) -> Result<Word, EmbeddingError> {
    shortest_kernel_element(quotient.as_ref(), quotient.rank(), radius).ok_or(EmbeddingError::NoKernelElement(radius))
}

fn to_rational64(q: &BigRational) -> Option<Rational64> {
    Some(Rational64::new(q.numer().to_i64()?, q.denom().to_i64()?))
}

pub fn tightness_report(quotient: SharedModel, options: &TightnessOptions) -> Result<TightnessReport, EmbeddingError> {
    let rank = quotient.rank();
    let xi = match &options.xi {
        Some(x) => x.clone(),
        None => find_kernel_element(&quotient, options.xi_search_radius)?,
    };
    let orbit = OrbitContext::new(rank, &xi)?;
    let constants = ConstantsBundle::for_tree(orbit.displacement(), &options.overrides, quotient.as_ref(), rank);

    let ambient = FreeGroup::new(rank);
    let omega_g = growth_rate(&ball_table(&ambient, options.radius_ambient)?, None)?;
    let omega_quotient = growth_rate(&ball_table(quotient.as_ref(), options.radius_quotient)?, None)?;
    let margin = omega_g.residual + omega_quotient.residual;
    let strict_gap_observed = omega_quotient.omega + margin < omega_g.omega;

    let gap_bound_detail = gap_bound_log(omega_quotient.omega, big_rational_ln(&constants.lambda_tilde));

    let max_norm = options
        .phi_max_norm
        .clone()
        .unwrap_or_else(|| &constants.lambda * BigInt::from(2) + &constants.rho * BigInt::from(3));
    let want = max_norm.floor().to_integer().to_usize().unwrap_or(0);
    let net_radius = affordable_radius(quotient.as_ref(), want, options.net_budget);
    let rho = to_rational64(&constants.rho).expect("ρ fits in 64 bits");
    let net = build_rho_net_with_budget(quotient.as_ref(), rho, net_radius, options.net_budget)?;
    let cfg = EmbeddingConfig::new(quotient.clone(), orbit, constants.clone(), net)?;
    let words = net_words(&cfg, options.phi_max_blocks, &max_norm, options.phi_max_words);
    let nonexpansion = check_phi_nonexpanding(&cfg, &words)?;
    let injectivity = check_phi_injective(&cfg, &words, 0)?;

    Ok(TightnessReport {
        quotient: quotient.name(),
        xi,
        omega_g,
        omega_quotient,
        lambda_tilde: constants.lambda_tilde.clone(),
        gap_bound: gap_bound_detail.value,
        gap_bound_detail,
        strict_gap_observed,
        phi_injective_on_sample: injectivity.holds(),
        phi_nonexpanding_on_sample: nonexpansion.holds(),
        phi_sample_size: words.len(),
        injectivity_status: injectivity.status,
        guaranteed: constants.guaranteed(),
        constants,
    })
}
