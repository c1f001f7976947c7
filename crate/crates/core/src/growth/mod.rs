//! Exact ball counting, growth-rate estimates, free products with `ℤ₂` and
//! ρ-nets.

mod ball;
mod free_product;
mod net;
mod rate;

use thiserror::Error;

pub use ball::{
    affordable_radius, ball_count, ball_count_with_budget, ball_table, enumerate_ball, for_each_sphere, BallTable,
    DEFAULT_ELEMENT_BUDGET,
};
pub use free_product::{
    free_product_ball_count, free_product_ball_count_upto, free_product_ball_counts, free_product_growth_rate,
    free_product_tail_slope, gap_bound_log, gap_lower_bound, lambda_norm, FreeProductWord, GapBound, LogExcess,
};
pub use net::{
    big_rational, build_rho_net, build_rho_net_with_budget, card_ball, comparison_threshold, packing_radius,
    tight_packing_radius, verify_rho_comparison, ComparisonParams, ComparisonStatus, NetCertificate, RhoComparison,
    RhoNet,
};
pub use rate::{big_ln, default_window, growth_rate, EstimateMethod, GrowthEstimate};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GrowthError {
    #[error("memory budget of {budget} words exceeded; spheres complete up to radius {completed_radius}")]
    MemoryBudgetExceeded { completed_radius: usize, budget: usize },
    #[error("growth window holds {points} radii; need at least 3")]
    WindowTooSmall { points: usize },
    #[error("window {window:?} is outside the table (max radius {radius_max})")]
    WindowOutOfRange { window: (usize, usize), radius_max: usize },
    #[error("block series does not reach 1; no convergence radius found")]
    SeriesDiverged,
    #[error("table reaches radius {have}, need {need}")]
    TableTooShort { have: usize, need: usize },
    #[error("free-product weight must be positive")]
    NonPositiveLambda,
    #[error("net coverage cannot be certified at the enumeration boundary (element {element})")]
    CoverageGapAtBoundary { element: String },
}
