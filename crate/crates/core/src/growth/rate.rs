//! Exponential growth rate estimates from finite ball tables.

use num_bigint::BigUint;
use serde::Serialize;

use super::{BallTable, GrowthError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateMethod {
    TailSlope,
    SeriesRoot,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthEstimate {
    #[serde(serialize_with = "crate::report::sig12")]
    pub omega: f64,
    pub window: (usize, usize),
    pub method: EstimateMethod,
    /// Tail slope: root-mean-square residual of the log-linear fit.
    /// Series root: gain over the estimate at half the truncation radius.
    #[serde(serialize_with = "crate::report::sig12")]
    pub residual: f64,
}

/// Natural logarithm of a big integer, accurate to f64 precision.
pub fn big_ln(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        let v: f64 = num_traits::ToPrimitive::to_f64(n).expect("fits f64");
        return v.ln();
    }
    let shift = bits - 64;
    let top: f64 = num_traits::ToPrimitive::to_f64(&(n >> shift)).expect("64 bits");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// The top quarter of the table, and at least three radii.
pub fn default_window(radius_max: usize) -> (usize, usize) {
    let hi = radius_max;
    (hi.saturating_sub((hi / 4).max(2)), hi)
}

/// Least-squares slope of `log card B(R)` over `R ∈ [lo, hi]`; the default
/// window is [`default_window`].
pub fn growth_rate(table: &BallTable, window: Option<(usize, usize)>) -> Result<GrowthEstimate, GrowthError> {
    let (lo, hi) = window.unwrap_or_else(|| default_window(table.radius_max()));
    if hi > table.radius_max() || lo > hi {
        return Err(GrowthError::WindowOutOfRange {
            window: (lo, hi),
            radius_max: table.radius_max(),
        });
    }
    if hi - lo + 1 < 3 {
        return Err(GrowthError::WindowTooSmall { points: hi - lo + 1 });
    }
    let points: Vec<(f64, f64)> = (lo..=hi).map(|r| (r as f64, big_ln(table.count(r)))).collect();
    let (slope, residual) = least_squares(&points);
    Ok(GrowthEstimate {
        omega: slope.max(0.0),
        window: (lo, hi),
        method: EstimateMethod::TailSlope,
        residual,
    })
}

/// Slope and RMS residual of the least-squares line through `points`.
fn least_squares(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let rss: f64 = points.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2)).sum();
    (slope, (rss / n).sqrt())
}
