//! Validators for the projection, chain and neighbourhood lemmas of
//! δ-hyperbolic geometry, plus an exhaustive suite that runs them together
//! with the tripod band over a whole space.
//!
//! All comparisons are done on integers in the space's internal units: a
//! test "integer ≤ rational bound" is the same as "integer ≤ floor(bound)".

use num_rational::Rational64;
use rayon::prelude::*;
use serde::Serialize;

use super::{tripod_map, FiniteMetricSpace, GeodesicSegment, MetricError};

fn floor_units(space: &FiniteMetricSpace, bound: Rational64) -> i64 {
    (bound * Rational64::from_integer(space.scale() as i64))
        .floor()
        .to_integer()
}

fn d(space: &FiniteMetricSpace, a: usize, b: usize) -> i64 {
    space.raw(a, b) as i64
}

/// Trace point nearest to `x`; ties go to the point closest to the start.
pub fn project_to_geodesic(space: &FiniteMetricSpace, x: usize, seg: &GeodesicSegment) -> usize {
    *seg.trace()
        .iter()
        .min_by_key(|&&p| space.raw(x, p))
        .expect("nonempty trace")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionReport {
    pub projection: usize,
    /// Largest `(x|q)_p` over trace points `q`. Since
    /// `|xp| + |pq| − |xq| = 2(x|q)_p`, this also bounds the additivity defect.
    pub max_product: Rational64,
    /// `4δ − max_product`.
    pub slack: Rational64,
    pub violations: u64,
}

pub fn check_projection_lemma(
    space: &FiniteMetricSpace,
    delta: Rational64,
    x: usize,
    seg: &GeodesicSegment,
) -> ProjectionReport {
    let p = project_to_geodesic(space, x, seg);
    let bound2 = floor_units(space, delta * 8);
    let (worst2, violations) = projection_scan(space, x, p, seg.trace(), bound2);
    let max_product = Rational64::new(worst2, 2 * space.scale() as i64);
    ProjectionReport {
        projection: p,
        max_product,
        slack: delta * 4 - max_product,
        violations,
    }
}

/// Largest doubled product `|xp| + |pq| − |xq|` and the number of trace
/// points exceeding `bound2`.
fn projection_scan(space: &FiniteMetricSpace, x: usize, p: usize, trace: &[usize], bound2: i64) -> (i64, u64) {
    let mut worst = 0;
    let mut violations = 0;
    for &q in trace {
        let twice = d(space, x, p) + d(space, p, q) - d(space, x, q);
        worst = worst.max(twice);
        if twice > bound2 {
            violations += 1;
        }
    }
    (worst, violations)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainReport {
    HypothesesUnmet,
    /// `slack = |xy| − (|xp| + |pq| + |qy| − 14δ)`.
    Checked {
        slack: Rational64,
    },
}

impl ChainReport {
    pub fn holds(&self) -> bool {
        match self {
            ChainReport::HypothesesUnmet => true,
            ChainReport::Checked { slack } => *slack >= Rational64::from_integer(0),
        }
    }
}

/// Checks `|xy| ≥ |xp| + |pq| + |qy| − 14δ` when `(x|q)_p ≤ 4δ`,
/// `(y|p)_q ≤ 4δ`, `|xp| ≤ |xq|`, `|yq| ≤ |yp|` and `|pq| > 9δ`.
///
/// The last hypothesis excludes `p`, `q` too close together: with `p = q`
/// the other four hold for any `x = y` and the conclusion fails even in a
/// tree. Above `9δ` the pair `|xq| + |yp|` dominates `|xp| + |yq|` by more
/// than `2δ`, which is what the four-point argument needs.
pub fn check_chain_lemma(
    space: &FiniteMetricSpace,
    delta: Rational64,
    x: usize,
    y: usize,
    p: usize,
    q: usize,
) -> ChainReport {
    let bound2 = floor_units(space, delta * 8);
    if d(space, p, q) <= floor_units(space, delta * 9)
        || !chain_side(space, x, p, q, bound2)
        || !chain_side(space, y, q, p, bound2)
    {
        return ChainReport::HypothesesUnmet;
    }
    let excess = d(space, x, p) + d(space, p, q) + d(space, q, y) - d(space, x, y);
    ChainReport::Checked {
        slack: delta * 14 - space.to_rational(excess),
    }
}

/// `(x|q)_p ≤ 4δ` and `|xp| ≤ |xq|`.
#[inline]
fn chain_side(space: &FiniteMetricSpace, x: usize, p: usize, q: usize, bound2: i64) -> bool {
    d(space, x, p) + d(space, p, q) - d(space, x, q) <= bound2 && d(space, x, p) <= d(space, x, q)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborhoodReport {
    /// Largest distance from a path point to the segment.
    pub max_deviation: Rational64,
    /// `ℓ/2 + 8δ`.
    pub bound: Rational64,
    pub violations: u64,
}

/// Checks that a path with the segment's endpoints and length at most
/// `|xy| + ℓ` stays within `ℓ/2 + 8δ` of the segment.
pub fn check_neighborhood_lemma(
    space: &FiniteMetricSpace,
    delta: Rational64,
    seg: &GeodesicSegment,
    path: &[usize],
    ell: Rational64,
) -> Result<NeighborhoodReport, MetricError> {
    if path.first() != Some(&seg.start()) || path.last() != Some(&seg.end()) {
        return Err(MetricError::PathEndpointMismatch);
    }
    let length = space.to_rational(space.path_units(path));
    let budget = space.dist(seg.start(), seg.end()) + ell;
    if length > budget {
        return Err(MetricError::PathTooLong { length, budget });
    }
    let bound = ell / 2 + delta * 8;
    let limit = floor_units(space, bound);
    let mut worst = 0;
    let mut violations = 0;
    for &v in path {
        let dev = distance_to_trace(space, v, seg.trace());
        worst = worst.max(dev);
        if dev > limit {
            violations += 1;
        }
    }
    Ok(NeighborhoodReport {
        max_deviation: space.to_rational(worst),
        bound,
        violations,
    })
}

fn distance_to_trace(space: &FiniteMetricSpace, v: usize, trace: &[usize]) -> i64 {
    trace.iter().map(|&t| d(space, v, t)).min().expect("nonempty trace")
}

/// Outcome of one lemma over a whole space.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SuiteTally {
    pub checked: u64,
    /// Instances whose hypotheses failed (chain lemma only).
    pub skipped: u64,
    pub violations: u64,
    /// Smallest margin to the lemma's bound; negative exactly when violated.
    #[serde(serialize_with = "crate::report::rational64_opt_str")]
    pub worst_slack: Option<Rational64>,
}

impl SuiteTally {
    fn merge(mut self, other: SuiteTally) -> SuiteTally {
        self.checked += other.checked;
        self.skipped += other.skipped;
        self.violations += other.violations;
        self.worst_slack = match (self.worst_slack, other.worst_slack) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaSuiteReport {
    #[serde(serialize_with = "crate::report::rational64_str")]
    pub delta: Rational64,
    pub tripod: SuiteTally,
    pub projection: SuiteTally,
    pub chain: SuiteTally,
    pub neighborhood: SuiteTally,
}

impl LemmaSuiteReport {
    pub fn total_violations(&self) -> u64 {
        self.tripod.violations + self.projection.violations + self.chain.violations + self.neighborhood.violations
    }
}

/// Runs every lemma over every admissible configuration of a graph space:
///
/// * tripod band on all triangles `i < j < k`;
/// * projection lemma for every point and every ordered geodesic;
/// * chain lemma for every quadruple satisfying the hypotheses;
/// * neighbourhood lemma for every two-geodesic path `x → z → y` against
///   the geodesic `[x, y]`, with `ℓ = |xz| + |zy| − |xy|`.
pub fn lemma_suite(space: &FiniteMetricSpace, delta: Rational64) -> Result<LemmaSuiteReport, MetricError> {
    let n = space.len();
    let geodesics: Vec<GeodesicSegment> = (0..n * n)
        .into_par_iter()
        .map(|k| space.geodesic(k / n, k % n))
        .collect::<Result<_, _>>()?;
    let seg = |x: usize, y: usize| &geodesics[x * n + y];
    let scale2 = 2 * space.scale() as i64;
    let half = |v: i64| Rational64::new(v, scale2);
    let bound2 = floor_units(space, delta * 8);

    let tripod = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut tally = SuiteTally::default();
            for j in i + 1..n {
                for k in j + 1..n {
                    let map = tripod_map(space, i, j, k).expect("graph geodesics exist");
                    let band = map.check_band(space, delta);
                    tally = tally.merge(SuiteTally {
                        checked: band.pairs,
                        skipped: 0,
                        violations: band.violations,
                        worst_slack: match (band.lower_slack, band.upper_slack) {
                            (Some(a), Some(b)) => Some(a.min(b)),
                            _ => None,
                        },
                    });
                }
            }
            tally
        })
        .reduce(SuiteTally::default, SuiteTally::merge);

    let projection = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let s = &geodesics[k];
            let mut worst = i64::MIN;
            let mut tally = SuiteTally::default();
            for x in 0..n {
                let p = project_to_geodesic(space, x, s);
                let (w, v) = projection_scan(space, x, p, s.trace(), bound2);
                worst = worst.max(w);
                tally.checked += s.trace().len() as u64;
                tally.violations += v;
            }
            tally.worst_slack = Some(delta * 4 - half(worst));
            tally
        })
        .reduce(SuiteTally::default, SuiteTally::merge);

    let chain_limit = floor_units(space, delta * 14);
    let min_gap = floor_units(space, delta * 9);
    let chain = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (p, q) = (k / n, k % n);
            if d(space, p, q) <= min_gap {
                return SuiteTally {
                    skipped: (n * n) as u64,
                    ..SuiteTally::default()
                };
            }
            let xs: Vec<usize> = (0..n).filter(|&x| chain_side(space, x, p, q, bound2)).collect();
            let ys: Vec<usize> = (0..n).filter(|&y| chain_side(space, y, q, p, bound2)).collect();
            let mut worst = i64::MIN;
            let mut violations = 0;
            for &x in &xs {
                let base = d(space, x, p) + d(space, p, q);
                for &y in &ys {
                    let excess = base + d(space, q, y) - d(space, x, y);
                    worst = worst.max(excess);
                    if excess > chain_limit {
                        violations += 1;
                    }
                }
            }
            let checked = (xs.len() * ys.len()) as u64;
            SuiteTally {
                checked,
                skipped: (n * n) as u64 - checked,
                violations,
                worst_slack: (checked > 0).then(|| delta * 14 - space.to_rational(worst)),
            }
        })
        .reduce(SuiteTally::default, SuiteTally::merge);

    let neighborhood = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (x, y) = (k / n, k % n);
            let trace = seg(x, y).trace();
            let to_seg: Vec<i64> = (0..n).map(|v| distance_to_trace(space, v, trace)).collect();
            let mut tally = SuiteTally::default();
            for z in 0..n {
                let ell2 = d(space, x, z) + d(space, z, y) - d(space, x, y);
                // dev ≤ ℓ/2 + 8δ  ⇔  2·dev − ℓ ≤ 16δ, all in units.
                let limit2 = floor_units(space, delta * 16);
                let dev = seg(x, z)
                    .trace()
                    .iter()
                    .chain(seg(z, y).trace())
                    .map(|&v| to_seg[v])
                    .max()
                    .expect("nonempty path");
                let margin2 = 2 * dev - ell2;
                tally.checked += 1;
                if margin2 > limit2 {
                    tally.violations += 1;
                }
                let slack = delta * 8 - half(margin2);
                tally.worst_slack = Some(tally.worst_slack.map_or(slack, |s| s.min(slack)));
            }
            tally
        })
        .reduce(SuiteTally::default, SuiteTally::merge);

    Ok(LemmaSuiteReport {
        delta,
        tripod,
        projection,
        chain,
        neighborhood,
    })
}
