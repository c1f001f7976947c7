//! Comparison of geodesic triangles with tripods.

use num_rational::Rational64;
use num_traits::Signed;
use serde::Serialize;

use super::{FiniteMetricSpace, GeodesicSegment, MetricError};

/// A possibly degenerate tripod: three arms of the given lengths glued at a
/// centre. Arm 0 ends at the image of `x`, arm 1 at `y`, arm 2 at `z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tripod {
    pub arms: [Rational64; 3],
}

/// A point of a tripod: an arm and the distance from the centre.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TripodPoint {
    pub arm: usize,
    pub offset: Rational64,
}

impl Tripod {
    pub fn distance(&self, p: TripodPoint, q: TripodPoint) -> Rational64 {
        if p.arm == q.arm {
            (p.offset - q.offset).abs()
        } else {
            p.offset + q.offset
        }
    }
}

/// A geodesic triangle together with its comparison map onto a tripod.
#[derive(Clone, Debug)]
pub struct TripodMap {
    pub tripod: Tripod,
    /// Sides `[x,y]`, `[y,z]`, `[x,z]`.
    pub sides: [GeodesicSegment; 3],
    /// Arm lengths in half units (twice the internal distance units).
    arms2: [i64; 3],
    scale: u32,
}

/// Worst-case comparison between triangle and tripod distances.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BandReport {
    pub pairs: u64,
    /// Smallest value of `|Φ(p)Φ(q)| − (|pq| − 4δ)`.
    #[serde(serialize_with = "crate::report::rational64_opt_str")]
    pub lower_slack: Option<Rational64>,
    /// Smallest value of `|pq| − |Φ(p)Φ(q)|`.
    #[serde(serialize_with = "crate::report::rational64_opt_str")]
    pub upper_slack: Option<Rational64>,
    pub violations: u64,
}

impl BandReport {
    pub fn merge(&mut self, other: &BandReport) {
        self.pairs += other.pairs;
        self.violations += other.violations;
        self.lower_slack = min_opt(self.lower_slack, other.lower_slack);
        self.upper_slack = min_opt(self.upper_slack, other.upper_slack);
    }
}

fn min_opt(a: Option<Rational64>, b: Option<Rational64>) -> Option<Rational64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Builds the geodesic triangle on `x`, `y`, `z` and its tripod, whose arms
/// are the Gromov products `(y|z)_x`, `(x|z)_y`, `(x|y)_z`.
pub fn tripod_map(space: &FiniteMetricSpace, x: usize, y: usize, z: usize) -> Result<TripodMap, MetricError> {
    let sides = [space.geodesic(x, y)?, space.geodesic(y, z)?, space.geodesic(x, z)?];
    let d = |a, b| space.raw(a, b) as i64;
    let arms2 = [
        d(x, y) + d(x, z) - d(y, z),
        d(x, y) + d(y, z) - d(x, z),
        d(x, z) + d(y, z) - d(x, y),
    ];
    let half = |v: i64| Rational64::new(v, 2 * space.scale() as i64);
    Ok(TripodMap {
        tripod: Tripod { arms: arms2.map(half) },
        sides,
        arms2,
        scale: space.scale(),
    })
}

/// Arm pairs (start vertex arm, end vertex arm) for the three sides.
const SIDE_ARMS: [(usize, usize); 3] = [(0, 1), (1, 2), (0, 2)];

impl TripodMap {
    /// Image of the point at distance `t` (internal units) from the start of
    /// `side`, in half units: `(arm, offset)`.
    fn image2(&self, side: usize, t: i64) -> (usize, i64) {
        let (a, b) = SIDE_ARMS[side];
        let t2 = 2 * t;
        if t2 <= self.arms2[a] {
            (a, self.arms2[a] - t2)
        } else {
            (b, t2 - self.arms2[a])
        }
    }

    /// Image of the `k`-th trace point of `side`.
    pub fn image(&self, space: &FiniteMetricSpace, side: usize, k: usize) -> TripodPoint {
        let trace = self.sides[side].trace();
        let (arm, off2) = self.image2(side, space.raw(trace[0], trace[k]) as i64);
        TripodPoint {
            arm,
            offset: Rational64::new(off2, 2 * self.scale as i64),
        }
    }

    /// Checks `|pq| − 4δ ≤ |Φ(p)Φ(q)| ≤ |pq|` for every pair of trace points.
    pub fn check_band(&self, space: &FiniteMetricSpace, delta: Rational64) -> BandReport {
        let points: Vec<(usize, (usize, i64))> = (0..3)
            .flat_map(|side| {
                let trace = self.sides[side].trace();
                trace.iter().map(move |&p| (p, (side, space.raw(trace[0], p) as i64)))
            })
            .map(|(p, (side, t))| (p, self.image2(side, t)))
            .collect();
        // In half units 4δ becomes 8δ·scale; only its floor matters for
        // integer comparisons.
        let four_delta2 = (delta * Rational64::from_integer(8 * self.scale as i64))
            .floor()
            .to_integer();
        let mut lower = i64::MAX;
        let mut upper = i64::MAX;
        let mut violations = 0;
        let mut pairs = 0;
        for (i, &(p, (arm_p, off_p))) in points.iter().enumerate() {
            for &(q, (arm_q, off_q)) in &points[i + 1..] {
                let dpq2 = 2 * space.raw(p, q) as i64;
                let dphi2 = if arm_p == arm_q {
                    (off_p - off_q).abs()
                } else {
                    off_p + off_q
                };
                pairs += 1;
                let shortfall = dphi2 - dpq2;
                lower = lower.min(shortfall);
                upper = upper.min(-shortfall);
                if shortfall + four_delta2 < 0 || shortfall > 0 {
                    violations += 1;
                }
            }
        }
        let half = |v: i64| Rational64::new(v, 2 * self.scale as i64);
        BandReport {
            pairs,
            lower_slack: (pairs > 0).then(|| half(lower) + delta * Rational64::from_integer(4)),
            upper_slack: (pairs > 0).then(|| half(upper)),
            violations,
        }
    }
}
