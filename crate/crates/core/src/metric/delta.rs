//! Four-point hyperbolicity constant.

use num_rational::Rational64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{FiniteMetricSpace, MetricError};
use crate::rng::sample_rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DeltaMode {
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaEstimate {
    #[serde(serialize_with = "crate::report::rational64_str")]
    pub delta: Rational64,
    /// A quadruple attaining `delta` (the lexicographically first one in
    /// exhaustive mode, the first sample in sampled mode).
    pub witness: Option<[usize; 4]>,
    pub mode: DeltaMode,
    pub quadruples: u64,
}

/// Twice the defect of a quadruple, in internal units: largest minus middle
/// of the three pair sums.
#[inline]
fn defect_units(s: &FiniteMetricSpace, x: usize, y: usize, z: usize, w: usize) -> u32 {
    let a = s.raw(x, y) + s.raw(z, w);
    let b = s.raw(x, z) + s.raw(y, w);
    let c = s.raw(x, w) + s.raw(y, z);
    let (hi, mid) = if a >= b {
        if b >= c {
            (a, b)
        } else if a >= c {
            (a, c)
        } else {
            (c, a)
        }
    } else if a >= c {
        (b, a)
    } else if b >= c {
        (b, c)
    } else {
        (c, b)
    };
    hi - mid
}

type Best = (u32, Option<[usize; 4]>);

fn better(a: Best, b: Best) -> Best {
    match a.0.cmp(&b.0) {
        std::cmp::Ordering::Greater => a,
        std::cmp::Ordering::Less => b,
        std::cmp::Ordering::Equal => match (a.1, b.1) {
            (Some(p), Some(q)) if q < p => b,
            (None, Some(_)) => b,
            _ => a,
        },
    }
}

/// Smallest δ for which every (sampled) quadruple satisfies the four-point
/// condition `|xy| + |zw| ≤ max(|xz| + |yw|, |xw| + |yz|) + 2δ`.
pub fn four_point_delta(space: &FiniteMetricSpace, mode: DeltaMode) -> Result<DeltaEstimate, MetricError> {
    let n = space.len();
    let (best, quadruples) = match mode {
        DeltaMode::Exhaustive => {
            let best = (0..n)
                .into_par_iter()
                .map(|x| {
                    let mut best: Best = (0, None);
                    for y in x + 1..n {
                        for z in y + 1..n {
                            for w in z + 1..n {
                                let d = defect_units(space, x, y, z, w);
                                if d > best.0 {
                                    best = (d, Some([x, y, z, w]));
                                }
                            }
                        }
                    }
                    best
                })
                .reduce(|| (0, None), better);
            let count = if n < 4 {
                0
            } else {
                (n as u64) * (n as u64 - 1) * (n as u64 - 2) * (n as u64 - 3) / 24
            };
            (best, count)
        }
        DeltaMode::Sampled { samples, seed } => {
            if samples == 0 {
                return Err(MetricError::SampleSizeZero);
            }
            if n == 0 {
                ((0, None), samples)
            } else {
                let best = (0..samples)
                    .into_par_iter()
                    .map(|i| {
                        let mut rng = sample_rng(seed, i);
                        let q = [0; 4].map(|_| rng.gen_range(0..n));
                        (defect_units(space, q[0], q[1], q[2], q[3]), i, q)
                    })
                    .reduce(
                        || (0, u64::MAX, [0; 4]),
                        |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a },
                    );
                let witness = (best.0 > 0).then_some(best.2);
                ((best.0, witness), samples)
            }
        }
    };
    let witness = if best.0 == 0 { None } else { best.1 };
    Ok(DeltaEstimate {
        delta: Rational64::new(best.0 as i64, 2 * space.scale() as i64),
        witness,
        mode,
        quadruples,
    })
}
