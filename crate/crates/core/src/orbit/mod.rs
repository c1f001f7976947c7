//! Geometry attached to a hyperbolic element `ξ` of a free group acting on
//! its Cayley tree: axis coordinates, orbit points, Voronoi cells, signs,
//! symmetric elements, twisted products and `ξ^κ`-insertion.
//!
//! The origin is the identity vertex. When `ξ` is cyclically reduced its
//! axis passes through the identity, so the origin realises the minimal
//! displacement exactly and the norm of `β` is the length of its reduced
//! word. A non-cyclically-reduced `ξ = c·core·c⁻¹` is replaced by `core`,
//! which generates the same normal closure.
//!
//! Orbit points are indexed by `ℤ∖{0}`: `x_i = ξ^{i−1}` for `i > 0` and
//! `x_i = ξ^i` for `i < 0`. The index `i` sits at axis position `ord(i)`
//! (`i − 1` or `i`), so the cells follow the order of the positions.

mod checks;
mod constants;
mod products;

use serde::Serialize;
use thiserror::Error;

use crate::model::GroupModel;
use crate::word::{cyclic_reduce, free_mul, free_reduce, inverse, Word};

pub use checks::{
    axis_class_representatives, check_cells, check_equivariance, check_kappa_insertion, check_separation_lemma,
    check_symmetric, check_twisted, collision_guard, kappa_insertion_sweep, separation_sweep, symmetric_sweep,
    twisted_sweep, CellReport, CollisionGuard, EquivarianceReport, InsertionReport, SeparationReport, SweepReport,
    SymmetricCheck, TwistedCheck,
};
pub use constants::{BallSource, ConstantOverrides, ConstantsBundle, Hypothesis};
pub use products::{Decomposition, KappaInsertion, TwistedProduct};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum OrbitError {
    #[error("the identity is not a hyperbolic element")]
    NotHyperbolic,
    #[error("insertion needs κ ≥ 4, got {kappa}")]
    KappaTooSmall { kappa: i64 },
    #[error("no preimage of norm {norm} found within radius {radius}")]
    SearchExhausted { norm: usize, radius: usize },
}

/// Minimal displacement of `ξ` on the tree: the length of its cyclic
/// reduction.
pub fn displacement(xi: &Word) -> Result<usize, OrbitError> {
    let reduced = free_reduce(xi);
    if reduced.is_empty() {
        return Err(OrbitError::NotHyperbolic);
    }
    Ok(cyclic_reduce(&reduced).0.len())
}

/// Index of a Voronoi cell, a nonzero integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct SignedIndex(i64);

impl SignedIndex {
    pub fn new(index: i64) -> Option<Self> {
        (index != 0).then_some(SignedIndex(index))
    }

    /// The index whose orbit point is `ξ^position`.
    pub fn from_position(position: i64) -> Self {
        SignedIndex(if position >= 0 { position + 1 } else { position })
    }

    pub fn get(self) -> i64 {
        self.0
    }

    /// Exponent of `ξ` carrying the origin to this orbit point; also the
    /// order used for tie-breaking and separation.
    pub fn position(self) -> i64 {
        if self.0 > 0 {
            self.0 - 1
        } else {
            self.0
        }
    }

    pub fn sign(self) -> Sign {
        if self.0 > 0 {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    /// Whether cell `self` lies strictly between cells `a` and `b`.
    pub fn separates(self, a: SignedIndex, b: SignedIndex) -> bool {
        let (lo, hi) = if a.position() <= b.position() {
            (a.position(), b.position())
        } else {
            (b.position(), a.position())
        };
        lo < self.position() && self.position() < hi
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

/// Where a vertex sits relative to the axis: the position of its projection
/// (in edges from the origin, signed along `ξ`) and its distance to the axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AxisCoordinates {
    pub position: i64,
    pub height: usize,
}

/// A hyperbolic element of a free group together with its orbit geometry.
#[derive(Clone, Debug)]
pub struct OrbitContext {
    rank: usize,
    supplied: Word,
    xi: Word,
    xi_inv: Word,
}

impl OrbitContext {
    pub fn new(rank: usize, xi: &Word) -> Result<Self, OrbitError> {
        let reduced = free_reduce(xi);
        if reduced.is_empty() {
            return Err(OrbitError::NotHyperbolic);
        }
        let core = cyclic_reduce(&reduced).0;
        Ok(OrbitContext {
            rank: rank.max(core.rank_hint()),
            supplied: reduced,
            xi_inv: inverse(&core),
            xi: core,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The element in use (cyclically reduced).
    pub fn xi(&self) -> &Word {
        &self.xi
    }

    /// The element as supplied, freely reduced.
    pub fn supplied(&self) -> &Word {
        &self.supplied
    }

    pub fn was_conjugated(&self) -> bool {
        self.xi != self.supplied
    }

    /// `L`, the minimal displacement, attained at the origin.
    pub fn displacement(&self) -> usize {
        self.xi.len()
    }

    /// `‖ξ^k‖`: reduced length of the power of the element in use.
    pub fn xi_power(&self, k: i64) -> Word {
        self.xi.pow(k)
    }

    pub fn orbit_point(&self, index: SignedIndex) -> Word {
        self.xi_power(index.position())
    }

    fn along(&self, word: &Word, period: &Word) -> usize {
        let p = period.letters();
        word.letters()
            .iter()
            .enumerate()
            .take_while(|(i, g)| **g == p[i % p.len()])
            .count()
    }

    /// Axis coordinates of the vertex `v` (any word; it is reduced first).
    pub fn coordinates(&self, v: &Word) -> AxisCoordinates {
        let v = free_reduce(v);
        let forward = self.along(&v, &self.xi);
        let backward = self.along(&v, &self.xi_inv);
        let (position, along) = if forward > 0 {
            (forward as i64, forward)
        } else {
            (-(backward as i64), backward)
        };
        AxisCoordinates {
            position,
            height: v.len() - along,
        }
    }

    /// Positions `n` minimising the distance from `v` to `ξ^n` (one, or two
    /// adjacent ones on a cell boundary).
    fn nearest_positions(&self, v: &Word) -> (i64, Option<i64>) {
        let t = self.coordinates(v).position;
        let l = self.displacement() as i64;
        // Smallest n with |t − nL| minimal: ceil((2t − L) / 2L).
        let n = -(-(2 * t - l)).div_euclid(2 * l);
        let tie = (t - n * l).abs() == ((n + 1) * l - t).abs();
        (n, tie.then_some(n + 1))
    }

    /// `j(v)`: the cell of `v` with the smallest position among those
    /// containing it.
    pub fn voronoi_index(&self, v: &Word) -> SignedIndex {
        SignedIndex::from_position(self.nearest_positions(v).0)
    }

    /// Every cell containing `v`.
    pub fn cells(&self, v: &Word) -> Vec<SignedIndex> {
        let (n, other) = self.nearest_positions(v);
        std::iter::once(n)
            .chain(other)
            .map(SignedIndex::from_position)
            .collect()
    }

    /// Every cell containing `v`, from raw tree distances to the orbit
    /// points that can be nearest. Independent of the axis coordinates.
    pub fn cells_by_distance(&self, v: &Word) -> Vec<SignedIndex> {
        let v = free_reduce(v);
        let v_inv = inverse(&v);
        let reach = (2 * v.len() / self.displacement()) as i64 + 1;
        let dists: Vec<(i64, usize)> = (-reach..=reach)
            .map(|n| (n, free_mul(&v_inv, &self.xi_power(n)).len()))
            .collect();
        let best = dists.iter().map(|d| d.1).min().expect("nonempty range");
        dists
            .iter()
            .filter(|d| d.1 == best)
            .map(|d| SignedIndex::from_position(d.0))
            .collect()
    }

    pub fn sign(&self, beta: &Word) -> Sign {
        self.voronoi_index(beta).sign()
    }

    /// Norm `|O β(O)|`.
    pub fn norm(&self, beta: &Word) -> usize {
        free_reduce(beta).len()
    }

    /// Distance `|α(O) β(O)|`.
    pub fn distance(&self, alpha: &Word, beta: &Word) -> usize {
        free_mul(&inverse(alpha), beta).len()
    }
}

/// Shortlex-least word of minimal length representing the quotient element
/// `gamma`: a 0-minimal representative modulo the kernel.
///
/// Since the quotient normal form is itself the shortlex-least geodesic,
/// it is the answer; a search up to `radius` is the fallback should a model
/// break that contract.
pub fn eta_minimal_representative(quotient: &dyn GroupModel, gamma: &Word, radius: usize) -> Result<Word, OrbitError> {
    let target = quotient.normal_form(gamma);
    let norm = target.len();
    if target.is_freely_reduced() && quotient.normal_form(&target) == target {
        return Ok(target);
    }
    for len in norm..=radius.max(norm) {
        if let Some(found) = crate::word::reduced_words_of_length(quotient.rank(), len)
            .into_iter()
            .find(|w| quotient.normal_form(w) == target)
        {
            return Ok(found);
        }
    }
    Err(OrbitError::SearchExhausted { norm, radius })
}

/// `(upper, lower)` bracket of the stable norm `lim ‖ξ^k‖/k` from the power
/// `k`: `upper = ‖ξ^k‖/k` (Fekete), `lower` removes the excursion to the axis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StableNorm {
    pub k: usize,
    pub power_norm: usize,
    #[serde(serialize_with = "crate::report::rational64_str")]
    pub upper: num_rational::Rational64,
    #[serde(serialize_with = "crate::report::rational64_str")]
    pub lower: num_rational::Rational64,
    pub displacement: usize,
}

impl StableNorm {
    /// `L − 16δ ≤ lower ≤ L ≤ upper` (δ = 0 on the tree).
    pub fn brackets_displacement(&self) -> bool {
        let l = num_rational::Rational64::from_integer(self.displacement as i64);
        self.lower <= l && l <= self.upper && self.lower >= l
    }
}

pub fn stable_norm(xi: &Word, k: usize) -> Result<StableNorm, OrbitError> {
    let k = k.max(1);
    let reduced = free_reduce(xi);
    if reduced.is_empty() {
        return Err(OrbitError::NotHyperbolic);
    }
    let (core, conjugator) = cyclic_reduce(&reduced);
    let power_norm = free_reduce(&reduced.pow(k as i64)).len();
    let kk = k as i64;
    Ok(StableNorm {
        k,
        power_norm,
        upper: num_rational::Rational64::new(power_norm as i64, kk),
        lower: num_rational::Rational64::new((power_norm - 2 * conjugator.len()) as i64, kk),
        displacement: core.len(),
    })
}
