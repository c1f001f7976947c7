//! Exact finite metric spaces, geodesics and Gromov products.
//!
//! Distances are stored as integers in units of `1/scale`, so graph metrics
//! (scale 1) and rational metrics share one representation and no floating
//! point enters the layer.

mod delta;
mod lemmas;
mod tripod;

use std::collections::{HashMap, VecDeque};

use num_integer::Integer;
use num_rational::Rational64;
use thiserror::Error;

use crate::model::GroupModel;
use crate::word::{Generator, Word};

pub use delta::{four_point_delta, DeltaEstimate, DeltaMode};
pub use lemmas::{
    check_chain_lemma, check_neighborhood_lemma, check_projection_lemma, lemma_suite, project_to_geodesic, ChainReport,
    LemmaSuiteReport, NeighborhoodReport, ProjectionReport, SuiteTally,
};
pub use tripod::{tripod_map, BandReport, Tripod, TripodMap, TripodPoint};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricError {
    #[error("no geodesic from point {from} to point {to}")]
    NoGeodesic { from: usize, to: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("sample size must be positive")]
    SampleSizeZero,
    #[error("path of length {length} exceeds the budget {budget}")]
    PathTooLong { length: Rational64, budget: Rational64 },
    #[error("path endpoints do not match the segment")]
    PathEndpointMismatch,
    #[error("not a metric: {0}")]
    NotAMetric(String),
    #[error("unknown point {0:?}")]
    UnknownPoint(String),
    #[error("edge list line {line}: {message}")]
    EdgeList { line: usize, message: String },
}

/// A finite metric space with an all-pairs distance table.
#[derive(Clone, Debug)]
pub struct FiniteMetricSpace {
    n: usize,
    dist: Vec<u32>,
    scale: u32,
    /// Sorted neighbour lists when the metric is a unit-edge graph metric.
    adjacency: Option<Vec<Vec<usize>>>,
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl FiniteMetricSpace {
    /// Graph metric of a connected graph with unit edges.
    pub fn from_graph(labels: Vec<String>, edges: &[(usize, usize)]) -> Result<Self, MetricError> {
        let n = labels.len();
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u != v {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        let mut dist = vec![u32::MAX; n * n];
        let mut queue = VecDeque::new();
        for s in 0..n {
            let row = &mut dist[s * n..(s + 1) * n];
            row[s] = 0;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &v in &adjacency[u] {
                    if row[v] == u32::MAX {
                        row[v] = row[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            if row.contains(&u32::MAX) {
                return Err(MetricError::Disconnected);
            }
        }
        Ok(Self::assemble(n, dist, 1, Some(adjacency), labels))
    }

    /// Metric given by an explicit rational matrix. The matrix is checked
    /// for symmetry, zero diagonal, positivity off the diagonal and the
    /// triangle inequality.
    pub fn from_matrix(labels: Vec<String>, matrix: &[Vec<Rational64>]) -> Result<Self, MetricError> {
        let n = labels.len();
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(MetricError::NotAMetric("matrix shape".into()));
        }
        let scale = matrix.iter().flatten().fold(1i64, |acc, q| acc.lcm(q.denom()));
        let mut dist = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let q = matrix[i][j];
                if q != matrix[j][i] {
                    return Err(MetricError::NotAMetric(format!("asymmetric at ({i},{j})")));
                }
                if (i == j) != (q == Rational64::from_integer(0)) || q < Rational64::from_integer(0) {
                    return Err(MetricError::NotAMetric(format!("bad entry at ({i},{j})")));
                }
                let units = (q * scale).to_integer();
                dist[i * n + j] =
                    u32::try_from(units).map_err(|_| MetricError::NotAMetric("distance too large".into()))?;
            }
        }
        let space = Self::assemble(n, dist, scale as u32, None, labels);
        if let Some((x, y, z)) = space.triangle_violation() {
            return Err(MetricError::NotAMetric(format!(
                "triangle inequality fails at ({x},{y},{z})"
            )));
        }
        Ok(space)
    }

    fn assemble(n: usize, dist: Vec<u32>, scale: u32, adjacency: Option<Vec<Vec<usize>>>, labels: Vec<String>) -> Self {
        let index = labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        FiniteMetricSpace {
            n,
            dist,
            scale,
            adjacency,
            labels,
            index,
        }
    }

    /// The cycle graph `C_n` with points labelled `0..n`.
    pub fn cycle(n: usize) -> Self {
        let labels = (0..n).map(|i| i.to_string()).collect();
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_graph(labels, &edges).expect("cycles are connected")
    }

    /// The ball of radius `radius` in the Cayley graph of `model`, with the
    /// induced graph metric. Points are labelled by normal forms (`e` for the
    /// identity) and ordered shortlex.
    pub fn cayley_ball(model: &dyn GroupModel, radius: usize) -> Self {
        let mut elements: Vec<Word> = vec![Word::empty()];
        let mut position: HashMap<Word, usize> = HashMap::from([(Word::empty(), 0)]);
        let mut layer_start = 0;
        for _ in 0..radius {
            let layer_end = elements.len();
            let mut next: Vec<Word> = Vec::new();
            for x in &elements[layer_start..layer_end] {
                for g in Generator::alphabet(model.rank()) {
                    let nb = model.mul(x, &Word::letter(g));
                    if !position.contains_key(&nb) {
                        next.push(nb);
                    }
                }
            }
            next.sort_by(|a, b| a.shortlex_cmp(b));
            next.dedup();
            for word in next {
                position.insert(word.clone(), elements.len());
                elements.push(word);
            }
            layer_start = layer_end;
        }
        let mut edges = Vec::new();
        for (i, word) in elements.iter().enumerate() {
            for g in Generator::alphabet(model.rank()) {
                if let Some(&j) = position.get(&model.mul(word, &Word::letter(g))) {
                    if i < j {
                        edges.push((i, j));
                    }
                }
            }
        }
        let labels = elements
            .iter()
            .map(|w| if w.is_empty() { "e".to_owned() } else { w.to_string() })
            .collect();
        Self::from_graph(labels, &edges).expect("balls are connected")
    }

    /// Parses an edge list: one `u v` pair per line, `#` comments allowed.
    /// Point labels are arbitrary tokens, indexed by first appearance.
    pub fn parse_edge_list(text: &str) -> Result<Self, MetricError> {
        let mut labels: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut edges = Vec::new();
        let mut intern = |tok: &str, labels: &mut Vec<String>| -> usize {
            *index.entry(tok.to_owned()).or_insert_with(|| {
                labels.push(tok.to_owned());
                labels.len() - 1
            })
        };
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(MetricError::EdgeList {
                    line: lineno + 1,
                    message: "expected two tokens".into(),
                });
            }
            let u = intern(toks[0], &mut labels);
            let v = intern(toks[1], &mut labels);
            edges.push((u, v));
        }
        Self::from_graph(labels, &edges)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn point(&self, label: &str) -> Result<usize, MetricError> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| MetricError::UnknownPoint(label.to_owned()))
    }

    pub fn is_graph(&self) -> bool {
        self.adjacency.is_some()
    }

    pub fn neighbors(&self, i: usize) -> Option<&[usize]> {
        self.adjacency.as_ref().map(|a| a[i].as_slice())
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    /// Distance in internal units of `1/scale`.
    #[inline]
    pub fn raw(&self, i: usize, j: usize) -> u32 {
        self.dist[i * self.n + j]
    }

    pub fn dist(&self, i: usize, j: usize) -> Rational64 {
        self.to_rational(self.raw(i, j) as i64)
    }

    pub(crate) fn to_rational(&self, units: i64) -> Rational64 {
        Rational64::new(units, self.scale as i64)
    }

    /// Gromov product `(x|y)_w = ½(|xw| + |yw| − |xy|)`.
    pub fn gromov_product(&self, x: usize, y: usize, w: usize) -> Rational64 {
        let twice = self.raw(x, w) as i64 + self.raw(y, w) as i64 - self.raw(x, y) as i64;
        Rational64::new(twice, 2 * self.scale as i64)
    }

    /// First triple violating the triangle inequality, if any.
    pub fn triangle_violation(&self) -> Option<(usize, usize, usize)> {
        for x in 0..self.n {
            for y in 0..self.n {
                for z in 0..self.n {
                    if self.raw(x, z) > self.raw(x, y) + self.raw(y, z) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    /// Breadth-first geodesic from `from` to `to`, taking the lowest-indexed
    /// neighbour that makes progress at every step.
    pub fn geodesic(&self, from: usize, to: usize) -> Result<GeodesicSegment, MetricError> {
        let adjacency = self.adjacency.as_ref().ok_or(MetricError::NoGeodesic { from, to })?;
        let mut trace = vec![from];
        let mut cur = from;
        while cur != to {
            let d = self.raw(cur, to);
            cur = *adjacency[cur]
                .iter()
                .find(|&&nb| self.raw(nb, to) + 1 == d)
                .ok_or(MetricError::NoGeodesic { from, to })?;
            trace.push(cur);
        }
        Ok(GeodesicSegment { trace })
    }

    /// Total length of a point sequence, in internal units.
    pub(crate) fn path_units(&self, path: &[usize]) -> i64 {
        path.windows(2).map(|p| self.raw(p[0], p[1]) as i64).sum()
    }
}

/// A geodesic segment given by its ordered trace of points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeodesicSegment {
    trace: Vec<usize>,
}

impl GeodesicSegment {
    /// Wraps a trace, checking that consecutive distances add up to the
    /// distance between its endpoints.
    pub fn new(space: &FiniteMetricSpace, trace: Vec<usize>) -> Option<Self> {
        let (&first, &last) = (trace.first()?, trace.last()?);
        (space.path_units(&trace) == space.raw(first, last) as i64).then_some(GeodesicSegment { trace })
    }

    pub fn start(&self) -> usize {
        self.trace[0]
    }

    pub fn end(&self) -> usize {
        *self.trace.last().expect("nonempty trace")
    }

    pub fn trace(&self) -> &[usize] {
        &self.trace
    }
}
