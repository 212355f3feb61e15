//! Perfect matchings and perfect fractional matchings.
//!
//! Two constructions of a positive perfect fractional matching are provided:
//! the matching average (edge weight = probability that the edge lies in a
//! uniformly random perfect matching, averaged over the deletions of every
//! `n mod k` vertices) and an LP optimum. [`classify_matchings_by_edge`]
//! measures the class sizes that control the inclusion probabilities.

use std::collections::HashMap;
use std::io::Write as _;
use std::ops::ControlFlow;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::KGraph;
use crate::lp;
use crate::vset::{binomial, Vertex, VertexSet};
use crate::DEFAULT_NODE_BUDGET;

#[derive(Debug, Error)]
pub enum MatchingError {
    #[error("G - {witness:?} has no perfect matching")]
    NoPerfectMatching { witness: Vec<Vertex> },
    #[error("instance too large: enumeration budget of {budget} nodes exceeded")]
    InstanceTooLarge { budget: u64 },
    #[error("more than {limit} perfect matchings (counted {partial} before stopping)")]
    LimitExceeded { limit: u64, partial: u64 },
    #[error("no perfect fractional matching exists{}", witness.map(|v| format!(" (vertex {v})")).unwrap_or_default())]
    Infeasible { witness: Option<Vertex> },
    #[error("every perfect fractional matching has an edge of weight ≤ {best_min_weight:e}")]
    NoPositiveSolution { best_min_weight: f64 },
    #[error("linear program did not converge")]
    SolverFailure,
    #[error("no weight supplied for edge {0:?}")]
    WeightMissing(Vec<Vertex>),
    #[error("edge {edge:?} has non-positive weight {weight}")]
    NonPositiveWeight { edge: Vec<Vertex>, weight: f64 },
    #[error("edge {0:?} is not in the graph")]
    EdgeNotInGraph(Vec<Vertex>),
    #[error("divisibility: k = {k} does not divide n = {n}")]
    Divisibility { n: usize, k: usize },
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// The measured quantities of an edge weighting.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightingProfile {
    /// max_v |Σ_{e∋v} x(e) − 1|
    pub perfect_residual: f64,
    /// max_v (1 − Σ_{e∋v} x(e))⁺
    pub epsilon: f64,
    /// max_e max(N x(e), 1/(N x(e))) with N = |V|^{k−1}
    pub normality_c: f64,
    /// min over non-isolated S and v ∈ N(S) of x(S∪v)/Σ_{v'} x(S∪v')
    pub lower_balance: f64,
    /// max of the same ratio
    pub upper_balance: f64,
}

/// Positive weights on exactly the edges of a graph.
#[derive(Clone, Debug)]
pub struct EdgeWeighting {
    weights: HashMap<VertexSet, f64>,
    exact: Option<HashMap<VertexSet, BigRational>>,
    profile: WeightingProfile,
}

impl EdgeWeighting {
    /// Validates that every edge of `g` has a positive weight and nothing else does.
    pub fn new(g: &KGraph, weights: HashMap<VertexSet, f64>) -> Result<Self, MatchingError> {
        for (e, &w) in &weights {
            if !g.contains_edge(*e) {
                return Err(MatchingError::EdgeNotInGraph(e.to_vec()));
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(MatchingError::NonPositiveWeight {
                    edge: e.to_vec(),
                    weight: w,
                });
            }
        }
        if let Some(e) = g.edges().iter().find(|e| !weights.contains_key(e)) {
            return Err(MatchingError::WeightMissing(e.to_vec()));
        }
        let profile = compute_profile(g, &weights);
        Ok(EdgeWeighting {
            weights,
            exact: None,
            profile,
        })
    }

    /// The same weight on every edge.
    pub fn uniform(g: &KGraph, w: f64) -> Result<Self, MatchingError> {
        Self::new(g, g.edges().iter().map(|&e| (e, w)).collect())
    }

    fn with_exact(
        g: &KGraph,
        exact: HashMap<VertexSet, BigRational>,
    ) -> Result<Self, MatchingError> {
        let weights = exact
            .iter()
            .map(|(e, q)| (*e, ratio_to_f64(q)))
            .collect();
        let mut w = Self::new(g, weights)?;
        w.exact = Some(exact);
        Ok(w)
    }

    /// x(e), zero for non-edges.
    pub fn weight(&self, e: VertexSet) -> f64 {
        self.weights.get(&e).copied().unwrap_or(0.0)
    }

    /// Exact rational weight, when the weighting was computed exactly.
    pub fn exact_weight(&self, e: VertexSet) -> Option<&BigRational> {
        self.exact.as_ref().and_then(|m| m.get(&e))
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn profile(&self) -> &WeightingProfile {
        &self.profile
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// x|_H: the restriction to the edges of a subgraph `h` of the graph.
    pub fn restrict(&self, h: &KGraph) -> Result<Self, MatchingError> {
        let weights = h.edges().iter().map(|&e| (e, self.weight(e))).collect();
        Self::new(h, weights)
    }

    /// (edge, weight) pairs in the graph's lexicographic edge order.
    pub fn entries<'a>(&'a self, g: &'a KGraph) -> impl Iterator<Item = (VertexSet, f64)> + 'a {
        g.edges().iter().map(move |&e| (e, self.weight(e)))
    }

    pub fn min_weight(&self) -> f64 {
        self.weights.values().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_weight(&self) -> f64 {
        self.weights.values().copied().fold(0.0, f64::max)
    }

    /// Σ_{e∋v} x(e) for each active vertex.
    pub fn vertex_sums(&self, g: &KGraph) -> Vec<(Vertex, f64)> {
        vertex_sums(g, &self.weights)
    }

    /// Weighting file: `n k m` then `v1 .. vk weight` per edge.
    pub fn to_text(&self, g: &KGraph) -> String {
        let mut out = format!("{} {} {}\n", g.n(), g.k(), g.edge_count());
        for (e, w) in self.entries(g) {
            let verts: Vec<String> = e.iter().map(|v| v.to_string()).collect();
            out.push_str(&format!("{} {}\n", verts.join(" "), w));
        }
        out
    }

    pub fn parse(g: &KGraph, text: &str) -> Result<Self, MatchingError> {
        let mut header: Option<(usize, usize, usize)> = None;
        let mut weights = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |message: String| MatchingError::Parse {
                line: line_no,
                message,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            match header {
                None => {
                    let nums: Result<Vec<usize>, _> = fields.iter().map(|f| f.parse()).collect();
                    let nums = nums.map_err(|e| bad(format!("bad header: {e}")))?;
                    if nums.len() != 3 {
                        return Err(bad("header must be `n k m`".into()));
                    }
                    if nums[0] != g.n() || nums[1] != g.k() {
                        return Err(bad(format!(
                            "header ({}, {}) does not match graph ({}, {})",
                            nums[0],
                            nums[1],
                            g.n(),
                            g.k()
                        )));
                    }
                    header = Some((nums[0], nums[1], nums[2]));
                }
                Some((_, k, _)) => {
                    if fields.len() != k + 1 {
                        return Err(bad(format!("expected {k} vertices and a weight")));
                    }
                    let verts: Result<Vec<Vertex>, _> =
                        fields[..k].iter().map(|f| f.parse::<Vertex>()).collect();
                    let verts = verts.map_err(|e| bad(format!("bad vertex: {e}")))?;
                    let w: f64 = fields[k]
                        .parse()
                        .map_err(|e| bad(format!("bad weight: {e}")))?;
                    let e: VertexSet = verts.iter().copied().collect();
                    if e.len() != k || !g.contains_edge(e) {
                        return Err(bad(format!("{verts:?} is not an edge of the graph")));
                    }
                    if !(w > 0.0) {
                        return Err(bad(format!("non-positive weight {w}")));
                    }
                    if weights.insert(e, w).is_some() {
                        return Err(bad(format!("duplicate edge {verts:?}")));
                    }
                }
            }
        }
        let (_, _, m) = header.ok_or(MatchingError::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        if m != weights.len() {
            return Err(MatchingError::Parse {
                line: 1,
                message: format!("header announces {m} edges, found {}", weights.len()),
            });
        }
        Self::new(g, weights)
    }

    pub fn read(g: &KGraph, path: impl AsRef<Path>) -> Result<Self, MatchingError> {
        Self::parse(g, &std::fs::read_to_string(path)?)
    }

    pub fn write(&self, g: &KGraph, path: impl AsRef<Path>) -> Result<(), MatchingError> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(self.to_text(g).as_bytes())?;
        Ok(())
    }
}

fn ratio_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn vertex_sums(g: &KGraph, weights: &HashMap<VertexSet, f64>) -> Vec<(Vertex, f64)> {
    g.vertices()
        .map(|v| {
            let s: f64 = g
                .incident_edges(v)
                .iter()
                .map(|&id| weights.get(&g.edges()[id]).copied().unwrap_or(0.0))
                .sum();
            (v, s)
        })
        .collect()
}

fn compute_profile(g: &KGraph, weights: &HashMap<VertexSet, f64>) -> WeightingProfile {
    let sums = vertex_sums(g, weights);
    let perfect_residual = sums.iter().map(|(_, s)| (s - 1.0).abs()).fold(0.0, f64::max);
    let epsilon = sums.iter().map(|(_, s)| (1.0 - s).max(0.0)).fold(0.0, f64::max);
    let scale = (g.order() as f64).powi(g.k() as i32 - 1);
    // an empty weighting is trivially 1-normal
    let normality_c = g
        .edges()
        .iter()
        .map(|e| {
            let t = scale * weights.get(e).copied().unwrap_or(0.0);
            t.max(1.0 / t)
        })
        .fold(1.0, f64::max);
    let mut lower = f64::INFINITY;
    let mut upper = 0.0f64;
    for s in g.ksub1_sets() {
        let nb = g.neighbors(s);
        if nb.is_empty() {
            continue;
        }
        let ws: Vec<f64> = nb
            .iter()
            .map(|v| weights.get(&s.with(v)).copied().unwrap_or(0.0))
            .collect();
        let total: f64 = ws.iter().sum();
        for w in ws {
            let r = w / total;
            lower = lower.min(r);
            upper = upper.max(r);
        }
    }
    if !lower.is_finite() {
        lower = 0.0;
    }
    WeightingProfile {
        perfect_residual,
        epsilon,
        normality_c,
        lower_balance: lower,
        upper_balance: upper,
    }
}

/// Recomputes the profile of `x` on `g` from scratch.
pub fn weighting_profile(g: &KGraph, x: &EdgeWeighting) -> Result<WeightingProfile, MatchingError> {
    for &e in g.edges() {
        match x.weights.get(&e) {
            None => return Err(MatchingError::WeightMissing(e.to_vec())),
            Some(&w) if !(w > 0.0) => {
                return Err(MatchingError::NonPositiveWeight {
                    edge: e.to_vec(),
                    weight: w,
                })
            }
            _ => {}
        }
    }
    Ok(compute_profile(g, &x.weights))
}

/// Profile of raw weights without constructing an [`EdgeWeighting`].
pub fn profile_of_weights(
    g: &KGraph,
    weights: &HashMap<VertexSet, f64>,
) -> Result<WeightingProfile, MatchingError> {
    for &e in g.edges() {
        match weights.get(&e) {
            None => return Err(MatchingError::WeightMissing(e.to_vec())),
            Some(&w) if !(w > 0.0) => {
                return Err(MatchingError::NonPositiveWeight {
                    edge: e.to_vec(),
                    weight: w,
                })
            }
            _ => {}
        }
    }
    Ok(compute_profile(g, weights))
}

/// Memoised perfect-matching counts of induced subgraphs `G[mask]`, branching
/// on the smallest uncovered vertex.
pub struct MatchingCounter<'g> {
    g: &'g KGraph,
    memo: HashMap<VertexSet, u128>,
    budget: u64,
}

impl<'g> MatchingCounter<'g> {
    pub fn new(g: &'g KGraph, budget: u64) -> Self {
        MatchingCounter {
            g,
            memo: HashMap::new(),
            budget,
        }
    }

    /// Number of perfect matchings of G[mask].
    pub fn count(&mut self, mask: VertexSet) -> Result<u128, MatchingError> {
        if mask.len() % self.g.k() != 0 {
            return Ok(0);
        }
        self.count_inner(mask)
    }

    fn count_inner(&mut self, mask: VertexSet) -> Result<u128, MatchingError> {
        let Some(v) = mask.first() else {
            return Ok(1);
        };
        if let Some(&c) = self.memo.get(&mask) {
            return Ok(c);
        }
        if self.memo.len() as u64 >= self.budget {
            return Err(MatchingError::InstanceTooLarge {
                budget: self.budget,
            });
        }
        let g = self.g;
        let mut total = 0u128;
        for &id in g.incident_edges(v) {
            let e = g.edges()[id];
            if e.is_subset(mask) {
                total += self.count_inner(mask.difference(e))?;
            }
        }
        self.memo.insert(mask, total);
        Ok(total)
    }

    pub fn states(&self) -> usize {
        self.memo.len()
    }
}

/// Calls `visit` with every perfect matching of `g` (edges in branching
/// order) until it returns `Break`. Returns the number visited.
pub fn visit_perfect_matchings<F>(g: &KGraph, budget: u64, mut visit: F) -> Result<u64, MatchingError>
where
    F: FnMut(&[VertexSet]) -> ControlFlow<()>,
{
    if g.order() % g.k() != 0 {
        return Ok(0);
    }
    let mut stack = Vec::with_capacity(g.order() / g.k());
    let mut nodes = 0u64;
    let mut seen = 0u64;
    fn rec<F: FnMut(&[VertexSet]) -> ControlFlow<()>>(
        g: &KGraph,
        left: VertexSet,
        stack: &mut Vec<VertexSet>,
        nodes: &mut u64,
        budget: u64,
        seen: &mut u64,
        visit: &mut F,
    ) -> Result<ControlFlow<()>, MatchingError> {
        *nodes += 1;
        if *nodes > budget {
            return Err(MatchingError::InstanceTooLarge { budget });
        }
        let Some(v) = left.first() else {
            *seen += 1;
            return Ok(visit(stack));
        };
        for &id in g.incident_edges(v) {
            let e = g.edges()[id];
            if e.is_subset(left) {
                stack.push(e);
                let flow = rec(g, left.difference(e), stack, nodes, budget, seen, visit)?;
                stack.pop();
                if flow.is_break() {
                    return Ok(flow);
                }
            }
        }
        Ok(ControlFlow::Continue(()))
    }
    let _ = rec(g, g.vertex_set(), &mut stack, &mut nodes, budget, &mut seen, &mut visit)?;
    Ok(seen)
}

/// Exact number of perfect matchings by plain backtracking. With a `limit`,
/// stops with `LimitExceeded` once the count passes it.
pub fn enumerate_perfect_matchings(g: &KGraph, limit: Option<u64>) -> Result<u64, MatchingError> {
    let mut count = 0u64;
    let mut exceeded = false;
    visit_perfect_matchings(g, u64::MAX, |_| {
        count += 1;
        if limit.is_some_and(|l| count > l) {
            exceeded = true;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    if exceeded {
        return Err(MatchingError::LimitExceeded {
            limit: limit.unwrap_or(0),
            partial: count,
        });
    }
    Ok(count)
}

/// Options for [`matching_average_weighting`].
#[derive(Clone, Copy, Debug)]
pub struct AverageOptions {
    /// Memo-state budget of the matching counter.
    pub budget: u64,
    /// Rational arithmetic is used when every G−S has at most this many
    /// perfect matchings.
    pub exact_threshold: u128,
}

impl Default for AverageOptions {
    fn default() -> Self {
        AverageOptions {
            budget: DEFAULT_NODE_BUDGET,
            exact_threshold: 100_000,
        }
    }
}

/// The matching-average perfect fractional matching.
///
/// With `i = n mod k`, for every i-set S the weight of `e` in `G − S` is the
/// fraction of perfect matchings of `G − S` containing `e`; the result averages
/// these over all S, dividing by C(n−1, i). Sets S meeting `e` contribute 0.
pub fn matching_average_weighting(
    g: &KGraph,
    opts: AverageOptions,
) -> Result<EdgeWeighting, MatchingError> {
    let n = g.order();
    let k = g.k();
    let i = n % k;
    let mut counter = MatchingCounter::new(g, opts.budget);
    let deletions: Vec<VertexSet> = g.vertex_set().subsets(i).collect();
    let mut per_set = Vec::with_capacity(deletions.len());
    let mut largest = 0u128;
    for &s in &deletions {
        let rest = g.vertex_set().difference(s);
        let total = counter.count(rest)?;
        if total == 0 {
            return Err(MatchingError::NoPerfectMatching { witness: s.to_vec() });
        }
        largest = largest.max(total);
        let mut contained = Vec::new();
        for &e in g.edges() {
            if e.is_subset(rest) {
                let c = counter.count(rest.difference(e))?;
                if c > 0 {
                    contained.push((e, c));
                }
            }
        }
        per_set.push((total, contained));
    }
    let denom = binomial(n - 1, i) as u128;
    if largest <= opts.exact_threshold {
        let mut acc: HashMap<VertexSet, BigRational> = HashMap::new();
        for (total, contained) in &per_set {
            for &(e, c) in contained {
                let q = BigRational::new(BigInt::from(c), BigInt::from(*total));
                *acc.entry(e).or_insert_with(BigRational::zero) += q;
            }
        }
        let d = BigRational::from_integer(BigInt::from(denom));
        for q in acc.values_mut() {
            *q = &*q / &d;
        }
        if let Some(e) = g.edges().iter().find(|e| !acc.contains_key(e)) {
            return Err(MatchingError::NonPositiveWeight {
                edge: e.to_vec(),
                weight: 0.0,
            });
        }
        EdgeWeighting::with_exact(g, acc)
    } else {
        // per-edge sums in a fixed order (deletion sets ascending)
        let mut acc: HashMap<VertexSet, f64> = HashMap::new();
        for (total, contained) in &per_set {
            for &(e, c) in contained {
                *acc.entry(e).or_insert(0.0) += c as f64 / *total as f64;
            }
        }
        for w in acc.values_mut() {
            *w /= denom as f64;
        }
        if let Some(e) = g.edges().iter().find(|e| !acc.contains_key(e)) {
            return Err(MatchingError::NonPositiveWeight {
                edge: e.to_vec(),
                weight: 0.0,
            });
        }
        EdgeWeighting::new(g, acc)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    MaxMinWeight,
    MinNormality,
}

/// A positive perfect fractional matching optimising `objective`.
pub fn optimize_weighting(g: &KGraph, objective: Objective) -> Result<EdgeWeighting, MatchingError> {
    if let Some(v) = g.vertices().find(|&v| g.incident_edges(v).is_empty()) {
        return Err(MatchingError::Infeasible { witness: Some(v) });
    }
    match objective {
        Objective::MaxMinWeight => {
            let x = max_min_lp(g)?;
            finish(g, x)
        }
        Objective::MinNormality => min_normality(g),
    }
}

fn vertex_rows(g: &KGraph) -> (Vec<Vertex>, HashMap<Vertex, usize>) {
    let verts: Vec<Vertex> = g.vertices().collect();
    let row = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    (verts, row)
}

/// max t subject to x(e) = t + y(e), y ≥ 0, Σ_{e∋v} x(e) = 1.
fn max_min_lp(g: &KGraph) -> Result<Vec<f64>, MatchingError> {
    let (verts, row) = vertex_rows(g);
    let m = g.edge_count();
    let mut columns: Vec<Vec<(usize, f64)>> = Vec::with_capacity(m + 2);
    for e in g.edges() {
        columns.push(e.iter().map(|v| (row[&v], 1.0)).collect());
    }
    let degree: Vec<(usize, f64)> = verts
        .iter()
        .enumerate()
        .map(|(i, &v)| (i, g.incident_edges(v).len() as f64))
        .collect();
    // t = t⁺ − t⁻
    columns.push(degree.clone());
    columns.push(degree.iter().map(|&(i, d)| (i, -d)).collect());
    let mut cost = vec![0.0; m + 2];
    cost[m] = -1.0;
    cost[m + 1] = 1.0;
    let problem = lp::Problem {
        rows: verts.len(),
        columns,
        rhs: vec![1.0; verts.len()],
        cost,
        lower: vec![0.0; m + 2],
        upper: vec![f64::INFINITY; m + 2],
    };
    match lp::solve(&problem) {
        lp::Outcome::Optimal { x, .. } => {
            let t = x[m] - x[m + 1];
            Ok(x[..m].iter().map(|y| y + t).collect())
        }
        lp::Outcome::Infeasible { worst_row } => Err(MatchingError::Infeasible {
            witness: Some(verts[worst_row]),
        }),
        _ => Err(MatchingError::SolverFailure),
    }
}

/// Feasibility of x(e) ∈ [lo, hi] with Σ_{e∋v} x(e) = 1.
fn box_feasible(g: &KGraph, lo: f64, hi: f64) -> Result<Option<Vec<f64>>, MatchingError> {
    let (verts, row) = vertex_rows(g);
    let m = g.edge_count();
    let columns = g
        .edges()
        .iter()
        .map(|e| e.iter().map(|v| (row[&v], 1.0)).collect())
        .collect();
    let problem = lp::Problem {
        rows: verts.len(),
        columns,
        rhs: vec![1.0; verts.len()],
        cost: vec![0.0; m],
        lower: vec![lo; m],
        upper: vec![hi; m],
    };
    match lp::solve(&problem) {
        lp::Outcome::Optimal { x, .. } => Ok(Some(x)),
        lp::Outcome::Infeasible { .. } => Ok(None),
        _ => Err(MatchingError::SolverFailure),
    }
}

/// Bisection on C over the box LP `1/(CN) ≤ x ≤ C/N`.
fn min_normality(g: &KGraph) -> Result<EdgeWeighting, MatchingError> {
    let start = max_min_lp(g)?;
    let best_min = start.iter().copied().fold(f64::INFINITY, f64::min);
    if !(best_min > 1e-12) {
        return Err(MatchingError::NoPositiveSolution {
            best_min_weight: best_min,
        });
    }
    let scale = (g.order() as f64).powi(g.k() as i32 - 1);
    let c_of = |x: &[f64]| {
        x.iter()
            .map(|w| (scale * w).max(1.0 / (scale * w)))
            .fold(1.0, f64::max)
    };
    let mut hi_c = c_of(&start);
    let mut best = start;
    if let Some(x) = box_feasible(g, 1.0 / scale, 1.0 / scale)? {
        return finish(g, x);
    }
    let mut lo_c = 1.0f64;
    while hi_c / lo_c - 1.0 > 1e-7 {
        let mid = (lo_c * hi_c).sqrt();
        match box_feasible(g, 1.0 / (mid * scale), mid / scale)? {
            Some(x) => {
                hi_c = mid.min(c_of(&x));
                best = x;
            }
            None => lo_c = mid,
        }
    }
    finish(g, best)
}

fn finish(g: &KGraph, x: Vec<f64>) -> Result<EdgeWeighting, MatchingError> {
    let best_min = x.iter().copied().fold(f64::INFINITY, f64::min);
    if !(best_min > 1e-12) {
        return Err(MatchingError::NoPositiveSolution {
            best_min_weight: best_min,
        });
    }
    let weights = g.edges().iter().copied().zip(x).collect();
    EdgeWeighting::new(g, weights)
}

/// Sizes of the classes M_ℓ of perfect matchings with exactly ℓ edges meeting `edge`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchingClassCounts {
    pub edge: Vec<Vertex>,
    /// `counts[ℓ-1] = |M_ℓ|` for ℓ = 1..=k.
    pub counts: Vec<u64>,
    pub total: u64,
    /// |M_1| / Σ|M_ℓ| = P[e ∈ M].
    pub inclusion_probability: f64,
    /// |M_ℓ| / |M_{ℓ+1}| for ℓ = 1..k-1; `None` when the denominator is 0.
    pub ratios: Vec<Option<f64>>,
    /// n · |M_ℓ| / |M_{ℓ+1}|.
    pub scaled_ratios: Vec<Option<f64>>,
}

pub fn classify_matchings_by_edge(
    g: &KGraph,
    edge: VertexSet,
    budget: u64,
) -> Result<MatchingClassCounts, MatchingError> {
    if !g.contains_edge(edge) {
        return Err(MatchingError::EdgeNotInGraph(edge.to_vec()));
    }
    if g.order() % g.k() != 0 {
        return Err(MatchingError::Divisibility {
            n: g.order(),
            k: g.k(),
        });
    }
    let k = g.k();
    let mut counts = vec![0u64; k];
    visit_perfect_matchings(g, budget, |m| {
        let meeting = m.iter().filter(|f| !f.is_disjoint(edge)).count();
        counts[meeting - 1] += 1;
        ControlFlow::Continue(())
    })?;
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(MatchingError::NoPerfectMatching { witness: Vec::new() });
    }
    let ratios: Vec<Option<f64>> = (0..k - 1)
        .map(|l| (counts[l + 1] > 0).then(|| counts[l] as f64 / counts[l + 1] as f64))
        .collect();
    let n = g.order() as f64;
    let scaled_ratios = ratios.iter().map(|r| r.map(|r| r * n)).collect();
    Ok(MatchingClassCounts {
        edge: edge.to_vec(),
        inclusion_probability: counts[0] as f64 / total as f64,
        counts,
        total,
        ratios,
        scaled_ratios,
    })
}
