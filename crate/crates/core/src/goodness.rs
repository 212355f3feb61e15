//! Tracking functions along a walk and the residual-graph audit.
//!
//! For a (k-1)-set `S` the tracking function `g_S` is the indicator of the
//! neighbourhood `N(S)`. A walk of length κ is good when every tracking sum
//! stays within θ of its expected share `(κ/n)·d(S)`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{KGraph, OrderedTuple};
use crate::matching::{profile_of_weights, EdgeWeighting};
use crate::vset::{Vertex, VertexSet};
use crate::walk::{derive_seed, run_walk, WalkConfig, WalkError, WalkMode, WalkTrace};

#[derive(Debug, Error)]
pub enum GoodnessError {
    #[error("trace does not fit the graph: {0}")]
    TraceGraphMismatch(String),
    #[error("at least one sample is required")]
    EmptySample,
    #[error("walk length {kappa} exceeds n - k + 1 = {limit}")]
    WalkTooLong { kappa: usize, limit: usize },
    #[error(transparent)]
    Walk(#[from] WalkError),
}

/// Visited vertices of a trace, after checking it against `g`.
pub fn trace_vertex_set(g: &KGraph, trace: &WalkTrace) -> Result<VertexSet, GoodnessError> {
    let k = g.k();
    if trace.vertices.len() + 1 < k {
        return Err(GoodnessError::TraceGraphMismatch(format!(
            "trace has {} vertices, fewer than k-1",
            trace.vertices.len()
        )));
    }
    if let Some(v) = trace.vertices.iter().find(|&&v| !g.vertex_set().contains(v)) {
        return Err(GoodnessError::TraceGraphMismatch(format!("vertex {v} not in graph")));
    }
    for w in trace.vertices.windows(k) {
        let e: VertexSet = w.iter().copied().collect();
        if !g.contains_edge(e) {
            return Err(GoodnessError::TraceGraphMismatch(format!("{w:?} is not an edge")));
        }
    }
    Ok(trace.vertices.iter().copied().collect())
}

/// `Σ_i g_S(X_i)` for every (k-1)-set `S`, in lexicographic order of `S`.
/// The sum runs over all trace vertices, start tuple included.
pub fn tracking_sums(g: &KGraph, trace: &WalkTrace) -> Result<Vec<(VertexSet, usize)>, GoodnessError> {
    let visited = trace_vertex_set(g, trace)?;
    if visited.len() != trace.vertices.len() {
        // a simple walk may repeat vertices; count with multiplicity
        return Ok(g
            .ksub1_sets()
            .map(|s| {
                let nb = g.neighbors(s);
                (s, trace.vertices.iter().filter(|&&v| nb.contains(v)).count())
            })
            .collect());
    }
    Ok(g
        .ksub1_sets()
        .map(|s| (s, g.neighbors(s).intersection(visited).len()))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrackingRow {
    pub set: Vec<Vertex>,
    pub visited_in_neighbourhood: usize,
    pub target: f64,
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoodnessReport {
    pub walk_length: usize,
    pub threshold: f64,
    pub max_error: f64,
    pub argmax: Vec<Vertex>,
    pub is_good: bool,
    /// The worst sets by error, largest first.
    pub rows: Vec<TrackingRow>,
    pub sets_total: usize,
}

pub const DEFAULT_REPORT_ROWS: usize = 100;

/// The default threshold `n^{3/10}`.
pub fn default_threshold(n: usize) -> f64 {
    (n as f64).powf(0.3)
}

pub fn goodness_report(
    g: &KGraph,
    trace: &WalkTrace,
    threshold: f64,
    max_rows: usize,
) -> Result<GoodnessReport, GoodnessError> {
    let sums = tracking_sums(g, trace)?;
    let kappa = trace.vertices.len() + 1 - g.k();
    let share = kappa as f64 / g.order() as f64;
    let mut rows: Vec<TrackingRow> = sums
        .into_iter()
        .map(|(s, visited)| {
            let target = share * g.codegree(s) as f64;
            TrackingRow {
                set: s.to_vec(),
                visited_in_neighbourhood: visited,
                target,
                error: (visited as f64 - target).abs(),
            }
        })
        .collect();
    let sets_total = rows.len();
    // stable sort keeps lexicographic order among ties
    rows.sort_by(|a, b| b.error.total_cmp(&a.error));
    let (max_error, argmax) = rows
        .first()
        .map(|r| (r.error, r.set.clone()))
        .unwrap_or((0.0, Vec::new()));
    rows.truncate(max_rows);
    Ok(GoodnessReport {
        walk_length: kappa,
        threshold,
        max_error,
        argmax,
        is_good: max_error < threshold,
        rows,
        sets_total,
    })
}

/// Tolerances of the residual audit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditConfig {
    /// Dirac parameter of the host graph; the residual must be γ/2-Dirac.
    /// Defaults to the measured value.
    pub gamma: Option<f64>,
    /// Normality constant of `x` on the host; the restriction must be
    /// 2C-normal. Defaults to the measured value.
    pub normality: Option<f64>,
    pub stride: usize,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            gamma: None,
            normality: None,
            stride: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditRow {
    pub step: usize,
    pub residual_order: usize,
    /// max_S |g_S(V_j) / ((n−j)/n · g_S(V)) − 1| against n^{−1/4}.
    pub tracking_deviation: f64,
    pub tracking_ok: bool,
    pub min_codegree: usize,
    /// δ(G_j)/|V_j| − (1/2 + γ/2).
    pub dirac_slack: f64,
    pub dirac_ok: bool,
    pub normality: f64,
    pub normality_ok: bool,
    pub epsilon: f64,
    pub almost_perfect_ok: bool,
}

impl AuditRow {
    pub fn all_ok(&self) -> bool {
        self.tracking_ok && self.dirac_ok && self.normality_ok && self.almost_perfect_ok
    }
}

/// Audits the residual graph `G_j = G[V_j]`, where `V_j` drops the first `j`
/// trace vertices.
pub fn audit_step(
    g: &KGraph,
    x: &EdgeWeighting,
    removed: VertexSet,
    gamma: f64,
    normality: f64,
) -> AuditRow {
    let n = g.order() as f64;
    let j = removed.len();
    let residual = g.residual(removed);
    let m = residual.order();
    let shrink = (g.order() - j) as f64 / n;
    let mut deviation = 0.0f64;
    for s in g.ksub1_sets() {
        let full = g.codegree(s);
        if full == 0 {
            continue;
        }
        let now = g.neighbors(s).difference(removed).len() as f64;
        deviation = deviation.max((now / (shrink * full as f64) - 1.0).abs());
    }
    let delta = residual.min_codegree().value;
    let slack = if m == 0 {
        f64::NEG_INFINITY
    } else {
        delta as f64 / m as f64 - (0.5 + gamma / 2.0)
    };
    let weights = residual.edges().iter().map(|&e| (e, x.weight(e))).collect();
    let (res_normality, epsilon) = match profile_of_weights(&residual, &weights) {
        Ok(p) => (p.normality_c, p.epsilon),
        Err(_) => (f64::INFINITY, 1.0),
    };
    AuditRow {
        step: j,
        residual_order: m,
        tracking_deviation: deviation,
        tracking_ok: deviation <= n.powf(-0.25),
        min_codegree: delta,
        dirac_slack: slack,
        dirac_ok: slack >= -1e-12,
        normality: res_normality,
        normality_ok: res_normality <= 2.0 * normality,
        epsilon,
        almost_perfect_ok: epsilon <= n.powf(-0.4),
    }
}

/// Audit table for steps 0, stride, 2·stride, … and the final step.
pub fn residual_audit(
    g: &KGraph,
    x: &EdgeWeighting,
    trace: &WalkTrace,
    cfg: &AuditConfig,
) -> Result<Vec<AuditRow>, GoodnessError> {
    let visited = trace_vertex_set(g, trace)?;
    if visited.len() != trace.vertices.len() {
        return Err(GoodnessError::TraceGraphMismatch(
            "residual audit needs a self-avoiding trace".into(),
        ));
    }
    let gamma = cfg.gamma.unwrap_or_else(|| g.measured_gamma());
    let normality = cfg.normality.unwrap_or(x.profile().normality_c);
    let kappa = trace.vertices.len() + 1 - g.k();
    let stride = cfg.stride.max(1);
    let mut steps: Vec<usize> = (0..=kappa).step_by(stride).collect();
    if steps.last() != Some(&kappa) {
        steps.push(kappa);
    }
    Ok(steps
        .into_par_iter()
        .map(|j| {
            let removed: VertexSet = trace.vertices[..j].iter().copied().collect();
            audit_step(g, x, removed, gamma, normality)
        })
        .collect())
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

pub const Z_95: f64 = 1.959964;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoodnessRate {
    pub samples: u64,
    pub good: u64,
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Walks that stopped before κ steps.
    pub terminated: u64,
    /// Walks that failed with an error.
    pub failed: u64,
    /// max_error of each completed walk, in seed order.
    pub max_errors: Vec<f64>,
}

/// Fraction of seeded self-avoiding walks from `start` that are good.
pub fn goodness_rate(
    g: &KGraph,
    x: &EdgeWeighting,
    start: &OrderedTuple,
    kappa: usize,
    samples: u64,
    threshold: f64,
    seed: u64,
) -> Result<GoodnessRate, GoodnessError> {
    if samples == 0 {
        return Err(GoodnessError::EmptySample);
    }
    let limit = g.order() + 1 - g.k();
    if kappa > limit {
        return Err(GoodnessError::WalkTooLong { kappa, limit });
    }
    enum Outcome {
        Done(f64),
        Terminated,
        Failed,
    }
    let outcomes: Vec<Outcome> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let cfg = WalkConfig::from_tuple(WalkMode::SelfAvoiding, start.clone(), kappa, derive_seed(seed, i));
            match run_walk(g, x, &cfg) {
                Ok(t) if t.is_completed() => match goodness_report(g, &t, threshold, 0) {
                    Ok(r) => Outcome::Done(r.max_error),
                    Err(_) => Outcome::Failed,
                },
                Ok(_) => Outcome::Terminated,
                Err(_) => Outcome::Failed,
            }
        })
        .collect();
    let mut good = 0;
    let mut terminated = 0;
    let mut failed = 0;
    let mut max_errors = Vec::new();
    for o in outcomes {
        match o {
            Outcome::Done(e) => {
                if e < threshold {
                    good += 1;
                }
                max_errors.push(e);
            }
            Outcome::Terminated => terminated += 1,
            Outcome::Failed => failed += 1,
        }
    }
    let (ci_low, ci_high) = wilson_interval(good, samples, Z_95);
    Ok(GoodnessRate {
        samples,
        good,
        rate: good as f64 / samples as f64,
        ci_low,
        ci_high,
        terminated,
        failed,
        max_errors,
    })
}

/// Histogram CSV of errors with bins `[i·width, (i+1)·width)` labelled by their left edge.
pub fn error_histogram_csv(errors: &[f64], width: f64) -> String {
    let mut bins: BTreeMap<i64, u64> = BTreeMap::new();
    for &e in errors {
        *bins.entry((e / width).floor() as i64).or_insert(0) += 1;
    }
    let mut s = String::from("error_bin,count\n");
    for (b, c) in bins {
        s.push_str(&format!("{},{}\n", b as f64 * width, c));
    }
    s
}
