//! Hamilton cycles: exact counting, path growth by repeated weighted walks,
//! completion search and the associated probes.

use std::collections::{BTreeSet, HashSet};
use std::ops::ControlFlow;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::goodness::{
    audit_step, goodness_report, wilson_interval, GoodnessError, Z_95,
};
use crate::hypergraph::{GraphError, KGraph, OrderedTuple, TightPath};
use crate::matching::{
    enumerate_perfect_matchings, matching_average_weighting, optimize_weighting, AverageOptions,
    EdgeWeighting, MatchingError, Objective,
};
use crate::vset::{Vertex, VertexSet};
use crate::walk::{derive_seed, run_walk, WalkConfig, WalkError, WalkMode};
use crate::DEFAULT_NODE_BUDGET;

#[derive(Debug, Error)]
pub enum CycleError {
    #[error("graph too small: need more than k = {k} vertices, got {vertices}")]
    DomainTooSmall { vertices: usize, k: usize },
    #[error("divisibility violated: {step} does not divide n = {n}")]
    Divisibility { n: usize, step: usize },
    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),
    #[error("no tight Hamilton cycle extends the path ({nodes} search nodes explored)")]
    NoCompletion { nodes: u64 },
    #[error("segment {segment}: {attempts} attempts failed ({diagnostics})")]
    RetriesExhausted {
        segment: usize,
        attempts: usize,
        diagnostics: String,
    },
    #[error("size violated: {0}")]
    SizeViolated(String),
    #[error("at least one sample is required")]
    EmptySample,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Goodness(#[from] GoodnessError),
}

/// Lexicographically least rotation/reflection of a cyclic ordering.
pub fn canonical_ordering(order: &[Vertex]) -> Vec<Vertex> {
    let n = order.len();
    let mut best: Option<Vec<Vertex>> = None;
    let rev: Vec<Vertex> = order.iter().rev().copied().collect();
    for seq in [order, rev.as_slice()] {
        for r in 0..n {
            let cand: Vec<Vertex> = seq[r..].iter().chain(&seq[..r]).copied().collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

/// The n cyclic windows of k consecutive vertices, sorted.
pub fn cyclic_windows(order: &[Vertex], k: usize) -> Vec<VertexSet> {
    let n = order.len();
    let mut edges: Vec<VertexSet> = (0..n)
        .map(|i| (0..k).map(|d| order[(i + d) % n]).collect())
        .collect();
    edges.sort_by(|a, b| a.lex_cmp(*b));
    edges.dedup();
    edges
}

/// A tight Hamilton cycle. Two cycles are equal when their edge sets are.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TightCycle {
    ordering: Vec<Vertex>,
    #[serde(skip)]
    edges: Vec<VertexSet>,
}

impl PartialEq for TightCycle {
    fn eq(&self, other: &Self) -> bool {
        self.edges == other.edges
    }
}

impl Eq for TightCycle {}

impl std::hash::Hash for TightCycle {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.edges.hash(state);
    }
}

impl PartialOrd for TightCycle {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TightCycle {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let key = |c: &TightCycle| c.edges.iter().map(|e| e.to_vec()).collect::<Vec<_>>();
        key(self).cmp(&key(other))
    }
}

impl TightCycle {
    /// Validates that `ordering` visits every vertex once and every cyclic window is an edge.
    pub fn new(g: &KGraph, ordering: Vec<Vertex>) -> Result<Self, GraphError> {
        g.require_cycle_domain()?;
        let set: VertexSet = ordering.iter().copied().collect();
        if set != g.vertex_set() || ordering.len() != g.order() {
            return Err(GraphError::InvalidPath(
                "ordering must list every vertex exactly once".into(),
            ));
        }
        let edges = cyclic_windows(&ordering, g.k());
        if let Some(e) = edges.iter().find(|e| !g.contains_edge(**e)) {
            return Err(GraphError::InvalidPath(format!("window {e:?} is not an edge")));
        }
        Ok(TightCycle {
            ordering: canonical_ordering(&ordering),
            edges,
        })
    }

    pub fn ordering(&self) -> &[Vertex] {
        &self.ordering
    }

    pub fn edges(&self) -> &[VertexSet] {
        &self.edges
    }

    pub fn to_line(&self) -> String {
        let v: Vec<String> = self.ordering.iter().map(|v| v.to_string()).collect();
        v.join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleCount {
    /// Distinct cycles, identified by edge set.
    pub distinct: u64,
    /// Vertex sequences found by the anchored search (both directions).
    pub sequences: u64,
    pub nodes: u64,
}

/// Depth-first search over cyclic vertex sequences whose edges are the
/// k-blocks starting at every multiple of `step`.
struct BlockSearch<'g> {
    g: &'g KGraph,
    step: usize,
    n: usize,
    words: usize,
    nodes: AtomicU64,
    budget: u64,
}

#[derive(Default)]
struct BranchResult {
    keys: HashSet<Vec<u64>>,
    sequences: u64,
}

impl<'g> BlockSearch<'g> {
    fn new(g: &'g KGraph, step: usize, budget: u64) -> Self {
        BlockSearch {
            g,
            step,
            n: g.order(),
            words: g.edge_count().div_ceil(64).max(1),
            nodes: AtomicU64::new(0),
            budget,
        }
    }

    fn block_set(&self, seq: &[Vertex], start: usize) -> VertexSet {
        (0..self.g.k()).map(|d| seq[(start + d) % self.n]).collect()
    }

    fn tick(&self) -> Result<(), CycleError> {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return Err(CycleError::BudgetExceeded(self.budget));
        }
        Ok(())
    }

    fn run(&self) -> Result<CycleCount, CycleError> {
        let anchor = self.g.vertex_set().first().expect("non-empty graph");
        let others: Vec<Vertex> = self.g.vertex_set().without(anchor).iter().collect();
        // prefixes: anchor position, then the first free position's vertex
        let mut prefixes = Vec::new();
        for a in 0..self.step {
            for &v in &others {
                prefixes.push((a, v));
            }
        }
        let results: Vec<BranchResult> = prefixes
            .into_par_iter()
            .map(|(a, v)| {
                let mut seq = vec![Vertex::MAX; self.n];
                seq[a] = anchor;
                let first_free = if a == 0 { 1 } else { 0 };
                seq[first_free] = v;
                let used = VertexSet::singleton(anchor).with(v);
                let mut out = BranchResult::default();
                self.tick()?;
                self.extend(&mut seq, first_free + 1, a, used, &mut out)?;
                Ok(out)
            })
            .collect::<Result<_, CycleError>>()?;
        let mut keys = HashSet::new();
        let mut sequences = 0;
        for r in results {
            sequences += r.sequences;
            keys.extend(r.keys);
        }
        Ok(CycleCount {
            distinct: keys.len() as u64,
            sequences,
            nodes: self.nodes.load(Ordering::Relaxed),
        })
    }

    fn extend(
        &self,
        seq: &mut Vec<Vertex>,
        pos: usize,
        anchor_pos: usize,
        used: VertexSet,
        out: &mut BranchResult,
    ) -> Result<(), CycleError> {
        let k = self.g.k();
        if pos == anchor_pos {
            return self.extend(seq, pos + 1, anchor_pos, used, out);
        }
        if pos == self.n {
            return self.close(seq, out);
        }
        let free = self.g.vertex_set().difference(used);
        let closes = pos + 1 >= k && (pos + 1 - k) % self.step == 0;
        let pool = if closes {
            let s: VertexSet = seq[pos + 1 - k..pos].iter().copied().collect();
            self.g.neighbors(s).intersection(free)
        } else {
            free
        };
        for v in pool.iter() {
            self.tick()?;
            seq[pos] = v;
            self.extend(seq, pos + 1, anchor_pos, used.with(v), out)?;
        }
        seq[pos] = Vertex::MAX;
        Ok(())
    }

    fn close(&self, seq: &[Vertex], out: &mut BranchResult) -> Result<(), CycleError> {
        let k = self.g.k();
        let mut key = vec![0u64; self.words];
        let mut start = 0;
        while start < self.n {
            let e = self.block_set(seq, start);
            let Some(id) = self.g.edge_id(e) else {
                return Ok(());
            };
            key[id / 64] |= 1 << (id % 64);
            start += self.step;
        }
        debug_assert!(start - self.step + k > self.n || self.step > 1);
        out.sequences += 1;
        out.keys.insert(key);
        Ok(())
    }
}

/// Number of distinct tight Hamilton cycles of `g`.
pub fn count_tight_hamilton_cycles(g: &KGraph, budget: u64) -> Result<CycleCount, CycleError> {
    g.require_cycle_domain()?;
    BlockSearch::new(g, 1, budget).run()
}

/// Number of distinct Hamilton ℓ-cycles: consecutive edges share exactly ℓ
/// vertices. ℓ = 0 counts perfect matchings, ℓ = k-1 tight cycles.
pub fn count_hamilton_ell_cycles(g: &KGraph, ell: usize, budget: u64) -> Result<CycleCount, CycleError> {
    let k = g.k();
    if ell >= k {
        return Err(CycleError::InvalidParameters(format!("ℓ = {ell} must be below k = {k}")));
    }
    let step = k - ell;
    let n = g.order();
    if n % step != 0 {
        return Err(CycleError::Divisibility { n, step });
    }
    if ell == 0 {
        let count = match enumerate_perfect_matchings(g, Some(budget)) {
            Ok(c) => c,
            Err(MatchingError::LimitExceeded { .. }) => return Err(CycleError::BudgetExceeded(budget)),
            Err(e) => return Err(e.into()),
        };
        return Ok(CycleCount {
            distinct: count,
            sequences: count,
            nodes: count,
        });
    }
    if n <= k || n / step < 3 {
        return Err(CycleError::DomainTooSmall { vertices: n, k });
    }
    BlockSearch::new(g, step, budget).run()
}

/// Distinct tight Hamilton cycles through exhaustive anchored search, each listed.
pub fn list_tight_hamilton_cycles(g: &KGraph, budget: u64) -> Result<BTreeSet<TightCycle>, CycleError> {
    g.require_cycle_domain()?;
    let anchor = g.vertex_set().first().expect("non-empty graph");
    let mut found = BTreeSet::new();
    let mut nodes = 0u64;
    let mut seq = vec![anchor];
    let _ = visit_paths(g, &mut seq, g.vertex_set().without(anchor), &mut nodes, budget, &mut |seq| {
        if let Ok(c) = TightCycle::new(g, seq.to_vec()) {
            found.insert(c);
        }
        ControlFlow::Continue(())
    })?;
    Ok(found)
}

/// Extends `seq` by every ordering of `left` that keeps all full windows edges,
/// calling `visit` on each complete sequence.
fn visit_paths<F>(
    g: &KGraph,
    seq: &mut Vec<Vertex>,
    left: VertexSet,
    nodes: &mut u64,
    budget: u64,
    visit: &mut F,
) -> Result<ControlFlow<()>, CycleError>
where
    F: FnMut(&[Vertex]) -> ControlFlow<()>,
{
    *nodes += 1;
    if *nodes > budget {
        return Err(CycleError::BudgetExceeded(budget));
    }
    if left.is_empty() {
        return Ok(visit(seq));
    }
    let k = g.k();
    let pool = if seq.len() + 1 >= k {
        let s: VertexSet = seq[seq.len() + 1 - k..].iter().copied().collect();
        g.neighbors(s).intersection(left)
    } else {
        left
    };
    for v in pool.iter() {
        seq.push(v);
        let flow = visit_paths(g, seq, left.without(v), nodes, budget, visit)?;
        seq.pop();
        if flow.is_break() {
            return Ok(flow);
        }
    }
    Ok(ControlFlow::Continue(()))
}

fn wraps_close(g: &KGraph, seq: &[Vertex]) -> bool {
    let n = seq.len();
    let k = g.k();
    (n + 1 - k..n).all(|i| {
        let e: VertexSet = (0..k).map(|d| seq[(i + d) % n]).collect();
        g.contains_edge(e)
    })
}

/// Extends `path` to a tight Hamilton cycle by exhaustive search over the
/// orderings of the remaining vertices, smallest vertex first.
pub fn complete_to_cycle(g: &KGraph, path: &TightPath, budget: u64) -> Result<TightCycle, CycleError> {
    g.require_cycle_domain()?;
    let left = g.vertex_set().difference(path.vertex_set());
    let mut seq = path.vertices().to_vec();
    let mut nodes = 0u64;
    let mut found = None;
    let _ = visit_paths(g, &mut seq, left, &mut nodes, budget, &mut |seq| {
        if wraps_close(g, seq) {
            found = Some(seq.to_vec());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    match found {
        Some(order) => Ok(TightCycle::new(g, order)?),
        None => Err(CycleError::NoCompletion { nodes }),
    }
}

/// How each segment's weighting is obtained.
#[derive(Clone, Debug)]
pub enum WeightPolicy {
    MatchingAverage,
    Optimize(Objective),
    /// A weighting of the host graph, restricted to each residual graph.
    Provided(EdgeWeighting),
}

#[derive(Clone, Debug)]
pub struct GrowConfig {
    pub policy: WeightPolicy,
    /// Explicit segment lengths; `None` uses κ_i = round(√n_i).
    pub schedule: Option<Vec<usize>>,
    /// Shorten an explicit schedule that needs more vertices than exist.
    pub clip_schedule: bool,
    /// Dirac parameter of the host; defaults to the measured value.
    pub gamma: Option<f64>,
    /// Goodness threshold per segment as a function of the residual order;
    /// `None` uses n_i^{3/10} + (k − 1).
    pub threshold: Option<f64>,
    pub retries: usize,
    pub strict_mode: bool,
    /// Optional start tuple; by default a seeded random one.
    pub start: Option<OrderedTuple>,
    /// Fraction of vertices held back from growth and left for completion.
    pub reserve_fraction: f64,
    pub budget: u64,
}

impl Default for GrowConfig {
    fn default() -> Self {
        GrowConfig {
            policy: WeightPolicy::MatchingAverage,
            schedule: None,
            clip_schedule: false,
            gamma: None,
            threshold: None,
            retries: 20,
            strict_mode: false,
            start: None,
            reserve_fraction: 0.0,
            budget: DEFAULT_NODE_BUDGET,
        }
    }
}

/// Threshold used for a segment walk on `n_i` vertices.
pub fn segment_threshold(n_i: usize, k: usize) -> f64 {
    (n_i as f64).powf(0.3) + (k - 1) as f64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedgerSegment {
    pub residual_order: usize,
    pub kappa: usize,
    pub gamma: f64,
    /// Largest transition probability met by any attempted walk.
    pub p_hat: f64,
    /// Estimated probability that a walk is accepted.
    pub g_hat: f64,
    pub attempts: usize,
    /// κ·ln(1/p̂) + ln ĝ.
    pub log_term: f64,
    /// 16C²/n_i when a normality constant is known.
    pub reference_p: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountLedger {
    pub segments: Vec<LedgerSegment>,
    pub log_lower_bound: f64,
    /// c with (c·n)^{Σκ} = N̂.
    pub c_hat: f64,
    /// False when ĝ had to be clamped to 1/samples.
    pub sound: bool,
    pub warnings: Vec<String>,
}

impl CountLedger {
    fn from_segments(segments: Vec<LedgerSegment>, n: usize, sound: bool, warnings: Vec<String>) -> Self {
        let log_lower_bound: f64 = segments.iter().map(|s| s.log_term).sum();
        let steps: usize = segments.iter().map(|s| s.kappa).sum();
        let c_hat = if steps == 0 {
            0.0
        } else {
            (log_lower_bound / steps as f64).exp() / n as f64
        };
        CountLedger {
            segments,
            log_lower_bound,
            c_hat,
            sound,
            warnings,
        }
    }

    pub fn recomputed_bound(&self) -> f64 {
        self.segments
            .iter()
            .map(|s| s.kappa as f64 * (1.0 / s.p_hat).ln() + s.g_hat.ln())
            .sum()
    }

    pub fn segments_csv(&self) -> String {
        let mut s = String::from("segment,residual_order,kappa,gamma,p_hat,g_hat,attempts,log_term\n");
        for (i, seg) in self.segments.iter().enumerate() {
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                i, seg.residual_order, seg.kappa, seg.gamma, seg.p_hat, seg.g_hat, seg.attempts, seg.log_term
            ));
        }
        s
    }
}

/// Planned segments (n_i, κ_i, γ_i).
pub fn default_schedule(n: usize, k: usize, gamma: f64, strict: bool) -> (Vec<(usize, usize, f64)>, Vec<String>) {
    let floor = ((n as f64).powf(7.0 / 8.0).round() as usize).max(k + 3);
    let mut out = Vec::new();
    let mut warnings = Vec::new();
    let mut n_i = n;
    let mut g_i = gamma;
    while n_i >= floor {
        if g_i < gamma / 2.0 {
            if strict {
                warnings.push(format!("stopped: γ_i = {g_i:.4} fell below γ/2"));
                break;
            }
            if !warnings.iter().any(|w| w.starts_with("γ_i")) {
                warnings.push(format!("γ_i = {g_i:.4} fell below γ/2 at n_i = {n_i}; continuing"));
            }
        }
        let kappa = ((n_i as f64).sqrt().round() as usize).max(1);
        out.push((n_i, kappa, g_i));
        g_i -= (n_i as f64).powf(-2.0 / 3.0);
        n_i -= kappa;
    }
    (out, warnings)
}

/// Segments (n_i, κ_i, γ_i) for `cfg` on a host of `order` vertices.
pub fn plan_schedule(
    order: usize,
    k: usize,
    gamma: f64,
    cfg: &GrowConfig,
) -> (Vec<(usize, usize, f64)>, Vec<String>) {
    let Some(lengths) = &cfg.schedule else {
        return default_schedule(order, k, gamma, cfg.strict_mode);
    };
    let mut plan = Vec::new();
    let mut n_i = order;
    let mut g_i = gamma;
    let mut warnings = Vec::new();
    for &kappa in lengths {
        let room = (n_i + 1).saturating_sub(k);
        let kappa = if kappa > room && cfg.clip_schedule {
            warnings.push(format!("segment length {kappa} clipped to {room}"));
            room
        } else {
            kappa
        };
        if kappa == 0 {
            break;
        }
        plan.push((n_i, kappa, g_i));
        g_i -= (n_i as f64).powf(-2.0 / 3.0);
        n_i = n_i.saturating_sub(kappa);
    }
    (plan, warnings)
}

fn weighting_for(policy: &WeightPolicy, h: &KGraph, budget: u64) -> Result<EdgeWeighting, CycleError> {
    Ok(match policy {
        WeightPolicy::MatchingAverage => matching_average_weighting(
            h,
            AverageOptions {
                budget,
                ..AverageOptions::default()
            },
        )?,
        WeightPolicy::Optimize(obj) => optimize_weighting(h, *obj)?,
        WeightPolicy::Provided(x) => x.restrict(h)?,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GrowResult {
    pub path: TightPath,
    pub ledger: CountLedger,
    /// δ of the final residual graph and its order.
    pub final_min_codegree: usize,
    pub final_residual_order: usize,
    /// δ_final/|V_final| − (1/2 + γ).
    pub final_slack: f64,
}

/// Grows a long tight path by consecutive self-avoiding walks, each on the
/// graph left over by the previous ones.
pub fn grow_long_path(g: &KGraph, cfg: &GrowConfig, seed: u64) -> Result<GrowResult, CycleError> {
    g.require_cycle_domain()?;
    let k = g.k();
    let n = g.order();
    let gamma = cfg.gamma.unwrap_or_else(|| g.measured_gamma());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<Vertex> = g.vertices().collect();
    order.shuffle(&mut rng);
    let reserve = (cfg.reserve_fraction * n as f64).round() as usize;
    let reserved: VertexSet = order[..reserve].iter().copied().collect();
    let host = g.residual(reserved);
    if host.order() < k {
        return Err(CycleError::InvalidParameters("reserve leaves fewer than k vertices".into()));
    }
    let start = match &cfg.start {
        Some(s) => OrderedTuple::for_graph(&host, s.as_slice().to_vec())?,
        None => OrderedTuple::new(order[reserve..reserve + k - 1].to_vec())?,
    };
    let (plan, mut warnings) = plan_schedule(host.order(), k, gamma, cfg);
    let mut path: Vec<Vertex> = start.as_slice().to_vec();
    let mut current = host.clone();
    let mut segments = Vec::new();
    for (idx, &(n_i, kappa, gamma_i)) in plan.iter().enumerate() {
        debug_assert_eq!(current.order(), n_i.min(current.order()));
        let x = weighting_for(&cfg.policy, &current, cfg.budget)?;
        let tuple = OrderedTuple::new(path[path.len() + 1 - k..].to_vec())?;
        let theta = cfg.threshold.unwrap_or_else(|| segment_threshold(current.order(), k));
        let mut p_hat = 0.0f64;
        let mut accepted = None;
        let mut diagnostics = Vec::new();
        let seg_seed = derive_seed(seed, idx as u64 + 1);
        for attempt in 0..cfg.retries.max(1) {
            let wc = WalkConfig::from_tuple(
                WalkMode::SelfAvoiding,
                tuple.clone(),
                kappa,
                derive_seed(seg_seed, attempt as u64),
            );
            let trace = run_walk(&current, &x, &wc)?;
            p_hat = trace.max_step_probability.iter().copied().fold(p_hat, f64::max);
            if !trace.is_completed() {
                diagnostics.push("terminated".to_string());
                continue;
            }
            let report = goodness_report(&current, &trace, theta, 0)?;
            if !report.is_good {
                diagnostics.push(format!("max_error {:.3}", report.max_error));
                continue;
            }
            let removed: VertexSet = trace.vertices[..kappa].iter().copied().collect();
            let audit = audit_step(&current, &x, removed, gamma_i, x.profile().normality_c);
            if !audit.dirac_ok {
                diagnostics.push(format!("dirac slack {:.3}", audit.dirac_slack));
                continue;
            }
            accepted = Some((trace, attempt + 1, removed));
            break;
        }
        let Some((trace, attempts, removed)) = accepted else {
            diagnostics.dedup();
            return Err(CycleError::RetriesExhausted {
                segment: idx,
                attempts: cfg.retries.max(1),
                diagnostics: diagnostics.join("; "),
            });
        };
        let g_hat = 1.0 / attempts as f64;
        let normality = x.profile().normality_c;
        segments.push(LedgerSegment {
            residual_order: current.order(),
            kappa,
            gamma: gamma_i,
            p_hat,
            g_hat,
            attempts,
            log_term: kappa as f64 * (1.0 / p_hat).ln() + g_hat.ln(),
            reference_p: Some(16.0 * normality * normality / current.order() as f64),
        });
        path.extend_from_slice(&trace.vertices[k - 1..]);
        current = current.residual(removed);
    }
    let delta = current.min_codegree().value;
    let m = current.order();
    let final_slack = delta as f64 / m as f64 - (0.5 + gamma);
    if final_slack < 0.0 {
        warnings.push(format!("final residual slack {final_slack:.3}"));
    }
    Ok(GrowResult {
        path: TightPath::new(g, path)?,
        ledger: CountLedger::from_segments(segments, n, true, warnings),
        final_min_codegree: delta,
        final_residual_order: m,
        final_slack,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SampleSummary {
    pub samples: u64,
    pub successes: u64,
    pub failures: u64,
    /// Distinct cycles in canonical form.
    pub distinct: Vec<TightCycle>,
    /// 1 − distinct/successes.
    pub collision_rate: f64,
    pub ledgers: Vec<CountLedger>,
    pub failure_messages: Vec<String>,
}

/// Growth followed by completion, `samples` times with derived seeds.
pub fn sample_hamilton_cycles(
    g: &KGraph,
    samples: u64,
    seed: u64,
    cfg: &GrowConfig,
) -> SampleSummary {
    let outcomes: Vec<Result<(TightCycle, CountLedger), CycleError>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let grown = grow_long_path(g, cfg, derive_seed(seed, i))?;
            let cycle = complete_to_cycle(g, &grown.path, cfg.budget)?;
            Ok((cycle, grown.ledger))
        })
        .collect();
    let mut distinct = BTreeSet::new();
    let mut ledgers = Vec::new();
    let mut failure_messages = Vec::new();
    for o in outcomes {
        match o {
            Ok((c, l)) => {
                distinct.insert(c);
                ledgers.push(l);
            }
            Err(e) => failure_messages.push(e.to_string()),
        }
    }
    let successes = ledgers.len() as u64;
    SampleSummary {
        samples,
        successes,
        failures: samples - successes,
        collision_rate: if successes == 0 {
            0.0
        } else {
            1.0 - distinct.len() as f64 / successes as f64
        },
        distinct: distinct.into_iter().collect(),
        ledgers,
        failure_messages,
    }
}

/// Single-segment count estimate from `samples` seeded walks.
pub fn lower_bound_ledger(
    g: &KGraph,
    x: &EdgeWeighting,
    start: Option<&OrderedTuple>,
    kappa: usize,
    samples: u64,
    threshold: f64,
    seed: u64,
) -> Result<CountLedger, CycleError> {
    if samples == 0 {
        return Err(CycleError::EmptySample);
    }
    let k = g.k();
    let limit = g.order() + 1 - k;
    if kappa > limit {
        return Err(GoodnessError::WalkTooLong { kappa, limit }.into());
    }
    let start = match start {
        Some(s) => s.clone(),
        None => OrderedTuple::new(g.vertices().take(k - 1).collect())?,
    };
    let results: Vec<(f64, bool)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let cfg = WalkConfig::from_tuple(WalkMode::SelfAvoiding, start.clone(), kappa, derive_seed(seed, i));
            let t = run_walk(g, x, &cfg)?;
            let top = t.max_step_probability.iter().copied().fold(0.0, f64::max);
            let good = t.is_completed() && goodness_report(g, &t, threshold, 0)?.is_good;
            Ok((top, good))
        })
        .collect::<Result<_, CycleError>>()?;
    let p_hat = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let good = results.iter().filter(|r| r.1).count() as u64;
    let raw = good as f64 / samples as f64;
    let clamped = raw < 1.0 / samples as f64;
    let g_hat = raw.max(1.0 / samples as f64);
    let p_hat = if kappa == 0 { 1.0 } else { p_hat };
    let normality = x.profile().normality_c;
    let seg = LedgerSegment {
        residual_order: g.order(),
        kappa,
        gamma: g.measured_gamma(),
        p_hat,
        g_hat,
        attempts: samples as usize,
        log_term: kappa as f64 * (1.0 / p_hat).ln() + g_hat.ln(),
        reference_p: Some(16.0 * normality * normality / g.order() as f64),
    };
    let mut warnings = Vec::new();
    if clamped {
        warnings.push("no good walk observed; ĝ clamped to 1/samples".into());
    }
    Ok(CountLedger::from_segments(vec![seg], g.order(), !clamped, warnings))
}

/// Number of tight paths that start with `start` and add exactly `kappa` new vertices.
pub fn count_segment_paths(g: &KGraph, start: &OrderedTuple, kappa: usize) -> u64 {
    fn rec(g: &KGraph, seq: &mut Vec<Vertex>, used: VertexSet, left: usize) -> u64 {
        if left == 0 {
            return 1;
        }
        let k = g.k();
        let s: VertexSet = seq[seq.len() + 1 - k..].iter().copied().collect();
        let mut total = 0;
        for v in g.neighbors(s).difference(used).iter() {
            seq.push(v);
            total += rec(g, seq, used.with(v), left - 1);
            seq.pop();
        }
        total
    }
    let mut seq = start.as_slice().to_vec();
    rec(g, &mut seq, start.as_set(), kappa)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConnectivityReport {
    pub connected: bool,
    pub failing_pair: Option<(Vec<Vertex>, Vec<Vertex>)>,
    pub pairs_checked: u64,
}

/// Whether every pair of disjoint ordered (k-1)-tuples are the ends of a tight Hamilton path.
pub fn is_tight_hamilton_connected(g: &KGraph, budget: u64) -> Result<ConnectivityReport, CycleError> {
    g.require_cycle_domain()?;
    let k = g.k();
    let tuples = crate::walk::TupleSpace::new(g);
    let mut nodes = 0u64;
    let mut pairs = 0u64;
    for i in 0..tuples.len() {
        let s = tuples.tuple(i).to_vec();
        let s_set: VertexSet = s.iter().copied().collect();
        // reversed last k-1 vertices of every Hamilton path starting with s
        let mut ends: HashSet<Vec<Vertex>> = HashSet::new();
        let mut seq = s.clone();
        let _ = visit_paths(g, &mut seq, g.vertex_set().difference(s_set), &mut nodes, budget, &mut |seq| {
            ends.insert(seq[seq.len() + 1 - k..].iter().rev().copied().collect());
            ControlFlow::Continue(())
        })?;
        for j in 0..tuples.len() {
            let t = tuples.tuple(j);
            if t.iter().any(|v| s_set.contains(*v)) {
                continue;
            }
            pairs += 1;
            if !ends.contains(t) {
                return Ok(ConnectivityReport {
                    connected: false,
                    failing_pair: Some((s, t.to_vec())),
                    pairs_checked: pairs,
                });
            }
        }
    }
    Ok(ConnectivityReport {
        connected: true,
        failing_pair: None,
        pairs_checked: pairs,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub trials: u64,
    pub successes: u64,
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// 1 − e^{−√m}.
    pub reference: f64,
    pub gamma: f64,
    pub fixed_parts: Vec<Vec<Vertex>>,
}

/// Minimum over (k-1)-subsets S of `within` of |N(S) ∩ within|.
pub fn min_codegree_within(g: &KGraph, within: VertexSet) -> usize {
    within
        .subsets(g.k() - 1)
        .map(|s| g.neighbors(s).intersection(within).len())
        .min()
        .unwrap_or(0)
}

/// Partitions V into parts of size `part` (seeded), fixes `t` parts and asks
/// how often `t` fixed plus `m` random further parts induce a γ/2-Dirac graph.
pub fn subset_dirac_probe(
    g: &KGraph,
    part: usize,
    t: usize,
    m: usize,
    trials: u64,
    seed: u64,
    gamma: Option<f64>,
) -> Result<ProbeResult, CycleError> {
    let n = g.order();
    if part == 0 || n % part != 0 {
        return Err(CycleError::Divisibility { n, step: part });
    }
    let blocks = n / part;
    if t + m > blocks {
        return Err(CycleError::SizeViolated(format!(
            "t + m = {} exceeds the {blocks} parts",
            t + m
        )));
    }
    if trials == 0 {
        return Err(CycleError::EmptySample);
    }
    let gamma = gamma.unwrap_or_else(|| g.measured_gamma());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut verts: Vec<Vertex> = g.vertices().collect();
    verts.shuffle(&mut rng);
    let parts: Vec<VertexSet> = verts.chunks(part).map(|c| c.iter().copied().collect()).collect();
    let mut ids: Vec<usize> = (0..blocks).collect();
    ids.shuffle(&mut rng);
    let fixed: Vec<usize> = ids[..t].to_vec();
    let rest: Vec<usize> = ids[t..].to_vec();
    let base: VertexSet = fixed.iter().fold(VertexSet::EMPTY, |a, &i| a.union(parts[i]));
    let successes: u64 = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut r = ChaCha8Rng::seed_from_u64(derive_seed(seed, i));
            let chosen = rest.choose_multiple(&mut r, m);
            let u = chosen.fold(base, |a, &j| a.union(parts[j]));
            let delta = min_codegree_within(g, u);
            u64::from(delta as f64 >= (0.5 + gamma / 2.0) * u.len() as f64)
        })
        .sum();
    let (ci_low, ci_high) = wilson_interval(successes, trials, Z_95);
    Ok(ProbeResult {
        trials,
        successes,
        rate: successes as f64 / trials as f64,
        ci_low,
        ci_high,
        reference: 1.0 - (-(m as f64).sqrt()).exp(),
        gamma,
        fixed_parts: fixed.iter().map(|&i| parts[i].to_vec()).collect(),
    })
}
