//! Weighted walks on ordered (k-1)-tuples.
//!
//! A walk keeps its last `k-1` vertices as the current tuple `S` and moves to
//! `v` with probability proportional to `x(S ∪ {v})`. The self-avoiding walk
//! only considers unvisited `v`; the simple walk considers every neighbour of
//! `S`; the stationary walk is the simple walk started from its stationary law.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::ops::ControlFlow;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{KGraph, OrderedTuple};
use crate::matching::EdgeWeighting;
use crate::vset::{Vertex, VertexSet};

pub const GENERATOR: &str = "chacha8";

#[derive(Debug, Error, PartialEq)]
pub enum WalkError {
    #[error("dead end at tuple {0:?}: every neighbour already visited")]
    DeadEnd(Vec<Vertex>),
    #[error("tuple {0:?} has no neighbours")]
    IsolatedTuple(Vec<Vertex>),
    #[error("chain is not irreducible: no walk from {from:?} to {to:?}")]
    NotIrreducible { from: Vec<Vertex>, to: Vec<Vertex> },
    #[error("enumeration budget of {0} walks exceeded")]
    BudgetExceeded(u64),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("distributions live on different domains")]
    DomainMismatch,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WalkMode {
    SelfAvoiding,
    Simple,
    Stationary,
}

/// A probability distribution over vertices or over ordered tuples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "domain", content = "probabilities", rename_all = "snake_case")]
pub enum Distribution {
    Vertices(BTreeMap<Vertex, f64>),
    Tuples(BTreeMap<Vec<Vertex>, f64>),
}

impl Distribution {
    pub fn point_tuple(t: &OrderedTuple) -> Self {
        Distribution::Tuples(BTreeMap::from([(t.as_slice().to_vec(), 1.0)]))
    }

    pub fn point_vertex(v: Vertex) -> Self {
        Distribution::Vertices(BTreeMap::from([(v, 1.0)]))
    }

    pub fn total(&self) -> f64 {
        match self {
            Distribution::Vertices(m) => m.values().sum(),
            Distribution::Tuples(m) => m.values().sum(),
        }
    }

    pub fn vertex_prob(&self, v: Vertex) -> f64 {
        match self {
            Distribution::Vertices(m) => m.get(&v).copied().unwrap_or(0.0),
            Distribution::Tuples(_) => 0.0,
        }
    }

    pub fn tuple_prob(&self, t: &[Vertex]) -> f64 {
        match self {
            Distribution::Tuples(m) => m.get(t).copied().unwrap_or(0.0),
            Distribution::Vertices(_) => 0.0,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Distribution::Vertices(m) => m.len(),
            Distribution::Tuples(m) => m.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Law of the last coordinate of a tuple distribution.
    pub fn last_vertex(&self) -> Distribution {
        match self {
            Distribution::Vertices(_) => self.clone(),
            Distribution::Tuples(m) => {
                let mut out = BTreeMap::new();
                for (t, p) in m {
                    *out.entry(*t.last().expect("non-empty tuple")).or_insert(0.0) += p;
                }
                Distribution::Vertices(out)
            }
        }
    }

    /// Checks nonnegativity and total mass 1 ± `tol`.
    pub fn is_normalized(&self, tol: f64) -> bool {
        let ok = |p: &f64| *p >= 0.0 && p.is_finite();
        let nonneg = match self {
            Distribution::Vertices(m) => m.values().all(ok),
            Distribution::Tuples(m) => m.values().all(ok),
        };
        nonneg && (self.total() - 1.0).abs() <= tol
    }
}

/// `d_TV(μ, ν) = ½ Σ |μ(s) − ν(s)|`.
pub fn tv_distance(mu: &Distribution, nu: &Distribution) -> Result<f64, WalkError> {
    fn half_l1<K: Ord>(a: &BTreeMap<K, f64>, b: &BTreeMap<K, f64>) -> f64 {
        let mut s = 0.0;
        for (key, p) in a {
            s += (p - b.get(key).copied().unwrap_or(0.0)).abs();
        }
        for (key, q) in b {
            if !a.contains_key(key) {
                s += q.abs();
            }
        }
        s / 2.0
    }
    match (mu, nu) {
        (Distribution::Vertices(a), Distribution::Vertices(b)) => Ok(half_l1(a, b)),
        (Distribution::Tuples(a), Distribution::Tuples(b)) => Ok(half_l1(a, b)),
        _ => Err(WalkError::DomainMismatch),
    }
}

/// Weighted candidates for the next vertex, ascending by id.
fn candidates(
    g: &KGraph,
    x: &EdgeWeighting,
    tuple: &[Vertex],
    visited: VertexSet,
    mode: WalkMode,
) -> Result<Vec<(Vertex, f64)>, WalkError> {
    let s: VertexSet = tuple.iter().copied().collect();
    let nb = g.neighbors(s);
    if nb.is_empty() && mode != WalkMode::SelfAvoiding {
        return Err(WalkError::IsolatedTuple(tuple.to_vec()));
    }
    let pool = match mode {
        WalkMode::SelfAvoiding => nb.difference(visited),
        _ => nb,
    };
    if pool.is_empty() {
        return Err(WalkError::DeadEnd(tuple.to_vec()));
    }
    Ok(pool.iter().map(|v| (v, x.weight(s.with(v)))).collect())
}

/// Law of the next vertex from `tuple`.
pub fn step_distribution(
    g: &KGraph,
    x: &EdgeWeighting,
    tuple: &OrderedTuple,
    visited: VertexSet,
    mode: WalkMode,
) -> Result<Distribution, WalkError> {
    let c = candidates(g, x, tuple.as_slice(), visited, mode)?;
    let total: f64 = c.iter().map(|(_, w)| w).sum();
    Ok(Distribution::Vertices(
        c.into_iter().map(|(v, w)| (v, w / total)).collect(),
    ))
}

/// Inverse-CDF draw from weighted items in their given order.
fn draw<T: Copy>(rng: &mut impl Rng, items: &[(T, f64)]) -> T {
    let total: f64 = items.iter().map(|(_, w)| w).sum();
    let u = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    for &(item, w) in items {
        acc += w;
        if u < acc {
            return item;
        }
    }
    items.last().expect("non-empty candidates").0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WalkStart {
    Tuple(OrderedTuple),
    Distribution(Distribution),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub mode: WalkMode,
    pub start: Option<WalkStart>,
    pub length: usize,
    pub seed: u64,
}

impl WalkConfig {
    pub fn from_tuple(mode: WalkMode, start: OrderedTuple, length: usize, seed: u64) -> Self {
        WalkConfig {
            mode,
            start: Some(WalkStart::Tuple(start)),
            length,
            seed,
        }
    }

    pub fn stationary(length: usize, seed: u64) -> Self {
        WalkConfig {
            mode: WalkMode::Stationary,
            start: None,
            length,
            seed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WalkStatus {
    Completed,
    Terminated { step: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkTrace {
    pub mode: WalkMode,
    pub seed: u64,
    pub generator: String,
    pub status: WalkStatus,
    /// The start tuple followed by one vertex per completed step.
    pub vertices: Vec<Vertex>,
    /// Number of candidate vertices at each attempted step.
    pub set_sizes: Vec<usize>,
    /// Largest transition probability among the candidates of each completed step.
    pub max_step_probability: Vec<f64>,
}

impl WalkTrace {
    pub fn steps(&self, k: usize) -> usize {
        self.vertices.len() + 1 - k
    }

    pub fn current_tuple(&self, k: usize) -> &[Vertex] {
        &self.vertices[self.vertices.len() + 1 - k..]
    }

    pub fn is_completed(&self) -> bool {
        self.status == WalkStatus::Completed
    }
}

fn sample_tuple(rng: &mut impl Rng, mu: &Distribution) -> Result<Vec<Vertex>, WalkError> {
    match mu {
        Distribution::Tuples(m) if !m.is_empty() => {
            let items: Vec<(usize, f64)> = m.values().copied().enumerate().collect();
            let i = draw(rng, &items);
            Ok(m.keys().nth(i).expect("index in range").clone())
        }
        _ => Err(WalkError::InvalidConfig(
            "start distribution must be a non-empty tuple distribution".into(),
        )),
    }
}

/// Samples a walk. Identical inputs give identical traces.
pub fn run_walk(g: &KGraph, x: &EdgeWeighting, cfg: &WalkConfig) -> Result<WalkTrace, WalkError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let start: Vec<Vertex> = match (&cfg.mode, &cfg.start) {
        (WalkMode::Stationary, None) => {
            let pi = stationary_distribution(g, x)?;
            sample_tuple(&mut rng, &pi)?
        }
        (WalkMode::Stationary, Some(_)) => {
            return Err(WalkError::InvalidConfig(
                "stationary mode takes no start".into(),
            ))
        }
        (_, None) => return Err(WalkError::InvalidConfig("a start is required".into())),
        (_, Some(WalkStart::Tuple(t))) => t.as_slice().to_vec(),
        (_, Some(WalkStart::Distribution(mu))) => sample_tuple(&mut rng, mu)?,
    };
    let k = g.k();
    if start.len() != k - 1 || start.iter().any(|&v| !g.vertex_set().contains(v)) {
        return Err(WalkError::InvalidConfig(format!(
            "start {start:?} is not a (k-1)-tuple of the graph"
        )));
    }
    let step_mode = match cfg.mode {
        WalkMode::SelfAvoiding => WalkMode::SelfAvoiding,
        _ => WalkMode::Simple,
    };
    let mut vertices = start;
    let mut visited: VertexSet = vertices.iter().copied().collect();
    let mut set_sizes = Vec::with_capacity(cfg.length);
    let mut max_step_probability = Vec::with_capacity(cfg.length);
    let mut status = WalkStatus::Completed;
    for step in 1..=cfg.length {
        let tuple = &vertices[vertices.len() + 1 - k..];
        match candidates(g, x, tuple, visited, step_mode) {
            Ok(c) => {
                set_sizes.push(c.len());
                let total: f64 = c.iter().map(|(_, w)| w).sum();
                let top = c.iter().map(|(_, w)| *w).fold(0.0, f64::max);
                max_step_probability.push(top / total);
                let v = draw(&mut rng, &c);
                vertices.push(v);
                visited.insert(v);
            }
            Err(WalkError::DeadEnd(_)) => {
                set_sizes.push(0);
                status = WalkStatus::Terminated { step };
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(WalkTrace {
        mode: cfg.mode,
        seed: cfg.seed,
        generator: GENERATOR.into(),
        status,
        vertices,
        set_sizes,
        max_step_probability,
    })
}

/// Ordered (k-1)-tuples of distinct vertices of `g`, in lexicographic order.
#[derive(Clone, Debug)]
pub struct TupleSpace {
    tuples: Vec<Vec<Vertex>>,
    index: HashMap<Vec<Vertex>, usize>,
}

impl TupleSpace {
    pub fn new(g: &KGraph) -> Self {
        let verts: Vec<Vertex> = g.vertices().collect();
        let mut tuples = Vec::new();
        let mut cur = Vec::with_capacity(g.k() - 1);
        fn rec(verts: &[Vertex], len: usize, cur: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
            if cur.len() == len {
                out.push(cur.clone());
                return;
            }
            for &v in verts {
                if !cur.contains(&v) {
                    cur.push(v);
                    rec(verts, len, cur, out);
                    cur.pop();
                }
            }
        }
        rec(&verts, g.k() - 1, &mut cur, &mut tuples);
        let index = tuples.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        TupleSpace { tuples, index }
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuple(&self, i: usize) -> &[Vertex] {
        &self.tuples[i]
    }

    pub fn index_of(&self, t: &[Vertex]) -> Option<usize> {
        self.index.get(t).copied()
    }

    fn to_distribution(&self, mass: &[f64]) -> Distribution {
        Distribution::Tuples(
            mass.iter()
                .enumerate()
                .filter(|(_, &p)| p != 0.0)
                .map(|(i, &p)| (self.tuples[i].clone(), p))
                .collect(),
        )
    }

    fn to_vector(&self, mu: &Distribution) -> Result<Vec<f64>, WalkError> {
        let Distribution::Tuples(m) = mu else {
            return Err(WalkError::DomainMismatch);
        };
        let mut out = vec![0.0; self.len()];
        for (t, &p) in m {
            let i = self.index_of(t).ok_or(WalkError::DomainMismatch)?;
            out[i] += p;
        }
        Ok(out)
    }
}

/// Sparse transition kernel of the simple walk on tuples.
#[derive(Clone, Debug)]
pub struct TupleChain {
    pub space: TupleSpace,
    /// `rows[i]` lists `(j, P(i, j))`; empty for isolated tuples.
    rows: Vec<Vec<(usize, f64)>>,
    /// Σ_v x(M ∪ {v}) per tuple.
    out_weight: Vec<f64>,
}

impl TupleChain {
    pub fn new(g: &KGraph, x: &EdgeWeighting) -> Self {
        let space = TupleSpace::new(g);
        let mut rows = Vec::with_capacity(space.len());
        let mut out_weight = Vec::with_capacity(space.len());
        for t in &space.tuples {
            let s: VertexSet = t.iter().copied().collect();
            let c: Vec<(Vertex, f64)> = g.neighbors(s).iter().map(|v| (v, x.weight(s.with(v)))).collect();
            let total: f64 = c.iter().map(|(_, w)| w).sum();
            out_weight.push(total);
            let mut next = t[1..].to_vec();
            next.push(0);
            let row = c
                .into_iter()
                .map(|(v, w)| {
                    *next.last_mut().unwrap() = v;
                    (space.index_of(&next).expect("tuple in space"), w / total)
                })
                .collect();
            rows.push(row);
        }
        TupleChain {
            space,
            rows,
            out_weight,
        }
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    /// One step of μ ↦ μP.
    pub fn push(&self, mass: &[f64]) -> Result<Vec<f64>, WalkError> {
        let mut out = vec![0.0; mass.len()];
        for (i, &p) in mass.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            if self.rows[i].is_empty() {
                return Err(WalkError::IsolatedTuple(self.space.tuple(i).to_vec()));
            }
            for &(j, q) in &self.rows[i] {
                out[j] += p * q;
            }
        }
        Ok(out)
    }

    /// π(M) ∝ Σ_v x(M ∪ {v}).
    pub fn stationary_vector(&self) -> Vec<f64> {
        let total: f64 = self.out_weight.iter().sum();
        self.out_weight.iter().map(|w| w / total).collect()
    }

    /// Strong connectivity of the chain on non-isolated tuples, with a witness pair.
    pub fn check_irreducible(&self) -> Result<(), WalkError> {
        let support: Vec<usize> = (0..self.space.len()).filter(|&i| !self.rows[i].is_empty()).collect();
        let Some(&root) = support.first() else {
            return Err(WalkError::PreconditionViolated("graph has no edges".into()));
        };
        let mut reverse: Vec<Vec<usize>> = vec![Vec::new(); self.space.len()];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, _) in row {
                reverse[j].push(i);
            }
        }
        let reach = |adj: &dyn Fn(usize) -> Vec<usize>| {
            let mut seen = vec![false; self.space.len()];
            seen[root] = true;
            let mut queue = VecDeque::from([root]);
            while let Some(i) = queue.pop_front() {
                for j in adj(i) {
                    if !seen[j] {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
            }
            seen
        };
        let fwd = reach(&|i| self.rows[i].iter().map(|&(j, _)| j).collect());
        if let Some(&j) = support.iter().find(|&&j| !fwd[j]) {
            return Err(WalkError::NotIrreducible {
                from: self.space.tuple(root).to_vec(),
                to: self.space.tuple(j).to_vec(),
            });
        }
        let back = reach(&|i| reverse[i].clone());
        if let Some(&j) = support.iter().find(|&&j| !back[j]) {
            return Err(WalkError::NotIrreducible {
                from: self.space.tuple(j).to_vec(),
                to: self.space.tuple(root).to_vec(),
            });
        }
        Ok(())
    }
}

/// The stationary law of the simple walk.
pub fn stationary_distribution(g: &KGraph, x: &EdgeWeighting) -> Result<Distribution, WalkError> {
    let chain = TupleChain::new(g, x);
    chain.check_irreducible()?;
    Ok(chain.space.to_distribution(&chain.stationary_vector()))
}

/// ‖πP − π‖₁ for the distribution `pi` under the simple-walk kernel.
pub fn stationarity_residual(g: &KGraph, x: &EdgeWeighting, pi: &Distribution) -> Result<f64, WalkError> {
    let chain = TupleChain::new(g, x);
    let v = chain.space.to_vector(pi)?;
    let w = chain.push(&v)?;
    Ok(v.iter().zip(&w).map(|(a, b)| (a - b).abs()).sum())
}

/// P[current vertex = v] under π: `Σ_{e∋v} x(e) / Σ_{v'} Σ_{e∋v'} x(e)`.
pub fn vertex_marginal(g: &KGraph, x: &EdgeWeighting) -> Result<Distribution, WalkError> {
    TupleChain::new(g, x).check_irreducible()?;
    Ok(vertex_marginal_unchecked(g, x))
}

fn vertex_marginal_unchecked(g: &KGraph, x: &EdgeWeighting) -> Distribution {
    let sums = x.vertex_sums(g);
    let total: f64 = sums.iter().map(|(_, s)| s).sum();
    Distribution::Vertices(sums.into_iter().map(|(v, s)| (v, s / total)).collect())
}

/// Exact law of the simple walk after `t` steps from `mu0`.
pub fn chain_distribution_at(
    g: &KGraph,
    x: &EdgeWeighting,
    mu0: &Distribution,
    t: usize,
) -> Result<Distribution, WalkError> {
    let chain = TupleChain::new(g, x);
    let mut v = chain.space.to_vector(mu0)?;
    for _ in 0..t {
        v = chain.push(&v)?;
    }
    Ok(chain.space.to_distribution(&v))
}

pub const DEFAULT_WALK_BUDGET: u64 = 10_000_000;

/// Exact law of the `q`-th new vertex of the self-avoiding walk from `start`,
/// by enumerating every self-avoiding walk of length `q`.
pub fn selfavoiding_distribution_at(
    g: &KGraph,
    x: &EdgeWeighting,
    start: &OrderedTuple,
    q: usize,
    budget: u64,
) -> Result<Distribution, WalkError> {
    let delta = g.min_codegree().value;
    if q > delta {
        return Err(WalkError::PreconditionViolated(format!(
            "q = {q} exceeds the minimum codegree {delta}"
        )));
    }
    if q == 0 {
        return Ok(Distribution::point_vertex(
            *start.as_slice().last().expect("non-empty tuple"),
        ));
    }
    let mut law: BTreeMap<Vertex, f64> = BTreeMap::new();
    let mut walks = 0u64;
    let mut path = start.as_slice().to_vec();
    let k = g.k();
    fn rec(
        g: &KGraph,
        x: &EdgeWeighting,
        k: usize,
        path: &mut Vec<Vertex>,
        visited: VertexSet,
        remaining: usize,
        prob: f64,
        law: &mut BTreeMap<Vertex, f64>,
        walks: &mut u64,
        budget: u64,
    ) -> Result<(), WalkError> {
        let tuple = &path[path.len() + 1 - k..];
        let c = candidates(g, x, tuple, visited, WalkMode::SelfAvoiding)?;
        let total: f64 = c.iter().map(|(_, w)| w).sum();
        for (v, w) in c {
            let p = prob * w / total;
            if remaining == 1 {
                *walks += 1;
                if *walks > budget {
                    return Err(WalkError::BudgetExceeded(budget));
                }
                *law.entry(v).or_insert(0.0) += p;
            } else {
                path.push(v);
                rec(g, x, k, path, visited.with(v), remaining - 1, p, law, walks, budget)?;
                path.pop();
            }
        }
        Ok(())
    }
    rec(
        g,
        x,
        k,
        &mut path,
        start.as_set(),
        q,
        1.0,
        &mut law,
        &mut walks,
        budget,
    )?;
    Ok(Distribution::Vertices(law))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixingPoint {
    pub q: usize,
    pub tv_tuple: f64,
    pub tv_vertex: f64,
}

/// TV distance to stationarity of the simple walk from `start`, at tuple and
/// current-vertex level, for q = 0..=q_max.
pub fn mixing_curve(
    g: &KGraph,
    x: &EdgeWeighting,
    start: &OrderedTuple,
    q_max: usize,
) -> Result<Vec<MixingPoint>, WalkError> {
    let chain = TupleChain::new(g, x);
    chain.check_irreducible()?;
    let pi_vec = chain.stationary_vector();
    let pi = chain.space.to_distribution(&pi_vec);
    let marginal = vertex_marginal_unchecked(g, x);
    let mut v = chain.space.to_vector(&Distribution::point_tuple(start))?;
    let mut out = Vec::with_capacity(q_max + 1);
    for q in 0..=q_max {
        if q > 0 {
            v = chain.push(&v)?;
        }
        let d = chain.space.to_distribution(&v);
        out.push(MixingPoint {
            q,
            tv_tuple: tv_distance(&d, &pi)?,
            tv_vertex: tv_distance(&d.last_vertex(), &marginal)?,
        });
    }
    Ok(out)
}

pub fn mixing_csv(points: &[MixingPoint]) -> String {
    let mut s = String::from("q,tv_tuple,tv_vertex\n");
    for p in points {
        s.push_str(&format!("{},{:e},{:e}\n", p.q, p.tv_tuple, p.tv_vertex));
    }
    s
}

/// Number of ℓ-walks from `s` to every tuple, indexed by the tuple space.
pub fn count_ell_walks_from(g: &KGraph, s: &OrderedTuple, ell: usize) -> (TupleSpace, Vec<BigUint>) {
    let space = TupleSpace::new(g);
    let mut counts = vec![BigUint::zero(); space.len()];
    match space.index_of(s.as_slice()) {
        Some(i) => counts[i] = BigUint::one(),
        None => return (space, counts),
    }
    let succ: Vec<Vec<usize>> = (0..space.len())
        .map(|i| {
            let t = space.tuple(i);
            let set: VertexSet = t.iter().copied().collect();
            let mut next = t[1..].to_vec();
            next.push(0);
            g.neighbors(set)
                .iter()
                .map(|v| {
                    *next.last_mut().unwrap() = v;
                    space.index_of(&next).expect("tuple in space")
                })
                .collect()
        })
        .collect();
    for _ in 0..ell {
        let mut out = vec![BigUint::zero(); space.len()];
        for (i, c) in counts.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &j in &succ[i] {
                out[j] += c;
            }
        }
        counts = out;
    }
    (space, counts)
}

/// Number of ℓ-walks from `s` to `t`: sequences v₁..v_{ℓ+k−1} starting with `s`,
/// ending with `t`, whose consecutive k-windows are edges.
pub fn count_ell_walks(g: &KGraph, s: &OrderedTuple, t: &OrderedTuple, ell: usize) -> BigUint {
    let (space, counts) = count_ell_walks_from(g, s, ell);
    space
        .index_of(t.as_slice())
        .map(|i| counts[i].clone())
        .unwrap_or_default()
}

/// SplitMix64 step, used to give each parallel sample its own stream.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Empirical law of the `q`-th new vertex over `runs` seeded walks.
pub fn empirical_position_law(
    g: &KGraph,
    x: &EdgeWeighting,
    cfg: &WalkConfig,
    q: usize,
    runs: u64,
) -> Result<(Distribution, u64), WalkError> {
    let k = g.k();
    let per_run: Vec<Option<Vertex>> = (0..runs)
        .into_par_iter()
        .map(|i| {
            let mut c = cfg.clone();
            c.seed = derive_seed(cfg.seed, i);
            c.length = q;
            run_walk(g, x, &c).map(|t| t.is_completed().then(|| t.vertices[k - 2 + q]))
        })
        .collect::<Result<_, _>>()?;
    let mut counts: BTreeMap<Vertex, u64> = BTreeMap::new();
    let mut terminated = 0u64;
    for v in per_run {
        match v {
            Some(v) => *counts.entry(v).or_insert(0) += 1,
            None => terminated += 1,
        }
    }
    let done = (runs - terminated).max(1) as f64;
    Ok((
        Distribution::Vertices(counts.into_iter().map(|(v, c)| (v, c as f64 / done)).collect()),
        terminated,
    ))
}

/// Enumerates all ℓ-walks from `s`, calling `visit` with each full vertex sequence.
pub fn visit_ell_walks<F>(g: &KGraph, s: &OrderedTuple, ell: usize, mut visit: F)
where
    F: FnMut(&[Vertex]) -> ControlFlow<()>,
{
    let k = g.k();
    let mut seq = s.as_slice().to_vec();
    fn rec<F: FnMut(&[Vertex]) -> ControlFlow<()>>(
        g: &KGraph,
        k: usize,
        seq: &mut Vec<Vertex>,
        left: usize,
        visit: &mut F,
    ) -> ControlFlow<()> {
        if left == 0 {
            return visit(seq);
        }
        let set: VertexSet = seq[seq.len() + 1 - k..].iter().copied().collect();
        for v in g.neighbors(set).iter() {
            seq.push(v);
            let flow = rec(g, k, seq, left - 1, visit);
            seq.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }
    let _ = rec(g, k, &mut seq, ell, &mut visit);
}
