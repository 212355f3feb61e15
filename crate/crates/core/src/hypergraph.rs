//! k-uniform hypergraphs with a codegree index.
//!
//! A [`KGraph`] lives on the id space `0..n` and carries an explicit set of
//! active vertices, so residual graphs keep the ids of the graph they were
//! cut from. Edges and (k-1)-sets are stored as [`VertexSet`] bitsets.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::vset::{Vertex, VertexSet, MAX_VERTICES};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("duplicate edge {0:?}")]
    DuplicateEdge(Vec<Vertex>),
    #[error("edge {0:?} does not have exactly k distinct vertices")]
    EdgeArity(Vec<Vertex>),
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("graphs are limited to {MAX_VERTICES} vertices, got {0}")]
    TooManyVertices(usize),
    #[error("domain too small: {vertices} vertices with k = {k} (need at least k+1)")]
    DomainTooSmall { vertices: usize, k: usize },
    #[error("dirac generation failed after {repairs} repair steps")]
    GenerationFailed { repairs: usize },
    #[error("{0}")]
    InvalidTuple(String),
    #[error("not a tight path: {0}")]
    InvalidPath(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A k-uniform hypergraph.
#[derive(Clone, Debug)]
pub struct KGraph {
    n: usize,
    k: usize,
    vertices: VertexSet,
    /// Sorted lexicographically by vertex list.
    edges: Vec<VertexSet>,
    edge_index: HashMap<VertexSet, usize>,
    /// (k-1)-set -> N_G(S). Only non-isolated sets are present.
    codegree: HashMap<VertexSet, VertexSet>,
    incident: Vec<Vec<usize>>,
}

impl PartialEq for KGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.k == other.k
            && self.vertices == other.vertices
            && self.edges == other.edges
    }
}

impl Eq for KGraph {}

/// Minimum codegree together with the lexicographically first (k-1)-set attaining it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinCodegree {
    pub value: usize,
    pub witness: Vec<Vertex>,
}

impl KGraph {
    /// Builds a graph on `0..n` from explicit edges. Duplicates are rejected.
    pub fn new<E, I>(n: usize, k: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[Vertex]>,
    {
        check_params(n, k)?;
        let mut sets = Vec::new();
        for e in edges {
            sets.push(edge_from_slice(n, k, e.as_ref())?);
        }
        Self::from_edge_sets(n, k, VertexSet::full(n), sets)
    }

    /// Builds from bitset edges. Every edge must lie inside `vertices`.
    pub fn from_edge_sets(
        n: usize,
        k: usize,
        vertices: VertexSet,
        mut edges: Vec<VertexSet>,
    ) -> Result<Self, GraphError> {
        check_params(n, k)?;
        for e in &edges {
            if e.len() != k {
                return Err(GraphError::EdgeArity(e.to_vec()));
            }
            if !e.is_subset(vertices) {
                let v = e.difference(vertices).first().unwrap_or(0);
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
        }
        edges.sort_by(|a, b| a.lex_cmp(*b));
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].to_vec()));
        }
        Ok(Self::assemble(n, k, vertices, edges))
    }

    /// `edges` must already be sorted, deduplicated and valid.
    fn assemble(n: usize, k: usize, vertices: VertexSet, edges: Vec<VertexSet>) -> Self {
        let mut edge_index = HashMap::with_capacity(edges.len());
        let mut codegree: HashMap<VertexSet, VertexSet> = HashMap::new();
        let mut incident = vec![Vec::new(); n];
        for (id, &e) in edges.iter().enumerate() {
            edge_index.insert(e, id);
            for v in e.iter() {
                incident[v as usize].push(id);
                let s = e.without(v);
                codegree.entry(s).or_default().insert(v);
            }
        }
        KGraph {
            n,
            k,
            vertices,
            edges,
            edge_index,
            codegree,
            incident,
        }
    }

    /// Size of the vertex id space.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of active vertices, |V(G)|.
    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        self.vertices.iter()
    }

    pub fn edges(&self) -> &[VertexSet] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_id(&self, e: VertexSet) -> Option<usize> {
        self.edge_index.get(&e).copied()
    }

    pub fn contains_edge(&self, e: VertexSet) -> bool {
        self.edge_index.contains_key(&e)
    }

    /// Ids of edges containing `v`.
    pub fn incident_edges(&self, v: Vertex) -> &[usize] {
        self.incident.get(v as usize).map_or(&[], |x| x.as_slice())
    }

    /// N_G(S) for a (k-1)-set S.
    pub fn neighbors(&self, s: VertexSet) -> VertexSet {
        self.codegree.get(&s).copied().unwrap_or_default()
    }

    /// d_G(S).
    pub fn codegree(&self, s: VertexSet) -> usize {
        self.neighbors(s).len()
    }

    /// Iterator over all (k-1)-subsets of V(G) in lexicographic order.
    pub fn ksub1_sets(&self) -> crate::vset::Subsets {
        self.vertices.subsets(self.k - 1)
    }

    /// δ(G) with the lexicographically least witness. A graph with fewer than
    /// k-1 vertices has no (k-1)-sets and reports value 0 and an empty witness.
    pub fn min_codegree(&self) -> MinCodegree {
        let mut best: Option<(usize, VertexSet)> = None;
        for s in self.ksub1_sets() {
            let d = self.codegree(s);
            if best.map_or(true, |(b, _)| d < b) {
                best = Some((d, s));
                if d == 0 {
                    break;
                }
            }
        }
        match best {
            Some((value, s)) => MinCodegree {
                value,
                witness: s.to_vec(),
            },
            None => MinCodegree {
                value: 0,
                witness: Vec::new(),
            },
        }
    }

    /// δ(G) ≥ (1/2 + γ)|V(G)|.
    pub fn is_gamma_dirac(&self, gamma: f64) -> bool {
        self.min_codegree().value as f64 >= (0.5 + gamma) * self.order() as f64
    }

    /// δ(G)/|V| - 1/2, the largest γ for which the graph is γ-Dirac.
    pub fn measured_gamma(&self) -> f64 {
        self.min_codegree().value as f64 / self.order() as f64 - 0.5
    }

    /// G[keep]: the subgraph induced on `keep ∩ V(G)`, ids preserved.
    pub fn induced(&self, keep: VertexSet) -> KGraph {
        let vertices = self.vertices.intersection(keep);
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|e| e.is_subset(vertices))
            .collect();
        Self::assemble(self.n, self.k, vertices, edges)
    }

    /// G - U.
    pub fn residual(&self, removed: VertexSet) -> KGraph {
        self.induced(self.vertices.difference(removed))
    }

    /// Fails with `DomainTooSmall` unless |V| ≥ k+1.
    pub fn require_cycle_domain(&self) -> Result<(), GraphError> {
        if self.order() < self.k + 1 {
            Err(GraphError::DomainTooSmall {
                vertices: self.order(),
                k: self.k,
            })
        } else {
            Ok(())
        }
    }

    /// Canonical text form: header `n k`, then one edge per line in
    /// lexicographic order.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.k);
        for e in &self.edges {
            let line: Vec<String> = e.iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Hex SHA-256 of the canonical text form plus the active vertex set.
    pub fn content_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.to_text().as_bytes());
        let mut tail = String::new();
        let _ = write!(tail, "V {:x}", self.vertices.bits());
        h.update(tail.as_bytes());
        hex::encode(h.finalize())
    }

    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        let mut lines = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Result<Vec<usize>, _> =
                line.split_whitespace().map(|t| t.parse::<usize>()).collect();
            let fields = fields.map_err(|e| GraphError::Parse {
                line: line_no,
                message: format!("bad integer: {e}"),
            })?;
            match header {
                None => {
                    if fields.len() != 2 {
                        return Err(GraphError::Parse {
                            line: line_no,
                            message: "header must be `n k`".into(),
                        });
                    }
                    let (n, k) = (fields[0], fields[1]);
                    check_params(n, k).map_err(|e| GraphError::Parse {
                        line: line_no,
                        message: e.to_string(),
                    })?;
                    header = Some((n, k));
                }
                Some((n, k)) => {
                    let verts: Vec<Vertex> = fields.iter().map(|&v| v as Vertex).collect();
                    if fields.iter().any(|&v| v >= n) {
                        let bad = *fields.iter().find(|&&v| v >= n).unwrap();
                        return Err(GraphError::Parse {
                            line: line_no,
                            message: format!("vertex {bad} out of range for n = {n}"),
                        });
                    }
                    let e = edge_from_slice(n, k, &verts).map_err(|e| GraphError::Parse {
                        line: line_no,
                        message: e.to_string(),
                    })?;
                    edges.push(e);
                    lines.push(line_no);
                }
            }
        }
        let (n, k) = header.ok_or(GraphError::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let mut seen: HashMap<VertexSet, usize> = HashMap::new();
        for (e, line) in edges.iter().zip(&lines) {
            if seen.insert(*e, *line).is_some() {
                return Err(GraphError::Parse {
                    line: *line,
                    message: format!("duplicate edge {:?}", e.to_vec()),
                });
            }
        }
        Self::from_edge_sets(n, k, VertexSet::full(n), edges)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self, GraphError> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<(), GraphError> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

fn check_params(n: usize, k: usize) -> Result<(), GraphError> {
    if k < 2 {
        return Err(GraphError::InvalidParameters(format!("k = {k}, need k ≥ 2")));
    }
    if n < k {
        return Err(GraphError::InvalidParameters(format!(
            "n = {n} < k = {k}"
        )));
    }
    if n > MAX_VERTICES {
        return Err(GraphError::TooManyVertices(n));
    }
    Ok(())
}

fn edge_from_slice(n: usize, k: usize, e: &[Vertex]) -> Result<VertexSet, GraphError> {
    if let Some(&v) = e.iter().find(|&&v| v as usize >= n) {
        return Err(GraphError::VertexOutOfRange { vertex: v, n });
    }
    let set: VertexSet = e.iter().copied().collect();
    if e.len() != k || set.len() != k {
        return Err(GraphError::EdgeArity(e.to_vec()));
    }
    Ok(set)
}

/// An ordered (k-1)-tuple of distinct vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OrderedTuple(Vec<Vertex>);

impl OrderedTuple {
    pub fn new(vertices: Vec<Vertex>) -> Result<Self, GraphError> {
        let set: VertexSet = vertices.iter().copied().collect();
        if vertices.iter().any(|&v| v as usize >= MAX_VERTICES) || set.len() != vertices.len() {
            return Err(GraphError::InvalidTuple(format!(
                "tuple {vertices:?} has repeated or invalid vertices"
            )));
        }
        Ok(OrderedTuple(vertices))
    }

    /// Validates arity k-1 and membership in V(G).
    pub fn for_graph(g: &KGraph, vertices: Vec<Vertex>) -> Result<Self, GraphError> {
        let t = Self::new(vertices)?;
        if t.0.len() != g.k() - 1 {
            return Err(GraphError::InvalidTuple(format!(
                "tuple {:?} must have k-1 = {} entries",
                t.0,
                g.k() - 1
            )));
        }
        if !t.as_set().is_subset(g.vertex_set()) {
            return Err(GraphError::InvalidTuple(format!(
                "tuple {:?} is not inside the vertex set",
                t.0
            )));
        }
        Ok(t)
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_set(&self) -> VertexSet {
        self.0.iter().copied().collect()
    }

    pub fn reversed(&self) -> Self {
        OrderedTuple(self.0.iter().rev().copied().collect())
    }

    /// Drops the first entry and appends `v`.
    pub fn shifted(&self, v: Vertex) -> Self {
        let mut out = Vec::with_capacity(self.0.len());
        out.extend_from_slice(&self.0[1..]);
        out.push(v);
        OrderedTuple(out)
    }
}

/// A tight path: every k consecutive vertices form an edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TightPath {
    vertices: Vec<Vertex>,
}

impl TightPath {
    pub fn new(g: &KGraph, vertices: Vec<Vertex>) -> Result<Self, GraphError> {
        let k = g.k();
        if vertices.len() < k {
            return Err(GraphError::InvalidPath(format!(
                "{} vertices, need at least k = {k}",
                vertices.len()
            )));
        }
        let set: VertexSet = vertices.iter().copied().collect();
        if set.len() != vertices.len() {
            return Err(GraphError::InvalidPath("repeated vertex".into()));
        }
        for w in vertices.windows(k) {
            let e: VertexSet = w.iter().copied().collect();
            if !g.contains_edge(e) {
                return Err(GraphError::InvalidPath(format!("window {w:?} is not an edge")));
            }
        }
        Ok(TightPath { vertices })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices.iter().copied().collect()
    }

    /// Number of edges.
    pub fn length(&self, k: usize) -> usize {
        self.vertices.len() + 1 - k
    }

    /// The two ends: the first k-1 vertices, and the last k-1 vertices reversed.
    pub fn ends(&self, k: usize) -> (OrderedTuple, OrderedTuple) {
        let m = self.vertices.len();
        let first = OrderedTuple(self.vertices[..k - 1].to_vec());
        let last = OrderedTuple(self.vertices[m - (k - 1)..].iter().rev().copied().collect());
        (first, last)
    }
}

/// Random graph families.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphKind {
    Complete,
    Binomial { p: f64 },
    Dirac(DiracParams),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiracParams {
    pub gamma: f64,
    /// Edge probability of the initial sample. Defaults to the midpoint
    /// between the target codegree ratio and 1.
    pub edge_prob: Option<f64>,
    pub rejection_attempts: usize,
    /// Maximum number of edges the repair loop may add.
    pub repair_budget: Option<usize>,
}

impl DiracParams {
    pub fn new(gamma: f64) -> Self {
        DiracParams {
            gamma,
            edge_prob: None,
            rejection_attempts: 16,
            repair_budget: None,
        }
    }
}

/// Output of [`generate`].
#[derive(Clone, Debug)]
pub struct Generated {
    pub graph: KGraph,
    /// Edges forced in by the dirac repair loop.
    pub repairs: Vec<Vec<Vertex>>,
    /// Number of rejection samples drawn (dirac only).
    pub samples_drawn: usize,
}

/// Generates a graph on `0..n`. The same `(kind, n, k, seed)` always yields the
/// same edge set.
pub fn generate(kind: &GraphKind, n: usize, k: usize, seed: u64) -> Result<Generated, GraphError> {
    check_params(n, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        GraphKind::Complete => Ok(Generated {
            graph: complete(n, k),
            repairs: Vec::new(),
            samples_drawn: 0,
        }),
        GraphKind::Binomial { p } => {
            if !(0.0..=1.0).contains(p) {
                return Err(GraphError::InvalidParameters(format!("p = {p} not in [0,1]")));
            }
            Ok(Generated {
                graph: binomial_sample(n, k, *p, &mut rng),
                repairs: Vec::new(),
                samples_drawn: 1,
            })
        }
        GraphKind::Dirac(params) => dirac(n, k, params, &mut rng),
    }
}

pub fn complete(n: usize, k: usize) -> KGraph {
    let edges = VertexSet::full(n).subsets(k).collect();
    KGraph::assemble(n, k, VertexSet::full(n), edges)
}

fn binomial_sample(n: usize, k: usize, p: f64, rng: &mut ChaCha8Rng) -> KGraph {
    let edges = VertexSet::full(n)
        .subsets(k)
        .filter(|_| rng.gen::<f64>() < p)
        .collect();
    KGraph::assemble(n, k, VertexSet::full(n), edges)
}

fn dirac(
    n: usize,
    k: usize,
    params: &DiracParams,
    rng: &mut ChaCha8Rng,
) -> Result<Generated, GraphError> {
    let gamma = params.gamma;
    if !(gamma > 0.0 && gamma < 0.5) {
        return Err(GraphError::InvalidParameters(format!(
            "gamma = {gamma} not in (0, 1/2)"
        )));
    }
    let target = ((0.5 + gamma) * n as f64).ceil() as usize;
    let max_codegree = n - k + 1;
    if target > max_codegree {
        return Err(GraphError::InvalidParameters(format!(
            "no {n}-vertex {k}-graph has minimum codegree {target}"
        )));
    }
    let p = params
        .edge_prob
        .unwrap_or_else(|| 0.5 * (1.0 + target as f64 / max_codegree as f64));
    let mut last = None;
    let mut drawn = 0;
    for _ in 0..params.rejection_attempts.max(1) {
        drawn += 1;
        let g = binomial_sample(n, k, p, rng);
        if g.min_codegree().value >= target {
            return Ok(Generated {
                graph: g,
                repairs: Vec::new(),
                samples_drawn: drawn,
            });
        }
        last = Some(g);
    }
    let g = last.expect("at least one sample");
    let budget = params
        .repair_budget
        .unwrap_or_else(|| crate::vset::binomial(n, k) as usize);
    let mut edges = g.edges.clone();
    let mut index: std::collections::HashSet<VertexSet> = edges.iter().copied().collect();
    let mut nbrs = g.codegree.clone();
    let mut repairs = Vec::new();
    loop {
        // worst (k-1)-set, lexicographically first among ties
        let mut worst: Option<(usize, VertexSet)> = None;
        for s in VertexSet::full(n).subsets(k - 1) {
            let d = nbrs.get(&s).map_or(0, |x| x.len());
            if worst.map_or(true, |(b, _)| d < b) {
                worst = Some((d, s));
            }
        }
        let (d, s) = worst.expect("n ≥ k");
        if d >= target {
            break;
        }
        if repairs.len() >= budget {
            return Err(GraphError::GenerationFailed {
                repairs: repairs.len(),
            });
        }
        let have = nbrs.get(&s).copied().unwrap_or_default();
        let candidates: Vec<Vertex> = VertexSet::full(n).difference(s).difference(have).to_vec();
        let v = candidates[rng.gen_range(0..candidates.len())];
        let e = s.with(v);
        index.insert(e);
        edges.push(e);
        for u in e.iter() {
            nbrs.entry(e.without(u)).or_default().insert(u);
        }
        repairs.push(e.to_vec());
    }
    debug_assert_eq!(index.len(), edges.len());
    edges.sort_by(|a, b| a.lex_cmp(*b));
    Ok(Generated {
        graph: KGraph::assemble(n, k, VertexSet::full(n), edges),
        repairs,
        samples_drawn: drawn,
    })
}
