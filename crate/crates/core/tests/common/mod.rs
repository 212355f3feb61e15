//! Brute-force reference implementations. These work on plain sorted vertex
//! vectors and share no code with the library.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Edge = Vec<usize>;

#[derive(Clone, Debug)]
pub struct Plain {
    pub n: usize,
    pub k: usize,
    pub edges: HashSet<Edge>,
}

impl Plain {
    pub fn new(n: usize, k: usize, edges: impl IntoIterator<Item = Edge>) -> Self {
        let edges = edges
            .into_iter()
            .map(|mut e| {
                e.sort_unstable();
                e
            })
            .collect();
        Plain { n, k, edges }
    }

    pub fn from_graph(g: &tightwalk::KGraph) -> Self {
        Plain::new(
            g.order(),
            g.k(),
            g.edges().iter().map(|e| e.iter().map(|v| v as usize).collect()),
        )
    }

    pub fn is_edge(&self, vs: &[usize]) -> bool {
        let mut e = vs.to_vec();
        e.sort_unstable();
        self.edges.contains(&e)
    }

    pub fn sorted_edges(&self) -> Vec<Edge> {
        let mut v: Vec<Edge> = self.edges.iter().cloned().collect();
        v.sort();
        v
    }

    pub fn codegree(&self, s: &[usize]) -> usize {
        (0..self.n)
            .filter(|v| !s.contains(v))
            .filter(|&v| {
                let mut e = s.to_vec();
                e.push(v);
                self.is_edge(&e)
            })
            .count()
    }
}

pub fn combinations(items: &[usize], r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return vec![Vec::new()];
    }
    if items.len() < r {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], r - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

pub fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

pub fn factorial(n: u64) -> u128 {
    (1..=n as u128).product()
}

/// All perfect matchings of the subgraph induced on `vertices`.
pub fn perfect_matchings(g: &Plain, vertices: &[usize]) -> Vec<Vec<Edge>> {
    if vertices.is_empty() {
        return vec![Vec::new()];
    }
    if vertices.len() % g.k != 0 {
        return Vec::new();
    }
    let first = vertices[0];
    let mut out = Vec::new();
    for rest in combinations(&vertices[1..], g.k - 1) {
        let mut e = rest.clone();
        e.insert(0, first);
        if !g.is_edge(&e) {
            continue;
        }
        let left: Vec<usize> = vertices.iter().copied().filter(|v| !e.contains(v)).collect();
        for mut m in perfect_matchings(g, &left) {
            m.push(e.clone());
            out.push(m);
        }
    }
    out
}

pub fn pm_count(g: &Plain) -> usize {
    let all: Vec<usize> = (0..g.n).collect();
    perfect_matchings(g, &all).len()
}

/// n! / ((n/k)! (k!)^{n/k})
pub fn complete_pm_count(n: u64, k: u64) -> u128 {
    factorial(n) / (factorial(n / k) * factorial(k).pow((n / k) as u32))
}

/// Exact matching-average weights by listing all perfect matchings of every G − S.
pub fn matching_average(g: &Plain) -> BTreeMap<Edge, BigRational> {
    let i = g.n % g.k;
    let all: Vec<usize> = (0..g.n).collect();
    let mut acc: BTreeMap<Edge, BigRational> =
        g.sorted_edges().into_iter().map(|e| (e, BigRational::zero())).collect();
    for s in combinations(&all, i) {
        let rest: Vec<usize> = all.iter().copied().filter(|v| !s.contains(v)).collect();
        let pms = perfect_matchings(g, &rest);
        assert!(!pms.is_empty(), "G - {s:?} has no perfect matching");
        let total = BigInt::from(pms.len());
        let mut hits: HashMap<Edge, usize> = HashMap::new();
        for m in &pms {
            for e in m {
                *hits.entry(e.clone()).or_insert(0) += 1;
            }
        }
        for (e, h) in hits {
            *acc.get_mut(&e).unwrap() += BigRational::new(BigInt::from(h), total.clone());
        }
    }
    let denom = BigInt::from(combinations(&all[1..], i).len());
    acc.into_iter()
        .map(|(e, w)| (e, w / BigRational::from_integer(denom.clone())))
        .collect()
}

fn cyclic_blocks(order: &[usize], k: usize, step: usize) -> BTreeSet<Edge> {
    let n = order.len();
    let mut set = BTreeSet::new();
    for start in (0..n).step_by(step) {
        let mut e: Edge = (0..k).map(|j| order[(start + j) % n]).collect();
        e.sort_unstable();
        set.insert(e);
    }
    set
}

/// Distinct Hamilton ℓ-cycles (as edge sets) over every ordering with vertex 0 first.
pub fn ell_cycle_edge_sets(g: &Plain, ell: usize) -> BTreeSet<BTreeSet<Edge>> {
    let step = g.k - ell;
    assert_eq!(g.n % step, 0);
    let rest: Vec<usize> = (1..g.n).collect();
    let mut out = BTreeSet::new();
    for p in permutations(&rest) {
        let mut order = vec![0];
        order.extend(p);
        // every rotation by a non-multiple of step is covered by putting 0 at
        // each offset inside the first block
        for shift in 0..step {
            let mut o = order.clone();
            o.rotate_right(shift);
            let set = cyclic_blocks(&o, g.k, step);
            if set.iter().all(|e| g.edges.contains(e)) {
                out.insert(set);
            }
        }
    }
    out
}

pub fn tight_cycle_count(g: &Plain) -> usize {
    ell_cycle_edge_sets(g, g.k - 1).len()
}

/// Number of orderings (up to rotation and reflection) whose windows are all edges.
pub fn tight_cycle_sequences(g: &Plain) -> usize {
    let rest: Vec<usize> = (1..g.n).collect();
    let good = permutations(&rest)
        .into_iter()
        .filter(|p| {
            let mut o = vec![0];
            o.extend(p);
            cyclic_blocks(&o, g.k, 1).iter().all(|e| g.edges.contains(e))
        })
        .count();
    good / 2
}

/// Walks adding `ell` vertices to `s` (repeats allowed), grouped by final k-1 tuple.
pub fn ell_walks(g: &Plain, s: &[usize], ell: usize) -> HashMap<Vec<usize>, u64> {
    let mut out = HashMap::new();
    let total = g.n.pow(ell as u32);
    for code in 0..total {
        let mut seq = s.to_vec();
        let mut c = code;
        for _ in 0..ell {
            seq.push(c % g.n);
            c /= g.n;
        }
        let ok = (0..ell).all(|j| {
            let w = &seq[j..j + g.k];
            let distinct: BTreeSet<_> = w.iter().collect();
            distinct.len() == g.k && g.is_edge(w)
        });
        if ok {
            *out.entry(seq[seq.len() + 1 - g.k..].to_vec()).or_insert(0) += 1;
        }
    }
    out
}

/// Ordered (k-1)-tuples of distinct vertices.
pub fn ordered_tuples(n: usize, r: usize) -> Vec<Vec<usize>> {
    let all: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    for c in combinations(&all, r) {
        out.extend(permutations(&c));
    }
    out.sort();
    out
}

type Weights = HashMap<Edge, f64>;

fn transition(g: &Plain, x: &Weights, tuple: &[usize], banned: &[usize]) -> Vec<(usize, f64)> {
    let mut c = Vec::new();
    for v in 0..g.n {
        if tuple.contains(&v) || banned.contains(&v) {
            continue;
        }
        let mut e = tuple.to_vec();
        e.push(v);
        e.sort_unstable();
        if let Some(w) = x.get(&e) {
            c.push((v, *w));
        }
    }
    let total: f64 = c.iter().map(|p| p.1).sum();
    c.into_iter().map(|(v, w)| (v, w / total)).collect()
}

/// The tuple chain as a dense row-stochastic matrix over `ordered_tuples`.
pub fn dense_chain(g: &Plain, x: &Weights) -> (Vec<Vec<usize>>, Vec<Vec<f64>>) {
    let tuples = ordered_tuples(g.n, g.k - 1);
    let index: HashMap<Vec<usize>, usize> =
        tuples.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    let mut p = vec![vec![0.0; tuples.len()]; tuples.len()];
    for (i, t) in tuples.iter().enumerate() {
        for (v, q) in transition(g, x, t, &[]) {
            let mut next = t[1..].to_vec();
            next.push(v);
            p[i][index[&next]] += q;
        }
    }
    (tuples, p)
}

pub fn dense_push(p: &[Vec<f64>], mu: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; mu.len()];
    for (i, row) in p.iter().enumerate() {
        if mu[i] == 0.0 {
            continue;
        }
        for (j, q) in row.iter().enumerate() {
            out[j] += mu[i] * q;
        }
    }
    out
}

/// ‖πP − π‖₁ by direct dense multiplication.
pub fn dense_stationarity_residual(p: &[Vec<f64>], pi: &[f64]) -> f64 {
    dense_push(p, pi).iter().zip(pi).map(|(a, b)| (a - b).abs()).sum()
}

/// Law of the q-th new vertex of the self-avoiding walk, by listing every walk.
pub fn selfavoiding_law(g: &Plain, x: &Weights, start: &[usize], q: usize) -> BTreeMap<usize, f64> {
    let mut law = BTreeMap::new();
    let mut stack = vec![(start.to_vec(), 1.0)];
    while let Some((seq, prob)) = stack.pop() {
        if seq.len() == start.len() + q {
            *law.entry(*seq.last().unwrap()).or_insert(0.0) += prob;
            continue;
        }
        let tuple = &seq[seq.len() + 1 - g.k..];
        for (v, p) in transition(g, x, tuple, &seq) {
            let mut next = seq.clone();
            next.push(v);
            stack.push((next, prob * p));
        }
    }
    law
}

/// Law of the current vertex of the simple walk after `q` steps.
pub fn simple_law(g: &Plain, x: &Weights, start: &[usize], q: usize) -> BTreeMap<usize, f64> {
    let (tuples, p) = dense_chain(g, x);
    let mut mu: Vec<f64> = tuples.iter().map(|t| if t == start { 1.0 } else { 0.0 }).collect();
    for _ in 0..q {
        mu = dense_push(&p, &mu);
    }
    let mut law = BTreeMap::new();
    for (t, m) in tuples.iter().zip(mu) {
        if m > 0.0 {
            *law.entry(*t.last().unwrap()).or_insert(0.0) += m;
        }
    }
    law
}

pub fn tv(a: &BTreeMap<usize, f64>, b: &BTreeMap<usize, f64>) -> f64 {
    let keys: BTreeSet<usize> = a.keys().chain(b.keys()).copied().collect();
    keys.iter()
        .map(|k| (a.get(k).unwrap_or(&0.0) - b.get(k).unwrap_or(&0.0)).abs())
        .sum::<f64>()
        / 2.0
}

/// Tight paths adding `kappa` distinct new vertices to `start`.
pub fn segment_paths(g: &Plain, start: &[usize], kappa: usize) -> u64 {
    let rest: Vec<usize> = (0..g.n).filter(|v| !start.contains(v)).collect();
    let mut total = 0;
    for c in combinations(&rest, kappa) {
        for p in permutations(&c) {
            let mut seq = start.to_vec();
            seq.extend(p);
            if (0..kappa).all(|j| g.is_edge(&seq[j..j + g.k])) {
                total += 1;
            }
        }
    }
    total
}

/// Every window of k consecutive vertices, cyclically, is an edge and all vertices appear once.
pub fn is_tight_hamilton_cycle(g: &Plain, order: &[usize]) -> bool {
    let distinct: BTreeSet<_> = order.iter().collect();
    distinct.len() == g.n
        && order.len() == g.n
        && (0..g.n).all(|i| {
            let w: Vec<usize> = (0..g.k).map(|j| order[(i + j) % g.n]).collect();
            g.is_edge(&w)
        })
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn one() -> BigRational {
    BigRational::one()
}
