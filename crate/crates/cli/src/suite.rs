//! The acceptance battery behind `tightwalk suite`, built from library calls
//! and closed forms. `quick` shrinks instance counts and sample sizes.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use tightwalk::cycles::{
    complete_to_cycle, count_hamilton_ell_cycles, count_segment_paths, count_tight_hamilton_cycles,
    cyclic_windows, grow_long_path, lower_bound_ledger, subset_dirac_probe, GrowConfig,
};
use tightwalk::goodness::{default_threshold, goodness_rate, tracking_sums};
use tightwalk::hypergraph::{complete, generate, DiracParams, GraphKind};
use tightwalk::matching::{
    classify_matchings_by_edge, enumerate_perfect_matchings, matching_average_weighting,
    AverageOptions, EdgeWeighting,
};
use tightwalk::walk::{
    chain_distribution_at, count_ell_walks_from, derive_seed, mixing_curve, run_walk,
    selfavoiding_distribution_at, stationarity_residual, stationary_distribution, tv_distance,
    vertex_marginal, visit_ell_walks, Distribution, TupleSpace, WalkConfig, WalkMode,
    DEFAULT_WALK_BUDGET,
};
use tightwalk::{KGraph, OrderedTuple, VertexSet};

#[derive(Clone, Debug, Serialize)]
pub struct SuiteRow {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

type Check = Result<(bool, String), String>;

fn dirac(n: usize, gamma: f64, seed: u64) -> Result<KGraph, String> {
    generate(&GraphKind::Dirac(DiracParams::new(gamma)), n, 3, seed)
        .map(|g| g.graph)
        .map_err(|e| e.to_string())
}

fn average(g: &KGraph) -> Result<EdgeWeighting, String> {
    matching_average_weighting(g, AverageOptions::default()).map_err(|e| e.to_string())
}

fn pair(a: u32, b: u32) -> OrderedTuple {
    OrderedTuple::new(vec![a, b]).expect("distinct vertices")
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn exactness(_quick: bool) -> Check {
    let mut ok = true;
    for (n, denom) in [(6usize, 10u32), (7, 15)] {
        let g = complete(n, 3);
        let t = Instant::now();
        let x = average(&g)?;
        let target = num_rational::BigRational::new(1.into(), denom.into());
        ok &= t.elapsed() < Duration::from_secs(1)
            && x.is_exact()
            && g.edges().iter().all(|&e| x.exact_weight(e) == Some(&target))
            && x.profile().perfect_residual <= 1e-15;
        if n == 6 {
            ok &= (x.profile().normality_c - 3.6).abs() <= 1e-12;
        }
    }
    Ok((ok, "K6 weights 1/10, K7 weights 1/15".into()))
}

fn perfect(quick: bool) -> Check {
    let seeds = if quick { 5 } else { 20 };
    let mut ok = true;
    let mut worst = 0.0f64;
    for s in 0..seeds {
        let x = average(&dirac(12, 0.1, s)?)?;
        worst = worst.max(x.profile().perfect_residual);
        ok &= x.profile().perfect_residual <= 1e-9 && x.min_weight() > 0.0 && x.profile().normality_c.is_finite();
    }
    let e: VertexSet = [0, 1, 2].into_iter().collect();
    let c = classify_matchings_by_edge(&complete(6, 3), e, u64::MAX).map_err(err)?;
    ok &= c.counts == vec![1, 9, 0];
    Ok((ok, format!("{seeds} graphs, max residual {worst:.1e}, K6 classes {:?}", c.counts)))
}

fn chain_instances(quick: bool) -> Result<Vec<KGraph>, String> {
    let per = if quick { 2 } else { 5 };
    let mut v = vec![complete(6, 3), complete(8, 3)];
    for n in [10usize, 12] {
        for s in 0..per {
            v.push(dirac(n, 0.1, 100 + s)?);
        }
    }
    Ok(v)
}

fn stationarity(quick: bool) -> Check {
    let mut worst = 0.0f64;
    for g in chain_instances(quick)? {
        let x = average(&g)?;
        let pi = stationary_distribution(&g, &x).map_err(err)?;
        worst = worst.max(stationarity_residual(&g, &x, &pi).map_err(err)?);
    }
    Ok((worst <= 1e-10, format!("max residual {worst:.1e}")))
}

fn marginal(quick: bool) -> Check {
    let mut worst = 0.0f64;
    for g in chain_instances(quick)? {
        let m = vertex_marginal(&g, &average(&g)?).map_err(err)?;
        let n = g.order() as f64;
        worst = g.vertices().map(|v| (m.vertex_prob(v) - 1.0 / n).abs()).fold(worst, f64::max);
    }
    Ok((worst <= 1e-12, format!("max deviation {worst:.1e}")))
}

fn walkalike(quick: bool) -> Check {
    let mut gs = vec![complete(6, 3), complete(8, 3)];
    for s in 0..if quick { 2 } else { 5 } {
        gs.push(dirac(10, 0.1, 200 + s)?);
    }
    let start = pair(0, 1);
    let mut violations = 0;
    for g in &gs {
        let x = average(g)?;
        let a2 = x.profile().upper_balance;
        for q in 1..=4usize {
            let lx = selfavoiding_distribution_at(g, &x, &start, q, DEFAULT_WALK_BUDGET).map_err(err)?;
            let ly = chain_distribution_at(g, &x, &Distribution::point_tuple(&start), q)
                .map_err(err)?
                .last_vertex();
            if tv_distance(&lx, &ly).map_err(err)? > (q * q) as f64 * a2 {
                violations += 1;
            }
        }
    }
    Ok((violations == 0, format!("{violations} violations")))
}

fn mixing(quick: bool) -> Check {
    let k6 = complete(6, 3);
    let c = mixing_curve(&k6, &average(&k6)?, &pair(0, 1), 50).map_err(err)?;
    let mut ok = (c[0].tv_tuple - 29.0 / 30.0).abs() <= 1e-12
        && (c[1].tv_tuple - 13.0 / 15.0).abs() <= 1e-12
        && c[50].tv_tuple <= 1e-6;
    for s in 0..if quick { 2 } else { 5 } {
        let g = dirac(12, 0.1, 300 + s)?;
        let c = mixing_curve(&g, &average(&g)?, &pair(0, 1), 50).map_err(err)?;
        let min = c.iter().map(|p| p.tv_tuple).fold(f64::INFINITY, f64::min);
        ok &= c[50].tv_tuple <= 0.01 && c[50].tv_tuple <= min + 1e-12;
    }
    Ok((ok, format!("K6 TV at q=0,1: {:.6}, {:.6}", c[0].tv_tuple, c[1].tv_tuple)))
}

fn manywalks(quick: bool) -> Check {
    let sizes: &[usize] = if quick { &[8, 10] } else { &[8, 9, 10, 12] };
    let mut ok = true;
    for &n in sizes {
        let g = dirac(n, 0.1, 400)?;
        let space = TupleSpace::new(&g);
        for i in 0..space.len() {
            let (_, counts) = count_ell_walks_from(&g, &OrderedTuple::new(space.tuple(i).to_vec()).map_err(err)?, 6);
            ok &= counts.iter().all(|c| !c.is_zero());
        }
    }
    // DP against direct enumeration
    let mut mismatches = 0;
    for g in [complete(5, 3), complete(6, 3), complete(7, 3)] {
        let space = TupleSpace::new(&g);
        for i in 0..space.len() {
            let s = OrderedTuple::new(space.tuple(i).to_vec()).map_err(err)?;
            for ell in 0..=if quick { 3 } else { 4 } {
                let (sp, dp) = count_ell_walks_from(&g, &s, ell);
                let mut brute = vec![BigUint::zero(); sp.len()];
                visit_ell_walks(&g, &s, ell, |seq| {
                    let j = sp.index_of(&seq[seq.len() - 2..]).expect("tuple");
                    brute[j] += 1u32;
                    std::ops::ControlFlow::Continue(())
                });
                mismatches += dp.iter().zip(&brute).filter(|(a, b)| a != b).count();
            }
        }
    }
    ok &= mismatches == 0;
    Ok((ok, format!("DP mismatches {mismatches}")))
}

fn goodness(quick: bool) -> Check {
    let n = 20usize;
    let kappa = 10usize;
    let walks: u64 = if quick { 2000 } else { 10_000 };
    let g = complete(n, 3);
    let x = EdgeWeighting::uniform(&g, 1.0).map_err(err)?;
    let start = pair(0, 1);
    let sets: Vec<VertexSet> = g.ksub1_sets().step_by(4).take(50).collect();
    let index: std::collections::HashMap<VertexSet, usize> =
        g.ksub1_sets().enumerate().map(|(i, s)| (s, i)).collect();
    let per_walk: Vec<f64> = (0..walks)
        .into_par_iter()
        .map(|i| {
            let cfg = WalkConfig::from_tuple(WalkMode::SelfAvoiding, start.clone(), kappa, derive_seed(8, i));
            let t = run_walk(&g, &x, &cfg).expect("complete graph walk");
            let sums = tracking_sums(&g, &t).expect("tracking sums");
            sets.iter().map(|s| sums[index[s]].1 as f64).sum::<f64>() / sets.len() as f64
        })
        .collect();
    let expected = sets
        .iter()
        .map(|s| {
            let inside = s.intersection(start.as_set()).len() as f64;
            (2.0 - inside) + kappa as f64 * (1.0 - (2.0 - inside) / (n - 2) as f64)
        })
        .sum::<f64>()
        / sets.len() as f64;
    let m = walks as f64;
    let mean = per_walk.iter().sum::<f64>() / m;
    let var = per_walk.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
    let z = (mean - expected).abs() / (var / m).sqrt();
    let rate = goodness_rate(&g, &x, &start, kappa, walks, default_threshold(n), 8).map_err(err)?;
    Ok((
        z <= 3.0 && rate.max_errors.len() as u64 == walks,
        format!("mean {mean:.4} vs {expected:.4} ({z:.2} SE)"),
    ))
}

fn counting(quick: bool) -> Check {
    let mut ok = true;
    for (n, want) in [(4usize, 1u64), (5, 12), (6, 60)] {
        ok &= count_tight_hamilton_cycles(&complete(n, 3), u64::MAX).map_err(err)?.distinct == want;
    }
    ok &= enumerate_perfect_matchings(&complete(6, 3), None).map_err(err)? == 10;
    ok &= enumerate_perfect_matchings(&complete(9, 3), None).map_err(err)? == 280;
    // every 3-graph on few vertices, against cycles listed as edge-index masks
    let top = if quick { 5 } else { 6 };
    let mut mismatches = 0u64;
    for n in 4..=top {
        let triples: Vec<VertexSet> = VertexSet::full(n).subsets(3).collect();
        let id: std::collections::HashMap<VertexSet, usize> =
            triples.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        let masks: Vec<u32> = orderings_from_zero(n)
            .iter()
            .map(|o| cyclic_windows(o, 3).iter().fold(0u32, |m, w| m | 1 << id[w]))
            .collect();
        let m = triples.len();
        mismatches += (0u32..1 << m)
            .into_par_iter()
            .filter(|&gmask| {
                let contained: BTreeSet<u32> = masks.iter().copied().filter(|c| c & gmask == *c).collect();
                let edges: Vec<VertexSet> = (0..m).filter(|i| gmask >> i & 1 == 1).map(|i| triples[i]).collect();
                let g = KGraph::from_edge_sets(n, 3, VertexSet::full(n), edges).expect("graph");
                count_tight_hamilton_cycles(&g, u64::MAX).map(|c| c.distinct).ok() != Some(contained.len() as u64)
            })
            .count() as u64;
    }
    ok &= mismatches == 0;
    Ok((ok, format!("all 3-graphs on ≤ {top} vertices, {mismatches} mismatches")))
}

fn orderings_from_zero(n: usize) -> Vec<Vec<u32>> {
    fn rec(prefix: &mut Vec<u32>, left: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..left.len() {
            let v = left.remove(i);
            prefix.push(v);
            rec(prefix, left, out);
            prefix.pop();
            left.insert(i, v);
        }
    }
    let mut out = Vec::new();
    rec(&mut vec![0], &mut (1..n as u32).collect(), &mut out);
    out
}

fn count_bounds(quick: bool) -> Check {
    let mut gs = vec![complete(6, 3), complete(8, 3)];
    for s in 0..if quick { 1 } else { 4 } {
        gs.push(dirac(6, 0.1, 600 + s)?);
        gs.push(dirac(8, 0.1, 610 + s)?);
    }
    let mut ok = true;
    for g in &gs {
        let n = g.order();
        let tight = count_tight_hamilton_cycles(g, u64::MAX).map_err(err)?.distinct as u128;
        for ell in [1usize, 2] {
            let step = 3 - ell;
            if n % step == 0 {
                let c = count_hamilton_ell_cycles(g, ell, u64::MAX).map_err(err)?.distinct as u128;
                ok &= tight * step as u128 <= c * 6u128.pow((n / step) as u32);
            }
        }
        if n % 3 == 0 {
            let pm = count_hamilton_ell_cycles(g, 0, u64::MAX).map_err(err)?.distinct as u128;
            let blocks = (n / 3) as u32;
            let fact: u128 = (1..=blocks as u128).product();
            ok &= tight <= pm * fact * 6u128.pow(blocks);
        }
    }
    Ok((ok, format!("{} instances", gs.len())))
}

fn pipeline(quick: bool) -> Check {
    let seeds: u64 = if quick { 20 } else { 100 };
    let need = (seeds * 95).div_ceil(100);
    let cfg = GrowConfig {
        gamma: Some(0.1),
        ..GrowConfig::default()
    };
    let runs: Vec<(bool, bool, Duration)> = (0..seeds)
        .into_par_iter()
        .map(|s| {
            let Ok(g) = dirac(15, 0.1, s) else {
                return (false, true, Duration::ZERO);
            };
            let t = Instant::now();
            let r = grow_long_path(&g, &cfg, s).and_then(|p| complete_to_cycle(&g, &p.path, cfg.budget));
            let el = t.elapsed();
            match r {
                Ok(c) => {
                    let valid = cyclic_windows(c.ordering(), 3).iter().all(|&e| g.contains_edge(e))
                        && c.ordering().iter().collect::<BTreeSet<_>>().len() == g.order();
                    (true, valid, el)
                }
                Err(_) => (false, true, el),
            }
        })
        .collect();
    let succ = runs.iter().filter(|r| r.0).count() as u64;
    let valid = runs.iter().all(|r| r.1);
    let slow = runs.iter().map(|r| r.2).max().unwrap_or_default();
    let mut sound = true;
    for g in [complete(6, 3), complete(8, 3), dirac(8, 0.1, 700)?] {
        let x = average(&g)?;
        for kappa in 1..=3 {
            let l = lower_bound_ledger(&g, &x, None, kappa, 200, default_threshold(g.order()), 11).map_err(err)?;
            let truth = count_segment_paths(&g, &pair(0, 1), kappa) as f64;
            sound &= l.log_lower_bound <= truth.ln() + 1e-9;
        }
    }
    Ok((
        succ >= need && valid && slow < Duration::from_secs(10) && sound,
        format!("{succ}/{seeds} cycles (need {need}), valid {valid}, slowest {slow:?}, ledger sound {sound}"),
    ))
}

fn probe(quick: bool) -> Check {
    let trials = if quick { 500 } else { 2000 };
    let g = dirac(24, 0.15, 800)?;
    let r = subset_dirac_probe(&g, 1, 2, 16, trials, 0, Some(0.15)).map_err(err)?;
    let full = subset_dirac_probe(&complete(24, 3), 1, 2, 16, trials, 1, Some(0.15)).map_err(err)?;
    Ok((
        r.ci_low <= r.rate && r.rate <= r.ci_high && full.rate == 1.0,
        format!(
            "rate {:.4} [{:.4}, {:.4}] vs {:.4}; complete {}",
            r.rate, r.ci_low, r.ci_high, r.reference, full.rate
        ),
    ))
}

pub fn run(quick: bool) -> Vec<SuiteRow> {
    let checks: [(u32, &'static str, fn(bool) -> Check); 12] = [
        (1, "matching-average exactness", exactness),
        (2, "perfect weighting", perfect),
        (3, "stationarity", stationarity),
        (4, "vertex marginal", marginal),
        (5, "walk coupling bound", walkalike),
        (6, "mixing", mixing),
        (7, "ℓ-walk counts", manywalks),
        (8, "goodness expectation", goodness),
        (9, "counting oracles", counting),
        (10, "count inequalities", count_bounds),
        (11, "end-to-end pipeline", pipeline),
        (12, "subset Dirac probe", probe),
    ];
    checks
        .into_iter()
        .map(|(id, name, f)| {
            let t = Instant::now();
            let (pass, detail) = f(quick).unwrap_or_else(|e| (false, format!("error: {e}")));
            let row = SuiteRow {
                id,
                name,
                pass,
                detail,
                seconds: t.elapsed().as_secs_f64(),
            };
            println!(
                "SUITE {:>2} {} {} ({:.1}s): {}",
                row.id,
                if row.pass { "PASS" } else { "FAIL" },
                row.name,
                row.seconds,
                row.detail
            );
            row
        })
        .collect()
}
