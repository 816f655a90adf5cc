//! The acceptance suite as a library: every criterion returns a structured
//! report, so the CLI `selftest` subcommand and the integration test target
//! run exactly the same checks.

use crate::flow::{
    asymmetric_ratio, asymmetric_ratio_brute_force, eulerian_oracle_edge, eulerian_oracle_vertex,
};
use crate::graph::{
    brute_force_optimum, directed_edge_conductance, directed_vertex_expansion, pi_induced_weights,
    scc_components, BruteForceInstance, DirectedGraph, Hypergraph, VertexWeights,
};
use crate::instances;
use crate::mixing;
use crate::rng::SplitMix64;
use crate::rounding::{hypergraph_cut, spectral_cut, CutOptions};
use crate::spectral::{
    bottom_eigs, gamma2_hypergraph, max_reweighted_gap, sigma_k_lower, Mode, SolveOptions,
};
use serde::Serialize;
use serde_json::{json, Value};
use std::time::Instant;

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub title: String,
    pub passed: bool,
    pub details: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestOutcome {
    pub seed: u64,
    pub reports: Vec<CriterionReport>,
    pub all_passed: bool,
    /// Wall-clock per criterion, kept outside the deterministic payload.
    #[serde(skip)]
    pub timings_ms: Vec<(u32, u64)>,
}

struct Checks {
    failures: Vec<String>,
    details: serde_json::Map<String, Value>,
}

impl Checks {
    fn new() -> Self {
        Checks {
            failures: Vec::new(),
            details: serde_json::Map::new(),
        }
    }

    fn require(&mut self, cond: bool, label: impl Into<String>) {
        if !cond {
            self.failures.push(label.into());
        }
    }

    fn record(&mut self, key: &str, value: Value) {
        self.details.insert(key.to_string(), value);
    }
}

fn run_criterion(
    id: u32,
    title: &str,
    body: impl FnOnce(&mut Checks) -> crate::Result<()>,
) -> (CriterionReport, u64) {
    let start = Instant::now();
    let mut checks = Checks::new();
    let result = body(&mut checks);
    let elapsed = start.elapsed().as_millis() as u64;
    let mut details = checks.details;
    if let Err(e) = result {
        checks.failures.push(format!("error: {e}"));
    }
    let passed = checks.failures.is_empty();
    if !passed {
        details.insert("failures".into(), json!(checks.failures));
    }
    (
        CriterionReport {
            id,
            title: title.to_string(),
            passed,
            details: Value::Object(details),
        },
        elapsed,
    )
}

fn round6(x: f64) -> Value {
    if x.is_infinite() {
        json!("inf")
    } else {
        json!((x * 1e6).round() / 1e6)
    }
}

fn c1_exact_evaluators(checks: &mut Checks) -> crate::Result<()> {
    let c4 = instances::directed_cycle(4);
    let phi = directed_edge_conductance(&c4, 0b0011)?;
    checks.require((phi - 0.25).abs() <= 1e-12, format!("phi(C4)={phi}"));
    let bf = brute_force_optimum(BruteForceInstance::Edge(&c4))?;
    checks.require(
        (bf.value - 0.25).abs() <= 1e-12,
        format!("bf phi(C4)={}", bf.value),
    );

    let pi = VertexWeights::uniform(4);
    let psi = directed_vertex_expansion(&c4, &pi, 0b0011)?;
    checks.require((psi - 0.5).abs() <= 1e-12, format!("psi(C4)={psi}"));
    let bf = brute_force_optimum(BruteForceInstance::Vertex(&c4, &pi))?;
    checks.require(
        (bf.value - 0.5).abs() <= 1e-12,
        format!("bf psi(C4)={}", bf.value),
    );

    let dag = instances::complete_dag(5);
    let phi0 = directed_edge_conductance(&dag, 0b00001)?;
    checks.require(phi0 == 0.0, format!("phi(DAG source)={phi0}"));
    let bf = brute_force_optimum(BruteForceInstance::Edge(&dag))?;
    checks.require(bf.value == 0.0, format!("bf phi(DAG)={}", bf.value));

    checks.record("phi_c4", round6(phi));
    checks.record("psi_c4", round6(psi));
    checks.record("phi_dag", round6(bf.value));
    Ok(())
}

fn c2_spectral_closed_form(checks: &mut Checks) -> crate::Result<()> {
    let opts = SolveOptions {
        tol: 1e-6,
        ..Default::default()
    };
    let mut values = Vec::new();
    for n in [4usize, 6, 8, 10, 12] {
        let g = instances::directed_cycle(n);
        let b = max_reweighted_gap(&g, Mode::Edge, None, &opts, None)?;
        let expect = 0.5 * (1.0 - (2.0 * std::f64::consts::PI / n as f64).cos());
        checks.require(
            (b.lambda_lo - expect).abs() <= 1e-3,
            format!("C{n}: lambda {} vs {expect}", b.lambda_lo),
        );
        checks.require(
            b.lambda_hi - b.lambda_lo <= 1e-3,
            format!("C{n}: bracket width {}", b.lambda_hi - b.lambda_lo),
        );
        values.push(json!({"n": n, "lambda_lo": round6(b.lambda_lo), "expected": round6(expect)}));
    }
    checks.record("cycles", Value::Array(values));
    Ok(())
}

fn c3_zero_law(checks: &mut Checks, seed: u64) -> crate::Result<()> {
    let opts = SolveOptions {
        max_iters: 60,
        ..Default::default()
    };
    let mut worst_sigma = 0.0f64;
    for n in 3..=8usize {
        let g = instances::complete_dag(n);
        for k in 2..=n {
            let s = sigma_k_lower(&g, Mode::Edge, None, k, &opts)?;
            worst_sigma = worst_sigma.max(s);
            checks.require(s <= 1e-6, format!("DAG n={n} k={k}: sigma={s}"));
        }
    }
    let mut rng = SplitMix64::new(seed ^ 0x0303);
    for i in 0..20u64 {
        let blocks = 2 + (i % 3) as usize;
        let n = (2 * blocks + 2 + rng.next_range(4)).min(12);
        let g = instances::random_multi_scc(n, blocks, rng.next_u64());
        let scc = scc_components(&g).len();
        for k in 2..=scc {
            let s = sigma_k_lower(&g, Mode::Edge, None, k, &opts)?;
            worst_sigma = worst_sigma.max(s);
            checks.require(s <= 1e-6, format!("multi-scc #{i} k={k}: sigma={s}"));
        }
    }
    let mut min_lambda = f64::INFINITY;
    for i in 0..20u64 {
        let n = 5 + (i % 4) as usize;
        let g = instances::random_strongly_connected(n, n + 3, rng.next_u64());
        let b = max_reweighted_gap(&g, Mode::Edge, None, &opts, None)?;
        min_lambda = min_lambda.min(b.lambda_lo);
        checks.require(
            b.lambda_lo > 1e-4,
            format!("sc #{i}: lambda_lo={}", b.lambda_lo),
        );
    }
    checks.record("worst_sigma", round6(worst_sigma));
    checks.record("min_lambda_lo_strongly_connected", round6(min_lambda));
    Ok(())
}

fn easy_direction_corpus(seed: u64) -> Vec<DirectedGraph> {
    let mut rng = SplitMix64::new(seed ^ 0x04ea);
    (0..50u64)
        .map(|i| {
            let n = 4 + (i % 7) as usize; // 4..=10
            instances::random_strongly_connected(n, n + 1 + rng.next_range(n), rng.next_u64())
        })
        .collect()
}

fn c4_easy_directions(checks: &mut Checks, seed: u64) -> crate::Result<()> {
    let opts = SolveOptions {
        max_iters: 300,
        ..Default::default()
    };
    let corpus = easy_direction_corpus(seed);
    let mut rng = SplitMix64::new(seed ^ 0x04eb);
    let mut worst_edge = f64::NEG_INFINITY;
    let mut worst_vertex = f64::NEG_INFINITY;
    for (i, g) in corpus.iter().enumerate() {
        let b = max_reweighted_gap(g, Mode::Edge, None, &opts, None)?;
        let phi = brute_force_optimum(BruteForceInstance::Edge(g))?.value;
        worst_edge = worst_edge.max(b.lambda_lo - 2.0 * phi);
        checks.require(
            b.lambda_lo <= 2.0 * phi + 1e-6,
            format!("edge #{i}: lambda {} vs 2 phi {}", b.lambda_lo, 2.0 * phi),
        );

        let gl = g.with_self_loops();
        let pi = if i % 2 == 0 {
            VertexWeights::uniform(gl.n())
        } else {
            VertexWeights::new((0..gl.n()).map(|_| 0.5 + 2.0 * rng.next_f64()).collect())?
        };
        let b = max_reweighted_gap(&gl, Mode::Vertex, Some(&pi), &opts, None)?;
        let psi = brute_force_optimum(BruteForceInstance::Vertex(&gl, &pi))?.value;
        worst_vertex = worst_vertex.max(b.lambda_lo - 2.0 * psi);
        checks.require(
            b.lambda_lo <= 2.0 * psi + 1e-6,
            format!("vertex #{i}: lambda {} vs 2 psi {}", b.lambda_lo, 2.0 * psi),
        );
    }
    checks.record("instances", json!(corpus.len()));
    checks.record("worst_edge_slack", round6(worst_edge));
    checks.record("worst_vertex_slack", round6(worst_vertex));
    Ok(())
}

fn c5_hard_direction_chain(checks: &mut Checks, seed: u64) -> crate::Result<()> {
    let corpus = easy_direction_corpus(seed);
    let opts = CutOptions::default();
    let mut worst_ratio = 0.0f64;
    for (i, g) in corpus.iter().enumerate() {
        let res = spectral_cut(g, Mode::Edge, None, seed.wrapping_add(i as u64), &opts)?;
        let d = &res.diagnostics;
        let bf = brute_force_optimum(BruteForceInstance::Edge(g))?.value;
        checks.require(
            res.cut.value >= bf - 1e-12,
            format!("edge #{i}: cut below brute force"),
        );
        if !d.scc_bypass {
            checks.require(
                res.cut.value <= 8.0 * d.xi * (1.0 + 1e-9) + 1e-12,
                format!("edge #{i}: cut {} vs 8 xi {}", res.cut.value, 8.0 * d.xi),
            );
            checks.require(
                (d.xi - 2.0 * d.eta).abs() <= 1e-6 * (1.0 + d.xi),
                format!("edge #{i}: xi {} vs 2 eta {}", d.xi, 2.0 * d.eta),
            );
            let eta_bound = 2.0 * std::f64::consts::SQRT_2 * d.lambda_one_dim.sqrt();
            checks.require(
                d.eta <= eta_bound * (1.0 + 1e-9) + 1e-12,
                format!("edge #{i}: eta {} vs {}", d.eta, eta_bound),
            );
            let chain = 46.0 * d.lambda_one_dim.sqrt();
            checks.require(
                res.cut.value <= chain + 1e-9,
                format!("edge #{i}: cut {} vs chain {}", res.cut.value, chain),
            );
            if chain > 0.0 {
                worst_ratio = worst_ratio.max(res.cut.value / chain);
            }
        }
        // vertex mode on a third of the corpus keeps the budget comfortable
        if i % 3 == 0 {
            let gl = g.with_self_loops();
            let pi = VertexWeights::uniform(gl.n());
            let res = spectral_cut(
                &gl,
                Mode::Vertex,
                Some(&pi),
                seed.wrapping_add(i as u64),
                &opts,
            )?;
            let d = &res.diagnostics;
            let bf = brute_force_optimum(BruteForceInstance::Vertex(&gl, &pi))?.value;
            checks.require(
                res.cut.value >= bf - 1e-12,
                format!("vertex #{i}: cut below brute"),
            );
            if !d.scc_bypass {
                checks.require(
                    res.cut.value <= 46.0 * d.lambda_one_dim.sqrt() + 1e-9,
                    format!("vertex #{i}: chain violated"),
                );
            }
        }
    }
    checks.record("instances", json!(corpus.len()));
    checks.record("worst_chain_ratio", round6(worst_ratio));
    Ok(())
}

fn c6_asymmetric_ratio(checks: &mut Checks, seed: u64) -> crate::Result<()> {
    let mut rng = SplitMix64::new(seed ^ 0x0616);
    let mut worst_gap = 0.0f64;
    for i in 0..30u64 {
        let n = 4 + (i % 7) as usize;
        let g = if i % 3 == 2 {
            instances::random_digraph(n, n + rng.next_range(2 * n), rng.next_u64())
        } else {
            instances::random_strongly_connected(n, rng.next_range(2 * n), rng.next_u64())
        };
        let w: Vec<f64> = g.edges().iter().map(|e| e.weight).collect();
        let a = asymmetric_ratio(&g, &w)?;
        let ab = asymmetric_ratio_brute_force(&g, &w)?;
        if a.is_infinite() || ab.is_infinite() {
            checks.require(
                a.is_infinite() == ab.is_infinite(),
                format!("#{i}: alpha {a} vs brute {ab}"),
            );
        } else {
            worst_gap = worst_gap.max((a - ab).abs());
            checks.require(
                (a - ab).abs() <= 1e-5,
                format!("#{i}: alpha {a} vs brute {ab}"),
            );
        }

        if a.is_finite() {
            let phi = brute_force_optimum(BruteForceInstance::Edge(&g))?.value;
            if phi > 0.0 {
                checks.require(
                    a <= 1.0 / phi + 1e-6,
                    format!("#{i}: alpha {a} vs 1/phi {}", 1.0 / phi),
                );
            }
            let pi =
                VertexWeights::new((0..g.n()).map(|_| 1.0 + rng.next_range(3) as f64).collect())?;
            let w_pi = pi_induced_weights(&g, &pi);
            let a_pi = asymmetric_ratio(&g, &w_pi)?;
            let psi = brute_force_optimum(BruteForceInstance::Vertex(&g, &pi))?.value;
            if psi > 0.0 && a_pi.is_finite() {
                let bound = 3.0 * g.max_degree() as f64 / psi;
                checks.require(
                    a_pi <= bound + 1e-6,
                    format!("#{i}: alpha_pi {a_pi} vs 3 Delta/psi {bound}"),
                );
            }
        }
    }
    checks.record("worst_bisection_gap", round6(worst_gap));
    Ok(())
}

fn c7_large_optimal(checks: &mut Checks, seed: u64) -> crate::Result<()> {
    let mut rng = SplitMix64::new(seed ^ 0x0717);
    for i in 0..30u64 {
        let n = 4 + (i % 6) as usize;
        let g =
            instances::random_strongly_connected_loops(n, n + rng.next_range(n), rng.next_u64());
        let w: Vec<f64> = g.edges().iter().map(|e| e.weight).collect();
        let lengths: Vec<f64> = g
            .edges()
            .iter()
            .map(|e| {
                if e.tail == e.head {
                    0.0
                } else {
                    rng.next_f64()
                }
            })
            .collect();

        let alpha = asymmetric_ratio(&g, &w)?;
        let (_, v_edge, _) = eulerian_oracle_edge(&g, &w, &lengths)?;
        let mass: f64 = w.iter().zip(&lengths).map(|(&a, &b)| a * b).sum();
        checks.require(
            v_edge >= mass / alpha - 1e-7,
            format!("#{i}: edge oracle {v_edge} below {mass}/{alpha}"),
        );

        let pi = VertexWeights::uniform(g.n());
        let w_pi = pi_induced_weights(&g, &pi);
        let alpha_pi = asymmetric_ratio(&g, &w_pi)?;
        let (_, v_vert, _) = eulerian_oracle_vertex(&g, &pi, &lengths)?;
        let mass_pi: f64 = w_pi.iter().zip(&lengths).map(|(&a, &b)| a * b).sum();
        let denom = g.max_degree() as f64 * alpha_pi;
        checks.require(
            v_vert >= mass_pi / denom - 1e-7,
            format!("#{i}: vertex oracle {v_vert} below {mass_pi}/{denom}"),
        );
    }
    checks.record("instances", json!(30));
    Ok(())
}

fn c8_mixing_lower_bound(checks: &mut Checks, seed: u64) -> crate::Result<()> {
    let mut rng = SplitMix64::new(seed ^ 0x0818);
    let eps = 1.0 / std::f64::consts::E;
    let mut max_resid = 0.0f64;
    for i in 0..20u64 {
        let n = 4 + (i % 9) as usize; // 4..=12
        let g =
            instances::random_strongly_connected_loops(n, n + rng.next_range(n), rng.next_u64());
        let pi = if i % 2 == 0 {
            VertexWeights::uniform_distribution(n)
        } else {
            let raw: Vec<f64> = (0..n).map(|_| 0.5 + rng.next_f64()).collect();
            let total: f64 = raw.iter().sum();
            VertexWeights::new(raw.into_iter().map(|x| x / total).collect())?
        };
        let fm = mixing::fastest_mixing(&g, &pi, &SolveOptions::default())?;
        max_resid = max_resid.max(fm.stationarity_residual);
        checks.require(
            fm.stationarity_residual <= 1e-10,
            format!("#{i}: residual {}", fm.stationarity_residual),
        );
        let psi = fm.bounds.psi.expect("psi computed for small n");
        // several feasible chains per instance: the lazy optimum and two
        // further holding-probability blends
        let chains = [
            fm.chain.clone(),
            blend_with_identity(&fm.chain, 0.4)?,
            blend_with_identity(&fm.chain, 0.8)?,
        ];
        for (ci, chain) in chains.iter().enumerate() {
            let t = mixing::mixing_time_inf(chain, &pi, eps)?;
            checks.require(
                t.as_f64() > 1.0 / (4.0 * psi),
                format!(
                    "#{i}.{ci}: tau_inf {:?} vs 1/(4 psi) {}",
                    t,
                    1.0 / (4.0 * psi)
                ),
            );
        }
    }
    checks.record("max_stationarity_residual", json!(max_resid));
    Ok(())
}

fn blend_with_identity(
    chain: &mixing::MarkovChain,
    hold: f64,
) -> crate::Result<mixing::MarkovChain> {
    let n = chain.n();
    let p = nalgebra::DMatrix::from_fn(n, n, |u, v| {
        (1.0 - hold) * chain.get(u, v) + if u == v { hold } else { 0.0 }
    });
    mixing::MarkovChain::new(p)
}

fn c9_separation(checks: &mut Checks) -> crate::Result<()> {
    let g = instances::two_clique_bridge(8);
    let chain = mixing::random_walk_chain(&g)?;
    let pi = mixing::stationary(&chain)?;
    let (h, _) = mixing::cheeger_constant_h(&chain, &pi)?;
    checks.require(h >= 0.05, format!("h(G) = {h} below 0.05"));

    let phi = brute_force_optimum(BruteForceInstance::Edge(&g))?.value;
    checks.require(phi <= 1.0 / 64.0, format!("phi(G) = {phi} above 1/64"));

    let ones = VertexWeights::uniform(g.n());
    let psi = brute_force_optimum(BruteForceInstance::Vertex(&g, &ones))?.value;
    checks.require(psi <= 1.0 / 8.0, format!("psi(G) = {psi} above 1/8"));

    checks.record("h", round6(h));
    checks.record("phi", round6(phi));
    checks.record("psi", round6(psi));
    Ok(())
}

fn c10_hypergraph(checks: &mut Checks, seed: u64) -> crate::Result<()> {
    // (a) 2-uniform hypergraphs reduce exactly to undirected graphs
    let mut rng = SplitMix64::new(seed ^ 0x0a10);
    let mut hedges: Vec<(Vec<usize>, f64)> = Vec::new();
    for i in 0..8usize {
        hedges.push((vec![i, (i + 1) % 8], 1.0 + rng.next_range(3) as f64));
    }
    hedges.push((vec![0, 4], 1.0));
    hedges.push((vec![2, 6], 2.0));
    let h = Hypergraph::new(8, &hedges)?;
    let opts = SolveOptions {
        tol: 1e-5,
        ..Default::default()
    };
    let b = gamma2_hypergraph(&h, &opts, None)?;
    let mut l = nalgebra::DMatrix::<f64>::zeros(8, 8);
    for (vs, w) in &hedges {
        l[(vs[0], vs[1])] -= w;
        l[(vs[1], vs[0])] -= w;
    }
    for v in 0..8 {
        l[(v, v)] = h.degree(v);
    }
    let dinv: Vec<f64> = (0..8).map(|v| 1.0 / h.degree(v).sqrt()).collect();
    let ln = nalgebra::DMatrix::from_fn(8, 8, |i, j| l[(i, j)] * dinv[i] * dinv[j]);
    let (vals, _) = bottom_eigs(&ln, 2)?;
    checks.require(
        (b.lambda_lo - vals[1]).abs() <= 1e-3,
        format!("2-uniform gamma {} vs lambda2 {}", b.lambda_lo, vals[1]),
    );
    checks.record("two_uniform_gamma", round6(b.lambda_lo));
    checks.record("two_uniform_lambda2", round6(vals[1]));

    // (b) single hyperedge vs a grid oracle on the clique-weight simplex;
    // the barycentric grid k/999 contains the exact symmetric optimum
    let h1 = Hypergraph::new(3, &[(vec![0, 1, 2], 1.0)])?;
    let b1 = gamma2_hypergraph(&h1, &opts, None)?;
    let steps = 999usize;
    let mut grid_best = 0.0f64;
    for xi in 0..=steps {
        for yi in 0..=steps - xi {
            let x = xi as f64 / steps as f64;
            let y = yi as f64 / steps as f64;
            let z = 1.0 - x - y;
            // triangle Laplacian spectrum: 0 and s -/+ sqrt(s^2 - 3p)
            let s = x + y + z;
            let p = x * y + y * z + z * x;
            let lam2 = s - (s * s - 3.0 * p).max(0.0).sqrt();
            grid_best = grid_best.max(lam2);
        }
    }
    checks.require(
        (b1.lambda_lo - grid_best).abs() <= 1e-3,
        format!("single-edge gamma {} vs grid {grid_best}", b1.lambda_lo),
    );
    checks.record("single_edge_gamma", round6(b1.lambda_lo));
    checks.record("grid_oracle", round6(grid_best));

    // (c) rounding chain on hypergraphs with genuine sparse cuts
    let mut blob: Vec<(Vec<usize>, f64)> = Vec::new();
    for b0 in [0usize, 4] {
        blob.push((vec![b0, b0 + 1, b0 + 2], 1.0));
        blob.push((vec![b0 + 1, b0 + 2, b0 + 3], 1.0));
        blob.push((vec![b0, b0 + 2, b0 + 3], 1.0));
    }
    blob.push((vec![3, 4], 0.5));
    let h2 = Hypergraph::new(8, &blob)?;
    let res = hypergraph_cut(&h2, seed, &CutOptions::default())?;
    let bf = brute_force_optimum(BruteForceInstance::Hyper(&h2))?;
    checks.require(
        res.cut.value <= 8.0 * res.diagnostics.xi * (1.0 + 1e-9) + 1e-12,
        format!(
            "blob cut {} vs 8 xi {}",
            res.cut.value,
            8.0 * res.diagnostics.xi
        ),
    );
    checks.require(
        res.cut.value >= bf.value - 1e-12,
        "blob cut below brute force".to_string(),
    );

    let hr = instances::random_hypergraph(9, 7, 3, seed ^ 0x33);
    let res = hypergraph_cut(&hr, seed, &CutOptions::default())?;
    let bf = brute_force_optimum(BruteForceInstance::Hyper(&hr))?;
    checks.require(
        res.cut.value <= 8.0 * res.diagnostics.xi * (1.0 + 1e-9) + 1e-12,
        format!(
            "random cut {} vs 8 xi {}",
            res.cut.value,
            8.0 * res.diagnostics.xi
        ),
    );
    checks.require(
        res.cut.value >= bf.value - 1e-12,
        "random cut below brute force".to_string(),
    );
    checks.record("blob_cut", round6(res.cut.value));
    Ok(())
}

fn run_once(seed: u64) -> (Vec<CriterionReport>, Vec<(u32, u64)>) {
    let mut reports = Vec::new();
    let mut timings = Vec::new();
    let mut push = |r: (CriterionReport, u64)| {
        timings.push((r.0.id, r.1));
        reports.push(r.0);
    };
    push(run_criterion(
        1,
        "exact evaluators on C4 and the complete DAG",
        c1_exact_evaluators,
    ));
    push(run_criterion(
        2,
        "edge-capacitated gap of cycles matches the closed form",
        |c| c2_spectral_closed_form(c),
    ));
    push(run_criterion(
        3,
        "sigma_k zero law and positivity on strong connectivity",
        |c| c3_zero_law(c, seed),
    ));
    push(run_criterion(
        4,
        "easy directions against brute force",
        |c| c4_easy_directions(c, seed),
    ));
    push(run_criterion(
        5,
        "hard-direction constant-explicit chain",
        |c| c5_hard_direction_chain(c, seed),
    ));
    push(run_criterion(
        6,
        "asymmetric ratio: bisection vs brute force and bounds",
        |c| c6_asymmetric_ratio(c, seed),
    ));
    push(run_criterion(
        7,
        "large optimal property of the Eulerian oracles",
        |c| c7_large_optimal(c, seed),
    ));
    push(run_criterion(
        8,
        "infinity-norm mixing lower bound and stationarity",
        |c| c8_mixing_lower_bound(c, seed),
    ));
    push(run_criterion(
        9,
        "two-clique bridge separation of h, phi, psi",
        c9_separation,
    ));
    push(run_criterion(
        10,
        "hypergraph gap reductions and rounding",
        |c| c10_hypergraph(c, seed),
    ));
    (reports, timings)
}

/// Runs the entire acceptance suite. Criteria 1-10 execute twice with the
/// same seed; criterion 11 passes when both passes serialize identically.
pub fn run_all(seed: u64) -> SelftestOutcome {
    let (mut reports, mut timings) = run_once(seed);
    let start = Instant::now();
    let (second, _) = run_once(seed);
    let first_json = serde_json::to_string(&reports).unwrap();
    let second_json = serde_json::to_string(&second).unwrap();
    let identical = first_json == second_json;
    reports.push(CriterionReport {
        id: 11,
        title: "determinism: identical payloads under a fixed seed".into(),
        passed: identical,
        details: json!({"bytes": first_json.len(), "identical": identical}),
    });
    timings.push((11, start.elapsed().as_millis() as u64));
    let all_passed = reports.iter().all(|r| r.passed);
    SelftestOutcome {
        seed,
        reports,
        all_passed,
        timings_ms: timings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn criterion_one_is_fast_and_green() {
        let (report, _) = run_criterion(1, "c1", c1_exact_evaluators);
        assert!(report.passed, "{:?}", report.details);
    }

    #[test]
    fn criterion_nine_is_green() {
        let (report, _) = run_criterion(9, "c9", c9_separation);
        assert!(report.passed, "{:?}", report.details);
    }
}
