//! The hard-direction pipeline: random projection, best-coordinate
//! selection, the squaring map into the l1 program, dual extraction, and the
//! four-function threshold rounding that produces certified cuts.
//!
//! Every run carries its certificate chain: the returned cut is at most
//! 8 * (dual objective), the dual objective is twice the inner l1 value, and
//! the l1 value is at most 2*sqrt(2) times the square root of the
//! one-dimensional spectral value. The chain is re-checked at runtime on
//! every invocation.

use crate::flow::DualCertificate;
use crate::graph::{scc_components, Cut, DirectedGraph, Hypergraph, VertexWeights};
use crate::rng::SplitMix64;
use crate::spectral::{
    cluster_embedding, frank_wolfe, Embedding, Lengths, Mode, Problem, SolveOptions,
    SpectralBracket,
};
use crate::{Error, Result};
use serde::Serialize;

/// Gaussian projection of an embedding to k dimensions, rescaled by
/// 1/sqrt(k), then re-centered exactly and renormalized.
pub fn project_random(f: &Embedding, base: &[f64], k: usize, seed: u64) -> Result<Embedding> {
    if k == 0 {
        return Err(Error::Parameter("projection dimension must be >= 1".into()));
    }
    let mut rng = SplitMix64::new(seed);
    for _attempt in 0..16 {
        let mut data = vec![0.0; f.n * k];
        for i in 0..k {
            let dirs: Vec<f64> = (0..f.dim).map(|_| rng.next_gaussian()).collect();
            let scale = 1.0 / (k as f64).sqrt();
            for v in 0..f.n {
                let dot: f64 = (0..f.dim).map(|j| f.get(v, j) * dirs[j]).sum();
                data[v * k + i] = dot * scale;
            }
        }
        let mut h = Embedding::new(f.n, k, data);
        h.center(base);
        if h.weighted_sq_norm(base) > 1e-24 {
            h.normalize(base)?;
            return Ok(h);
        }
        // astronomically unlikely: every direction orthogonal to the data
    }
    Err(Error::Numerical(
        "random projection degenerated to zero".into(),
    ))
}

pub(crate) fn best_coordinate_problem(
    problem: &Problem<'_>,
    f: &Embedding,
) -> Result<(Embedding, f64)> {
    let base = problem.base();
    f.check_feasible(&base)?;
    let factor = problem.certify_factor();
    let mut best: Option<(f64, Embedding)> = None;
    for j in 0..f.dim {
        let col = f.column(j);
        let mut cand = Embedding::from_column(&col);
        cand.centered = true; // a coordinate of a centered embedding is centered
        let s = cand.weighted_sq_norm(&base);
        if s <= 1e-18 {
            continue;
        }
        cand.normalize(&base)?;
        let out = problem.oracle(&Lengths::Sq(&cand))?;
        let value = factor * out.value;
        if best.as_ref().map_or(true, |(bv, _)| value < *bv) {
            best = Some((value, cand));
        }
    }
    let (value, emb) =
        best.ok_or_else(|| Error::Degenerate("all embedding coordinates are zero".into()))?;
    // the averaging argument guarantees the winner is within a factor dim of
    // the full embedding's value
    let full = factor * problem.oracle(&Lengths::Sq(f))?.value;
    if value > f.dim as f64 * full * (1.0 + 1e-6) + 1e-9 {
        return Err(Error::Numerical(format!(
            "best coordinate {value} exceeds {} * {full}",
            f.dim
        )));
    }
    Ok((emb, value))
}

/// Picks the single coordinate of `f` whose renormalized copy certifies the
/// smallest upper bound; the winner is within a factor `f.dim` of the full
/// embedding's value.
pub fn best_coordinate(
    g: &DirectedGraph,
    mode: Mode,
    pi: Option<&VertexWeights>,
    f: &Embedding,
) -> Result<(Embedding, f64)> {
    let uniform;
    let problem = match mode {
        Mode::Vertex => {
            let pi = match pi {
                Some(p) => p,
                None => {
                    uniform = VertexWeights::uniform(g.n());
                    &uniform
                }
            };
            Problem::Vertex { g, pi }
        }
        Mode::Edge => Problem::Edge { g },
    };
    best_coordinate_problem(&problem, f)
}

/// The sign-preserving squaring map g = +/-(f+c)^2 with c chosen so the
/// output is centered; the result is rescaled to weighted l1 norm 1.
///
/// Input must be centered with weighted l1 norm 1. The squared mass bound
/// sum|g| in [s, 2s] (s the weighted squared norm of the input) and the
/// pointwise distortion inequality are both checked before rescaling.
pub fn square_map(f: &[f64], base: &[f64]) -> Result<Vec<f64>> {
    let n = f.len();
    if n != base.len() {
        return Err(Error::Parameter("length mismatch".into()));
    }
    let scale = f.iter().fold(1.0f64, |a, &x| a.max(x.abs()));
    let mean: f64 = f.iter().zip(base).map(|(&x, &b)| x * b).sum();
    if mean.abs() > 1e-9 * scale {
        return Err(Error::Parameter(format!("input not centered: {mean}")));
    }
    let l1: f64 = f.iter().zip(base).map(|(&x, &b)| x.abs() * b).sum();
    if (l1 - 1.0).abs() > 1e-9 {
        return Err(Error::Parameter(format!("input l1 norm {l1} != 1")));
    }

    // sum_u base(u) sign(f+c)(f+c)^2 is strictly increasing in c
    let residual = |c: f64| -> f64 {
        f.iter()
            .zip(base)
            .map(|(&x, &b)| {
                let y = x + c;
                b * y.abs() * y
            })
            .sum()
    };
    let bound = f.iter().fold(0.0f64, |a, &x| a.max(x.abs())) + 1.0;
    let mut lo = -bound;
    let mut hi = bound;
    let mut c = 0.0;
    for _ in 0..500 {
        c = 0.5 * (lo + hi);
        let r = residual(c);
        if r.abs() <= 1e-12 {
            break;
        }
        if r > 0.0 {
            hi = c;
        } else {
            lo = c;
        }
    }

    let g: Vec<f64> = f
        .iter()
        .map(|&x| {
            let y = x + c;
            y.abs() * y
        })
        .collect();

    // |g(u)-g(v)|^2 <= 2 (f(u)-f(v))^2 (|g(u)|+|g(v)|) on every pair
    for u in 0..n {
        for v in u + 1..n {
            let lhs = (g[u] - g[v]).powi(2);
            let rhs = 2.0 * (f[u] - f[v]).powi(2) * (g[u].abs() + g[v].abs());
            if lhs > rhs * (1.0 + 1e-9) + 1e-24 {
                return Err(Error::Numerical(format!(
                    "squaring distortion violated at ({u},{v}): {lhs} > {rhs}"
                )));
            }
        }
    }

    let s2: f64 = f.iter().zip(base).map(|(&x, &b)| b * x * x).sum();
    let l1g: f64 = g.iter().zip(base).map(|(&x, &b)| x.abs() * b).sum();
    if l1g < s2 * (1.0 - 1e-9) || l1g > 2.0 * s2 * (1.0 + 1e-9) {
        return Err(Error::Numerical(format!(
            "squared mass {l1g} outside [{s2}, {}]",
            2.0 * s2
        )));
    }
    Ok(g.iter().map(|&x| x / l1g).collect())
}

pub(crate) fn dual_from_embedding_problem(
    problem: &Problem<'_>,
    g: &[f64],
) -> Result<(DualCertificate, f64)> {
    let base = problem.base();
    let l1: f64 = g.iter().zip(&base).map(|(&x, &b)| x.abs() * b).sum();
    if (l1 - 1.0).abs() > 1e-9 {
        return Err(Error::Parameter(format!("embedding l1 norm {l1} != 1")));
    }
    let out = problem.oracle(&Lengths::Abs(g))?;
    let value = out.value;
    let cert = out.cert;
    if (cert.objective - value).abs() > 1e-6 * (1.0 + value.abs()) {
        return Err(Error::Numerical(format!(
            "strong duality violated: primal {value} vs dual {}",
            cert.objective
        )));
    }
    Ok((cert, value))
}

/// Runs the matching Eulerian oracle with absolute-difference lengths and
/// returns its dual certificate; the objective equals twice the inner l1
/// maximization at the embedding.
pub fn dual_from_embedding(
    g: &DirectedGraph,
    mode: Mode,
    pi: Option<&VertexWeights>,
    emb: &[f64],
) -> Result<DualCertificate> {
    let uniform;
    let problem = match mode {
        Mode::Vertex => {
            let pi = match pi {
                Some(p) => p,
                None => {
                    uniform = VertexWeights::uniform(g.n());
                    &uniform
                }
            };
            Problem::Vertex { g, pi }
        }
        Mode::Edge => Problem::Edge { g },
    };
    Ok(dual_from_embedding_problem(&problem, emb)?.0)
}

fn weighted_median_lower(values: &[f64], base: &[f64]) -> f64 {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap().then(a.cmp(&b)));
    let total: f64 = base.iter().sum();
    let mut cum = 0.0;
    for &i in &order {
        cum += base[i];
        if cum >= 0.5 * total * (1.0 - 1e-12) {
            return values[i];
        }
    }
    values[*order.last().unwrap()]
}

pub(crate) fn threshold_cut_problem(problem: &Problem<'_>, g: &[f64], r: &[f64]) -> Result<Cut> {
    let n = problem.n();
    let base = problem.base();
    let total: f64 = base.iter().sum();
    let mean_r: f64 = r.iter().zip(&base).map(|(&x, &b)| x * b).sum::<f64>() / total;
    let r: Vec<f64> = r.iter().map(|&x| x - mean_r).collect();

    let plus: Vec<f64> = (0..n).map(|v| g[v] + r[v]).collect();
    let minus: Vec<f64> = (0..n).map(|v| g[v] - r[v]).collect();
    let c1 = weighted_median_lower(&plus, &base);
    let c2 = weighted_median_lower(&minus, &base);

    let funcs: [Vec<f64>; 4] = [
        (0..n).map(|v| (plus[v] - c1).max(0.0)).collect(),
        (0..n).map(|v| (minus[v] - c2).max(0.0)).collect(),
        (0..n).map(|v| (c2 - minus[v]).max(0.0)).collect(),
        (0..n).map(|v| (c1 - plus[v]).max(0.0)).collect(),
    ];

    // the medians keep every support at or below half the total mass
    for f in &funcs {
        let supp: f64 = (0..n).filter(|&v| f[v] > 0.0).map(|v| base[v]).sum();
        if supp > 0.5 * total * (1.0 + 1e-9) {
            return Err(Error::Numerical("median support property violated".into()));
        }
    }
    // the l1 mass spread across the four functions is at least 1/2
    let mass: f64 = funcs
        .iter()
        .map(|f| f.iter().zip(&base).map(|(&x, &b)| x * b).sum::<f64>())
        .sum();
    if mass < 0.5 - 1e-9 {
        return Err(Error::Numerical(format!("threshold mass {mass} below 1/2")));
    }

    let mut best: Option<(f64, u64)> = None;
    for f in &funcs {
        let mut levels: Vec<f64> = f.to_vec();
        levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
        levels.dedup();
        if levels.len() < 2 {
            continue;
        }
        // S_t = {v : f(v) > t}, one cut per gap between consecutive levels
        for t in &levels[..levels.len() - 1] {
            let mask: u64 = (0..n).filter(|&v| f[v] > *t).fold(0, |m, v| m | (1 << v));
            if mask == 0 {
                continue;
            }
            match problem.evaluate_cut(mask) {
                Ok(value) => {
                    if best.as_ref().map_or(true, |(bv, _)| value < *bv) {
                        best = Some((value, mask));
                    }
                }
                Err(Error::DegenerateCut(_)) | Err(Error::InvalidCut(_)) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    let (value, mask) =
        best.ok_or_else(|| Error::Degenerate("all four threshold functions are flat".into()))?;
    Ok(Cut::from_mask(mask, n, value, problem.cut_mode()))
}

/// Four-function threshold rounding of a one-dimensional l1 embedding with
/// dual potentials r: sweeps every level set of max{0, +/-(g +/- r) - c}
/// with c the matching weighted median, and returns the best cut found.
pub fn threshold_cut(
    graph: &DirectedGraph,
    mode: Mode,
    pi: Option<&VertexWeights>,
    g: &[f64],
    r: &[f64],
) -> Result<Cut> {
    let uniform;
    let problem = match mode {
        Mode::Vertex => {
            let pi = match pi {
                Some(p) => p,
                None => {
                    uniform = VertexWeights::uniform(graph.n());
                    &uniform
                }
            };
            Problem::Vertex { g: graph, pi }
        }
        Mode::Edge => Problem::Edge { g: graph },
    };
    threshold_cut_problem(&problem, g, r)
}

#[derive(Debug, Clone, Serialize)]
pub struct CutDiagnostics {
    pub lambda_lo: f64,
    pub lambda_hi: f64,
    /// Certified value of the chosen one-dimensional embedding.
    pub lambda_one_dim: f64,
    /// Inner l1 value at the squared embedding.
    pub eta: f64,
    /// Dual objective; the returned cut always satisfies value <= 8 xi.
    pub xi: f64,
    pub projection_dim: usize,
    pub ensemble: usize,
    pub seed: u64,
    pub scc_bypass: bool,
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub struct CutResult {
    pub cut: Cut,
    pub bracket: SpectralBracket,
    pub diagnostics: CutDiagnostics,
}

#[derive(Debug, Clone, Copy)]
pub struct CutOptions {
    pub solve: SolveOptions,
    pub ensemble: usize,
    /// Constant C in the projection dimension ceil(C log2(alpha term)).
    pub projection_c: f64,
    /// Overrides the computed projection dimension when set.
    pub projection_dim: Option<usize>,
    /// Worker threads for the ensemble; 0 means all available cores.
    pub threads: usize,
}

impl Default for CutOptions {
    fn default() -> Self {
        CutOptions {
            solve: SolveOptions::default(),
            ensemble: 5,
            projection_c: 2.0,
            projection_dim: None,
            threads: 1,
        }
    }
}

/// Full spectral cut pipeline for a directed graph: solve the gap, project
/// the witness eigen-embedding, reduce to one dimension, square into the l1
/// program, extract duals, and threshold-round. An ensemble of seeds is run
/// and the best cut returned.
pub fn spectral_cut(
    g: &DirectedGraph,
    mode: Mode,
    pi: Option<&VertexWeights>,
    seed: u64,
    opts: &CutOptions,
) -> Result<CutResult> {
    let uniform;
    let pi_ref = match (mode, pi) {
        (Mode::Vertex, Some(p)) => Some(p),
        (Mode::Vertex, None) => {
            uniform = VertexWeights::uniform(g.n());
            Some(&uniform)
        }
        (Mode::Edge, p) => p,
    };
    let augmented;
    let g = match mode {
        Mode::Vertex if (0..g.n()).any(|v| !g.has_self_loop(v)) => {
            augmented = g.with_self_loops();
            &augmented
        }
        _ => g,
    };
    let problem = match mode {
        Mode::Vertex => Problem::Vertex {
            g,
            pi: pi_ref.unwrap(),
        },
        Mode::Edge => Problem::Edge { g },
    };
    let alpha_term = match mode {
        Mode::Edge => {
            let w: Vec<f64> = g.edges().iter().map(|e| e.weight).collect();
            crate::flow::asymmetric_ratio(g, &w)?
        }
        Mode::Vertex => {
            let w_pi = crate::graph::pi_induced_weights(g, pi_ref.unwrap());
            g.max_degree() as f64 * crate::flow::asymmetric_ratio(g, &w_pi)?
        }
    };
    let zero_cut = if alpha_term.is_infinite() {
        Some(zero_cut_from_components(&problem, g, mode, pi_ref)?)
    } else {
        None
    };
    run_pipeline(&problem, alpha_term, zero_cut, seed, opts)
}

/// Full pipeline for hypergraph conductance; the projection dimension is
/// driven by the maximum hyperedge size.
pub fn hypergraph_cut(h: &Hypergraph, seed: u64, opts: &CutOptions) -> Result<CutResult> {
    let problem = Problem::Hyper { h };
    let alpha_term = h.max_size() as f64;
    run_pipeline(&problem, alpha_term, None, seed, opts)
}

/// Zero-expansion cut from the condensation when the gap is exactly zero.
/// Works on the positive-capacity subgraph so zero-weight edges cannot hide
/// an unreturnable arc.
fn zero_cut_from_components(
    problem: &Problem<'_>,
    g: &DirectedGraph,
    mode: Mode,
    pi: Option<&VertexWeights>,
) -> Result<Cut> {
    let caps: Vec<f64> = match mode {
        Mode::Edge => g.edges().iter().map(|e| e.weight).collect(),
        Mode::Vertex => crate::graph::pi_induced_weights(g, pi.unwrap()),
    };
    let pos_edges: Vec<(usize, usize, f64)> = g
        .edges()
        .iter()
        .zip(&caps)
        .filter(|(e, &c)| c > 0.0 && e.tail != e.head)
        .map(|(e, _)| (e.tail, e.head, 1.0))
        .collect();
    let sub = DirectedGraph::new(g.n(), &pos_edges)?;
    // Tarjan emits components in reverse topological order, so each prefix
    // of the list is closed under successors: no positive arc leaves it
    let comps = scc_components(&sub);
    let mut mask = 0u64;
    for comp in &comps[..comps.len().saturating_sub(1)] {
        for &v in comp {
            mask |= 1 << v;
        }
        match problem.evaluate_cut(mask) {
            Ok(value) => {
                if value <= 1e-12 {
                    return Ok(Cut::from_mask(mask, g.n(), value, problem.cut_mode()));
                }
            }
            Err(Error::DegenerateCut(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Degenerate(
        "no non-degenerate zero cut among condensation prefixes".into(),
    ))
}

fn run_pipeline(
    problem: &Problem<'_>,
    alpha_term: f64,
    zero_cut: Option<Cut>,
    seed: u64,
    opts: &CutOptions,
) -> Result<CutResult> {
    let bracket = frank_wolfe(problem, &opts.solve, None)?;
    let base = problem.base();
    let factor = problem.certify_factor();
    let is_hyper = matches!(problem, Problem::Hyper { .. });

    if let Some(cut) = zero_cut {
        let diagnostics = CutDiagnostics {
            lambda_lo: bracket.lambda_lo,
            lambda_hi: bracket.lambda_hi,
            lambda_one_dim: 0.0,
            eta: 0.0,
            xi: 0.0,
            projection_dim: 0,
            ensemble: 0,
            seed,
            scc_bypass: true,
            converged: bracket.converged,
        };
        return Ok(CutResult {
            cut,
            bracket,
            diagnostics,
        });
    }

    let f_base = cluster_embedding(problem, &bracket.witness, opts.solve.mult_tol)?;
    let k_proj = opts
        .projection_dim
        .unwrap_or(((opts.projection_c * alpha_term.log2()).ceil() as usize).max(1))
        .clamp(1, problem.n());

    let root = SplitMix64::new(seed);
    let mut candidates: Vec<(usize, u64)> = Vec::new();
    for member in 0..opts.ensemble.max(1) {
        let mut member_rng = root.split(member as u64 + 1);
        candidates.push((k_proj, member_rng.next_u64()));
        if k_proj != 1 {
            // one-dimensional fallback projection
            candidates.push((1, member_rng.next_u64()));
        }
    }

    struct Candidate {
        cut: Cut,
        lambda1: f64,
        eta: f64,
        xi: f64,
        dim: usize,
    }
    let run_candidate = |dim: usize, proj_seed: u64| -> Result<Option<Candidate>> {
        let h = project_random(&f_base, &base, dim, proj_seed)?;
        let (f1, lambda1) = match best_coordinate_problem(problem, &h) {
            Ok(x) => x,
            Err(Error::Degenerate(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        let col = f1.column(0);
        let l1: f64 = col.iter().zip(&base).map(|(&x, &b)| x.abs() * b).sum();
        if l1 <= 1e-18 {
            return Ok(None);
        }
        let f_l1: Vec<f64> = col.iter().map(|&x| x / l1).collect();
        let g_sq = square_map(&f_l1, &base)?;
        let (cert, nu) = dual_from_embedding_problem(problem, &g_sq)?;
        let xi = cert.objective;
        let eta = factor * nu;
        let cut = threshold_cut_problem(problem, &g_sq, &cert.r)?;

        // certificate chain, re-checked on every member
        if cut.value > 8.0 * xi * (1.0 + 1e-9) + 1e-12 {
            return Err(Error::Numerical(format!(
                "cut {} exceeds 8 * dual objective {xi}",
                cut.value
            )));
        }
        if !is_hyper {
            if (xi - 2.0 * eta).abs() > 1e-6 * (1.0 + xi.abs()) {
                return Err(Error::Numerical(format!("xi {xi} != 2 eta {eta}")));
            }
            let bound = 2.0 * std::f64::consts::SQRT_2 * lambda1.max(0.0).sqrt();
            if eta > bound * (1.0 + 1e-9) + 1e-12 {
                return Err(Error::Numerical(format!("eta {eta} exceeds {bound}")));
            }
            let chain = 46.0 * lambda1.max(0.0).sqrt();
            if cut.value > chain + 1e-9 {
                return Err(Error::Numerical(format!(
                    "cut {} exceeds 46 sqrt(lambda1) = {chain}",
                    cut.value
                )));
            }
        }
        Ok(Some(Candidate {
            cut,
            lambda1,
            eta,
            xi,
            dim,
        }))
    };

    let threads = if opts.threads == 0 {
        std::thread::available_parallelism()
            .map(|p| p.get())
            .unwrap_or(1)
    } else {
        opts.threads
    };
    let outcomes: Vec<Result<Option<Candidate>>> = if threads <= 1 || candidates.len() <= 1 {
        candidates
            .iter()
            .map(|&(d, s)| run_candidate(d, s))
            .collect()
    } else {
        let chunk = candidates.len().div_ceil(threads);
        let runner = &run_candidate;
        std::thread::scope(|scope| {
            let handles: Vec<_> = candidates
                .chunks(chunk)
                .map(|part| {
                    scope.spawn(move || part.iter().map(|&(d, s)| runner(d, s)).collect::<Vec<_>>())
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().unwrap())
                .collect()
        })
    };

    // reduce in candidate order so thread count never changes the answer
    let mut best: Option<Candidate> = None;
    for outcome in outcomes {
        if let Some(c) = outcome? {
            if best.as_ref().map_or(true, |b| c.cut.value < b.cut.value) {
                best = Some(c);
            }
        }
    }
    let chosen =
        best.ok_or_else(|| Error::Degenerate("every ensemble member degenerated".into()))?;
    let diagnostics = CutDiagnostics {
        lambda_lo: bracket.lambda_lo,
        lambda_hi: bracket.lambda_hi,
        lambda_one_dim: chosen.lambda1,
        eta: chosen.eta,
        xi: chosen.xi,
        projection_dim: chosen.dim,
        ensemble: opts.ensemble,
        seed,
        scc_bypass: false,
        converged: bracket.converged,
    };
    Ok(CutResult {
        cut: chosen.cut,
        bracket,
        diagnostics,
    })
}
