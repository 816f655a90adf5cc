//! Certified computation of the reweighted spectral gaps by Frank-Wolfe over
//! the circulation polytope, using the flow oracles as linear maximization
//! oracles and a dense symmetric eigensolver for subgradients.
//!
//! The objective sum of the k smallest Laplacian eigenvalues is concave in
//! the reweighting (Ky Fan), and the first eigenvalue is identically zero on
//! every feasible point, so for k = 2 the objective is the spectral gap
//! itself. Each eigen-embedding is feasible for the minimax form and yields
//! an anytime upper bound; iterates yield lower bounds. The two sequences
//! bracket the optimum.

use crate::eig;
use crate::flow::{self, DualCertificate, Reweighting};
use crate::graph::{pi_induced_weights, CutMode, DirectedGraph, Hypergraph, VertexWeights};
use crate::{Error, Result};
use nalgebra::DMatrix;
use serde::Serialize;

pub use crate::eig::bottom_eigs;

/// Capacity mode of the reweighted-gap program on a directed graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Vertex,
    Edge,
}

impl Mode {
    pub fn cut_mode(self) -> CutMode {
        match self {
            Mode::Vertex => CutMode::VertexExpansion,
            Mode::Edge => CutMode::EdgeConductance,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iters: usize,
    /// Number of bottom eigenvalues in the objective; 2 is the spectral gap.
    pub k: usize,
    /// Eigenvalues within this of the k-th smallest join the subgradient
    /// cluster.
    pub mult_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-4,
            max_iters: 5000,
            k: 2,
            mult_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TraceRecord {
    pub iteration: usize,
    pub lambda_lo: f64,
    pub lambda_hi: f64,
    pub fw_gap: f64,
}

/// Map from vertices to real vectors with a declared weighting mode.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub n: usize,
    pub dim: usize,
    data: Vec<f64>, // row-major n x dim
    pub centered: bool,
    pub normalized: bool,
}

impl Embedding {
    pub fn new(n: usize, dim: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), n * dim);
        Embedding {
            n,
            dim,
            data,
            centered: false,
            normalized: false,
        }
    }

    pub fn from_column(col: &[f64]) -> Self {
        Embedding::new(col.len(), 1, col.to_vec())
    }

    pub fn get(&self, v: usize, j: usize) -> f64 {
        self.data[v * self.dim + j]
    }

    pub fn set(&mut self, v: usize, j: usize, x: f64) {
        self.data[v * self.dim + j] = x;
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|v| self.get(v, j)).collect()
    }

    pub fn diff_sq(&self, u: usize, v: usize) -> f64 {
        (0..self.dim)
            .map(|j| (self.get(u, j) - self.get(v, j)).powi(2))
            .sum()
    }

    /// Subtract the weighted mean of every coordinate (exact re-centering).
    pub fn center(&mut self, base: &[f64]) {
        let total: f64 = base.iter().sum();
        for j in 0..self.dim {
            let mean: f64 = (0..self.n).map(|v| base[v] * self.get(v, j)).sum::<f64>() / total;
            for v in 0..self.n {
                let x = self.get(v, j) - mean;
                self.set(v, j, x);
            }
        }
        self.centered = true;
    }

    pub fn weighted_sq_norm(&self, base: &[f64]) -> f64 {
        (0..self.n)
            .map(|v| base[v] * (0..self.dim).map(|j| self.get(v, j).powi(2)).sum::<f64>())
            .sum()
    }

    /// Scale so the weighted squared norm is 1.
    pub fn normalize(&mut self, base: &[f64]) -> Result<()> {
        let s = self.weighted_sq_norm(base);
        if s <= 1e-28 {
            return Err(Error::Degenerate("embedding has zero weighted norm".into()));
        }
        let inv = 1.0 / s.sqrt();
        self.data.iter_mut().for_each(|x| *x *= inv);
        self.normalized = true;
        Ok(())
    }

    pub fn check_feasible(&self, base: &[f64]) -> Result<()> {
        if !self.centered || !self.normalized {
            return Err(Error::Parameter(
                "embedding must be centered and normalized".into(),
            ));
        }
        let scale = self.data.iter().fold(1.0f64, |a, &x| a.max(x.abs()));
        for j in 0..self.dim {
            let s: f64 = (0..self.n).map(|v| base[v] * self.get(v, j)).sum();
            if s.abs() > 1e-9 * scale.max(1.0) {
                return Err(Error::Parameter(format!(
                    "coordinate {j} not centered: {s}"
                )));
            }
        }
        let n2 = self.weighted_sq_norm(base);
        if (n2 - 1.0).abs() > 1e-9 {
            return Err(Error::Parameter(format!("embedding norm {n2} != 1")));
        }
        Ok(())
    }
}

/// Clique-edge weights of a hypergraph reweighting: for each hyperedge, one
/// weight per unordered vertex pair in lexicographic order.
#[derive(Debug, Clone)]
pub struct CliqueReweighting {
    pub pairs: Vec<Vec<f64>>,
}

impl CliqueReweighting {
    fn blend(&mut self, other: &CliqueReweighting, gamma: f64) {
        for (row, orow) in self.pairs.iter_mut().zip(&other.pairs) {
            for (a, &b) in row.iter_mut().zip(orow) {
                *a = (1.0 - gamma) * *a + gamma * b;
            }
        }
    }
}

#[derive(Debug, Clone)]
pub enum Witness {
    Directed(Reweighting),
    Clique(CliqueReweighting),
}

impl Witness {
    pub fn directed(&self) -> Option<&Reweighting> {
        match self {
            Witness::Directed(r) => Some(r),
            Witness::Clique(_) => None,
        }
    }
}

/// Certified interval for a reweighted gap with both witnesses.
#[derive(Debug, Clone)]
pub struct SpectralBracket {
    pub lambda_lo: f64,
    pub lambda_hi: f64,
    pub witness: Witness,
    /// Feasible embedding attaining `lambda_hi` (k = 2 only).
    pub witness_embedding: Option<Embedding>,
    pub iterations: usize,
    pub converged: bool,
}

// ---------------------------------------------------------------------------
// problem dispatch
// ---------------------------------------------------------------------------

pub(crate) enum Problem<'a> {
    Vertex {
        g: &'a DirectedGraph,
        pi: &'a VertexWeights,
    },
    Edge {
        g: &'a DirectedGraph,
    },
    Hyper {
        h: &'a Hypergraph,
    },
}

pub(crate) enum Lengths<'b> {
    /// Squared Euclidean distance of an embedding.
    Sq(&'b Embedding),
    /// Absolute difference of a one-dimensional map.
    Abs(&'b [f64]),
}

impl Lengths<'_> {
    fn eval(&self, u: usize, v: usize) -> f64 {
        match self {
            Lengths::Sq(f) => f.diff_sq(u, v),
            Lengths::Abs(g) => (g[u] - g[v]).abs(),
        }
    }
}

pub(crate) struct OracleOutcome {
    pub witness: Witness,
    /// Raw linear value; multiply by `certify_factor` for the spectral scale.
    pub value: f64,
    pub cert: DualCertificate,
}

impl<'a> Problem<'a> {
    pub(crate) fn n(&self) -> usize {
        match self {
            Problem::Vertex { g, .. } | Problem::Edge { g } => g.n(),
            Problem::Hyper { h } => h.n(),
        }
    }

    pub(crate) fn base(&self) -> Vec<f64> {
        match self {
            Problem::Vertex { pi, .. } => pi.as_slice().to_vec(),
            Problem::Edge { g } => (0..g.n()).map(|v| g.total_weight(v)).collect(),
            Problem::Hyper { h } => h.degrees().to_vec(),
        }
    }

    /// 1/2 for the directed programs (each undirected pair is seen from both
    /// arcs), 1 for hypergraph clique pairs.
    pub(crate) fn certify_factor(&self) -> f64 {
        match self {
            Problem::Hyper { .. } => 1.0,
            _ => 0.5,
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.n() < 2 {
            return Err(Error::Parameter("need at least two vertices".into()));
        }
        match self {
            Problem::Vertex { g, pi } => {
                if pi.len() != g.n() {
                    return Err(Error::Parameter("pi length mismatch".into()));
                }
                for v in 0..g.n() {
                    if pi.get(v) <= 0.0 {
                        return Err(Error::Degenerate(format!("zero vertex weight at {v}")));
                    }
                    if !g.has_self_loop(v) {
                        return Err(Error::Infeasible(format!(
                            "vertex {v} lacks a self-loop; call with_self_loops() first"
                        )));
                    }
                }
            }
            Problem::Edge { g } => {
                if g.m() == 0 {
                    return Err(Error::Degenerate("graph has no edges".into()));
                }
                for v in 0..g.n() {
                    if g.total_weight(v) <= 0.0 {
                        return Err(Error::Degenerate(format!("zero weighted degree at {v}")));
                    }
                }
            }
            Problem::Hyper { h } => {
                if h.m() == 0 {
                    return Err(Error::Degenerate("empty hypergraph".into()));
                }
                for v in 0..h.n() {
                    if h.degree(v) <= 0.0 {
                        return Err(Error::Degenerate(format!(
                            "vertex {v} covered by no hyperedge"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub(crate) fn oracle(&self, lengths: &Lengths<'_>) -> Result<OracleOutcome> {
        match self {
            Problem::Vertex { g, pi } => {
                let ell: Vec<f64> = g
                    .edges()
                    .iter()
                    .map(|e| lengths.eval(e.tail, e.head))
                    .collect();
                let (a, value, cert) = flow::eulerian_oracle_vertex(g, pi, &ell)?;
                Ok(OracleOutcome {
                    witness: Witness::Directed(a),
                    value,
                    cert,
                })
            }
            Problem::Edge { g } => {
                let ell: Vec<f64> = g
                    .edges()
                    .iter()
                    .map(|e| lengths.eval(e.tail, e.head))
                    .collect();
                let w: Vec<f64> = g.edges().iter().map(|e| e.weight).collect();
                let (a, value, cert) = flow::eulerian_oracle_edge(g, &w, &ell)?;
                Ok(OracleOutcome {
                    witness: Witness::Directed(a),
                    value,
                    cert,
                })
            }
            Problem::Hyper { h } => {
                // closed form: each hyperedge puts all its weight on the pair
                // with the largest length; ties go to the first pair in
                // lexicographic order
                let mut pairs = Vec::with_capacity(h.m());
                let mut value = 0.0;
                let mut q = Vec::with_capacity(h.m());
                for (vs, w) in h.hyperedges() {
                    let mut row = Vec::new();
                    let mut best = 0.0f64;
                    let mut best_idx = usize::MAX;
                    let mut idx = 0;
                    for i in 0..vs.len() {
                        for j in i + 1..vs.len() {
                            let l = lengths.eval(vs[i], vs[j]);
                            if best_idx == usize::MAX || l > best {
                                best = l;
                                best_idx = idx;
                            }
                            row.push(0.0);
                            idx += 1;
                        }
                    }
                    if best_idx != usize::MAX && best > 0.0 {
                        row[best_idx] = *w;
                        value += w * best;
                        q.push(best);
                    } else {
                        q.push(0.0);
                    }
                    pairs.push(row);
                }
                let objective = h
                    .hyperedges()
                    .iter()
                    .zip(&q)
                    .map(|((_, w), &qe)| w * qe)
                    .sum();
                let cert = DualCertificate {
                    q,
                    r: vec![0.0; h.n()],
                    objective,
                };
                Ok(OracleOutcome {
                    witness: Witness::Clique(pairs_to_clique(pairs)),
                    value,
                    cert,
                })
            }
        }
    }

    pub(crate) fn laplacian(&self, w: &Witness) -> Result<DMatrix<f64>> {
        let n = self.n();
        let base = self.base();
        let mut sym: DMatrix<f64> = DMatrix::zeros(n, n);
        match (self, w) {
            (Problem::Vertex { g, .. } | Problem::Edge { g }, Witness::Directed(a)) => {
                for (e, &x) in g.edges().iter().zip(&a.weights) {
                    sym[(e.tail, e.head)] += 0.5 * x;
                    sym[(e.head, e.tail)] += 0.5 * x;
                }
            }
            (Problem::Hyper { h }, Witness::Clique(c)) => {
                for ((vs, _), row) in h.hyperedges().iter().zip(&c.pairs) {
                    let mut idx = 0;
                    for i in 0..vs.len() {
                        for j in i + 1..vs.len() {
                            sym[(vs[i], vs[j])] += row[idx];
                            sym[(vs[j], vs[i])] += row[idx];
                            idx += 1;
                        }
                    }
                }
            }
            _ => {
                return Err(Error::Parameter(
                    "witness kind does not match problem".into(),
                ))
            }
        }
        let inv_sqrt: Vec<f64> = base.iter().map(|&b| 1.0 / b.sqrt()).collect();
        let mut l = DMatrix::zeros(n, n);
        match self {
            Problem::Vertex { .. } => {
                // I - Pi^{-1/2} sym Pi^{-1/2}
                for i in 0..n {
                    for j in 0..n {
                        l[(i, j)] = -sym[(i, j)] * inv_sqrt[i] * inv_sqrt[j];
                    }
                    l[(i, i)] += 1.0;
                }
            }
            Problem::Edge { .. } | Problem::Hyper { .. } => {
                // D^{-1/2} (D_A - sym) D^{-1/2}, D fixed from the input
                let d_a: Vec<f64> = (0..n).map(|v| sym.column(v).sum()).collect();
                for i in 0..n {
                    for j in 0..n {
                        l[(i, j)] = -sym[(i, j)] * inv_sqrt[i] * inv_sqrt[j];
                    }
                    l[(i, i)] += d_a[i] * inv_sqrt[i] * inv_sqrt[i];
                }
            }
        }
        Ok(l)
    }

    fn initial(&self) -> Result<Witness> {
        match self {
            Problem::Edge { g } => {
                let w: Vec<f64> = g.edges().iter().map(|e| e.weight).collect();
                let alpha = flow::asymmetric_ratio(g, &w)?;
                if alpha.is_infinite() {
                    return Ok(Witness::Directed(Reweighting::zero(g)));
                }
                let mut a = flow::hoffman_circulation(g, &w, alpha)?.ok_or_else(|| {
                    Error::Numerical("hoffman infeasible at certified alpha".into())
                })?;
                a.weights.iter_mut().for_each(|x| *x /= alpha);
                Ok(Witness::Directed(a))
            }
            Problem::Vertex { g, pi } => {
                let w_pi = pi_induced_weights(g, pi);
                let alpha = flow::asymmetric_ratio(g, &w_pi)?;
                if alpha.is_infinite() {
                    return Ok(Witness::Directed(Reweighting::loops_only(g, pi)?));
                }
                let mut a = flow::hoffman_circulation(g, &w_pi, alpha)?.ok_or_else(|| {
                    Error::Numerical("hoffman infeasible at certified alpha".into())
                })?;
                let scale = g.max_degree() as f64 * alpha;
                a.weights.iter_mut().for_each(|x| *x /= scale);
                // route the residual vertex mass through the self-loops
                let mut loop_edge = vec![usize::MAX; g.n()];
                for (i, e) in g.edges().iter().enumerate() {
                    if e.tail == e.head {
                        loop_edge[e.tail] = i;
                    }
                }
                for v in 0..g.n() {
                    let residual = pi.get(v) - a.in_weight(g, v);
                    if residual < -1e-9 * pi.get(v).max(1.0) {
                        return Err(Error::Numerical(format!(
                            "initial circulation overfills vertex {v}"
                        )));
                    }
                    a.weights[loop_edge[v]] += residual.max(0.0);
                }
                Ok(Witness::Directed(a))
            }
            Problem::Hyper { h } => {
                let pairs = h
                    .hyperedges()
                    .iter()
                    .map(|(vs, w)| {
                        let cnt = vs.len() * (vs.len().saturating_sub(1)) / 2;
                        if cnt == 0 {
                            Vec::new()
                        } else {
                            vec![w / cnt as f64; cnt]
                        }
                    })
                    .collect();
                Ok(Witness::Clique(CliqueReweighting { pairs }))
            }
        }
    }

    fn blend(&self, a: &mut Witness, s: &Witness, gamma: f64) {
        match (a, s) {
            (Witness::Directed(x), Witness::Directed(y)) => x.blend(y, gamma),
            (Witness::Clique(x), Witness::Clique(y)) => x.blend(y, gamma),
            _ => unreachable!(),
        }
    }

    pub(crate) fn cut_mode(&self) -> CutMode {
        match self {
            Problem::Vertex { .. } => CutMode::VertexExpansion,
            Problem::Edge { .. } => CutMode::EdgeConductance,
            Problem::Hyper { .. } => CutMode::HypergraphConductance,
        }
    }

    pub(crate) fn evaluate_cut(&self, mask: u64) -> Result<f64> {
        match self {
            Problem::Vertex { g, pi } => crate::graph::directed_vertex_expansion(g, pi, mask),
            Problem::Edge { g } => crate::graph::directed_edge_conductance(g, mask),
            Problem::Hyper { h } => crate::graph::hypergraph_conductance(h, mask),
        }
    }

    /// The current linear objective sum A(e) * len(e) (for the FW gap).
    fn linear_value(&self, w: &Witness, lengths: &Lengths<'_>) -> f64 {
        match (self, w) {
            (Problem::Vertex { g, .. } | Problem::Edge { g }, Witness::Directed(a)) => g
                .edges()
                .iter()
                .zip(&a.weights)
                .map(|(e, &x)| x * lengths.eval(e.tail, e.head))
                .sum(),
            (Problem::Hyper { h }, Witness::Clique(c)) => {
                let mut s = 0.0;
                for ((vs, _), row) in h.hyperedges().iter().zip(&c.pairs) {
                    let mut idx = 0;
                    for i in 0..vs.len() {
                        for j in i + 1..vs.len() {
                            s += row[idx] * lengths.eval(vs[i], vs[j]);
                            idx += 1;
                        }
                    }
                }
                s
            }
            _ => unreachable!(),
        }
    }
}

fn pairs_to_clique(pairs: Vec<Vec<f64>>) -> CliqueReweighting {
    CliqueReweighting { pairs }
}

// ---------------------------------------------------------------------------
// public operations
// ---------------------------------------------------------------------------

/// Symmetrized normalized Laplacian of a reweighting. Vertex mode:
/// I - Pi^{-1/2} ((A+A^T)/2) Pi^{-1/2}. Edge mode:
/// D^{-1/2} (D_A - (A+A^T)/2) D^{-1/2} with D the degree matrix of the input
/// graph.
pub fn normalized_laplacian(
    g: &DirectedGraph,
    mode: Mode,
    a: &Reweighting,
    pi: Option<&VertexWeights>,
) -> Result<DMatrix<f64>> {
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
            for v in 0..g.n() {
                if pi.get(v) <= 0.0 {
                    return Err(Error::Degenerate(format!("zero vertex weight at {v}")));
                }
            }
            Problem::Vertex { g, pi }
        }
        Mode::Edge => {
            for v in 0..g.n() {
                if g.total_weight(v) <= 0.0 {
                    return Err(Error::Degenerate(format!("zero weighted degree at {v}")));
                }
            }
            Problem::Edge { g }
        }
    };
    problem.laplacian(&Witness::Directed(a.clone()))
}

/// Upper-bounds the reweighted gap from any feasible embedding: half the
/// matching Eulerian oracle value at squared-distance lengths.
pub fn certify_upper(
    g: &DirectedGraph,
    mode: Mode,
    pi: Option<&VertexWeights>,
    f: &Embedding,
) -> Result<f64> {
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
    certify_upper_problem(&problem, f)
}

pub(crate) fn certify_upper_problem(problem: &Problem<'_>, f: &Embedding) -> Result<f64> {
    f.check_feasible(&problem.base())?;
    let out = problem.oracle(&Lengths::Sq(f))?;
    Ok(problem.certify_factor() * out.value)
}

/// Frank-Wolfe ascent of the reweighted spectral gap (k = 2) or of the sum
/// of the k smallest eigenvalues. Vertex mode requires self-loops; they are
/// inserted on a copy when missing, in which case the returned witness
/// aligns with `g.with_self_loops()`.
pub fn max_reweighted_gap(
    g: &DirectedGraph,
    mode: Mode,
    pi: Option<&VertexWeights>,
    opts: &SolveOptions,
    trace: Option<&mut dyn FnMut(TraceRecord)>,
) -> Result<SpectralBracket> {
    let uniform;
    let pi = match (mode, pi) {
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
        Mode::Vertex => Problem::Vertex { g, pi: pi.unwrap() },
        Mode::Edge => Problem::Edge { g },
    };
    frank_wolfe(&problem, opts, trace)
}

/// Maximum reweighted spectral gap of a hypergraph over clique reweightings.
pub fn gamma2_hypergraph(
    h: &Hypergraph,
    opts: &SolveOptions,
    trace: Option<&mut dyn FnMut(TraceRecord)>,
) -> Result<SpectralBracket> {
    frank_wolfe(&Problem::Hyper { h }, opts, trace)
}

/// Certified lower bound on the maximum sum of the k smallest reweighted
/// Laplacian eigenvalues. Zero iff the graph has at least k strongly
/// connected components.
pub fn sigma_k_lower(
    g: &DirectedGraph,
    mode: Mode,
    pi: Option<&VertexWeights>,
    k: usize,
    opts: &SolveOptions,
) -> Result<f64> {
    let opts = SolveOptions { k, ..*opts };
    let bracket = max_reweighted_gap(g, mode, pi, &opts, None)?;
    Ok(bracket.lambda_lo)
}

/// Tightens the upper bound at a two-dimensional eigenvalue cluster. At a
/// nonsmooth maximizer the minimax embedding is a rotated, reweighted basis
/// of the cluster, not the uniform one; a coarse-to-fine search over the
/// rotation angle and the coordinate weights recovers it to ~1e-3.
fn refine_pair_certificate(
    problem: &Problem<'_>,
    f: &Embedding,
    base: &[f64],
) -> Result<Option<(f64, Embedding)>> {
    if f.dim != 2 {
        return Ok(None);
    }
    let factor = problem.certify_factor();
    let n = f.n;
    let build = |angle: f64, theta: f64| -> Embedding {
        let (c, s) = (angle.cos(), angle.sin());
        let (w1, w2) = (theta.sqrt(), (1.0 - theta).sqrt());
        let mut data = vec![0.0; n * 2];
        for v in 0..n {
            let a = f.get(v, 0);
            let b = f.get(v, 1);
            data[v * 2] = w1 * (c * a + s * b);
            data[v * 2 + 1] = w2 * (-s * a + c * b);
        }
        Embedding::new(n, 2, data)
    };
    let eval = |angle: f64, theta: f64| -> Result<Option<f64>> {
        let mut g = build(angle, theta);
        g.center(base);
        let s = g.weighted_sq_norm(base);
        if s <= 1e-14 {
            return Ok(None);
        }
        let out = problem.oracle(&Lengths::Sq(&g))?;
        Ok(Some(factor * out.value / s))
    };
    let mut best: Option<(f64, f64, f64)> = None;
    for ai in 0..18 {
        let angle = ai as f64 * std::f64::consts::PI / 18.0;
        for ti in 0..=10 {
            let theta = ti as f64 / 10.0;
            if let Some(v) = eval(angle, theta)? {
                if best.map_or(true, |(bv, _, _)| v < bv) {
                    best = Some((v, angle, theta));
                }
            }
        }
    }
    let Some((_, mut angle, mut theta)) = best else {
        return Ok(None);
    };
    let mut a_range = std::f64::consts::PI / 18.0;
    let mut t_range = 0.1;
    for _ in 0..3 {
        for ai in -3i32..=3 {
            for ti in -3i32..=3 {
                let a = angle + ai as f64 * a_range / 3.0;
                let t = (theta + ti as f64 * t_range / 3.0).clamp(0.0, 1.0);
                if let Some(v) = eval(a, t)? {
                    if best.map_or(true, |(bv, _, _)| v < bv) {
                        best = Some((v, a, t));
                    }
                }
            }
        }
        (_, angle, theta) = best.unwrap();
        a_range /= 3.0;
        t_range /= 3.0;
    }
    let (value, angle, theta) = best.unwrap();
    let mut g = build(angle, theta);
    g.center(base);
    g.normalize(base)?;
    Ok(Some((value, g)))
}

pub(crate) fn frank_wolfe(
    problem: &Problem<'_>,
    opts: &SolveOptions,
    mut trace: Option<&mut dyn FnMut(TraceRecord)>,
) -> Result<SpectralBracket> {
    problem.validate()?;
    if opts.k < 2 || opts.k > problem.n() {
        return Err(Error::Parameter(format!(
            "k must be in [2, n], got {}",
            opts.k
        )));
    }
    let n = problem.n();
    let k = opts.k;
    let base = problem.base();
    let inv_sqrt: Vec<f64> = base.iter().map(|&b| 1.0 / b.sqrt()).collect();

    let mut a = problem.initial()?;
    let mut lambda_lo = 0.0f64;
    let mut lambda_hi = f64::INFINITY;
    let mut best_witness = a.clone();
    let mut best_embedding: Option<Embedding> = None;
    let mut converged = false;
    let mut iterations = 0;
    let mut stall = 0usize;

    for t in 0..opts.max_iters {
        iterations = t;
        let l = problem.laplacian(&a)?;
        let pairs = eig::symmetric_eigen(&l)?;
        let objective = if k == 2 {
            pairs.values[1]
        } else {
            pairs.values[..k].iter().sum::<f64>()
        };
        let objective = objective.max(0.0);
        if objective > lambda_lo {
            lambda_lo = objective;
            best_witness = a.clone();
            stall = 0;
        } else {
            stall += 1;
        }

        // subgradient cluster: bottom k eigenvectors plus near-ties; the
        // first eigenvector is constant after rescaling and contributes
        // nothing to any pairwise length, so it is dropped. A stalled solve
        // is zig-zagging toward an eigenvalue crossing, so the tie window
        // widens to the current bracket uncertainty.
        let width = if lambda_hi.is_finite() {
            (lambda_hi - lambda_lo).max(0.0)
        } else {
            0.0
        };
        let tie_tol = if stall > 40 {
            opts.mult_tol.max(0.5 * width)
        } else {
            opts.mult_tol
        };
        let thresh = pairs.values[k - 1] + tie_tol;
        let cluster: Vec<usize> = (1..n)
            .filter(|&i| i < k || pairs.values[i] <= thresh)
            .collect();
        let mut f = Embedding::new(n, cluster.len(), vec![0.0; n * cluster.len()]);
        for (j, &ci) in cluster.iter().enumerate() {
            for v in 0..n {
                f.set(v, j, pairs.vectors[(v, ci)] * inv_sqrt[v]);
            }
        }

        let lengths = Lengths::Sq(&f);
        let out = problem.oracle(&lengths)?;
        let factor = problem.certify_factor();
        let fw_gap = factor * (out.value - problem.linear_value(&a, &lengths));

        if k == 2 {
            // the centered, renormalized cluster embedding is feasible for
            // the minimax form; centering leaves all pairwise lengths intact
            let mut fc = f.clone();
            fc.center(&base);
            let s = fc.weighted_sq_norm(&base);
            if s > 1e-14 {
                let cand = factor * out.value / s;
                if cand < lambda_hi {
                    lambda_hi = cand;
                    fc.normalize(&base)?;
                    best_embedding = Some(fc);
                }
            }
        }

        if let Some(cb) = trace.as_deref_mut() {
            cb(TraceRecord {
                iteration: t,
                lambda_lo,
                lambda_hi,
                fw_gap,
            });
        }

        let mut done = if k == 2 {
            lambda_hi - lambda_lo <= opts.tol * lambda_hi.max(1.0)
        } else {
            fw_gap <= opts.tol * objective.max(1.0)
        };
        // nonsmooth maximizers leave the plain cluster certificate loose;
        // occasionally search rotated mixtures of the two eigenvectors
        // around the crossing whenever their split is within the bracket
        if !done && k == 2 && n >= 3 && matches!(t, 24 | 199 | 1599) {
            let split = pairs.values[2] - pairs.values[1];
            if split <= opts.mult_tol.max(width) {
                let mut pair = Embedding::new(n, 2, vec![0.0; n * 2]);
                for (j, ci) in [1usize, 2].into_iter().enumerate() {
                    for v in 0..n {
                        pair.set(v, j, pairs.vectors[(v, ci)] * inv_sqrt[v]);
                    }
                }
                if let Some((cand, emb)) = refine_pair_certificate(problem, &pair, &base)? {
                    if cand < lambda_hi {
                        lambda_hi = cand;
                        best_embedding = Some(emb);
                    }
                    done = lambda_hi - lambda_lo <= opts.tol * lambda_hi.max(1.0);
                }
            }
        }
        if done {
            converged = true;
            break;
        }
        if stall > 200 {
            break;
        }
        let gamma = 2.0 / (t as f64 + 2.0);
        problem.blend(&mut a, &out.witness, gamma);
    }

    if !converged && k == 2 && n >= 3 {
        // one last certificate refinement at the best witness
        let l = problem.laplacian(&best_witness)?;
        let pairs = eig::symmetric_eigen(&l)?;
        let width = if lambda_hi.is_finite() {
            (lambda_hi - lambda_lo).max(0.0)
        } else {
            f64::INFINITY
        };
        if pairs.values[2] - pairs.values[1] <= opts.mult_tol.max(width) {
            let inv_sqrt: Vec<f64> = base.iter().map(|&b| 1.0 / b.sqrt()).collect();
            let mut pair = Embedding::new(n, 2, vec![0.0; n * 2]);
            for (j, ci) in [1usize, 2].into_iter().enumerate() {
                for v in 0..n {
                    pair.set(v, j, pairs.vectors[(v, ci)] * inv_sqrt[v]);
                }
            }
            if let Some((cand, emb)) = refine_pair_certificate(problem, &pair, &base)? {
                if cand < lambda_hi {
                    lambda_hi = cand;
                    best_embedding = Some(emb);
                }
                converged = lambda_hi - lambda_lo <= opts.tol * lambda_hi.max(1.0);
            }
        }
    }

    if lambda_hi.is_finite() {
        debug_assert!(lambda_lo <= lambda_hi + 1e-7);
    }
    Ok(SpectralBracket {
        lambda_lo,
        lambda_hi,
        witness: best_witness,
        witness_embedding: best_embedding,
        iterations,
        converged,
    })
}

/// Eigen-embedding of a witness: the Laplacian's second-eigenvalue cluster,
/// rescaled by base^{-1/2}, centered and normalized. This is the embedding
/// the rounding pipeline consumes.
pub(crate) fn cluster_embedding(
    problem: &Problem<'_>,
    witness: &Witness,
    mult_tol: f64,
) -> Result<Embedding> {
    let n = problem.n();
    let base = problem.base();
    let l = problem.laplacian(witness)?;
    let pairs = eig::symmetric_eigen(&l)?;
    let thresh = pairs.values[1] + mult_tol;
    let cluster: Vec<usize> = (1..n).filter(|&i| pairs.values[i] <= thresh).collect();
    let mut f = Embedding::new(n, cluster.len(), vec![0.0; n * cluster.len()]);
    for (j, &ci) in cluster.iter().enumerate() {
        for v in 0..n {
            f.set(v, j, pairs.vectors[(v, ci)] / base[v].sqrt());
        }
    }
    f.center(&base);
    f.normalize(&base)?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::scc_components;
    use crate::instances;

    fn gap_edge(g: &DirectedGraph, tol: f64) -> SpectralBracket {
        let opts = SolveOptions {
            tol,
            ..Default::default()
        };
        max_reweighted_gap(g, Mode::Edge, None, &opts, None).unwrap()
    }

    #[test]
    fn laplacian_k2_closed_form() {
        let g = DirectedGraph::new(2, &[(0, 1, 1.0), (1, 0, 1.0)]).unwrap();
        let pi = VertexWeights::new(vec![0.5, 0.5]).unwrap();
        let a = Reweighting {
            weights: vec![0.5, 0.5],
        };
        let l = normalized_laplacian(&g, Mode::Vertex, &a, Some(&pi)).unwrap();
        assert!((l[(0, 0)] - 1.0).abs() < 1e-12);
        assert!((l[(0, 1)] + 1.0).abs() < 1e-12);
        let (vals, _) = bottom_eigs(&l, 2).unwrap();
        assert!(vals[0].abs() < 1e-12);
        assert!((vals[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn laplacian_zero_reweighting() {
        let g = instances::directed_cycle(4);
        let a = Reweighting::zero(&g);
        let l = normalized_laplacian(&g, Mode::Edge, &a, None).unwrap();
        assert!(l.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn laplacian_cycle_spectrum() {
        let g = instances::directed_cycle(4);
        let a = Reweighting {
            weights: vec![1.0; 4],
        };
        let l = normalized_laplacian(&g, Mode::Edge, &a, None).unwrap();
        let (vals, _) = bottom_eigs(&l, 4).unwrap();
        let expect = [0.0, 0.5, 0.5, 1.0];
        for (v, e) in vals.iter().zip(expect) {
            assert!((v - e).abs() < 1e-10, "{vals:?}");
        }
    }

    #[test]
    fn gap_cycle_closed_form() {
        for n in [4usize, 6, 8] {
            let g = instances::directed_cycle(n);
            let b = gap_edge(&g, 1e-6);
            let expect = 0.5 * (1.0 - (2.0 * std::f64::consts::PI / n as f64).cos());
            assert!(b.converged);
            assert!(
                (b.lambda_lo - expect).abs() < 1e-3,
                "n={n}: {} vs {expect}",
                b.lambda_lo
            );
            assert!(b.lambda_hi - b.lambda_lo <= 1e-3 * b.lambda_hi.max(1.0));
        }
    }

    #[test]
    fn gap_complete_dag_is_zero() {
        let g = instances::complete_dag(5);
        let b = gap_edge(&g, 1e-6);
        assert!(b.lambda_lo <= 1e-9);
        assert!(b.lambda_hi <= 1e-6, "lambda_hi {}", b.lambda_hi);
    }

    #[test]
    fn gap_k2_vertex_bidirected_pair() {
        let g =
            DirectedGraph::new(2, &[(0, 0, 1.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, 1.0)]).unwrap();
        let pi = VertexWeights::new(vec![0.5, 0.5]).unwrap();
        let b = max_reweighted_gap(&g, Mode::Vertex, Some(&pi), &SolveOptions::default(), None)
            .unwrap();
        assert!((b.lambda_lo - 2.0).abs() < 1e-6, "lo {}", b.lambda_lo);
        assert!((b.lambda_hi - 2.0).abs() < 1e-6, "hi {}", b.lambda_hi);
    }

    #[test]
    fn certify_matches_optimum_on_k2() {
        let g =
            DirectedGraph::new(2, &[(0, 0, 1.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, 1.0)]).unwrap();
        let pi = VertexWeights::new(vec![0.5, 0.5]).unwrap();
        let mut f = Embedding::from_column(&[1.0, -1.0]);
        f.center(pi.as_slice());
        f.normalize(pi.as_slice()).unwrap();
        let v = certify_upper(&g, Mode::Vertex, Some(&pi), &f).unwrap();
        assert!((v - 2.0).abs() < 1e-9);
    }

    #[test]
    fn certify_cycle_cosine() {
        let g = instances::directed_cycle(4);
        let col: Vec<f64> = (0..4)
            .map(|v| (2.0 * std::f64::consts::PI * v as f64 / 4.0).cos())
            .collect();
        let mut f = Embedding::from_column(&col);
        let base: Vec<f64> = (0..4).map(|v| g.total_weight(v)).collect();
        f.center(&base);
        f.normalize(&base).unwrap();
        let v = certify_upper(&g, Mode::Edge, None, &f).unwrap();
        assert!((v - 0.5).abs() < 1e-9, "certify {v}");
    }

    #[test]
    fn certify_rejects_unnormalized() {
        let g = instances::directed_cycle(4);
        let f = Embedding::from_column(&[1.0, 0.0, -1.0, 0.0]);
        assert!(certify_upper(&g, Mode::Edge, None, &f).is_err());
    }

    #[test]
    fn eulerian_input_exactness() {
        for seed in [1u64, 4, 6] {
            let g = instances::random_eulerian(7, 5, seed);
            if (0..7).any(|v| g.total_weight(v) <= 0.0) {
                continue;
            }
            let a = Reweighting {
                weights: g.edges().iter().map(|e| e.weight).collect(),
            };
            let l = normalized_laplacian(&g, Mode::Edge, &a, None).unwrap();
            let (vals, _) = bottom_eigs(&l, 2).unwrap();
            let b = gap_edge(&g, 1e-5);
            assert!(
                (b.lambda_lo - vals[1]).abs() <= 1e-5 * vals[1].max(1.0),
                "seed {seed}: fw {} vs direct {}",
                b.lambda_lo,
                vals[1]
            );
        }
    }

    #[test]
    fn bracket_is_monotone_and_valid() {
        let g = instances::random_strongly_connected(7, 9, 5);
        let mut lows = Vec::new();
        let mut highs = Vec::new();
        let mut cb = |r: TraceRecord| {
            lows.push(r.lambda_lo);
            highs.push(r.lambda_hi);
        };
        let opts = SolveOptions {
            tol: 1e-5,
            max_iters: 200,
            ..Default::default()
        };
        let b = max_reweighted_gap(&g, Mode::Edge, None, &opts, Some(&mut cb)).unwrap();
        for w in lows.windows(2) {
            assert!(w[1] >= w[0]);
        }
        for w in highs.windows(2) {
            assert!(w[1] <= w[0]);
        }
        assert!(b.lambda_lo <= b.lambda_hi + 1e-7);
        if let Witness::Directed(a) = &b.witness {
            assert!(a.is_balanced(&g));
            for (e, &x) in g.edges().iter().zip(&a.weights) {
                assert!(x <= e.weight * (1.0 + 1e-9) + 1e-12);
            }
        } else {
            panic!("expected directed witness");
        }
    }

    #[test]
    fn sigma_k_zero_law_dag() {
        let g = instances::complete_dag(5);
        let opts = SolveOptions {
            max_iters: 60,
            ..Default::default()
        };
        for k in 2..=5 {
            let s = sigma_k_lower(&g, Mode::Edge, None, k, &opts).unwrap();
            assert!(s <= 1e-6, "k={k}: sigma {s}");
        }
    }

    #[test]
    fn sigma_k_two_triangles() {
        let mut edges = Vec::new();
        for base in [0usize, 3] {
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        edges.push((base + i, base + j, 1.0));
                    }
                }
            }
        }
        let g = DirectedGraph::new(6, &edges).unwrap();
        assert_eq!(scc_components(&g).len(), 2);
        let opts = SolveOptions {
            max_iters: 60,
            ..Default::default()
        };
        let s = sigma_k_lower(&g, Mode::Edge, None, 2, &opts).unwrap();
        assert!(s <= 1e-6, "sigma {s}");
    }

    #[test]
    fn sigma_3_cycle_large() {
        let g = instances::directed_cycle(4);
        let opts = SolveOptions {
            max_iters: 200,
            ..Default::default()
        };
        let s = sigma_k_lower(&g, Mode::Edge, None, 3, &opts).unwrap();
        assert!(s >= 0.9, "sigma {s}");
    }

    #[test]
    fn gamma2_two_uniform_matches_graph_laplacian() {
        // 2-uniform hypergraph = undirected graph; gamma_2* equals lambda_2
        // of its normalized Laplacian
        let hedges: Vec<(Vec<usize>, f64)> = vec![
            (vec![0, 1], 1.0),
            (vec![1, 2], 2.0),
            (vec![2, 3], 1.0),
            (vec![3, 0], 1.0),
            (vec![0, 2], 0.5),
        ];
        let h = crate::graph::Hypergraph::new(4, &hedges).unwrap();
        let b = gamma2_hypergraph(&h, &SolveOptions::default(), None).unwrap();
        // direct lambda_2 of I - D^{-1/2} A D^{-1/2}
        let mut l = DMatrix::zeros(4, 4);
        for (vs, w) in &hedges {
            l[(vs[0], vs[1])] -= w;
            l[(vs[1], vs[0])] -= w;
        }
        for v in 0..4 {
            l[(v, v)] = h.degree(v);
        }
        let dinv: Vec<f64> = (0..4).map(|v| 1.0 / h.degree(v).sqrt()).collect();
        let ln = DMatrix::from_fn(4, 4, |i, j| l[(i, j)] * dinv[i] * dinv[j]);
        let (vals, _) = bottom_eigs(&ln, 2).unwrap();
        assert!(
            (b.lambda_lo - vals[1]).abs() < 1e-3,
            "gamma {} vs lambda2 {}",
            b.lambda_lo,
            vals[1]
        );
    }

    #[test]
    fn gamma2_disjoint_hyperedges_zero() {
        let h = crate::graph::Hypergraph::new(4, &[(vec![0, 1], 1.0), (vec![2, 3], 1.0)]).unwrap();
        let b = gamma2_hypergraph(&h, &SolveOptions::default(), None).unwrap();
        assert!(b.lambda_lo <= 1e-9);
        assert!(b.lambda_hi <= 1e-6);
    }

    #[test]
    fn gamma2_single_triangle() {
        let h = crate::graph::Hypergraph::new(3, &[(vec![0, 1, 2], 1.0)]).unwrap();
        let b = gamma2_hypergraph(&h, &SolveOptions::default(), None).unwrap();
        assert!((b.lambda_lo - 1.0).abs() < 1e-3, "gamma {}", b.lambda_lo);
    }
}
