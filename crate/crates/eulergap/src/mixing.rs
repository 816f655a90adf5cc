//! Markov-chain side: stationary distributions, the stationary-reweighted
//! Laplacian and Cheeger constant, exact mixing times for small chains, and
//! the fastest-mixing construction from the optimal vertex reweighting.

use crate::graph::{scc_components, DirectedGraph, VertexWeights};
use crate::spectral::{max_reweighted_gap, Mode, SolveOptions};
use crate::{Error, Result};
use nalgebra::DMatrix;
use serde::Serialize;

/// Hard cap for the dense matrix-power mixing computations.
pub const MIXING_N_CAP: usize = 2000;
const STEP_CAP: u64 = 1_000_000;

/// Row-stochastic transition matrix.
#[derive(Debug, Clone)]
pub struct MarkovChain {
    p: DMatrix<f64>,
}

impl MarkovChain {
    pub fn new(p: DMatrix<f64>) -> Result<Self> {
        let n = p.nrows();
        if n != p.ncols() || n == 0 {
            return Err(Error::Parameter("transition matrix must be square".into()));
        }
        for u in 0..n {
            let mut row = 0.0;
            for v in 0..n {
                if p[(u, v)] < 0.0 {
                    return Err(Error::Parameter(format!("negative entry at ({u},{v})")));
                }
                row += p[(u, v)];
            }
            if (row - 1.0).abs() > 1e-12 {
                return Err(Error::Parameter(format!("row {u} sums to {row}")));
            }
        }
        Ok(MarkovChain { p })
    }

    pub fn n(&self) -> usize {
        self.p.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.p
    }

    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.p[(u, v)]
    }

    /// Positive holding probability everywhere.
    pub fn is_lazy(&self) -> bool {
        (0..self.n()).all(|v| self.p[(v, v)] > 0.0)
    }

    pub fn lazy(&self) -> MarkovChain {
        let n = self.n();
        let p = DMatrix::from_fn(n, n, |u, v| {
            0.5 * self.p[(u, v)] + if u == v { 0.5 } else { 0.0 }
        });
        MarkovChain { p }
    }

    /// Support graph with transition probabilities as weights.
    pub fn support_graph(&self) -> DirectedGraph {
        let n = self.n();
        let mut edges = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if self.p[(u, v)] > 0.0 {
                    edges.push((u, v, self.p[(u, v)]));
                }
            }
        }
        DirectedGraph::new(n, &edges).unwrap()
    }

    pub fn stationarity_residual(&self, pi: &VertexWeights) -> f64 {
        let n = self.n();
        (0..n)
            .map(|v| {
                let inflow: f64 = (0..n).map(|u| pi.get(u) * self.p[(u, v)]).sum();
                (inflow - pi.get(v)).abs()
            })
            .sum()
    }
}

/// Ordinary random walk on a weighted digraph: P(u,v) = w(uv) / out-weight.
pub fn random_walk_chain(g: &DirectedGraph) -> Result<MarkovChain> {
    let n = g.n();
    let mut p = DMatrix::zeros(n, n);
    for v in 0..n {
        if g.out_weight(v) <= 0.0 {
            return Err(Error::Degenerate(format!(
                "vertex {v} has no outgoing weight"
            )));
        }
    }
    for e in g.edges() {
        p[(e.tail, e.head)] += e.weight / g.out_weight(e.tail);
    }
    MarkovChain::new(p)
}

/// Unique stationary distribution of an irreducible chain, computed by power
/// iteration on the lazy chain (accelerated by repeated squaring) to
/// residual 1e-12.
pub fn stationary(chain: &MarkovChain) -> Result<VertexWeights> {
    let support = chain.support_graph();
    if scc_components(&support).len() != 1 {
        return Err(Error::ReducibleChain(
            "support graph is not strongly connected".into(),
        ));
    }
    let n = chain.n();
    let mut q = chain.lazy().p;
    for _ in 0..80 {
        q = &q * &q;
        for u in 0..n {
            let s: f64 = q.row(u).sum();
            for v in 0..n {
                q[(u, v)] /= s;
            }
        }
        let mut spread = 0.0f64;
        for v in 0..n {
            let col = q.column(v);
            spread = spread.max(col.max() - col.min());
        }
        if spread < 1e-14 {
            break;
        }
    }
    let mut pi: Vec<f64> = (0..n).map(|v| q.column(v).sum() / n as f64).collect();
    let total: f64 = pi.iter().sum();
    pi.iter_mut().for_each(|x| *x /= total);
    let pi = VertexWeights::new(pi)?;
    let resid = chain.stationarity_residual(&pi);
    if resid > 1e-12 {
        return Err(Error::Numerical(format!(
            "stationary residual {resid} above 1e-12"
        )));
    }
    Ok(pi)
}

/// The stationary-reweighted symmetric Laplacian
/// I - (Pi^{1/2} P Pi^{-1/2} + Pi^{-1/2} P^T Pi^{1/2}) / 2.
pub fn chung_laplacian(chain: &MarkovChain, pi: &VertexWeights) -> Result<DMatrix<f64>> {
    let n = chain.n();
    if pi.len() != n {
        return Err(Error::Parameter("pi length mismatch".into()));
    }
    if (0..n).any(|v| pi.get(v) <= 0.0) {
        return Err(Error::Degenerate("pi must be strictly positive".into()));
    }
    let resid = chain.stationarity_residual(pi);
    if resid > 1e-8 {
        return Err(Error::Parameter(format!(
            "pi is not stationary: residual {resid}"
        )));
    }
    let mut l = DMatrix::zeros(n, n);
    for u in 0..n {
        for v in 0..n {
            let fwd = (pi.get(u) / pi.get(v)).sqrt() * chain.get(u, v);
            let bwd = (pi.get(v) / pi.get(u)).sqrt() * chain.get(v, u);
            l[(u, v)] = -0.5 * (fwd + bwd);
        }
        l[(u, u)] += 1.0;
    }
    Ok(l)
}

/// Exhaustive Cheeger constant of a chain with stationary pi: the minimum
/// over cuts of the stationary outflow over the smaller side's mass.
pub fn cheeger_constant_h(chain: &MarkovChain, pi: &VertexWeights) -> Result<(f64, Vec<usize>)> {
    let n = chain.n();
    if n > crate::graph::BRUTE_FORCE_CAP {
        return Err(Error::SizeLimit(format!(
            "cheeger constant capped at n <= 24, got {n}"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidCut("need at least two vertices".into()));
    }
    let full = (1u64 << n) - 1;
    let total = pi.total();
    let mut best: Option<(f64, u64)> = None;
    for set in 1..full {
        let mass = pi.mass(set);
        let denom = mass.min(total - mass);
        if denom <= 0.0 {
            continue;
        }
        let mut outflow = 0.0;
        for u in 0..n {
            if set & (1 << u) == 0 {
                continue;
            }
            for v in 0..n {
                if set & (1 << v) == 0 {
                    outflow += pi.get(u) * chain.get(u, v);
                }
            }
        }
        let h = outflow / denom;
        if best.map_or(true, |(bv, _)| h < bv) {
            best = Some((h, set));
        }
    }
    let (h, set) = best.ok_or_else(|| Error::DegenerateCut("all cuts degenerate".into()))?;
    Ok((h, (0..n).filter(|&v| set & (1 << v) != 0).collect()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(into = "f64")]
pub enum MixingTime {
    Finite(u64),
    Infinite,
}

impl MixingTime {
    pub fn as_f64(self) -> f64 {
        match self {
            MixingTime::Finite(t) => t as f64,
            MixingTime::Infinite => f64::INFINITY,
        }
    }
}

impl From<MixingTime> for f64 {
    fn from(t: MixingTime) -> f64 {
        t.as_f64()
    }
}

/// Shared power-iteration loop; `gap` returns distance minus threshold,
/// negative once mixed.
fn mixing_time_by<F>(chain: &MarkovChain, gap: F) -> Result<MixingTime>
where
    F: Fn(&DMatrix<f64>) -> f64,
{
    let n = chain.n();
    if n > MIXING_N_CAP {
        return Err(Error::SizeLimit(format!(
            "mixing time capped at n <= {MIXING_N_CAP}"
        )));
    }
    let lazy = chain.is_lazy();
    let mut m = DMatrix::<f64>::identity(n, n);
    let mut best = f64::INFINITY;
    let mut stagnant = 0usize;
    for t in 0..=STEP_CAP {
        let d = gap(&m);
        if d.is_nan() {
            return Err(Error::Numerical("mixing distance became NaN".into()));
        }
        if d < 0.0 {
            return Ok(MixingTime::Finite(t));
        }
        if d < best - 1e-15 {
            best = d;
            stagnant = 0;
        } else {
            stagnant += 1;
        }
        if !lazy && stagnant >= 4 * n {
            // worst-case distance to stationarity never increases, so a long
            // stall means a periodic chain stuck above the threshold
            return Ok(MixingTime::Infinite);
        }
        m *= chain.matrix();
    }
    Ok(MixingTime::Infinite)
}

/// Exact worst-start total-variation mixing time: the first t with
/// max_u sum_v |P^t(u,v) - pi(v)| < eps. The maximum over starting
/// distributions is attained at a vertex indicator by convexity.
pub fn mixing_time_tv(chain: &MarkovChain, pi: &VertexWeights, eps: f64) -> Result<MixingTime> {
    if !(0.0 < eps && eps < 1.0) {
        return Err(Error::Parameter("eps must lie in (0,1)".into()));
    }
    let n = chain.n();
    mixing_time_by(chain, |m| {
        let mut worst = 0.0f64;
        for u in 0..n {
            let d: f64 = (0..n).map(|v| (m[(u, v)] - pi.get(v)).abs()).sum();
            worst = worst.max(d);
        }
        worst - eps
    })
}

/// Relative infinity-norm mixing time: the first t with
/// max_u max_v (1 - P^t(u,v)/pi(v)) < eps.
pub fn mixing_time_inf(chain: &MarkovChain, pi: &VertexWeights, eps: f64) -> Result<MixingTime> {
    if !(0.0 < eps && eps < 1.0) {
        return Err(Error::Parameter("eps must lie in (0,1)".into()));
    }
    let n = chain.n();
    if (0..n).any(|v| pi.get(v) <= 0.0) {
        return Err(Error::Degenerate("pi must be strictly positive".into()));
    }
    mixing_time_by(chain, |m| {
        let mut worst = f64::NEG_INFINITY;
        for u in 0..n {
            for v in 0..n {
                worst = worst.max(1.0 - m[(u, v)] / pi.get(v));
            }
        }
        worst - eps
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MixingBounds {
    /// Exhaustive directed vertex expansion, when n permits it.
    pub psi: Option<f64>,
    /// 1 / (psi * ln(1/pi_min)): the expansion side of the bracket.
    pub lower_bound: Option<f64>,
    pub lambda_lo: f64,
    /// ln(1/pi_min) / lambda_lo: the spectral side of the bracket.
    pub upper_proxy: f64,
}

#[derive(Debug, Clone)]
pub struct FastestMixing {
    /// Lazy chain (I+P)/2 built from the optimal reweighting.
    pub chain: MarkovChain,
    pub tau: MixingTime,
    pub bounds: MixingBounds,
    pub stationarity_residual: f64,
    /// False when the graph is not strongly connected, in which case no
    /// feasible chain mixes.
    pub mixing: bool,
}

/// Builds the fastest-mixing candidate chain P = Pi^{-1} A* from the optimal
/// vertex-capacitated reweighting, verifies its stationary distribution, and
/// measures its exact mixing time for small n.
pub fn fastest_mixing(
    g: &DirectedGraph,
    pi: &VertexWeights,
    opts: &SolveOptions,
) -> Result<FastestMixing> {
    if !pi.is_distribution() {
        return Err(Error::Parameter("pi must sum to 1".into()));
    }
    let n = g.n();
    if pi.len() != n {
        return Err(Error::Parameter("pi length mismatch".into()));
    }
    let g = g.with_self_loops();
    let bracket = max_reweighted_gap(&g, Mode::Vertex, Some(pi), opts, None)?;
    let a = bracket
        .witness
        .directed()
        .ok_or_else(|| Error::Numerical("vertex solve returned a non-directed witness".into()))?;

    let mut p = DMatrix::zeros(n, n);
    for (e, &x) in g.edges().iter().zip(&a.weights) {
        p[(e.tail, e.head)] += x;
    }
    for u in 0..n {
        let row: f64 = p.row(u).sum();
        if row <= 0.0 {
            return Err(Error::Degenerate(format!(
                "vertex {u} carries no reweighting mass"
            )));
        }
        for v in 0..n {
            p[(u, v)] /= row;
        }
    }
    let chain = MarkovChain::new(p)?;
    let residual = chain.stationarity_residual(pi);
    if residual > 1e-10 {
        return Err(Error::Numerical(format!(
            "stationarity residual {residual} above 1e-10"
        )));
    }
    let lazy = chain.lazy();

    let psi = if n <= crate::graph::BRUTE_FORCE_CAP {
        Some(
            crate::graph::brute_force_optimum(crate::graph::BruteForceInstance::Vertex(&g, pi))?
                .value,
        )
    } else {
        None
    };
    let pi_min = pi.min_positive();
    let log_term = (1.0 / pi_min).ln();
    let mixing = bracket.lambda_lo > 1e-9;
    let tau = if !mixing {
        MixingTime::Infinite
    } else if n <= 64 {
        mixing_time_tv(&lazy, pi, 1.0 / std::f64::consts::E)?
    } else {
        MixingTime::Infinite
    };
    let bounds = MixingBounds {
        psi,
        lower_bound: psi.map(|p| {
            if p > 0.0 {
                1.0 / (p * log_term)
            } else {
                f64::INFINITY
            }
        }),
        lambda_lo: bracket.lambda_lo,
        upper_proxy: if bracket.lambda_lo > 0.0 {
            log_term / bracket.lambda_lo
        } else {
            f64::INFINITY
        },
    };
    Ok(FastestMixing {
        chain: lazy,
        tau,
        bounds,
        stationarity_residual: residual,
        mixing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;

    fn complete_chain(n: usize) -> MarkovChain {
        MarkovChain::new(DMatrix::from_element(n, n, 1.0 / n as f64)).unwrap()
    }

    fn shift_cycle(n: usize) -> MarkovChain {
        let mut p = DMatrix::zeros(n, n);
        for v in 0..n {
            p[(v, (v + 1) % n)] = 1.0;
        }
        MarkovChain::new(p).unwrap()
    }

    /// Dense linear-solve oracle: replace one equation of (P^T - I) pi = 0
    /// with the normalization sum(pi) = 1.
    fn stationary_linear_solve(chain: &MarkovChain) -> Vec<f64> {
        let n = chain.n();
        let mut m = chain.matrix().transpose() - DMatrix::<f64>::identity(n, n);
        for v in 0..n {
            m[(n - 1, v)] = 1.0;
        }
        let mut b = nalgebra::DVector::zeros(n);
        b[n - 1] = 1.0;
        let sol = m.lu().solve(&b).expect("linear solve");
        sol.iter().copied().collect()
    }

    #[test]
    fn stationary_uniform_families() {
        let pi = stationary(&shift_cycle(5)).unwrap();
        for v in 0..5 {
            assert!((pi.get(v) - 0.2).abs() < 1e-12);
        }
        let pi = stationary(&complete_chain(4)).unwrap();
        for v in 0..4 {
            assert!((pi.get(v) - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn stationary_fast_dropping_cycle_matches_solver() {
        let g = instances::fast_dropping_cycle(8);
        let chain = random_walk_chain(&g).unwrap();
        let pi = stationary(&chain).unwrap();
        let oracle = stationary_linear_solve(&chain);
        for v in 0..8 {
            assert!((pi.get(v) - oracle[v]).abs() < 1e-10, "v={v}");
        }
        // interior mass drops off toward the middle of the cycle
        assert!(pi.get(4) < pi.get(0));
        assert!(pi.get(7) > pi.get(4));
    }

    #[test]
    fn stationary_rejects_reducible() {
        let g = instances::complete_dag(3);
        let chain = random_walk_chain(&g).unwrap();
        assert!(matches!(stationary(&chain), Err(Error::ReducibleChain(_))));
    }

    #[test]
    fn chung_laplacian_reversible_is_symmetric_psd() {
        let g =
            DirectedGraph::new(3, &[(0, 1, 1.0), (1, 0, 1.0), (1, 2, 1.0), (2, 1, 1.0)]).unwrap();
        let chain = random_walk_chain(&g).unwrap().lazy();
        let pi = stationary(&chain).unwrap();
        let l = chung_laplacian(&chain, &pi).unwrap();
        for u in 0..3 {
            for v in 0..3 {
                assert!((l[(u, v)] - l[(v, u)]).abs() < 1e-12);
            }
        }
        let (vals, _) = crate::spectral::bottom_eigs(&l, 1).unwrap();
        assert!(vals[0].abs() < 1e-10);
    }

    #[test]
    fn chung_laplacian_shift_cycle_spectrum() {
        // directed C4 shift: eigenvalues 1 - cos(2 pi j / 4) = {0, 1, 1, 2}
        let chain = shift_cycle(4);
        let pi = stationary(&chain).unwrap();
        let l = chung_laplacian(&chain, &pi).unwrap();
        let (vals, _) = crate::spectral::bottom_eigs(&l, 4).unwrap();
        let expect = [0.0, 1.0, 1.0, 2.0];
        for (v, e) in vals.iter().zip(expect) {
            assert!((v - e).abs() < 1e-10, "{vals:?}");
        }
    }

    #[test]
    fn chung_laplacian_complete_chain() {
        let chain = complete_chain(5);
        let pi = stationary(&chain).unwrap();
        let l = chung_laplacian(&chain, &pi).unwrap();
        let (vals, _) = crate::spectral::bottom_eigs(&l, 2).unwrap();
        assert!(vals[0].abs() < 1e-10);
        assert!((vals[1] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn chung_matches_vertex_laplacian_identity() {
        // the Chung Laplacian equals the vertex-mode normalized Laplacian of
        // A = Pi P entrywise
        let g = instances::fast_dropping_cycle(6);
        let chain = random_walk_chain(&g).unwrap().lazy();
        let pi = stationary(&chain).unwrap();
        let l = chung_laplacian(&chain, &pi).unwrap();

        let n = chain.n();
        let support = chain.support_graph();
        let weights: Vec<f64> = support
            .edges()
            .iter()
            .map(|e| pi.get(e.tail) * chain.get(e.tail, e.head))
            .collect();
        let a = crate::flow::Reweighting { weights };
        let l2 =
            crate::spectral::normalized_laplacian(&support, Mode::Vertex, &a, Some(&pi)).unwrap();
        for u in 0..n {
            for v in 0..n {
                assert!((l[(u, v)] - l2[(u, v)]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn cheeger_constant_c4() {
        let chain = shift_cycle(4);
        let pi = stationary(&chain).unwrap();
        let (h, set) = cheeger_constant_h(&chain, &pi).unwrap();
        // every contiguous pair leaks 1/4 of the mass across, half each side
        assert!((h - 0.5).abs() < 1e-12, "h {h}");
        assert_eq!(set.len(), 2);
    }

    #[test]
    fn tv_mixing_families() {
        let chain = complete_chain(6);
        let pi = stationary(&chain).unwrap();
        let t = mixing_time_tv(&chain, &pi, 1.0 / std::f64::consts::E).unwrap();
        assert_eq!(t, MixingTime::Finite(1));

        let shift = shift_cycle(5);
        let pi = VertexWeights::uniform_distribution(5);
        let t = mixing_time_tv(&shift, &pi, 1.0 / std::f64::consts::E).unwrap();
        assert_eq!(t, MixingTime::Infinite);
    }

    #[test]
    fn tv_lazy_c8_matches_power_oracle() {
        let chain = shift_cycle(8).lazy();
        let pi = VertexWeights::uniform_distribution(8);
        let eps = 1.0 / std::f64::consts::E;
        let t = mixing_time_tv(&chain, &pi, eps).unwrap();
        let mut m = DMatrix::<f64>::identity(8, 8);
        let mut oracle = None;
        for step in 0..10_000u64 {
            let d = (0..8)
                .map(|u| (0..8).map(|v| (m[(u, v)] - 0.125f64).abs()).sum::<f64>())
                .fold(0.0f64, f64::max);
            if d < eps {
                oracle = Some(step);
                break;
            }
            m *= chain.matrix();
        }
        assert_eq!(t, MixingTime::Finite(oracle.unwrap()));
    }

    #[test]
    fn tv_monotone_for_lazy_chains() {
        let g = instances::random_strongly_connected(6, 6, 2);
        let chain = random_walk_chain(&g).unwrap().lazy();
        let pi = stationary(&chain).unwrap();
        let mut m = DMatrix::<f64>::identity(6, 6);
        let mut last = f64::INFINITY;
        for _ in 0..50 {
            let d = (0..6)
                .map(|u| (0..6).map(|v| (m[(u, v)] - pi.get(v)).abs()).sum::<f64>())
                .fold(0.0f64, f64::max);
            assert!(d <= last + 1e-12);
            last = d;
            m *= chain.matrix();
        }
    }

    #[test]
    fn inf_mixing_families() {
        let chain = complete_chain(4);
        let pi = stationary(&chain).unwrap();
        let t = mixing_time_inf(&chain, &pi, 1.0 / std::f64::consts::E).unwrap();
        assert_eq!(t, MixingTime::Finite(1));

        // lazy bidirected K2: one step reaches the uniform distribution
        let k2 = MarkovChain::new(DMatrix::from_row_slice(2, 2, &[0.5, 0.5, 0.5, 0.5])).unwrap();
        let pi = VertexWeights::uniform_distribution(2);
        let t = mixing_time_inf(&k2, &pi, 1.0 / std::f64::consts::E).unwrap();
        assert_eq!(t, MixingTime::Finite(1));
    }

    #[test]
    fn fastest_mixing_k2() {
        let g =
            DirectedGraph::new(2, &[(0, 0, 1.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, 1.0)]).unwrap();
        let pi = VertexWeights::uniform_distribution(2);
        let fm = fastest_mixing(&g, &pi, &SolveOptions::default()).unwrap();
        assert!(fm.mixing);
        assert!(fm.stationarity_residual <= 1e-12);
        // the optimal chain hops deterministically; its lazy version mixes in
        // one step
        assert_eq!(fm.tau, MixingTime::Finite(1));
        assert!((fm.bounds.lambda_lo - 2.0).abs() < 1e-6);
    }

    #[test]
    fn fastest_mixing_complete_dag_reports_infinite() {
        let g = instances::complete_dag(4);
        let pi = VertexWeights::uniform_distribution(4);
        let fm = fastest_mixing(&g, &pi, &SolveOptions::default()).unwrap();
        assert!(!fm.mixing);
        assert_eq!(fm.tau, MixingTime::Infinite);
        assert_eq!(fm.bounds.psi.unwrap(), 0.0);
    }

    #[test]
    fn fastest_mixing_c8_bounds() {
        let g = instances::directed_cycle(8).with_self_loops();
        let pi = VertexWeights::uniform_distribution(8);
        let fm = fastest_mixing(&g, &pi, &SolveOptions::default()).unwrap();
        assert!(fm.mixing);
        let MixingTime::Finite(tau) = fm.tau else {
            panic!("expected finite tau")
        };
        let psi = fm.bounds.psi.unwrap();
        let t_inf = mixing_time_inf(&fm.chain, &pi, 1.0 / std::f64::consts::E).unwrap();
        assert!(t_inf.as_f64() > 1.0 / (4.0 * psi), "{t_inf:?} vs psi {psi}");
        assert!(tau < STEP_CAP);
    }

    #[test]
    fn inf_mixing_lower_bound_random_feasible_chains() {
        for seed in 0..5u64 {
            let g = instances::random_strongly_connected_loops(6, 6, seed);
            let pi = VertexWeights::uniform_distribution(6);
            let fm = fastest_mixing(&g, &pi, &SolveOptions::default()).unwrap();
            let psi = fm.bounds.psi.unwrap();
            let t_inf = mixing_time_inf(&fm.chain, &pi, 1.0 / std::f64::consts::E).unwrap();
            assert!(
                t_inf.as_f64() > 1.0 / (4.0 * psi),
                "seed {seed}: tau_inf {t_inf:?}, psi {psi}"
            );
        }
    }
}
