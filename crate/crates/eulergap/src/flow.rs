//! Exact circulation machinery: Hoffman feasibility, the asymmetric ratio,
//! and the two Eulerian linear oracles with dual potentials.
//!
//! All flow problems are solved on scaled integers (capacities and supplies
//! relative-scaled by 2^40, lengths by 2^32), so per-vertex balance and
//! complementary slackness hold exactly; the float outputs are the integer
//! solution divided back by the scale.

use crate::graph::{scc_components, DirectedGraph, VertexWeights};
use crate::{Error, Result};

const CAP_SCALE: f64 = (1u64 << 40) as f64;
const LEN_SCALE: f64 = (1u64 << 32) as f64;

/// Edge-indexed nonnegative reweighting of a graph, aligned with
/// `DirectedGraph::edges()`. Feasible reweightings are Eulerian: weighted
/// in-degree equals weighted out-degree at every vertex.
#[derive(Debug, Clone)]
pub struct Reweighting {
    pub weights: Vec<f64>,
}

impl Reweighting {
    pub fn zero(g: &DirectedGraph) -> Self {
        Reweighting {
            weights: vec![0.0; g.m()],
        }
    }

    /// Self-loop-only reweighting routing pi(v) through each loop.
    pub fn loops_only(g: &DirectedGraph, pi: &VertexWeights) -> Result<Self> {
        let mut weights = vec![0.0; g.m()];
        for (i, e) in g.edges().iter().enumerate() {
            if e.tail == e.head {
                weights[i] = pi.get(e.tail);
            }
        }
        for v in 0..g.n() {
            if pi.get(v) > 0.0 && !g.has_self_loop(v) {
                return Err(Error::Infeasible(format!(
                    "vertex {v} has weight but no self-loop"
                )));
            }
        }
        Ok(Reweighting { weights })
    }

    /// D_A(v) = sum_u (A(u,v) + A(v,u)) / 2.
    pub fn degree(&self, g: &DirectedGraph, v: usize) -> f64 {
        let mut d = 0.0;
        for &ei in g.in_edges(v) {
            d += 0.5 * self.weights[ei];
        }
        for &ei in g.out_edges(v) {
            d += 0.5 * self.weights[ei];
        }
        d
    }

    pub fn in_weight(&self, g: &DirectedGraph, v: usize) -> f64 {
        g.in_edges(v).iter().map(|&ei| self.weights[ei]).sum()
    }

    pub fn out_weight(&self, g: &DirectedGraph, v: usize) -> f64 {
        g.out_edges(v).iter().map(|&ei| self.weights[ei]).sum()
    }

    pub fn norm_l1(&self) -> f64 {
        self.weights.iter().map(|w| w.abs()).sum()
    }

    /// Eulerian balance within 1e-9 * ||A||_1 at every vertex.
    pub fn is_balanced(&self, g: &DirectedGraph) -> bool {
        let tol = 1e-9 * self.norm_l1().max(1e-300);
        (0..g.n()).all(|v| (self.in_weight(g, v) - self.out_weight(g, v)).abs() <= tol)
    }

    /// Convex combination (1-gamma) self + gamma other, in place.
    pub fn blend(&mut self, other: &Reweighting, gamma: f64) {
        for (a, &b) in self.weights.iter_mut().zip(&other.weights) {
            *a = (1.0 - gamma) * *a + gamma * b;
        }
    }
}

/// Multipliers of the inner linear program: a nonnegative `q` per vertex (or
/// per edge, depending on the capacity mode), free potentials `r` per vertex,
/// and the dual objective.
#[derive(Debug, Clone)]
pub struct DualCertificate {
    pub q: Vec<f64>,
    pub r: Vec<f64>,
    pub objective: f64,
}

// ---------------------------------------------------------------------------
// integer min-cost b-flow on residual networks
// ---------------------------------------------------------------------------

struct FlowNet {
    n: usize,
    to: Vec<u32>,
    residual: Vec<i64>,
    init_cap: Vec<i64>,
    cost: Vec<i64>,
    adj: Vec<Vec<u32>>,
}

impl FlowNet {
    fn new(n: usize) -> Self {
        FlowNet {
            n,
            to: Vec::new(),
            residual: Vec::new(),
            init_cap: Vec::new(),
            cost: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    /// Adds arc u->v; `prefill` units are pushed immediately (used to
    /// saturate negative-cost arcs so the residual network starts with
    /// nonnegative costs everywhere).
    fn add(&mut self, u: usize, v: usize, cap: i64, cost: i64, prefill: i64) -> usize {
        debug_assert!(prefill >= 0 && prefill <= cap);
        let id = self.to.len();
        self.to.push(v as u32);
        self.residual.push(cap - prefill);
        self.init_cap.push(cap);
        self.cost.push(cost);
        self.adj[u].push(id as u32);
        self.to.push(u as u32);
        self.residual.push(prefill);
        self.init_cap.push(0);
        self.cost.push(-cost);
        self.adj[v].push((id + 1) as u32);
        id
    }

    fn flow(&self, id: usize) -> i64 {
        self.init_cap[id] - self.residual[id]
    }

    /// Successive shortest paths with Dijkstra over reduced costs. Every
    /// residual arc must have nonnegative cost on entry (checked). Routes all
    /// supply in `b`; returns the final potentials, or None if some supply
    /// cannot reach a deficit.
    fn solve_b_flow(&mut self, b: &mut [i64]) -> Option<Vec<i64>> {
        debug_assert!(
            (0..self.to.len()).all(|a| self.residual[a] == 0 || self.cost[a] >= 0),
            "initial residual arc with negative cost"
        );
        let n = self.n;
        let mut pot = vec![0i64; n];
        let mut dist = vec![i64::MAX; n];
        let mut parent: Vec<u32> = vec![u32::MAX; n];
        let guard_limit = 64 * (self.to.len() + 16) * (n + 16);
        let mut rounds = 0usize;
        loop {
            let Some(s) = (0..n).find(|&v| b[v] > 0) else {
                return Some(pot);
            };
            rounds += 1;
            if rounds > guard_limit {
                // should be unreachable: every round saturates an arc or
                // exhausts a supply node
                return None;
            }
            dist.iter_mut().for_each(|d| *d = i64::MAX);
            parent.iter_mut().for_each(|p| *p = u32::MAX);
            dist[s] = 0;
            let mut heap = std::collections::BinaryHeap::new();
            heap.push(std::cmp::Reverse((0i64, s as u32)));
            while let Some(std::cmp::Reverse((d, u))) = heap.pop() {
                let u = u as usize;
                if d > dist[u] {
                    continue;
                }
                for &aid in &self.adj[u] {
                    let aid = aid as usize;
                    if self.residual[aid] <= 0 {
                        continue;
                    }
                    let v = self.to[aid] as usize;
                    let rc = self.cost[aid] + pot[u] - pot[v];
                    debug_assert!(rc >= 0, "negative reduced cost");
                    let nd = d + rc;
                    if nd < dist[v] {
                        dist[v] = nd;
                        parent[v] = aid as u32;
                        heap.push(std::cmp::Reverse((nd, v as u32)));
                    }
                }
            }
            // nearest reachable deficit, ties to the smallest vertex id
            let t = (0..n)
                .filter(|&v| b[v] < 0 && dist[v] < i64::MAX)
                .min_by_key(|&v| (dist[v], v))?;
            let dt = dist[t];
            for v in 0..n {
                pot[v] += dist[v].min(dt);
            }
            let mut delta = b[s].min(-b[t]);
            let mut v = t;
            while v != s {
                let aid = parent[v] as usize;
                delta = delta.min(self.residual[aid]);
                v = self.to[aid ^ 1] as usize;
            }
            let mut v = t;
            while v != s {
                let aid = parent[v] as usize;
                self.residual[aid] -= delta;
                self.residual[aid ^ 1] += delta;
                v = self.to[aid ^ 1] as usize;
            }
            b[s] -= delta;
            b[t] += delta;
        }
    }
}

// ---------------------------------------------------------------------------
// Hoffman circulations and the asymmetric ratio
// ---------------------------------------------------------------------------

/// Scales weights to integers relative to their maximum. Capacity-type
/// quantities round down so the scaled value never exceeds the real one;
/// supply-type quantities round to nearest.
fn scaled_caps(w: &[f64], factor: f64, down: bool) -> (Vec<i64>, f64) {
    let w_max = w.iter().cloned().fold(0.0f64, f64::max);
    if w_max <= 0.0 {
        return (vec![0; w.len()], 1.0);
    }
    let unit = w_max / CAP_SCALE;
    let clamp = i64::MAX / 8;
    let caps = w
        .iter()
        .map(|&x| {
            let raw = x / w_max * CAP_SCALE * factor;
            let c = if down { raw.floor() } else { raw.round() };
            if c >= clamp as f64 {
                clamp
            } else {
                c as i64
            }
        })
        .collect();
    (caps, unit)
}

/// Circulation A with w <= A <= alpha * w and exact per-vertex balance, if
/// one exists. Self-loops are trivially self-balanced and kept at their input
/// weight.
pub fn hoffman_circulation(
    g: &DirectedGraph,
    w: &[f64],
    alpha: f64,
) -> Result<Option<Reweighting>> {
    if alpha < 1.0 {
        return Err(Error::Parameter(format!("alpha must be >= 1, got {alpha}")));
    }
    if w.len() != g.m() {
        return Err(Error::Parameter("weight vector length mismatch".into()));
    }
    if w.iter().any(|&x| x < 0.0) {
        return Err(Error::Parameter("weights must be nonnegative".into()));
    }
    let (lower, unit) = scaled_caps(w, 1.0, false);
    let (upper, _) = scaled_caps(w, alpha, true);
    let mut net = FlowNet::new(g.n());
    let mut arcs = vec![usize::MAX; g.m()];
    let mut b = vec![0i64; g.n()];
    for (i, e) in g.edges().iter().enumerate() {
        if e.tail == e.head {
            continue;
        }
        let extra = (upper[i] - lower[i]).max(0);
        arcs[i] = net.add(e.tail, e.head, extra, 0, 0);
        b[e.head] -= lower[i];
        b[e.tail] += lower[i];
    }
    // b[v] > 0 means the lower bounds push out more than in at v, so v must
    // absorb extra incoming flow; flip the sign convention for the solver by
    // routing from surplus-in vertices to surplus-out vertices.
    for x in b.iter_mut() {
        *x = -*x;
    }
    if net.solve_b_flow(&mut b).is_none() {
        return Ok(None);
    }
    let mut weights = vec![0.0; g.m()];
    for (i, e) in g.edges().iter().enumerate() {
        if e.tail == e.head {
            weights[i] = w[i];
        } else {
            weights[i] = (lower[i] + net.flow(arcs[i])) as f64 * unit;
        }
    }
    Ok(Some(Reweighting { weights }))
}

/// True when some positive-weight arc leaves a strongly connected component
/// of the positive-weight subgraph; exactly the graphs whose asymmetric
/// ratio is infinite.
fn has_unreturnable_arc(g: &DirectedGraph, w: &[f64]) -> bool {
    let pos_edges: Vec<(usize, usize, f64)> = g
        .edges()
        .iter()
        .zip(w)
        .filter(|(e, &wt)| wt > 0.0 && e.tail != e.head)
        .map(|(e, &wt)| (e.tail, e.head, wt))
        .collect();
    if pos_edges.is_empty() {
        return false;
    }
    let sub = DirectedGraph::new(g.n(), &pos_edges).unwrap();
    let comps = scc_components(&sub);
    let mut comp_of = vec![usize::MAX; g.n()];
    for (ci, comp) in comps.iter().enumerate() {
        for &v in comp {
            comp_of[v] = ci;
        }
    }
    pos_edges.iter().any(|&(t, h, _)| comp_of[t] != comp_of[h])
}

/// Least alpha >= 1 admitting a Hoffman circulation between w and alpha * w,
/// located by bisection to absolute width 1e-6; +infinity when some cut has
/// zero return weight. Equals max over cuts of w(out)/w(in).
pub fn asymmetric_ratio(g: &DirectedGraph, w: &[f64]) -> Result<f64> {
    if g.m() == 0 || g.edges().iter().all(|e| e.tail == e.head) {
        return Err(Error::Degenerate(
            "asymmetric ratio undefined without edges".into(),
        ));
    }
    if has_unreturnable_arc(g, w) {
        return Ok(f64::INFINITY);
    }
    if hoffman_circulation(g, w, 1.0)?.is_some() {
        return Ok(1.0);
    }
    let mut lo = 1.0f64;
    let mut hi = 2.0f64;
    let mut guard = 0;
    while hoffman_circulation(g, w, hi)?.is_none() {
        lo = hi;
        hi *= 2.0;
        guard += 1;
        if guard > 80 {
            return Ok(f64::INFINITY);
        }
    }
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if hoffman_circulation(g, w, mid)?.is_some() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Brute-force asymmetric ratio over all cuts, for testing against the
/// Hoffman bisection. Cuts with zero weight in both directions are skipped.
pub fn asymmetric_ratio_brute_force(g: &DirectedGraph, w: &[f64]) -> Result<f64> {
    let n = g.n();
    if n > crate::graph::BRUTE_FORCE_CAP {
        return Err(Error::SizeLimit(
            "asymmetric ratio brute force capped at n <= 24".into(),
        ));
    }
    let full = (1u64 << n) - 1;
    let mut best = 1.0f64;
    for set in 1..full {
        let mut fwd = 0.0;
        let mut bwd = 0.0;
        for (e, &wt) in g.edges().iter().zip(w) {
            if e.tail == e.head {
                continue;
            }
            let t_in = set & (1 << e.tail) != 0;
            let h_in = set & (1 << e.head) != 0;
            if t_in && !h_in {
                fwd += wt;
            } else if !t_in && h_in {
                bwd += wt;
            }
        }
        if fwd == 0.0 && bwd == 0.0 {
            continue;
        }
        if bwd == 0.0 || fwd == 0.0 {
            return Ok(f64::INFINITY);
        }
        best = best.max(fwd / bwd).max(bwd / fwd);
    }
    Ok(best)
}

// ---------------------------------------------------------------------------
// Eulerian linear oracles
// ---------------------------------------------------------------------------

/// Shifts r so that the weighted mean is zero; harmless for dual feasibility.
fn shift_potentials(r: &mut [f64], base: &[f64]) {
    let total: f64 = base.iter().sum();
    if total <= 0.0 {
        return;
    }
    let mean: f64 = r.iter().zip(base).map(|(&ri, &bi)| ri * bi).sum::<f64>() / total;
    r.iter_mut().for_each(|ri| *ri -= mean);
}

/// Maximizes sum A(u,v) * len(uv) over circulations 0 <= A <= w. Returns the
/// optimal reweighting, the objective value (without the 1/2 factor used by
/// spectral callers), and dual potentials r with per-edge slacks
/// q(uv) = max{0, len(uv) - r(u) + r(v)}.
pub fn eulerian_oracle_edge(
    g: &DirectedGraph,
    w: &[f64],
    lengths: &[f64],
) -> Result<(Reweighting, f64, DualCertificate)> {
    if w.len() != g.m() || lengths.len() != g.m() {
        return Err(Error::Parameter(
            "weight/length vector length mismatch".into(),
        ));
    }
    if lengths.iter().any(|&l| l < 0.0 || !l.is_finite()) {
        return Err(Error::Parameter(
            "lengths must be nonnegative and finite".into(),
        ));
    }
    let len_max = lengths.iter().cloned().fold(0.0f64, f64::max);
    let d_w: Vec<f64> = (0..g.n()).map(|v| g.total_weight(v)).collect();
    if len_max <= 0.0 {
        let cert = DualCertificate {
            q: vec![0.0; g.m()],
            r: vec![0.0; g.n()],
            objective: 0.0,
        };
        return Ok((Reweighting::zero(g), 0.0, cert));
    }
    let (caps, cap_unit) = scaled_caps(w, 1.0, true);
    let len_int: Vec<i64> = lengths
        .iter()
        .map(|&l| (l / len_max * LEN_SCALE).round() as i64)
        .collect();
    let len_unit = len_max / LEN_SCALE;

    let mut net = FlowNet::new(g.n());
    let mut arcs = vec![usize::MAX; g.m()];
    let mut b = vec![0i64; g.n()];
    for (i, e) in g.edges().iter().enumerate() {
        if e.tail == e.head {
            continue;
        }
        if len_int[i] > 0 {
            // saturate profitable arcs up front; the residual reverse arc
            // carries cost +len >= 0
            arcs[i] = net.add(e.tail, e.head, caps[i], -len_int[i], caps[i]);
            b[e.head] -= caps[i];
            b[e.tail] += caps[i];
        } else {
            arcs[i] = net.add(e.tail, e.head, caps[i], 0, 0);
        }
    }
    for x in b.iter_mut() {
        *x = -*x;
    }
    let pot = net
        .solve_b_flow(&mut b)
        .ok_or_else(|| Error::Numerical("circulation repair failed".into()))?;

    let mut weights = vec![0.0; g.m()];
    let mut value_int: i128 = 0;
    for (i, e) in g.edges().iter().enumerate() {
        if e.tail == e.head {
            // loops are self-balanced: saturate exactly when profitable
            if len_int[i] > 0 {
                weights[i] = w[i];
                value_int += caps[i] as i128 * len_int[i] as i128;
            }
            continue;
        }
        let f = net.flow(arcs[i]);
        weights[i] = f as f64 * cap_unit;
        value_int += f as i128 * len_int[i] as i128;
    }
    let value = value_int as f64 * cap_unit * len_unit;

    let mut r: Vec<f64> = pot.iter().map(|&p| p as f64 * len_unit).collect();
    shift_potentials(&mut r, &d_w);
    let q: Vec<f64> = g
        .edges()
        .iter()
        .zip(lengths)
        .map(|(e, &l)| (l - r[e.tail] + r[e.head]).max(0.0))
        .collect();
    let objective: f64 = q.iter().zip(w).map(|(&qi, &wi)| qi * wi).sum();
    Ok((
        Reweighting { weights },
        value,
        DualCertificate { q, r, objective },
    ))
}

/// Maximizes sum A(u,v) * len(uv) over reweightings with in-weight and
/// out-weight exactly pi(v) at every vertex (a transportation problem on the
/// bipartite vertex split). Every vertex must carry a self-loop.
pub fn eulerian_oracle_vertex(
    g: &DirectedGraph,
    pi: &VertexWeights,
    lengths: &[f64],
) -> Result<(Reweighting, f64, DualCertificate)> {
    let n = g.n();
    if pi.len() != n || lengths.len() != g.m() {
        return Err(Error::Parameter("pi/length vector length mismatch".into()));
    }
    if lengths.iter().any(|&l| l < 0.0 || !l.is_finite()) {
        return Err(Error::Parameter(
            "lengths must be nonnegative and finite".into(),
        ));
    }
    for v in 0..n {
        if pi.get(v) > 0.0 && !g.has_self_loop(v) {
            return Err(Error::Infeasible(format!(
                "vertex {v} needs a self-loop for the vertex-capacitated polytope"
            )));
        }
    }
    let len_max = lengths.iter().cloned().fold(0.0f64, f64::max);
    if len_max <= 0.0 {
        let a = Reweighting::loops_only(g, pi)?;
        let cert = DualCertificate {
            q: vec![0.0; n],
            r: vec![0.0; n],
            objective: 0.0,
        };
        return Ok((a, 0.0, cert));
    }
    let (supply, cap_unit) = scaled_caps(pi.as_slice(), 1.0, false);
    let len_int: Vec<i64> = lengths
        .iter()
        .map(|&l| (l / len_max * LEN_SCALE).round() as i64)
        .collect();
    let len_unit = len_max / LEN_SCALE;
    let shift = LEN_SCALE as i64;

    // bipartite transportation: node u = u-out, node n+v = v-in; all costs
    // shifted by the maximum length so they are nonnegative
    let mut net = FlowNet::new(2 * n);
    let mut arcs = vec![usize::MAX; g.m()];
    for (i, e) in g.edges().iter().enumerate() {
        let cap = supply[e.tail].min(supply[e.head]);
        arcs[i] = net.add(e.tail, n + e.head, cap, shift - len_int[i], 0);
    }
    let mut b = vec![0i64; 2 * n];
    for v in 0..n {
        b[v] = supply[v];
        b[n + v] = -supply[v];
    }
    let pot = net
        .solve_b_flow(&mut b)
        .ok_or_else(|| Error::Infeasible("vertex-capacitated transportation infeasible".into()))?;

    let mut weights = vec![0.0; g.m()];
    let mut value_int: i128 = 0;
    for i in 0..g.m() {
        let f = net.flow(arcs[i]);
        weights[i] = f as f64 * cap_unit;
        value_int += f as i128 * len_int[i] as i128;
    }
    let value = value_int as f64 * cap_unit * len_unit;

    // transportation duals: y(u) = p_out(u), z(v) = -(p_in(v) - shift);
    // q(v) = y(v) + z(v) >= 0 thanks to the self-loop constraint,
    // r(u) = y(u) up to a weighted shift
    let mut r: Vec<f64> = (0..n).map(|u| pot[u] as f64 * len_unit).collect();
    let q: Vec<f64> = (0..n)
        .map(|v| ((pot[v] - (pot[n + v] - shift)) as f64 * len_unit).max(0.0))
        .collect();
    let objective: f64 = q
        .iter()
        .zip(pi.as_slice())
        .map(|(&qi, &pi_v)| qi * pi_v)
        .sum();
    shift_potentials(&mut r, pi.as_slice());
    Ok((
        Reweighting { weights },
        value,
        DualCertificate { q, r, objective },
    ))
}
