//! Directed graphs, vertex weights, hypergraphs, and the exact expansion
//! evaluators with their exhaustive small-instance oracle.

use crate::{Error, Result};
use serde::Serialize;

/// Maximum vertex count accepted by subset enumeration (64-bit bitmasks).
pub const BRUTE_FORCE_CAP: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub weight: f64,
}

/// Directed graph with nonnegative edge weights. Parallel edges are merged
/// additively at construction; self-loops are kept and flagged. Zero-weight
/// edges stay in the structure: they count for unweighted degrees and for
/// out-neighbor sets, but carry no capacity.
#[derive(Debug, Clone)]
pub struct DirectedGraph {
    n: usize,
    edges: Vec<Edge>,
    out_w: Vec<f64>,
    in_w: Vec<f64>,
    out_adj: Vec<Vec<usize>>, // edge indices by tail
    in_adj: Vec<Vec<usize>>,  // edge indices by head
    max_degree: usize,
    has_loop: Vec<bool>,
}

impl DirectedGraph {
    pub fn new(n: usize, raw_edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut merged: std::collections::BTreeMap<(usize, usize), f64> =
            std::collections::BTreeMap::new();
        for &(t, h, w) in raw_edges {
            if t >= n || h >= n {
                return Err(Error::Parse(format!(
                    "edge ({t},{h}) out of range for n={n}"
                )));
            }
            if !(w >= 0.0) || !w.is_finite() {
                return Err(Error::Parse(format!(
                    "edge ({t},{h}) has invalid weight {w}"
                )));
            }
            *merged.entry((t, h)).or_insert(0.0) += w;
        }
        let edges: Vec<Edge> = merged
            .into_iter()
            .map(|((tail, head), weight)| Edge { tail, head, weight })
            .collect();
        let mut g = DirectedGraph {
            n,
            edges,
            out_w: vec![0.0; n],
            in_w: vec![0.0; n],
            out_adj: vec![Vec::new(); n],
            in_adj: vec![Vec::new(); n],
            max_degree: 0,
            has_loop: vec![false; n],
        };
        g.rebuild_caches();
        Ok(g)
    }

    fn rebuild_caches(&mut self) {
        let n = self.n;
        self.out_w = vec![0.0; n];
        self.in_w = vec![0.0; n];
        self.out_adj = vec![Vec::new(); n];
        self.in_adj = vec![Vec::new(); n];
        self.has_loop = vec![false; n];
        let mut deg = vec![0usize; n];
        for (i, e) in self.edges.iter().enumerate() {
            self.out_w[e.tail] += e.weight;
            self.in_w[e.head] += e.weight;
            self.out_adj[e.tail].push(i);
            self.in_adj[e.head].push(i);
            deg[e.tail] += 1;
            deg[e.head] += 1;
            if e.tail == e.head {
                self.has_loop[e.tail] = true;
            }
        }
        self.max_degree = deg.into_iter().max().unwrap_or(0);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    /// Weighted out-degree.
    pub fn out_weight(&self, v: usize) -> f64 {
        self.out_w[v]
    }

    /// Weighted in-degree.
    pub fn in_weight(&self, v: usize) -> f64 {
        self.in_w[v]
    }

    /// Total weighted degree d_w(v) = in + out; a self-loop counts twice.
    pub fn total_weight(&self, v: usize) -> f64 {
        self.out_w[v] + self.in_w[v]
    }

    /// Maximum unweighted total degree (in + out, loops counted twice).
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn has_self_loop(&self, v: usize) -> bool {
        self.has_loop[v]
    }

    pub fn total_volume(&self) -> f64 {
        (0..self.n).map(|v| self.total_weight(v)).sum()
    }

    /// Copy of the graph with a zero-weight self-loop added wherever one is
    /// missing. Zero weight keeps edge-capacity semantics untouched while
    /// making the vertex-capacitated polytope feasible.
    pub fn with_self_loops(&self) -> DirectedGraph {
        let mut g = self.clone();
        let mut added = 0usize;
        for v in 0..self.n {
            if !g.has_loop[v] {
                g.edges.push(Edge {
                    tail: v,
                    head: v,
                    weight: 0.0,
                });
                added += 1;
            }
        }
        if added > 0 {
            log::warn!("inserted {added} missing self-loops for vertex-capacitated solve");
            g.edges.sort_by_key(|e| (e.tail, e.head));
            g.rebuild_caches();
        }
        g
    }

    /// Copy with all self-loops removed.
    pub fn without_self_loops(&self) -> DirectedGraph {
        let mut g = self.clone();
        g.edges.retain(|e| e.tail != e.head);
        g.rebuild_caches();
        g
    }

    /// Unweighted out-neighbor set of S (excludes S itself and self-loops).
    pub fn out_neighbors(&self, set: u64) -> u64 {
        let mut nb = 0u64;
        for e in &self.edges {
            if e.tail != e.head && set & (1 << e.tail) != 0 && set & (1 << e.head) == 0 {
                nb |= 1 << e.head;
            }
        }
        nb
    }
}

/// Vertex weights pi, defaulting to all ones.
#[derive(Debug, Clone)]
pub struct VertexWeights {
    pi: Vec<f64>,
}

impl VertexWeights {
    pub fn new(pi: Vec<f64>) -> Result<Self> {
        if pi.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
            return Err(Error::Parameter(
                "vertex weights must be nonnegative".into(),
            ));
        }
        let total: f64 = pi.iter().sum();
        if total <= 0.0 {
            return Err(Error::Parameter(
                "vertex weights must have positive total".into(),
            ));
        }
        Ok(VertexWeights { pi })
    }

    pub fn uniform(n: usize) -> Self {
        VertexWeights { pi: vec![1.0; n] }
    }

    /// Uniform distribution (entries 1/n).
    pub fn uniform_distribution(n: usize) -> Self {
        VertexWeights {
            pi: vec![1.0 / n as f64; n],
        }
    }

    pub fn get(&self, v: usize) -> f64 {
        self.pi[v]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.pi
    }

    pub fn len(&self) -> usize {
        self.pi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pi.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.pi.iter().sum()
    }

    pub fn min_positive(&self) -> f64 {
        self.pi
            .iter()
            .copied()
            .filter(|&x| x > 0.0)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn mass(&self, set: u64) -> f64 {
        (0..self.pi.len())
            .filter(|&v| set & (1 << v) != 0)
            .map(|v| self.pi[v])
            .sum()
    }

    /// Checks the distribution invariant (sums to 1 within 1e-12).
    pub fn is_distribution(&self) -> bool {
        (self.total() - 1.0).abs() <= 1e-12
    }
}

/// Weighted hypergraph; hyperedges are nonempty sorted vertex sets.
#[derive(Debug, Clone)]
pub struct Hypergraph {
    n: usize,
    hyperedges: Vec<(Vec<usize>, f64)>,
    degree: Vec<f64>,
    max_size: usize,
}

impl Hypergraph {
    pub fn new(n: usize, raw: &[(Vec<usize>, f64)]) -> Result<Self> {
        let mut hyperedges = Vec::with_capacity(raw.len());
        for (vs, w) in raw {
            if vs.is_empty() {
                return Err(Error::Parse("empty hyperedge".into()));
            }
            if !(*w >= 0.0) || !w.is_finite() {
                return Err(Error::Parse(format!("invalid hyperedge weight {w}")));
            }
            let mut vs = vs.clone();
            vs.sort_unstable();
            vs.dedup();
            if *vs.last().unwrap() >= n {
                return Err(Error::Parse("hyperedge vertex out of range".into()));
            }
            hyperedges.push((vs, *w));
        }
        let mut degree = vec![0.0; n];
        let mut max_size = 1;
        for (vs, w) in &hyperedges {
            max_size = max_size.max(vs.len());
            for &v in vs {
                degree[v] += w;
            }
        }
        Ok(Hypergraph {
            n,
            hyperedges,
            degree,
            max_size,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.hyperedges.len()
    }

    pub fn hyperedges(&self) -> &[(Vec<usize>, f64)] {
        &self.hyperedges
    }

    /// Weighted degree d_w(v), the total weight of hyperedges containing v.
    pub fn degree(&self, v: usize) -> f64 {
        self.degree[v]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degree
    }

    /// Maximum hyperedge size r.
    pub fn max_size(&self) -> usize {
        self.max_size
    }

    pub fn volume(&self, set: u64) -> f64 {
        (0..self.n)
            .filter(|&v| set & (1 << v) != 0)
            .map(|v| self.degree[v])
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CutMode {
    VertexExpansion,
    EdgeConductance,
    HypergraphConductance,
}

/// A proper nonempty vertex subset together with its evaluated expansion.
#[derive(Debug, Clone, Serialize)]
pub struct Cut {
    pub set: Vec<usize>,
    pub value: f64,
    pub mode: CutMode,
}

impl Cut {
    pub fn from_mask(mask: u64, n: usize, value: f64, mode: CutMode) -> Cut {
        let set = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
        Cut { set, value, mode }
    }

    pub fn mask(&self) -> u64 {
        self.set.iter().fold(0u64, |m, &v| m | (1 << v))
    }
}

fn check_proper(set: u64, n: usize) -> Result<()> {
    if n > 64 {
        return Err(Error::SizeLimit("bitmask cuts support n <= 64".into()));
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    if set == 0 || set & full == full {
        return Err(Error::InvalidCut(
            "subset must be proper and nonempty".into(),
        ));
    }
    Ok(())
}

/// Directed edge conductance of S:
/// min{w(out-cut of S), w(out-cut of complement)} / min{vol(S), vol(complement)}.
/// Self-loops contribute to volumes but never cross a cut.
pub fn directed_edge_conductance(g: &DirectedGraph, set: u64) -> Result<f64> {
    check_proper(set, g.n())?;
    let mut out_s = 0.0;
    let mut out_sbar = 0.0;
    for e in g.edges() {
        let t_in = set & (1 << e.tail) != 0;
        let h_in = set & (1 << e.head) != 0;
        if t_in && !h_in {
            out_s += e.weight;
        } else if !t_in && h_in {
            out_sbar += e.weight;
        }
    }
    // both sides summed directly so S and its complement evaluate bit-equal
    let vol_s: f64 = (0..g.n())
        .filter(|&v| set & (1 << v) != 0)
        .map(|v| g.total_weight(v))
        .sum();
    let vol_sbar: f64 = (0..g.n())
        .filter(|&v| set & (1 << v) == 0)
        .map(|v| g.total_weight(v))
        .sum();
    let denom = vol_s.min(vol_sbar);
    if denom <= 0.0 {
        return Err(Error::DegenerateCut("zero min-volume side".into()));
    }
    Ok(out_s.min(out_sbar) / denom)
}

/// Directed vertex expansion of S:
/// min{pi(out-neighbors of S), pi(out-neighbors of complement)} / min{pi(S), pi(complement)}.
/// Out-neighbor sets use unweighted adjacency and ignore self-loops.
pub fn directed_vertex_expansion(g: &DirectedGraph, pi: &VertexWeights, set: u64) -> Result<f64> {
    check_proper(set, g.n())?;
    let full = if g.n() == 64 {
        u64::MAX
    } else {
        (1u64 << g.n()) - 1
    };
    let comp = full & !set;
    let pi_s = pi.mass(set);
    let pi_sbar = pi.mass(comp);
    let denom = pi_s.min(pi_sbar);
    if denom <= 0.0 {
        return Err(Error::DegenerateCut("zero min-weight side".into()));
    }
    let fwd = pi.mass(g.out_neighbors(set));
    let bwd = pi.mass(g.out_neighbors(comp));
    Ok(fwd.min(bwd) / denom)
}

/// Hypergraph edge conductance of S: w(boundary hyperedges) / min volume.
pub fn hypergraph_conductance(h: &Hypergraph, set: u64) -> Result<f64> {
    check_proper(set, h.n())?;
    let mut crossing = 0.0;
    for (vs, w) in h.hyperedges() {
        let mut inside = false;
        let mut outside = false;
        for &v in vs {
            if set & (1 << v) != 0 {
                inside = true;
            } else {
                outside = true;
            }
        }
        if inside && outside {
            crossing += w;
        }
    }
    let full = if h.n() == 64 {
        u64::MAX
    } else {
        (1u64 << h.n()) - 1
    };
    let vol_s = h.volume(set);
    let vol_sbar = h.volume(full & !set);
    let denom = vol_s.min(vol_sbar);
    if denom <= 0.0 {
        return Err(Error::DegenerateCut("zero min-volume side".into()));
    }
    Ok(crossing / denom)
}

/// Instance handed to the exhaustive optimizer.
pub enum BruteForceInstance<'a> {
    Edge(&'a DirectedGraph),
    Vertex(&'a DirectedGraph, &'a VertexWeights),
    Hyper(&'a Hypergraph),
}

/// Exhaustive minimizer over all proper nonempty subsets. Ties break toward
/// the lexicographically smallest bitmask; degenerate cuts (zero min-volume)
/// are skipped.
pub fn brute_force_optimum(instance: BruteForceInstance<'_>) -> Result<Cut> {
    let (n, mode) = match &instance {
        BruteForceInstance::Edge(g) => (g.n(), CutMode::EdgeConductance),
        BruteForceInstance::Vertex(g, _) => (g.n(), CutMode::VertexExpansion),
        BruteForceInstance::Hyper(h) => (h.n(), CutMode::HypergraphConductance),
    };
    if n > BRUTE_FORCE_CAP {
        return Err(Error::SizeLimit(format!(
            "brute force capped at n <= {BRUTE_FORCE_CAP}, got {n}"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidCut("need at least two vertices".into()));
    }
    let full = (1u64 << n) - 1;
    let mut best: Option<(f64, u64)> = None;
    for set in 1..full {
        let value = match &instance {
            BruteForceInstance::Edge(g) => directed_edge_conductance(g, set),
            BruteForceInstance::Vertex(g, pi) => directed_vertex_expansion(g, pi, set),
            BruteForceInstance::Hyper(h) => hypergraph_conductance(h, set),
        };
        let value = match value {
            Ok(v) => v,
            Err(Error::DegenerateCut(_)) => continue,
            Err(e) => return Err(e),
        };
        if best.map_or(true, |(bv, _)| value < bv) {
            best = Some((value, set));
        }
    }
    let (value, set) = best.ok_or_else(|| Error::DegenerateCut("all cuts degenerate".into()))?;
    Ok(Cut::from_mask(set, n, value, mode))
}

/// Strongly connected components (iterative Tarjan), in reverse topological
/// order of the condensation: component 0 has no outgoing condensation arcs.
pub fn scc_components(g: &DirectedGraph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut counter = 0usize;

    // explicit DFS stack: (vertex, next out-edge position)
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        call.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < g.out_edges(v).len() {
                let e = g.out_edges(v)[*pos];
                *pos += 1;
                let w = g.edges()[e].head;
                if w == v {
                    continue;
                }
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

/// Pi-induced edge weights w_pi(uv) = min{pi(u), pi(v)}, aligned with the
/// graph's edge list.
pub fn pi_induced_weights(g: &DirectedGraph, pi: &VertexWeights) -> Vec<f64> {
    g.edges()
        .iter()
        .map(|e| pi.get(e.tail).min(pi.get(e.head)))
        .collect()
}
