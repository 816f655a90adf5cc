//! Deterministic instance generators: the named example families plus seeded
//! random corpora for tests.

use crate::graph::{DirectedGraph, Hypergraph};
use crate::rng::SplitMix64;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Declarative description of a generated instance; the same spec always
/// produces the same bytes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub family: String,
    #[serde(default)]
    pub n: usize,
    #[serde(default)]
    pub m: usize,
    #[serde(default)]
    pub r: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub note: String,
}

pub enum Generated {
    Digraph(DirectedGraph),
    Hypergraph(Hypergraph),
}

pub fn generate(spec: &InstanceSpec) -> Result<Generated> {
    let g = match spec.family.as_str() {
        "cycle" => Generated::Digraph(directed_cycle(spec.n)),
        "complete_dag" => Generated::Digraph(complete_dag(spec.n)),
        "bidirected_clique" => Generated::Digraph(bidirected_clique(spec.n)),
        "two_clique_bridge" => Generated::Digraph(two_clique_bridge(spec.n)),
        "fast_dropping_cycle" => Generated::Digraph(fast_dropping_cycle(spec.n)),
        "bipartite_cliques" => Generated::Digraph(bipartite_cliques(spec.n)),
        "hypercube" => Generated::Digraph(bidirected_hypercube(spec.n)),
        "random_strongly_connected" => {
            Generated::Digraph(random_strongly_connected(spec.n, spec.m, spec.seed))
        }
        "random_eulerian" => Generated::Digraph(random_eulerian(spec.n, spec.m.max(3), spec.seed)),
        "random_digraph" => Generated::Digraph(random_digraph(spec.n, spec.m, spec.seed)),
        "random_hypergraph" => {
            Generated::Hypergraph(random_hypergraph(spec.n, spec.m, spec.r.max(2), spec.seed))
        }
        other => {
            return Err(Error::Parameter(format!(
                "unknown instance family '{other}'"
            )))
        }
    };
    Ok(g)
}

/// Directed n-cycle with unit weights.
pub fn directed_cycle(n: usize) -> DirectedGraph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect();
    DirectedGraph::new(n, &edges).unwrap()
}

/// Complete DAG: arc i -> j for every i < j, plus a unit self-loop at every
/// vertex. Each vertex is its own strongly connected component.
pub fn complete_dag(n: usize) -> DirectedGraph {
    let mut edges = Vec::new();
    for i in 0..n {
        edges.push((i, i, 1.0));
        for j in i + 1..n {
            edges.push((i, j, 1.0));
        }
    }
    DirectedGraph::new(n, &edges).unwrap()
}

/// All ordered pairs u != v with unit weight.
pub fn bidirected_clique(n: usize) -> DirectedGraph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                edges.push((i, j, 1.0));
            }
        }
    }
    DirectedGraph::new(n, &edges).unwrap()
}

/// Two bidirected cliques L = {0..n}, R = {n..2n}; every L->R arc; a single
/// return arc from the first vertex of R to the first vertex of L. The
/// stationary-reweighted Cheeger constant of this family is large while its
/// directed conductance and expansion are tiny.
pub fn two_clique_bridge(n: usize) -> DirectedGraph {
    let mut edges = Vec::new();
    for side in [0, n] {
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    edges.push((side + i, side + j, 1.0));
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            edges.push((i, n + j, 1.0));
        }
    }
    edges.push((n, 0, 1.0));
    DirectedGraph::new(2 * n, &edges).unwrap()
}

/// Directed cycle 0 -> 1 -> ... -> n-1 -> 0 with extra arcs (i, n-1) for
/// 1 <= i <= n-3; the interior stationary mass drops off exponentially.
pub fn fast_dropping_cycle(n: usize) -> DirectedGraph {
    assert!(n >= 4);
    let mut edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect();
    for i in 1..=n - 3 {
        edges.push((i, n - 1, 1.0));
    }
    DirectedGraph::new(n, &edges).unwrap()
}

/// Four directed cliques C1..C4 of size n/2 with single arcs C1->C2 and
/// C3->C4, and complete bidirected bipartite connections S x T, S feeding C1,
/// C2 feeding S, T feeding C3, C4 feeding T. |S| = |T| = n.
pub fn bipartite_cliques(n: usize) -> DirectedGraph {
    assert!(n >= 2 && n % 2 == 0);
    let half = n / 2;
    // layout: S [0,n), T [n,2n), C1..C4 each of size half after that
    let s0 = 0;
    let t0 = n;
    let c = |k: usize| 2 * n + k * half;
    let total = 2 * n + 4 * half;
    let mut edges = Vec::new();
    for k in 0..4 {
        for i in 0..half {
            for j in 0..half {
                if i != j {
                    edges.push((c(k) + i, c(k) + j, 1.0));
                }
            }
        }
    }
    edges.push((c(0), c(1), 1.0));
    edges.push((c(2), c(3), 1.0));
    for i in 0..n {
        for j in 0..n {
            edges.push((s0 + i, t0 + j, 1.0));
            edges.push((t0 + j, s0 + i, 1.0));
        }
    }
    for i in 0..n {
        for j in 0..half {
            edges.push((s0 + i, c(0) + j, 1.0));
            edges.push((c(1) + j, s0 + i, 1.0));
            edges.push((t0 + i, c(2) + j, 1.0));
            edges.push((c(3) + j, t0 + i, 1.0));
        }
    }
    DirectedGraph::new(total, &edges).unwrap()
}

/// d-dimensional hypercube with both arc directions, n = 2^d vertices.
pub fn bidirected_hypercube(d: usize) -> DirectedGraph {
    let n = 1usize << d;
    let mut edges = Vec::new();
    for v in 0..n {
        for b in 0..d {
            let u = v ^ (1 << b);
            edges.push((v, u, 1.0));
        }
    }
    DirectedGraph::new(n, &edges).unwrap()
}

/// Random Hamiltonian cycle plus `extra` random arcs: strongly connected by
/// construction, no rejection sampling.
pub fn random_strongly_connected(n: usize, extra: usize, seed: u64) -> DirectedGraph {
    let mut rng = SplitMix64::new(seed ^ 0x5cc5_3c1e);
    let mut order: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut order);
    let mut edges: Vec<(usize, usize, f64)> = (0..n)
        .map(|i| (order[i], order[(i + 1) % n], 1.0))
        .collect();
    let mut placed = 0;
    let mut guard = 0;
    while placed < extra && guard < 50 * (extra + 1) {
        guard += 1;
        let u = rng.next_range(n);
        let v = rng.next_range(n);
        if u != v {
            edges.push((u, v, 1.0));
            placed += 1;
        }
    }
    DirectedGraph::new(n, &edges).unwrap()
}

/// Variant with self-loops everywhere, for vertex-capacitated solves.
pub fn random_strongly_connected_loops(n: usize, extra: usize, seed: u64) -> DirectedGraph {
    random_strongly_connected(n, extra, seed).with_self_loops()
}

/// Sum of `cycles` random directed cycles: per-vertex in-weight equals
/// out-weight exactly.
pub fn random_eulerian(n: usize, cycles: usize, seed: u64) -> DirectedGraph {
    let mut rng = SplitMix64::new(seed ^ 0xe31e_a11a);
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    for _ in 0..cycles {
        let len = 2 + rng.next_range(n - 1);
        let mut verts: Vec<usize> = (0..n).collect();
        rng.shuffle(&mut verts);
        verts.truncate(len);
        let w = 1.0 + rng.next_range(3) as f64;
        for i in 0..len {
            edges.push((verts[i], verts[(i + 1) % len], w));
        }
    }
    DirectedGraph::new(n, &edges).unwrap()
}

/// Plain random digraph (not necessarily strongly connected): `arcs` draws
/// of ordered pairs, duplicates merging additively.
pub fn random_digraph(n: usize, arcs: usize, seed: u64) -> DirectedGraph {
    let mut rng = SplitMix64::new(seed ^ 0x0d1_97a7);
    let mut edges = Vec::new();
    let mut placed = 0;
    let mut guard = 0;
    while placed < arcs && guard < 50 * (arcs + 1) {
        guard += 1;
        let u = rng.next_range(n);
        let v = rng.next_range(n);
        if u != v {
            edges.push((u, v, 1.0));
            placed += 1;
        }
    }
    if edges.is_empty() {
        edges.push((0, 1 % n.max(2), 1.0));
    }
    DirectedGraph::new(n, &edges).unwrap()
}

/// Digraph with a prescribed number of strongly connected blocks and one-way
/// arcs between consecutive blocks; the SCC count equals `blocks` exactly.
pub fn random_multi_scc(n: usize, blocks: usize, seed: u64) -> DirectedGraph {
    assert!(blocks >= 1 && n >= 2 * blocks);
    let mut rng = SplitMix64::new(seed ^ 0x9b1d_cafe);
    let per = n / blocks;
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut start = 0;
    let mut bounds = Vec::new();
    for b in 0..blocks {
        let size = if b + 1 == blocks { n - start } else { per };
        let mut order: Vec<usize> = (start..start + size).collect();
        rng.shuffle(&mut order);
        for i in 0..size {
            edges.push((order[i], order[(i + 1) % size], 1.0));
        }
        // a few chords inside the block
        for _ in 0..size {
            let u = start + rng.next_range(size);
            let v = start + rng.next_range(size);
            if u != v {
                edges.push((u, v, 1.0));
            }
        }
        bounds.push((start, start + size));
        start += size;
    }
    for b in 0..blocks - 1 {
        let (s0, e0) = bounds[b];
        let (s1, e1) = bounds[b + 1];
        let cnt = 1 + rng.next_range(2);
        for _ in 0..cnt {
            let u = s0 + rng.next_range(e0 - s0);
            let v = s1 + rng.next_range(e1 - s1);
            edges.push((u, v, 1.0));
        }
    }
    DirectedGraph::new(n, &edges).unwrap()
}

/// Random hypergraph with m hyperedges of size 2..=r; every vertex is
/// guaranteed to be covered.
pub fn random_hypergraph(n: usize, m: usize, r: usize, seed: u64) -> Hypergraph {
    let mut rng = SplitMix64::new(seed ^ 0x4a7e_55ed);
    let mut hedges: Vec<(Vec<usize>, f64)> = Vec::new();
    for _ in 0..m {
        let size = 2 + rng.next_range(r.saturating_sub(1).max(1));
        let size = size.min(n);
        let mut verts: Vec<usize> = (0..n).collect();
        rng.shuffle(&mut verts);
        verts.truncate(size);
        verts.sort_unstable();
        hedges.push((verts, 1.0));
    }
    let mut covered = vec![false; n];
    for (vs, _) in &hedges {
        for &v in vs {
            covered[v] = true;
        }
    }
    for v in 0..n {
        if !covered[v] && !hedges.is_empty() {
            let idx = v % hedges.len();
            hedges[idx].0.push(v);
            hedges[idx].0.sort_unstable();
            hedges[idx].0.dedup();
        }
    }
    Hypergraph::new(n, &hedges).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::scc_components;

    #[test]
    fn complete_dag_shape() {
        let g = complete_dag(5);
        // 10 forward arcs plus 5 loops
        assert_eq!(g.m(), 15);
        let forward = g.edges().iter().filter(|e| e.tail < e.head).count();
        assert_eq!(forward, 10);
        assert!((0..5).all(|v| g.has_self_loop(v)));
    }

    #[test]
    fn two_clique_bridge_shape() {
        let g = two_clique_bridge(4);
        assert_eq!(g.n(), 8);
        let l_to_r = g
            .edges()
            .iter()
            .filter(|e| e.tail < 4 && e.head >= 4)
            .count();
        let r_to_l = g
            .edges()
            .iter()
            .filter(|e| e.tail >= 4 && e.head < 4)
            .count();
        assert_eq!(l_to_r, 16);
        assert_eq!(r_to_l, 1);
    }

    #[test]
    fn bipartite_cliques_shape() {
        let n = 4;
        let g = bipartite_cliques(n);
        assert_eq!(g.n(), 2 * n + 4 * (n / 2));
        // exactly one arc from C1 into C2 and one from C3 into C4
        let c = |k: usize| 2 * n + k * (n / 2)..2 * n + (k + 1) * (n / 2);
        let count = |from: std::ops::Range<usize>, to: std::ops::Range<usize>| {
            g.edges()
                .iter()
                .filter(|e| from.contains(&e.tail) && to.contains(&e.head))
                .count()
        };
        assert_eq!(count(c(0), c(1)), 1);
        assert_eq!(count(c(2), c(3)), 1);
        assert_eq!(count(c(1), c(0)), 0);
        // S x T fully bidirected
        assert_eq!(count(0..n, n..2 * n), n * n);
        assert_eq!(count(n..2 * n, 0..n), n * n);
    }

    #[test]
    fn random_eulerian_is_balanced() {
        for seed in [7, 8, 9] {
            let g = random_eulerian(8, 5, seed);
            for v in 0..8 {
                assert!((g.in_weight(v) - g.out_weight(v)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn determinism_under_seed() {
        let a = random_strongly_connected(9, 12, 3);
        let b = random_strongly_connected(9, 12, 3);
        assert_eq!(a.m(), b.m());
        for (x, y) in a.edges().iter().zip(b.edges()) {
            assert_eq!((x.tail, x.head), (y.tail, y.head));
            assert_eq!(x.weight, y.weight);
        }
        assert_eq!(scc_components(&a).len(), 1);
    }

    #[test]
    fn multi_scc_block_count() {
        for seed in 0..5 {
            let g = random_multi_scc(10, 3, seed);
            assert_eq!(scc_components(&g).len(), 3);
        }
    }

    #[test]
    fn hypergraph_coverage() {
        let h = random_hypergraph(9, 4, 3, 1);
        assert!(h.degrees().iter().all(|&d| d > 0.0));
        assert!(h.max_size() <= 4);
    }
}
