//! Property tests for the structural invariants: evaluator symmetry and
//! range, format round-trips, circulation feasibility, and the squaring map.

use eulergap::flow;
use eulergap::graph::{
    directed_edge_conductance, directed_vertex_expansion, DirectedGraph, VertexWeights,
};
use eulergap::io;
use proptest::prelude::*;

fn arb_graph() -> impl Strategy<Value = DirectedGraph> {
    (2usize..8)
        .prop_flat_map(|n| {
            let edge = (0..n, 0..n, 0.0f64..4.0);
            (Just(n), proptest::collection::vec(edge, 1..20))
        })
        .prop_map(|(n, edges)| DirectedGraph::new(n, &edges).unwrap())
}

proptest! {
    #[test]
    fn evaluators_symmetric_and_in_range(g in arb_graph(), raw_set in any::<u64>()) {
        let n = g.n();
        let full = (1u64 << n) - 1;
        let set = raw_set & full;
        prop_assume!(set != 0 && set != full);
        let comp = full & !set;
        let pi = VertexWeights::uniform(n);

        if let Ok(a) = directed_edge_conductance(&g, set) {
            let b = directed_edge_conductance(&g, comp).unwrap();
            prop_assert_eq!(a, b);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&a));
        }
        let a = directed_vertex_expansion(&g, &pi, set).unwrap();
        let b = directed_vertex_expansion(&g, &pi, comp).unwrap();
        prop_assert_eq!(a, b);
        prop_assert!((0.0..=1.0).contains(&a));
    }

    #[test]
    fn digraph_format_round_trips(g in arb_graph()) {
        let text = io::write_digraph(&g);
        let back = io::parse_digraph(&text).unwrap();
        prop_assert_eq!(g.n(), back.n());
        prop_assert_eq!(g.m(), back.m());
        for (a, b) in g.edges().iter().zip(back.edges()) {
            prop_assert_eq!((a.tail, a.head), (b.tail, b.head));
            prop_assert!((a.weight - b.weight).abs() <= 1e-12 * a.weight.abs().max(1.0));
        }
    }

    #[test]
    fn hoffman_solution_is_sandwiched(g in arb_graph(), alpha in 1.0f64..8.0) {
        let w: Vec<f64> = g.edges().iter().map(|e| e.weight).collect();
        if let Some(a) = flow::hoffman_circulation(&g, &w, alpha).unwrap() {
            prop_assert!(a.is_balanced(&g));
            for (i, e) in g.edges().iter().enumerate() {
                if e.tail == e.head { continue; }
                prop_assert!(a.weights[i] >= w[i] * (1.0 - 1e-9) - 1e-9);
                prop_assert!(a.weights[i] <= alpha * w[i] * (1.0 + 1e-9) + 1e-9);
            }
        }
    }

    #[test]
    fn edge_oracle_respects_caps_and_duality(g in arb_graph(), seed in any::<u64>()) {
        let w: Vec<f64> = g.edges().iter().map(|e| e.weight).collect();
        let mut state = seed;
        let lengths: Vec<f64> = g.edges().iter().map(|_| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            (state >> 11) as f64 / (1u64 << 53) as f64
        }).collect();
        let (a, value, cert) = flow::eulerian_oracle_edge(&g, &w, &lengths).unwrap();
        prop_assert!(a.is_balanced(&g));
        for (i, _) in g.edges().iter().enumerate() {
            prop_assert!(a.weights[i] <= w[i] * (1.0 + 1e-12) + 1e-12);
        }
        prop_assert!((cert.objective - value).abs() <= 1e-6 * (1.0 + value.abs()));
        for (i, e) in g.edges().iter().enumerate() {
            prop_assert!(cert.q[i] >= lengths[i] - cert.r[e.tail] + cert.r[e.head] - 1e-9);
            prop_assert!(cert.q[i] >= -1e-12);
        }
    }

    #[test]
    fn square_map_centers_and_bounds((weights, values) in (2usize..7).prop_flat_map(|n| (
        proptest::collection::vec(0.1f64..3.0, n),
        proptest::collection::vec(-2.0f64..2.0, n),
    ))) {
        // center and l1-normalize the input first
        let total: f64 = weights.iter().sum();
        let mean: f64 = values.iter().zip(&weights).map(|(&x, &b)| x * b).sum::<f64>() / total;
        let mut f: Vec<f64> = values.iter().map(|&x| x - mean).collect();
        let l1: f64 = f.iter().zip(&weights).map(|(&x, &b)| x.abs() * b).sum();
        prop_assume!(l1 > 1e-6);
        f.iter_mut().for_each(|x| *x /= l1);

        let g = eulergap::rounding::square_map(&f, &weights).unwrap();
        let centered: f64 = g.iter().zip(&weights).map(|(&x, &b)| x * b).sum();
        prop_assert!(centered.abs() <= 1e-9);
        let norm: f64 = g.iter().zip(&weights).map(|(&x, &b)| x.abs() * b).sum();
        prop_assert!((norm - 1.0).abs() <= 1e-9);
        // signs follow the shifted input ordering
        for (i, j) in (0..f.len()).zip(1..f.len()) {
            if f[i] < f[j] {
                prop_assert!(g[i] <= g[j] + 1e-12);
            }
        }
    }
}
