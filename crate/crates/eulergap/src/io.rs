//! Text formats: edge lists, vertex weights, hypergraphs. Whitespace
//! separated, `#` starts a comment, vertices are 0-indexed.
//!
//! ```text
//! digraph 4 4          # header: n m
//! 0 1 1.0              # tail head weight
//! ...
//! hypergraph 6 6       # header: n m
//! 1.0 3 0 1 2          # weight k v1 .. vk
//! ```

use crate::graph::{DirectedGraph, Hypergraph, VertexWeights};
use crate::{Error, Result};
use std::fmt::Write as _;

fn tokens(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.split_whitespace())
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, what: &str) -> Result<T> {
    let t = tok.ok_or_else(|| Error::Parse(format!("missing {what}")))?;
    t.parse()
        .map_err(|_| Error::Parse(format!("bad {what}: '{t}'")))
}

pub fn parse_digraph(text: &str) -> Result<DirectedGraph> {
    let mut it = tokens(text);
    match it.next() {
        Some("digraph") => {}
        other => {
            return Err(Error::Parse(format!(
                "expected 'digraph' header, got {other:?}"
            )))
        }
    }
    let n: usize = parse_num(it.next(), "vertex count")?;
    let m: usize = parse_num(it.next(), "edge count")?;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let t: usize = parse_num(it.next(), "edge tail")?;
        let h: usize = parse_num(it.next(), "edge head")?;
        let w: f64 = parse_num(it.next(), "edge weight")?;
        edges.push((t, h, w));
    }
    if it.next().is_some() {
        return Err(Error::Parse("trailing tokens after edge list".into()));
    }
    DirectedGraph::new(n, &edges)
}

pub fn write_digraph(g: &DirectedGraph) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "digraph {} {}", g.n(), g.m());
    for e in g.edges() {
        let _ = writeln!(s, "{} {} {}", e.tail, e.head, e.weight);
    }
    s
}

/// Vertex weight files are `v pi` lines; vertices not listed get weight 1.
pub fn parse_vertex_weights(text: &str, n: usize) -> Result<VertexWeights> {
    let mut pi = vec![1.0; n];
    let mut it = tokens(text);
    while let Some(tok) = it.next() {
        let v: usize = tok
            .parse()
            .map_err(|_| Error::Parse(format!("bad vertex id '{tok}'")))?;
        if v >= n {
            return Err(Error::Parse(format!("vertex {v} out of range")));
        }
        pi[v] = parse_num(it.next(), "vertex weight")?;
    }
    VertexWeights::new(pi)
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    let mut it = tokens(text);
    match it.next() {
        Some("hypergraph") => {}
        other => {
            return Err(Error::Parse(format!(
                "expected 'hypergraph' header, got {other:?}"
            )))
        }
    }
    let n: usize = parse_num(it.next(), "vertex count")?;
    let m: usize = parse_num(it.next(), "hyperedge count")?;
    let mut hedges = Vec::with_capacity(m);
    for _ in 0..m {
        let w: f64 = parse_num(it.next(), "hyperedge weight")?;
        let k: usize = parse_num(it.next(), "hyperedge size")?;
        let mut vs = Vec::with_capacity(k);
        for _ in 0..k {
            vs.push(parse_num(it.next(), "hyperedge vertex")?);
        }
        hedges.push((vs, w));
    }
    if it.next().is_some() {
        return Err(Error::Parse("trailing tokens after hyperedge list".into()));
    }
    Hypergraph::new(n, &hedges)
}

pub fn write_hypergraph(h: &Hypergraph) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "hypergraph {} {}", h.n(), h.m());
    for (vs, w) in h.hyperedges() {
        let _ = write!(s, "{} {}", w, vs.len());
        for v in vs {
            let _ = write!(s, " {v}");
        }
        let _ = writeln!(s);
    }
    s
}
