//! Hardness constructions: vertex cover on planar graphs compiled into a
//! stabbing instance, and the special set cover family encoded by
//! constrained segments.

pub mod gadget;
pub mod spsc;
pub mod visibility;

use std::collections::BTreeSet;

use rustworkx_core::petgraph::graph::UnGraph;
use rustworkx_core::planar::is_planar;

use crate::error::{Error, Result};

pub use gadget::{check_np_instance, compile_np_instance, gadget_segments, NpGadgetInstance, VertexGadget};
pub use spsc::{gen_spsc, spsc_to_stabbing, SpscInstance, SpscMode, SpscStabbing};
pub use visibility::{build_visibility, check_visibility, VisibilityRep};

/// Largest ground set the exhaustive oracles accept.
pub const MAX_ENUMERATION: usize = 24;

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    pub n: usize,
    /// Each edge stored as `(u, v)` with `u < v`.
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Graph> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!("edge ({u}, {v}) outside 0..{n}")));
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop at {u}")));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::InvalidParameter(format!("duplicate edge ({}, {})", e.0, e.1)));
            }
            out.push(e);
        }
        Ok(Graph { n, edges: out })
    }

    /// `u v` per line, `#` comments, and an optional `vertices N` line for
    /// isolated vertices. Without it, `n` is one more than the largest label.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut n: Option<usize> = None;
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::Parse(format!("line {}: expected `u v` or `vertices N`, got `{line}`", lineno + 1));
            match parts.as_slice() {
                ["vertices", k] => n = Some(k.parse().map_err(|_| bad())?),
                [u, v] => edges.push((u.parse().map_err(|_| bad())?, v.parse().map_err(|_| bad())?)),
                _ => return Err(bad()),
            }
        }
        let max_label = edges.iter().map(|&(u, v): &(usize, usize)| u.max(v) + 1).max().unwrap_or(0);
        let n = n.unwrap_or(max_label);
        if n < max_label {
            return Err(Error::Parse(format!("vertices {n} is smaller than the largest label")));
        }
        Graph::new(n, edges)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn is_planar(&self) -> bool {
        let g = UnGraph::<(), ()>::from_edges(self.edges.iter().map(|&(u, v)| (u as u32, v as u32)));
        let mut g = g;
        while g.node_count() < self.n {
            g.add_node(());
        }
        is_planar(&g)
    }

    pub fn is_vertex_cover(&self, cover: &[usize]) -> bool {
        self.edges.iter().all(|(u, v)| cover.contains(u) || cover.contains(v))
    }

    /// A smallest vertex cover by enumeration, for at most
    /// [`MAX_ENUMERATION`] vertices. Among equal sizes the first mask wins.
    pub fn min_vertex_cover(&self) -> Result<Vec<usize>> {
        if self.n > MAX_ENUMERATION {
            return Err(Error::InvalidParameter(format!(
                "vertex cover enumeration supports at most {MAX_ENUMERATION} vertices, got {}",
                self.n
            )));
        }
        let best = (0u32..1 << self.n)
            .filter(|mask| self.edges.iter().all(|&(u, v)| mask >> u & 1 == 1 || mask >> v & 1 == 1))
            .min_by_key(|mask| mask.count_ones())
            .expect("all vertices form a cover");
        Ok((0..self.n).filter(|&v| best >> v & 1 == 1).collect())
    }

    // A few small named graphs for examples and tests.

    pub fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|i| (i - 1, i)).collect()).expect("path is simple")
    }

    pub fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).expect("cycle needs n >= 3")
    }

    pub fn star(leaves: usize) -> Graph {
        Graph::new(leaves + 1, (1..=leaves).map(|i| (0, i)).collect()).expect("star is simple")
    }

    pub fn complete(n: usize) -> Graph {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Graph::new(n, edges).expect("complete graph is simple")
    }

    /// `K4` without the edge `(2, 3)`.
    pub fn k4_minus_edge() -> Graph {
        Graph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).expect("simple")
    }

    /// Four-cycle `1-2-3-4` with hub `0` joined to every rim vertex.
    pub fn wheel4() -> Graph {
        Graph::new(5, vec![(1, 2), (2, 3), (3, 4), (4, 1), (0, 1), (0, 2), (0, 3), (0, 4)]).expect("simple")
    }
}
