//! Visibility representations with vertical vertex bars and horizontal
//! edge bars.
//!
//! Every vertex gets its own column and every edge its own level, so no
//! two edge bars meet on a vertex bar. A vertex bar spans the levels of its
//! incident edges; an isolated vertex gets a private level. The layout is
//! found by search: for each column order, edges are placed bottom to top
//! and an edge may only be placed while every vertex strictly between its
//! endpoints has either no placed edge yet or all of them.

use super::Graph;
use crate::error::{Error, Result};

/// Largest extent, in multiples of the vertex count, a layout may use.
pub const EXTENT_FACTOR: i64 = 4;

const SEARCH_BUDGET: u64 = 20_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VisibilityRep {
    pub graph: Graph,
    /// Column of each vertex bar.
    pub columns: Vec<i64>,
    /// Inclusive level range `(bottom, top)` of each vertex bar.
    pub spans: Vec<(i64, i64)>,
    /// Level of each edge bar, aligned with `graph.edges`.
    pub levels: Vec<i64>,
}

impl VisibilityRep {
    /// Endpoints of edge `e` ordered by column.
    pub fn left_right(&self, e: usize) -> (usize, usize) {
        let (u, v) = self.graph.edges[e];
        if self.columns[u] < self.columns[v] { (u, v) } else { (v, u) }
    }

    pub fn height(&self) -> i64 {
        self.spans.iter().map(|s| s.1).chain(self.levels.iter().copied()).max().map_or(0, |t| t + 1)
    }

    pub fn width(&self) -> i64 {
        self.columns.iter().max().map_or(0, |c| c + 1)
    }
}

/// Rejects anything that is not a valid representation.
pub fn check_visibility(vis: &VisibilityRep) -> Result<()> {
    let g = &vis.graph;
    let fail = |m: String| Err(Error::Certificate(m));
    if vis.columns.len() != g.n || vis.spans.len() != g.n || vis.levels.len() != g.edges.len() {
        return fail("representation sizes do not match the graph".into());
    }
    for u in 0..g.n {
        if vis.spans[u].0 > vis.spans[u].1 {
            return fail(format!("vertex {u} has an inverted bar"));
        }
        for v in u + 1..g.n {
            if vis.columns[u] == vis.columns[v] {
                let (a, b) = (vis.spans[u], vis.spans[v]);
                if a.0 <= b.1 && b.0 <= a.1 {
                    return fail(format!("vertex bars {u} and {v} overlap"));
                }
            }
        }
    }
    for (e, &(u, v)) in g.edges.iter().enumerate() {
        let t = vis.levels[e];
        let (lo, hi) = (vis.columns[u].min(vis.columns[v]), vis.columns[u].max(vis.columns[v]));
        if lo == hi {
            return fail(format!("edge {e} is degenerate"));
        }
        for w in [u, v] {
            let s = vis.spans[w];
            if t < s.0 || t > s.1 {
                return fail(format!("edge {e} does not touch vertex {w}"));
            }
        }
        for w in 0..g.n {
            if w == u || w == v {
                continue;
            }
            let s = vis.spans[w];
            if lo <= vis.columns[w] && vis.columns[w] <= hi && s.0 <= t && t <= s.1 {
                return fail(format!("edge {e} crosses vertex {w}"));
            }
        }
        for (f, &(a, b)) in g.edges.iter().enumerate().skip(e + 1) {
            let shared = [a, b].iter().any(|x| *x == u || *x == v);
            if shared && vis.levels[f] == t {
                return fail(format!("edges {e} and {f} coincide on a shared vertex"));
            }
        }
    }
    let bound = EXTENT_FACTOR * g.n.max(1) as i64;
    if vis.width() > bound || vis.height() > bound {
        return fail(format!("extent {}x{} exceeds {bound}", vis.width(), vis.height()));
    }
    Ok(())
}

struct Search<'a> {
    g: &'a Graph,
    columns: Vec<i64>,
    degree: Vec<usize>,
    placed: Vec<usize>,
    order: Vec<usize>,
    used: Vec<bool>,
    budget: u64,
}

impl Search<'_> {
    fn can_place(&self, e: usize) -> bool {
        let (u, v) = self.g.edges[e];
        let (lo, hi) = (self.columns[u].min(self.columns[v]), self.columns[u].max(self.columns[v]));
        (0..self.g.n).all(|w| {
            w == u
                || w == v
                || self.columns[w] <= lo
                || self.columns[w] >= hi
                || self.placed[w] == 0
                || self.placed[w] == self.degree[w]
        })
    }

    fn dfs(&mut self) -> bool {
        if self.order.len() == self.g.edges.len() {
            return true;
        }
        for e in 0..self.g.edges.len() {
            if self.used[e] || !self.can_place(e) {
                continue;
            }
            if self.budget == 0 {
                return false;
            }
            self.budget -= 1;
            let (u, v) = self.g.edges[e];
            self.used[e] = true;
            self.placed[u] += 1;
            self.placed[v] += 1;
            self.order.push(e);
            if self.dfs() {
                return true;
            }
            self.order.pop();
            self.placed[u] -= 1;
            self.placed[v] -= 1;
            self.used[e] = false;
        }
        false
    }
}

fn next_permutation(p: &mut [i64]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("pivot has a successor");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// A representation of a planar graph, or [`Error::NonPlanar`].
pub fn build_visibility(g: &Graph) -> Result<VisibilityRep> {
    if !g.is_planar() {
        return Err(Error::NonPlanar);
    }
    let degree: Vec<usize> = (0..g.n).map(|v| g.degree(v)).collect();
    let mut columns: Vec<i64> = (0..g.n as i64).collect();
    let mut budget = SEARCH_BUDGET;
    loop {
        let mut s = Search {
            g,
            columns: columns.clone(),
            degree: degree.clone(),
            placed: vec![0; g.n],
            order: Vec::new(),
            used: vec![false; g.edges.len()],
            budget,
        };
        if s.dfs() {
            let mut levels = vec![0i64; g.edges.len()];
            for (t, &e) in s.order.iter().enumerate() {
                levels[e] = t as i64;
            }
            let mut next_free = g.edges.len() as i64;
            let spans = (0..g.n)
                .map(|v| {
                    let mine: Vec<i64> = g
                        .edges
                        .iter()
                        .enumerate()
                        .filter(|(_, &(a, b))| a == v || b == v)
                        .map(|(e, _)| levels[e])
                        .collect();
                    match (mine.iter().min(), mine.iter().max()) {
                        (Some(&lo), Some(&hi)) => (lo, hi),
                        _ => {
                            next_free += 1;
                            (next_free - 1, next_free - 1)
                        }
                    }
                })
                .collect();
            let vis = VisibilityRep { graph: g.clone(), columns, spans, levels };
            check_visibility(&vis)?;
            return Ok(vis);
        }
        budget = s.budget;
        if budget == 0 || !next_permutation(&mut columns) {
            return Err(Error::Layout(format!(
                "no visibility layout found for a graph with {} vertices and {} edges",
                g.n,
                g.edges.len()
            )));
        }
    }
}
