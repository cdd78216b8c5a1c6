//! Vertex-cover gadgets laid out on a visibility representation.
//!
//! A vertex gadget is a vertical stack of rects along the vertex bar. Each
//! incident edge gets its own pair `r_{2i}` (above) / `r_{2i+1}` (below),
//! `i ≥ 1`, so a vertex with `d` edges has `2d + 3` rects. The edge rect
//! sits under the widened `r_{2i}` of its left endpoint and on top of the
//! widened `r_{2i+1}` of its right endpoint, sharing `n + 3` units of
//! boundary with each.

use num_traits::Zero;

use super::visibility::VisibilityRep;
use crate::error::{Error, Result};
use crate::geom::{stabs, Objective, Rect, Segment, StabInstance};
use crate::rational::{int, Rational};

/// Vertical distance between consecutive edge levels.
pub const LEVEL_SPACING: i64 = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexGadget {
    pub vertex: usize,
    /// Top to bottom.
    pub rect_ids: Vec<u64>,
    pub s_act: Vec<Segment>,
    pub s_ina: Vec<Segment>,
}

impl VertexGadget {
    pub fn len_act(&self) -> Rational {
        self.s_act.iter().fold(Rational::zero(), |a, s| a + s.len())
    }

    pub fn len_ina(&self) -> Rational {
        self.s_ina.iter().fold(Rational::zero(), |a, s| a + s.len())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NpGadgetInstance {
    pub instance: StabInstance,
    pub vis: VisibilityRep,
    /// Shared boundary length between neighbouring gadget rects, `n + 3`.
    pub overlap: i64,
    /// Horizontal distance between consecutive vertex columns.
    pub column_spacing: i64,
    pub level_spacing: i64,
    /// Cost of stabbing everything with all gadgets inactive, edge rects
    /// excluded from the `n + 3` part.
    pub c: Rational,
    pub vertex_gadgets: Vec<VertexGadget>,
    /// Rect id of each edge, aligned with `vis.graph.edges`.
    pub edge_rects: Vec<u64>,
}

impl NpGadgetInstance {
    /// Optimum predicted for a minimum vertex cover of size `k`.
    pub fn expected_optimum(&self, k: usize) -> Rational {
        &self.c + int(k as i64)
    }

    fn rect(&self, id: u64) -> &Rect {
        self.instance.rects.iter().find(|r| r.id == id).expect("gadget rect id")
    }
}

/// Merge touching top and bottom edges of a stack (top to bottom), number
/// them from 1 and return `(even, odd)`, that is `(S_act, S_ina)`.
pub fn gadget_segments(stack: &[Rect]) -> Result<(Vec<Segment>, Vec<Segment>)> {
    if stack.len() < 3 || stack.len().is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("gadget needs an odd number >= 3 of rects, got {}", stack.len())));
    }
    for w in stack.windows(2) {
        if w[0].y_bottom != w[1].y_top || w[0].x_right <= w[1].x_left || w[1].x_right <= w[0].x_left {
            return Err(Error::InvalidParameter(format!(
                "rects {} and {} do not share a horizontal boundary",
                w[0].id, w[1].id
            )));
        }
    }
    let first = &stack[0];
    let last = &stack[stack.len() - 1];
    let mut lines = vec![(first.x_left.clone(), first.x_right.clone(), first.y_top.clone())];
    for w in stack.windows(2) {
        let lo = (&w[0].x_left).min(&w[1].x_left).clone();
        let hi = (&w[0].x_right).max(&w[1].x_right).clone();
        lines.push((lo, hi, w[0].y_bottom.clone()));
    }
    lines.push((last.x_left.clone(), last.x_right.clone(), last.y_bottom.clone()));
    let (mut act, mut ina) = (Vec::new(), Vec::new());
    for (k, (lo, hi, y)) in lines.into_iter().enumerate() {
        let seg = Segment::horizontal(k as u64, lo, hi, y);
        // k is zero-based, so even k is an odd-numbered line
        if k % 2 == 0 { ina.push(seg) } else { act.push(seg) }
    }
    Ok((act, ina))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    /// The vertex is the left endpoint; the edge rect hangs below `r_{2i}`.
    Left,
    /// The vertex is the right endpoint; the edge rect rests on `r_{2i+1}`.
    Right,
}

pub fn compile_np_instance(vis: &VisibilityRep) -> Result<NpGadgetInstance> {
    let g = &vis.graph;
    let w = g.n as i64 + 3;
    let k = 3 * w + 4;
    let h = LEVEL_SPACING;

    let mut rects: Vec<Rect> = Vec::new();
    let mut gadgets = Vec::new();
    let mut next_id = 0u64;
    let mut mk = |x1: i64, x2: i64, y1: i64, y2: i64, rects: &mut Vec<Rect>| -> Result<u64> {
        let id = next_id;
        next_id += 1;
        rects.push(Rect::new(id, int(x1), int(x2), int(y1), int(y2)).map_err(|e| Error::Layout(e.to_string()))?);
        Ok(id)
    };

    for v in 0..g.n {
        let c0 = vis.columns[v] * k;
        let mut att: Vec<(i64, Side)> = g
            .edges
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| a == v || b == v)
            .map(|(e, _)| {
                let (left, _) = vis.left_right(e);
                if left == v { (vis.levels[e] * h + 1, Side::Left) } else { (vis.levels[e] * h - 1, Side::Right) }
            })
            .collect();
        att.sort_by_key(|a| std::cmp::Reverse(a.0));

        let lines: Vec<i64> = if att.is_empty() {
            let b = vis.spans[v].0 * h;
            vec![b + 6, b + 3, b - 3, b - 6]
        } else {
            let p: Vec<i64> = att.iter().map(|a| a.0).collect();
            let a = p.len();
            let mut l = vec![0i64; 2 * a + 4];
            l[0] = p[0] + 9;
            l[1] = p[0] + 6;
            l[2] = p[0] + 3;
            for i in 1..=a {
                l[2 * i + 1] = p[i - 1];
            }
            for i in 1..a {
                l[2 * i + 2] = p[i] + (p[i - 1] - p[i]) / 2;
            }
            l[2 * a + 2] = p[a - 1] - 3;
            l[2 * a + 3] = p[a - 1] - 6;
            l
        };
        let top = lines.len() - 2; // index of rBot
        let mut ids = Vec::new();
        for r in 0..=top {
            let (y1, y2) = (lines[r + 1], lines[r]);
            let (x1, x2) = if r == 0 {
                (c0 + 1, c0 + 2)
            } else if r == top {
                (c0 + 1, c0 + 3)
            } else if r % 2 == 1 {
                let i = (r - 1) / 2;
                let wide = i >= 1 && att[i - 1].1 == Side::Right;
                (if wide { c0 - w } else { c0 }, c0 + w + 1)
            } else {
                let i = r / 2;
                let wide = att[i - 1].1 == Side::Left;
                (c0 + 1, if wide { c0 + 2 * w + 2 } else { c0 + w + 2 })
            };
            ids.push(mk(x1, x2, y1, y2, &mut rects)?);
        }
        let stack: Vec<Rect> = ids.iter().map(|&id| rects[id as usize].clone()).collect();
        let (s_act, s_ina) = gadget_segments(&stack)?;
        gadgets.push(VertexGadget { vertex: v, rect_ids: ids, s_act, s_ina });
    }

    let mut edge_rects = Vec::new();
    let mut c = Rational::zero();
    for e in 0..g.edges.len() {
        let (left, right) = vis.left_right(e);
        let x1 = vis.columns[left] * k + w + 2;
        let x2 = vis.columns[right] * k;
        let y = vis.levels[e] * h;
        edge_rects.push(mk(x1, x2, y - 1, y + 1, &mut rects)?);
        c += int(x2 - x1 - w);
    }
    for gd in &gadgets {
        c += gd.len_ina();
    }
    let instance = StabInstance::new(rects, None, Objective::Length)?;
    let out = NpGadgetInstance {
        instance,
        vis: vis.clone(),
        overlap: w,
        column_spacing: k,
        level_spacing: h,
        c,
        vertex_gadgets: gadgets,
        edge_rects,
    };
    check_np_instance(&out)?;
    Ok(out)
}

/// Closed intersection `(dx, dy)` of two rects, if any.
fn meet(a: &Rect, b: &Rect) -> Option<(Rational, Rational)> {
    let dx = (&a.x_right).min(&b.x_right) - (&a.x_left).max(&b.x_left);
    let dy = (&a.y_top).min(&b.y_top) - (&a.y_bottom).max(&b.y_bottom);
    (dx >= Rational::zero() && dy >= Rational::zero()).then_some((dx, dy))
}

/// Checks every structural property the reduction relies on.
pub fn check_np_instance(inst: &NpGadgetInstance) -> Result<()> {
    let fail = |m: String| Err(Error::Certificate(m));
    let w = int(inst.overlap);
    let g = &inst.vis.graph;
    if inst.overlap != g.n as i64 + 3 {
        return fail("overlap must be n + 3".into());
    }
    if inst.instance.rects.iter().any(|r| {
        [&r.x_left, &r.x_right, &r.y_bottom, &r.y_top].iter().any(|c| !c.is_integer())
    }) {
        return fail("coordinates are not integral".into());
    }
    for gd in &inst.vertex_gadgets {
        let stack: Vec<Rect> = gd.rect_ids.iter().map(|&id| inst.rect(id).clone()).collect();
        let last = stack.len() - 1;
        if stack.len().is_multiple_of(2) {
            return fail(format!("gadget {} has an even rect count", gd.vertex));
        }
        if stack[0].width() != int(1) || stack[last].width() != int(2) {
            return fail(format!("gadget {} has wrong end widths", gd.vertex));
        }
        for (i, pair) in stack.windows(2).enumerate() {
            let Some((dx, dy)) = meet(&pair[0], &pair[1]) else {
                return fail(format!("gadget {} rects {i} and {} do not meet", gd.vertex, i + 1));
            };
            let want = if i == 0 {
                pair[0].width()
            } else if i + 1 == last {
                pair[1].width()
            } else {
                w.clone()
            };
            if !dy.is_zero() || dx != want {
                return fail(format!("gadget {} boundary {i} has overlap {dx}, want {want}", gd.vertex));
            }
        }
        if gd.s_act.len() != gd.s_ina.len() || gd.len_act() != gd.len_ina() + int(1) {
            return fail(format!("gadget {} violates the act/ina identity", gd.vertex));
        }
        for family in [&gd.s_act, &gd.s_ina] {
            if let Some(r) = stack.iter().find(|r| !family.iter().any(|s| stabs(s, r))) {
                return fail(format!("gadget {} family misses rect {}", gd.vertex, r.id));
            }
        }
    }
    for (a, ga) in inst.vertex_gadgets.iter().enumerate() {
        for gb in &inst.vertex_gadgets[a + 1..] {
            for &ra in &ga.rect_ids {
                for &rb in &gb.rect_ids {
                    if meet(inst.rect(ra), inst.rect(rb)).is_some() {
                        return fail(format!("gadgets {} and {} touch", ga.vertex, gb.vertex));
                    }
                }
            }
        }
    }
    for (e, &rid) in inst.edge_rects.iter().enumerate() {
        let (left, right) = inst.vis.left_right(e);
        let re = inst.rect(rid);
        let mut hits = Vec::new();
        for gd in &inst.vertex_gadgets {
            for &id in &gd.rect_ids {
                if let Some((dx, _)) = meet(re, inst.rect(id)) {
                    hits.push((gd.vertex, dx));
                }
            }
        }
        hits.sort();
        let want = vec![(left.min(right), w.clone()), (left.max(right), w.clone())];
        if hits != want {
            return fail(format!("edge rect {e} meets {hits:?}"));
        }
        if inst.edge_rects.iter().any(|&o| o != rid && meet(re, inst.rect(o)).is_some()) {
            return fail(format!("edge rect {e} meets another edge rect"));
        }
        let act_at = |v: usize, y: &Rational| inst.vertex_gadgets[v].s_act.iter().any(|s| &s.y == y);
        if !act_at(left, &re.y_top) || !act_at(right, &re.y_bottom) {
            return fail(format!("edge rect {e} does not touch active segments"));
        }
    }
    let mut c = Rational::zero();
    for &rid in &inst.edge_rects {
        c += inst.rect(rid).width() - &w;
    }
    for gd in &inst.vertex_gadgets {
        c += gd.len_ina();
    }
    if c != inst.c {
        return fail(format!("constant c is {c}, recomputed {}", inst.c));
    }
    Ok(())
}
