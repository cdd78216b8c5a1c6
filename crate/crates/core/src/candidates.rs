//! The canonical candidate family and stab-set bookkeeping.
//!
//! Stabbing only depends on the relative order of coordinates, so all heavy
//! lifting happens on integer ranks.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::bitset::BitSet;
use crate::geom::{Orientation, Rect, Segment};
use crate::rational::Rational;

/// Sorted distinct values and a lookup into their ranks.
struct Ranks {
    values: Vec<Rational>,
}

impl Ranks {
    fn new<'a>(it: impl IntoIterator<Item = &'a Rational>) -> Ranks {
        let mut values: Vec<Rational> = it.into_iter().cloned().collect();
        values.sort();
        values.dedup();
        Ranks { values }
    }

    fn rank(&self, v: &Rational) -> usize {
        self.values.binary_search(v).expect("value registered in rank space")
    }
}

#[derive(Clone, Copy)]
struct IRect {
    xl: usize,
    xr: usize,
    yb: usize,
    yt: usize,
}

#[derive(Clone, Copy)]
struct ISeg {
    a: usize,
    b: usize,
    y: usize,
    vertical: bool,
}

/// Rects and segments mapped into a shared integer rank space.
struct RankSpace {
    rects: Vec<IRect>,
    segs: Vec<ISeg>,
}

impl RankSpace {
    fn new(rects: &[Rect], segs: &[Segment]) -> RankSpace {
        let mut xs: Vec<&Rational> = Vec::new();
        let mut ys: Vec<&Rational> = Vec::new();
        for r in rects {
            xs.extend([&r.x_left, &r.x_right]);
            ys.extend([&r.y_bottom, &r.y_top]);
        }
        for s in segs {
            match s.orientation {
                Orientation::Horizontal => {
                    xs.extend([&s.x_left, &s.x_right]);
                    ys.push(&s.y);
                }
                Orientation::Vertical => {
                    ys.extend([&s.x_left, &s.x_right]);
                    xs.push(&s.y);
                }
            }
        }
        let (xr, yr) = (Ranks::new(xs), Ranks::new(ys));
        let rects = rects
            .iter()
            .map(|r| IRect {
                xl: xr.rank(&r.x_left),
                xr: xr.rank(&r.x_right),
                yb: yr.rank(&r.y_bottom),
                yt: yr.rank(&r.y_top),
            })
            .collect();
        let segs = segs
            .iter()
            .map(|s| match s.orientation {
                Orientation::Horizontal => ISeg {
                    a: xr.rank(&s.x_left),
                    b: xr.rank(&s.x_right),
                    y: yr.rank(&s.y),
                    vertical: false,
                },
                Orientation::Vertical => ISeg {
                    a: yr.rank(&s.x_left),
                    b: yr.rank(&s.x_right),
                    y: xr.rank(&s.y),
                    vertical: true,
                },
            })
            .collect();
        RankSpace { rects, segs }
    }
}

fn istabs(s: &ISeg, r: &IRect) -> bool {
    let (lo, hi, bottom, top) =
        if s.vertical { (r.yb, r.yt, r.xl, r.xr) } else { (r.xl, r.xr, r.yb, r.yt) };
    s.a <= lo && hi <= s.b && bottom <= s.y && s.y <= top
}

/// For every segment, the set of rect indices (positions in `rects`) it stabs.
pub fn stab_sets(segs: &[Segment], rects: &[Rect]) -> Vec<BitSet> {
    let space = RankSpace::new(rects, segs);
    space
        .segs
        .par_iter()
        .map(|s| {
            let mut b = BitSet::new(rects.len());
            for (i, r) in space.rects.iter().enumerate() {
                if istabs(s, r) {
                    b.insert(i);
                }
            }
            b
        })
        .collect()
}

/// All canonical horizontal candidates: `a` a left edge, `b` a right edge,
/// `a < b`, `y` a top edge, stabbing at least one rect. Sorted by
/// `(y, a, b)` and numbered from 0 in that order.
pub fn candidate_segments(rects: &[Rect]) -> Vec<Segment> {
    candidate_segments_oriented(rects, Orientation::Horizontal)
}

/// Canonical candidates for either orientation. Vertical candidates are the
/// horizontal candidates of the transposed rects.
pub fn candidate_segments_oriented(rects: &[Rect], o: Orientation) -> Vec<Segment> {
    let framed: Vec<(&Rational, &Rational, &Rational, &Rational)> =
        rects.iter().map(|r| r.frame(o)).collect();
    let lefts = Ranks::new(framed.iter().map(|f| f.0));
    let rights = Ranks::new(framed.iter().map(|f| f.1));
    let tops = Ranks::new(framed.iter().map(|f| f.3));

    let per_level: Vec<Vec<(usize, usize, usize)>> = (0..tops.values.len())
        .into_par_iter()
        .map(|yi| {
            let y = &tops.values[yi];
            let active: Vec<_> =
                framed.iter().filter(|f| f.2 <= y && y <= f.3).collect();
            let mut out = Vec::new();
            for (ai, a) in lefts.values.iter().enumerate() {
                // smallest right edge among active rects starting at or after a
                let Some(min_right) =
                    active.iter().filter(|f| f.0 >= a).map(|f| f.1).min()
                else {
                    continue;
                };
                let start = rights.rank(min_right);
                for bi in start..rights.values.len() {
                    if &rights.values[bi] > a {
                        out.push((yi, ai, bi));
                    }
                }
            }
            out
        })
        .collect();

    per_level
        .into_iter()
        .flatten()
        .enumerate()
        .map(|(id, (yi, ai, bi))| Segment {
            id: id as u64,
            x_left: lefts.values[ai].clone(),
            x_right: rights.values[bi].clone(),
            y: tops.values[yi].clone(),
            orientation: o,
        })
        .collect()
}

/// Remove candidates that another candidate beats: its stab set is a
/// superset and it is no longer (equal sets and lengths keep the earliest).
/// Candidates stabbing nothing are dropped. Input order is preserved.
pub fn prune_dominated(cands: &[Segment], rects: &[Rect]) -> Vec<Segment> {
    let sets = stab_sets(cands, rects);
    let lens: Vec<Rational> = cands.iter().map(Segment::len).collect();

    let mut posting: Vec<Vec<usize>> = vec![Vec::new(); rects.len()];
    for (c, set) in sets.iter().enumerate() {
        for e in set.iter() {
            posting[e].push(c);
        }
    }
    // identical stab sets: only the cheapest, earliest one can survive
    let mut best_for_set: HashMap<&BitSet, usize> = HashMap::new();
    for (c, set) in sets.iter().enumerate() {
        best_for_set
            .entry(set)
            .and_modify(|b| {
                if lens[c] < lens[*b] {
                    *b = c;
                }
            })
            .or_insert(c);
    }

    let single = cands.windows(2).all(|w| w[0].orientation == w[1].orientation);
    let mut by_place: HashMap<(&Rational, &Rational, &Rational), usize> = HashMap::new();
    let mut by_interval: HashMap<(&Rational, &Rational), Vec<usize>> = HashMap::new();
    if single {
        for (c, s) in cands.iter().enumerate() {
            by_place.entry((&s.x_left, &s.x_right, &s.y)).or_insert(c);
            by_interval.entry((&s.x_left, &s.x_right)).or_default().push(c);
        }
    }

    let keep: Vec<bool> = (0..cands.len())
        .into_par_iter()
        .map(|c| {
            let set = &sets[c];
            if set.is_empty() || best_for_set[set] != c {
                return false;
            }
            if single {
                // A segment spanning exactly the hull of its stab set can only
                // be beaten by one with the same interval; a looser one is
                // beaten by the hull segment at the same height, if present.
                let s = &cands[c];
                let lo = set.iter().map(|i| rects[i].frame(s.orientation).0).min().unwrap();
                let hi = set.iter().map(|i| rects[i].frame(s.orientation).1).max().unwrap();
                if (lo, hi) == (&s.x_left, &s.x_right) {
                    return !by_interval[&(lo, hi)].iter().any(|&d| {
                        d != c && sets[d].len() > set.len() && set.is_subset(&sets[d])
                    });
                }
                if by_place.contains_key(&(lo, hi, &s.y)) {
                    return false;
                }
            }
            let pivot = set.iter().min_by_key(|&e| posting[e].len()).unwrap();
            !posting[pivot].iter().any(|&d| {
                d != c
                    && lens[d] <= lens[c]
                    && sets[d].len() > set.len()
                    && set.is_subset(&sets[d])
            })
        })
        .collect();

    cands.iter().zip(keep).filter(|(_, k)| *k).map(|(s, _)| s.clone()).collect()
}
