//! x-laminar families and the shifted dyadic snapping.
//!
//! After scaling so the longest candidate has length 1/3, every interval
//! `J` is replaced by a dyadic interval `[j/2^s, (j+1)/2^s]` containing it
//! (family 1) or by such an interval shifted by 1/3 (family 2). Each family
//! on its own is laminar and no interval grows by more than a factor 6.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::geom::{Orientation, Rect, Segment};
use crate::rational::{pow2, Rational};

/// True iff every two x-projections are nested or meet in at most a point.
pub fn is_x_laminar(segs: &[Segment]) -> bool {
    let mut iv: Vec<(&Rational, &Rational)> = segs.iter().map(|s| (&s.x_left, &s.x_right)).collect();
    iv.sort_by(|a, b| a.0.cmp(b.0).then(b.1.cmp(a.1)));
    let mut stack: Vec<(&Rational, &Rational)> = Vec::new();
    for cur in iv {
        while stack.last().is_some_and(|top| top.1 <= cur.0) {
            stack.pop();
        }
        if stack.last().is_some_and(|top| cur.1 > top.1) {
            return false;
        }
        stack.push(cur);
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snap {
    pub family: u8,
    pub lo: Rational,
    pub hi: Rational,
    pub level: u32,
}

impl Snap {
    pub fn stretch(&self, a: &Rational, b: &Rational) -> Rational {
        (&self.hi - &self.lo) / (b - a)
    }
}

/// Snap `[a, b]` with `0 < b - a <= 1/3`.
pub fn dyadic_snap(a: &Rational, b: &Rational) -> Result<Snap> {
    let len = b - a;
    if len <= Rational::zero() || len * Rational::from_integer(3.into()) > Rational::one() {
        return Err(Error::InvalidParameter(format!("interval [{a}, {b}] must have length in (0, 1/3]")));
    }
    let len = b - a;
    let three = Rational::from_integer(BigInt::from(3));
    // largest s with len <= 1/(3·2^s)
    let mut s = 0u32;
    while len <= Rational::one() / (&three * pow2(s + 1)) {
        s += 1;
    }
    let p = pow2(s);
    let cell = Rational::one() / &p;
    let j0 = (a * &p).floor();
    if b * &p <= &j0 + Rational::one() {
        return Ok(Snap { family: 1, lo: &j0 * &cell, hi: (&j0 + Rational::one()) * &cell, level: s });
    }
    let j = j0 + Rational::one();
    let shift = &cell / &three;
    let (lo, hi) = if s.is_multiple_of(2) {
        ((&j - Rational::one()) * &cell + &shift, &j * &cell + &shift)
    } else {
        (&j * &cell - &shift, (&j + Rational::one()) * &cell - &shift)
    };
    Ok(Snap { family: 2, lo, hi, level: s })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnappedSegment {
    /// Lowest id among the candidates that snapped to this segment.
    pub original_id: u64,
    /// Snapped segment in original coordinates; ids are `0..` in output order.
    pub segment: Segment,
    pub family: u8,
    pub level: u32,
    pub stretch: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaminarDecomposition {
    /// Factor applied after translating by `offset`.
    pub scale: Rational,
    pub offset: Rational,
    pub snapped: Vec<SnappedSegment>,
}

impl LaminarDecomposition {
    pub fn segments(&self) -> Vec<Segment> {
        self.snapped.iter().map(|s| s.segment.clone()).collect()
    }

    pub fn family(&self, f: u8) -> Vec<Segment> {
        self.snapped.iter().filter(|s| s.family == f).map(|s| s.segment.clone()).collect()
    }

    pub fn max_stretch(&self) -> Option<Rational> {
        self.snapped.iter().map(|s| s.stretch.clone()).max()
    }
}

/// Snap every candidate of one orientation. Coordinates are translated by
/// the smallest rect coordinate along the segment direction, so all
/// dyadic indices are non-negative, and scaled so the longest candidate
/// has length 1/3. Snapped segments keep their original `y`.
pub fn laminarize(rects: &[Rect], cands: &[Segment]) -> Result<LaminarDecomposition> {
    let Some(first) = cands.first() else {
        return Ok(LaminarDecomposition { scale: Rational::one(), offset: Rational::zero(), snapped: Vec::new() });
    };
    let o: Orientation = first.orientation;
    if cands.iter().any(|c| c.orientation != o) {
        return Err(Error::InvalidParameter("laminarize expects a single orientation".into()));
    }
    if let Some(c) = cands.iter().find(|c| c.is_empty()) {
        return Err(Error::InvalidSegment { id: c.id, reason: "zero-length candidate".into() });
    }
    let offset = rects
        .iter()
        .map(|r| r.frame(o).0)
        .chain(cands.iter().map(|c| &c.x_left))
        .min()
        .cloned()
        .unwrap();
    let longest = cands.iter().map(Segment::len).max().unwrap();
    let shortest = cands.iter().map(Segment::len).min().unwrap();
    let three = Rational::from_integer(BigInt::from(3));
    let scale = Rational::one() / (&three * &longest);

    // s ≤ ceil(log2(1/(3·minlength))) after scaling
    let ratio = &longest / &shortest;
    let mut cap = 0u32;
    while pow2(cap) < ratio {
        cap += 1;
    }

    let mut merged: BTreeMap<(Rational, Rational, Rational, u8), SnappedSegment> = BTreeMap::new();
    let mut order: Vec<(Rational, Rational, Rational, u8)> = Vec::new();
    for c in cands {
        let a = (&c.x_left - &offset) * &scale;
        let b = (&c.x_right - &offset) * &scale;
        let snap = dyadic_snap(&a, &b)?;
        if snap.level > cap {
            return Err(Error::InvalidParameter(format!(
                "dyadic level {} exceeds cap {cap} for candidate {}",
                snap.level, c.id
            )));
        }
        let lo = &snap.lo / &scale + &offset;
        let hi = &snap.hi / &scale + &offset;
        let stretch = snap.stretch(&a, &b);
        let key = (lo.clone(), hi.clone(), c.y.clone(), snap.family);
        match merged.get_mut(&key) {
            Some(existing) => {
                if c.id < existing.original_id {
                    existing.original_id = c.id;
                    existing.stretch = stretch;
                } else if c.id == existing.original_id && stretch > existing.stretch {
                    existing.stretch = stretch;
                }
            }
            None => {
                order.push(key.clone());
                merged.insert(
                    key,
                    SnappedSegment {
                        original_id: c.id,
                        segment: Segment { id: 0, x_left: lo, x_right: hi, y: c.y.clone(), orientation: o },
                        family: snap.family,
                        level: snap.level,
                        stretch,
                    },
                );
            }
        }
    }
    let snapped = order
        .into_iter()
        .enumerate()
        .map(|(i, k)| {
            let mut s = merged.remove(&k).unwrap();
            s.segment.id = i as u64;
            s
        })
        .collect();
    Ok(LaminarDecomposition { scale, offset, snapped })
}
