//! Rectangles, segments, instances and solutions over exact rationals.

use std::collections::{BTreeMap, HashSet};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A closed axis-aligned rectangle `[x_left, x_right] × [y_bottom, y_top]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rect {
    pub id: u64,
    pub x_left: Rational,
    pub x_right: Rational,
    pub y_bottom: Rational,
    pub y_top: Rational,
    pub multiplicity: u32,
}

impl Rect {
    pub fn new(
        id: u64,
        x_left: Rational,
        x_right: Rational,
        y_bottom: Rational,
        y_top: Rational,
    ) -> Result<Rect> {
        let r = Rect { id, x_left, x_right, y_bottom, y_top, multiplicity: 1 };
        r.validate()?;
        Ok(r)
    }

    pub fn with_multiplicity(mut self, multiplicity: u32) -> Result<Rect> {
        self.multiplicity = multiplicity;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason: &str| Error::InvalidRect { id: self.id, reason: reason.to_string() };
        if self.x_left >= self.x_right {
            return Err(bad("x_left must be < x_right"));
        }
        if self.y_bottom >= self.y_top {
            return Err(bad("y_bottom must be < y_top"));
        }
        if self.multiplicity == 0 {
            return Err(bad("multiplicity must be >= 1"));
        }
        Ok(())
    }

    pub fn width(&self) -> Rational {
        &self.x_right - &self.x_left
    }

    pub fn height(&self) -> Rational {
        &self.y_top - &self.y_bottom
    }

    /// Mirror across the diagonal `x = y`.
    pub fn transpose(&self) -> Rect {
        Rect {
            id: self.id,
            x_left: self.y_bottom.clone(),
            x_right: self.y_top.clone(),
            y_bottom: self.x_left.clone(),
            y_top: self.x_right.clone(),
            multiplicity: self.multiplicity,
        }
    }

    /// `(along_lo, along_hi, across_lo, across_hi)` as seen by a segment of
    /// the given orientation.
    pub fn frame(&self, o: Orientation) -> (&Rational, &Rational, &Rational, &Rational) {
        match o {
            Orientation::Horizontal => (&self.x_left, &self.x_right, &self.y_bottom, &self.y_top),
            Orientation::Vertical => (&self.y_bottom, &self.y_top, &self.x_left, &self.x_right),
        }
    }

    pub fn translate(&self, dx: &Rational, dy: &Rational) -> Rect {
        Rect {
            x_left: &self.x_left + dx,
            x_right: &self.x_right + dx,
            y_bottom: &self.y_bottom + dy,
            y_top: &self.y_top + dy,
            ..self.clone()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Orientation {
    #[default]
    Horizontal,
    Vertical,
}

/// A closed segment.
///
/// Horizontal segments span `[x_left, x_right]` at height `y`. Vertical
/// segments store their extent transposed: `[x_left, x_right]` is the
/// y-extent and `y` the x-position, so the same comparisons apply to the
/// transposed rectangle.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Segment {
    pub id: u64,
    pub x_left: Rational,
    pub x_right: Rational,
    pub y: Rational,
    pub orientation: Orientation,
}

impl Segment {
    pub fn horizontal(id: u64, x_left: Rational, x_right: Rational, y: Rational) -> Segment {
        Segment { id, x_left, x_right, y, orientation: Orientation::Horizontal }
    }

    pub fn vertical(id: u64, y_bottom: Rational, y_top: Rational, x: Rational) -> Segment {
        Segment { id, x_left: y_bottom, x_right: y_top, y: x, orientation: Orientation::Vertical }
    }

    pub fn validate(&self) -> Result<()> {
        if self.x_left > self.x_right {
            return Err(Error::InvalidSegment {
                id: self.id,
                reason: "x_left must be <= x_right".into(),
            });
        }
        Ok(())
    }

    pub fn len(&self) -> Rational {
        &self.x_right - &self.x_left
    }

    pub fn is_empty(&self) -> bool {
        self.x_left == self.x_right
    }

    pub fn cost(&self, objective: Objective) -> Rational {
        match objective {
            Objective::Length => self.len(),
            Objective::Cardinality => Rational::one(),
        }
    }

    /// Geometry equality, ignoring ids.
    pub fn same_place(&self, other: &Segment) -> bool {
        self.orientation == other.orientation
            && self.x_left == other.x_left
            && self.x_right == other.x_right
            && self.y == other.y
    }

    pub fn with_id(mut self, id: u64) -> Segment {
        self.id = id;
        self
    }
}

/// `true` iff `s` crosses both the left and the right edge of `r`
/// (bottom and top edge for vertical segments). Rectangles are closed.
pub fn stabs(s: &Segment, r: &Rect) -> bool {
    let (lo, hi, bottom, top) = r.frame(s.orientation);
    s.x_left <= *lo && *hi <= s.x_right && *bottom <= s.y && s.y <= *top
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Objective {
    #[default]
    Length,
    Cardinality,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabInstance {
    pub rects: Vec<Rect>,
    /// Present iff the instance is constrained to a fixed segment family.
    pub fixed_candidates: Option<Vec<Segment>>,
    pub objective: Objective,
}

impl StabInstance {
    pub fn new(
        rects: Vec<Rect>,
        fixed_candidates: Option<Vec<Segment>>,
        objective: Objective,
    ) -> Result<StabInstance> {
        let inst = StabInstance { rects, fixed_candidates, objective };
        inst.validate()?;
        Ok(inst)
    }

    pub fn unconstrained(rects: Vec<Rect>) -> Result<StabInstance> {
        StabInstance::new(rects, None, Objective::Length)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for r in &self.rects {
            r.validate()?;
            if !seen.insert(r.id) {
                return Err(Error::DuplicateId { kind: "rect", id: r.id });
            }
        }
        if let Some(cands) = &self.fixed_candidates {
            let mut seen = HashSet::new();
            for s in cands {
                s.validate()?;
                if !seen.insert(s.id) {
                    return Err(Error::DuplicateId { kind: "candidate", id: s.id });
                }
            }
            for r in &self.rects {
                if !cands.iter().any(|s| stabs(s, r)) {
                    return Err(Error::Uncoverable(r.id));
                }
            }
        }
        Ok(())
    }

    pub fn is_constrained(&self) -> bool {
        self.fixed_candidates.is_some()
    }

    pub fn len(&self) -> usize {
        self.rects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Solution {
    pub segments: Vec<Segment>,
    pub cost: Rational,
    pub assignment: Option<BTreeMap<u64, u64>>,
}

impl Solution {
    pub fn from_segments(segments: Vec<Segment>, objective: Objective) -> Solution {
        let cost = total_cost(&segments, objective);
        Solution { segments, cost, assignment: None }
    }

    /// Attach a rect-id → segment-id map: each rect goes to the first
    /// segment that stabs it.
    pub fn with_assignment(mut self, rects: &[Rect]) -> Solution {
        let mut map = BTreeMap::new();
        for r in rects {
            if let Some(s) = self.segments.iter().find(|s| stabs(s, r)) {
                map.insert(r.id, s.id);
            }
        }
        self.assignment = Some(map);
        self
    }
}

pub fn total_cost(segments: &[Segment], objective: Objective) -> Rational {
    segments.iter().fold(Rational::zero(), |acc, s| acc + s.cost(objective))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub feasible: bool,
    pub uncovered: Vec<u64>,
    /// Segments that are not members of the fixed family (constrained mode).
    pub foreign_segments: Vec<u64>,
    pub recomputed_cost: Rational,
    pub cost_matches: bool,
}

pub fn verify_solution(inst: &StabInstance, sol: &Solution) -> VerifyReport {
    let uncovered: Vec<u64> = inst
        .rects
        .iter()
        .filter(|r| !sol.segments.iter().any(|s| stabs(s, r)))
        .map(|r| r.id)
        .collect();
    let foreign_segments: Vec<u64> = match &inst.fixed_candidates {
        Some(cands) => sol
            .segments
            .iter()
            .filter(|s| !cands.iter().any(|c| c.same_place(s)))
            .map(|s| s.id)
            .collect(),
        None => Vec::new(),
    };
    let recomputed_cost = total_cost(&sol.segments, inst.objective);
    VerifyReport {
        feasible: uncovered.is_empty() && foreign_segments.is_empty(),
        cost_matches: recomputed_cost == sol.cost,
        uncovered,
        foreign_segments,
        recomputed_cost,
    }
}

/// Shrink a segment onto the rectangles it is responsible for: x-extent to
/// their hull, position raised to the lowest top edge (right edge for
/// vertical segments).
pub fn trim_to(s: &Segment, assigned: &[&Rect]) -> Option<Segment> {
    let o = s.orientation;
    let mut it = assigned.iter().map(|r| r.frame(o));
    let (lo, hi, _, top) = it.next()?;
    let (mut lo, mut hi, mut top) = (lo, hi, top);
    for (l, h, _, t) in it {
        lo = lo.min(l);
        hi = hi.max(h);
        top = top.min(t);
    }
    Some(Segment {
        id: s.id,
        x_left: lo.clone(),
        x_right: hi.clone(),
        y: top.clone(),
        orientation: o,
    })
}

/// Rewrite a feasible solution into canonical form without increasing its
/// cost. Every rect is assigned to the first segment that stabs it, each
/// segment is trimmed onto its assigned rects, and segments left without
/// rects are dropped. Repeats until the assignment is stable, which makes
/// the result idempotent.
pub fn canonicalize_solution(inst: &StabInstance, sol: &Solution) -> Result<Solution> {
    if inst.is_constrained() {
        return Err(Error::ConstrainedInstance);
    }
    let mut segs = sol.segments.clone();
    // a trimmed segment still stabs its rects, so every rect's owner index
    // only moves down and the loop reaches a fixpoint
    loop {
        let owner: Vec<Option<usize>> =
            inst.rects.iter().map(|r| segs.iter().position(|s| stabs(s, r))).collect();
        let next: Vec<Segment> = segs
            .iter()
            .enumerate()
            .filter_map(|(i, s)| {
                let mine: Vec<&Rect> = inst
                    .rects
                    .iter()
                    .zip(&owner)
                    .filter(|(_, o)| **o == Some(i))
                    .map(|(r, _)| r)
                    .collect();
                trim_to(s, &mine)
            })
            .collect();
        if next == segs {
            break;
        }
        segs = next;
    }
    Ok(Solution::from_segments(segs, inst.objective).with_assignment(&inst.rects))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    fn rect(id: u64, x1: Rational, x2: Rational, y1: Rational, y2: Rational) -> Rect {
        Rect::new(id, x1, x2, y1, y2).unwrap()
    }

    fn h(id: u64, a: Rational, b: Rational, y: Rational) -> Segment {
        Segment::horizontal(id, a, b, y)
    }

    #[test]
    fn stabs_examples() {
        let r = rect(0, frac(1, 2), frac(3, 2), int(0), int(2));
        assert!(stabs(&h(0, int(0), int(2), int(1)), &r));
        assert!(!stabs(&h(0, int(0), int(1), int(1)), &r));
        assert!(!stabs(&h(0, int(0), int(2), int(3)), &r));
        // closed edges
        assert!(stabs(&h(0, frac(1, 2), frac(3, 2), int(2)), &r));
        assert!(stabs(&h(0, frac(1, 2), frac(3, 2), int(0)), &r));
    }

    #[test]
    fn vertical_stabs_uses_transposed_frame() {
        let r = rect(0, int(0), int(10), int(0), int(1));
        let v = Segment::vertical(0, int(0), int(1), int(3));
        assert!(stabs(&v, &r));
        let short = Segment::vertical(0, int(0), frac(1, 2), int(3));
        assert!(!stabs(&short, &r));
        assert_eq!(stabs(&v, &r), stabs(&h(0, int(0), int(1), int(3)), &r.transpose()));
    }

    #[test]
    fn rect_validation() {
        assert!(Rect::new(0, int(1), int(1), int(0), int(1)).is_err());
        assert!(Rect::new(0, int(0), int(1), int(2), int(1)).is_err());
        assert!(rect(0, int(0), int(1), int(0), int(1)).with_multiplicity(0).is_err());
    }

    #[test]
    fn instance_validation() {
        let r = rect(1, int(0), int(1), int(0), int(1));
        assert!(matches!(
            StabInstance::unconstrained(vec![r.clone(), r.clone()]),
            Err(Error::DuplicateId { .. })
        ));
        let far = h(7, int(5), int(6), int(0));
        assert!(matches!(
            StabInstance::new(vec![r], Some(vec![far]), Objective::Length),
            Err(Error::Uncoverable(1))
        ));
    }

    #[test]
    fn verify_examples() {
        let unit = rect(0, int(0), int(1), int(0), int(1));
        let inst = StabInstance::unconstrained(vec![unit.clone()]).unwrap();
        let sol = Solution::from_segments(vec![h(0, int(0), int(1), int(1))], Objective::Length);
        let rep = verify_solution(&inst, &sol);
        assert!(rep.feasible && rep.cost_matches);
        assert_eq!(rep.recomputed_cost, int(1));

        let rep = verify_solution(&inst, &Solution::default());
        assert!(!rep.feasible);
        assert_eq!(rep.uncovered, vec![0]);

        let two = StabInstance::unconstrained(vec![
            unit.clone(),
            rect(1, int(2), int(3), int(0), int(1)),
        ])
        .unwrap();
        let sol = Solution::from_segments(vec![h(0, int(0), int(3), int(1))], Objective::Length);
        let rep = verify_solution(&two, &sol);
        assert!(rep.feasible);
        assert_eq!(rep.recomputed_cost, int(3));
    }

    #[test]
    fn verify_flags_foreign_segments() {
        let unit = rect(0, int(0), int(1), int(0), int(1));
        let fixed = vec![h(10, int(0), int(1), int(1))];
        let inst = StabInstance::new(vec![unit], Some(fixed), Objective::Length).unwrap();
        let sol = Solution::from_segments(vec![h(3, int(-1), int(1), int(1))], Objective::Length);
        let rep = verify_solution(&inst, &sol);
        assert!(!rep.feasible);
        assert!(rep.uncovered.is_empty());
        assert_eq!(rep.foreign_segments, vec![3]);
    }

    #[test]
    fn canonicalize_examples() {
        let inst =
            StabInstance::unconstrained(vec![rect(0, int(0), int(1), int(0), int(1))]).unwrap();
        let sol =
            Solution::from_segments(vec![h(0, int(-5), int(5), frac(1, 2))], Objective::Length);
        assert_eq!(sol.cost, int(10));
        let c = canonicalize_solution(&inst, &sol).unwrap();
        assert_eq!(c.segments, vec![h(0, int(0), int(1), int(1))]);
        assert_eq!(c.cost, int(1));
        let again = canonicalize_solution(&inst, &c).unwrap();
        assert_eq!(again, c);

        let constrained = StabInstance::new(
            inst.rects.clone(),
            Some(vec![h(0, int(0), int(1), int(1))]),
            Objective::Length,
        )
        .unwrap();
        assert!(canonicalize_solution(&constrained, &sol).is_err());
    }

    #[test]
    fn canonicalize_drops_redundant_segments() {
        let inst = StabInstance::unconstrained(vec![
            rect(0, int(0), int(1), int(0), int(1)),
            rect(1, int(2), int(3), int(0), int(2)),
        ])
        .unwrap();
        let sol = Solution::from_segments(
            vec![h(0, int(0), int(3), int(1)), h(1, int(2), int(3), int(2))],
            Objective::Length,
        );
        let c = canonicalize_solution(&inst, &sol).unwrap();
        assert_eq!(c.segments.len(), 1);
        assert_eq!(c.cost, int(3));
    }

    fn arb_rect(id: u64) -> impl Strategy<Value = Rect> {
        (0i64..12, 1i64..6, 0i64..12, 1i64..6).prop_map(move |(x, w, y, hgt)| {
            rect(id, int(x), int(x + w), int(y), int(y + hgt))
        })
    }

    fn arb_instance() -> impl Strategy<Value = StabInstance> {
        (1usize..7).prop_flat_map(|n| {
            (0..n as u64)
                .map(arb_rect)
                .collect::<Vec<_>>()
                .prop_map(|rs| StabInstance::unconstrained(rs).unwrap())
        })
    }

    /// A feasible but wasteful solution: one padded segment per rect at a
    /// random height inside it.
    fn padded_solution(inst: &StabInstance, pads: &[(i64, i64, i64)]) -> Solution {
        let segs = inst
            .rects
            .iter()
            .zip(pads.iter().cycle())
            .map(|(r, &(pl, pr, num))| {
                let y = &r.y_bottom + r.height() * frac(num, 4);
                h(r.id, &r.x_left - int(pl), &r.x_right + int(pr), y)
            })
            .collect();
        Solution::from_segments(segs, Objective::Length)
    }

    proptest! {
        #[test]
        fn stabs_translation_invariant(
            r in arb_rect(0),
            a in -10i64..10, b in 0i64..10, y in -5i64..15,
            dx in -20i64..20, dy in -20i64..20, q in 1i64..5,
        ) {
            let s = h(0, int(a), int(a + b), int(y));
            let (tx, ty) = (frac(dx, q), frac(dy, q));
            let s2 = h(0, &s.x_left + &tx, &s.x_right + &tx, &s.y + &ty);
            prop_assert_eq!(stabs(&s, &r), stabs(&s2, &r.translate(&tx, &ty)));
        }

        #[test]
        fn canonicalize_is_feasible_idempotent_and_cheaper(
            inst in arb_instance(),
            pads in proptest::collection::vec((0i64..4, 0i64..4, 0i64..=4), 1..7),
        ) {
            let sol = padded_solution(&inst, &pads);
            prop_assert!(verify_solution(&inst, &sol).feasible);
            let c = canonicalize_solution(&inst, &sol).unwrap();
            let rep = verify_solution(&inst, &c);
            prop_assert!(rep.feasible);
            prop_assert!(c.cost <= sol.cost);
            prop_assert_eq!(&canonicalize_solution(&inst, &c).unwrap(), &c);
            for s in &c.segments {
                prop_assert!(inst.rects.iter().any(|r| r.x_left == s.x_left));
                prop_assert!(inst.rects.iter().any(|r| r.x_right == s.x_right));
                prop_assert!(inst.rects.iter().any(|r| r.y_top == s.y));
            }
        }
    }
}
