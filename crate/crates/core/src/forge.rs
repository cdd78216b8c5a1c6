//! Instance generators and the 3D piercing lift.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::{stabs, Objective, Rect, Segment, StabInstance};
use crate::rational::{frac, int, pow2, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomParams {
    /// Coordinates lie in `[0, range]`.
    pub range: i64,
    /// Coordinates are multiples of `1/denom`.
    pub denom: i64,
    /// Largest side length, in units of `1/denom`.
    pub max_side: i64,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams { range: 20, denom: 4, max_side: 24 }
    }
}

/// `n` random rects, reproducible from `seed`.
pub fn gen_random(n: usize, seed: u64, params: &RandomParams) -> Result<StabInstance> {
    if n == 0 || params.range <= 0 || params.denom <= 0 || params.max_side <= 0 {
        return Err(Error::InvalidParameter("gen_random needs n, range, denom, max_side >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = params.range * params.denom;
    let side = params.max_side.min(span);
    let coord = |rng: &mut ChaCha8Rng| {
        let w = rng.gen_range(1..=side);
        let lo = rng.gen_range(0..=span - w);
        (frac(lo, params.denom), frac(lo + w, params.denom))
    };
    let rects = (0..n as u64)
        .map(|id| {
            let (x1, x2) = coord(&mut rng);
            let (y1, y2) = coord(&mut rng);
            Rect::new(id, x1, x2, y1, y2)
        })
        .collect::<Result<Vec<_>>>()?;
    StabInstance::unconstrained(rects)
}

/// Rects `[i, j]²` for `i ≤ m/2 < j`, constrained to the `m` segments
/// `[i, m] × {i}` (`i ≤ m/2`) and `[1, i] × {i}` (`i > m/2`). Segment
/// `s_i` has id `i - 1`.
pub fn gen_scc_counterexample(m: usize) -> Result<StabInstance> {
    if m < 2 || m % 2 == 1 {
        return Err(Error::InvalidParameter(format!("m must be even and >= 2, got {m}")));
    }
    let h = m / 2;
    let mut rects = Vec::new();
    for i in 1..=h {
        for j in h + 1..=m {
            let id = rects.len() as u64;
            rects.push(Rect::new(id, int(i as i64), int(j as i64), int(i as i64), int(j as i64))?);
        }
    }
    let segs = (1..=m)
        .map(|i| {
            let (a, b) = if i <= h { (i, m) } else { (1, i) };
            Segment::horizontal(i as u64 - 1, int(a as i64), int(b as i64), int(i as i64))
        })
        .collect();
    StabInstance::new(rects, Some(segs), Objective::Length)
}

#[derive(Clone, Debug)]
pub struct GreedyTrap {
    pub instance: StabInstance,
    /// Ids of the nested family stabbed by `b`, with their levels.
    pub b_rects: Vec<(u64, usize)>,
    /// Ids of the mirrored family stabbed by `t`.
    pub t_rects: Vec<u64>,
    pub t: Segment,
    pub b: Segment,
    /// The distinct top edges of the nested family.
    pub b_top_edges: Vec<Segment>,
}

/// The greedy trap with `levels + 1` nesting levels. Level `i` holds `2^i`
/// disjoint rects of width `(1 - iε)/2^i`, each child sitting strictly
/// inside its parent. All of them rest on `y = 0`; the top of the rect of
/// rank `r` on level `i` is `1 + i + ε·r/(4·2^levels)`, so tops are pairwise
/// distinct. Each such rect has a mirror of equal width standing on its top
/// edge and reaching `levels + 3`. `b = [0, 1] × {0}`, `t = [0, 1] × {levels + 2}`.
///
/// In weighted mode only even levels are kept and every rect of level `i`
/// (in either family) is repeated `⌈2^i/(1 - iε)⌉` times.
pub fn gen_greedy_trap(levels: usize, eps: &Rational, weighted: bool) -> Result<GreedyTrap> {
    if levels < 1 {
        return Err(Error::InvalidParameter("greedy trap needs at least one level".into()));
    }
    if *eps <= Rational::zero() || eps * int(levels as i64 + 1) >= Rational::one() {
        return Err(Error::InvalidParameter("need 0 < eps < 1/(levels + 1)".into()));
    }
    if weighted && levels % 2 == 1 {
        return Err(Error::InvalidParameter("weighted greedy trap needs an even level count".into()));
    }
    let width = |i: usize| (Rational::one() - eps * int(i as i64)) / pow2(i as u32);
    let bump = eps / (int(4) * pow2(levels as u32));

    // x-ranges per level, left to right
    let mut spans: Vec<Vec<(Rational, Rational)>> = vec![vec![(int(0), int(1))]];
    for i in 0..levels {
        let g = eps / pow2(i as u32 + 2);
        let w = width(i + 1);
        let next = spans[i]
            .iter()
            .flat_map(|(l, r)| {
                let a = l + &g;
                let b = r - &g;
                [(a.clone(), &a + &w), (&b - &w, b)]
            })
            .collect();
        spans.push(next);
    }

    let mut rects = Vec::new();
    let mut b_rects = Vec::new();
    let mut t_rects = Vec::new();
    let mut b_top_edges = Vec::new();
    let t_y = int(levels as i64 + 2);
    let ceiling = int(levels as i64 + 3);
    let mut mirrors = Vec::new();
    for (i, row) in spans.iter().enumerate() {
        if weighted && i % 2 == 1 {
            continue;
        }
        let copies = if weighted {
            (pow2(i as u32) / (Rational::one() - eps * int(i as i64))).ceil().to_integer()
        } else {
            1.into()
        };
        let copies: usize = copies.try_into().map_err(|_| Error::Overflow("trap multiplicity"))?;
        for (rank, (l, r)) in row.iter().enumerate() {
            let top = int(1 + i as i64) + &bump * int(rank as i64);
            b_top_edges.push(Segment::horizontal(b_top_edges.len() as u64, l.clone(), r.clone(), top.clone()));
            for _ in 0..copies {
                let id = rects.len() as u64;
                rects.push(Rect::new(id, l.clone(), r.clone(), int(0), top.clone())?);
                b_rects.push((id, i));
                mirrors.push((l.clone(), r.clone(), top.clone()));
            }
        }
    }
    for (l, r, top) in mirrors {
        let id = rects.len() as u64;
        rects.push(Rect::new(id, l, r, top, ceiling.clone())?);
        t_rects.push(id);
    }
    Ok(GreedyTrap {
        instance: StabInstance::unconstrained(rects)?,
        b_rects,
        t_rects,
        t: Segment::horizontal(0, int(0), int(1), t_y),
        b: Segment::horizontal(1, int(0), int(1), int(0)),
        b_top_edges,
    })
}

#[derive(Clone, Debug)]
pub struct DoubleStaircase {
    /// Constrained to the universal line followed by the level lines.
    pub instance: StabInstance,
    pub k: usize,
    pub universal: Segment,
    /// `k(k+1)` lines, each stabbing `k + 1` rects.
    pub lines: Vec<Segment>,
}

impl DoubleStaircase {
    pub fn n(&self) -> usize {
        self.instance.rects.len()
    }

    /// Vertical slabs cut by the rect edges.
    pub fn slabs(&self) -> usize {
        2 * self.n()
    }

    /// Whether the equal-cardinality line count beats two faces per slab.
    pub fn beats_slab_bound(&self) -> bool {
        self.lines.len() > 2 * self.slabs()
    }
}

/// Rects `r_i = [i, i+1] × [0, |i|+1]` for `-ℓ ≤ i ≤ ℓ`, a universal line at
/// height 1/2 and, for `k = ℓ/2`, lines `s_{i,j}` (`1 ≤ i ≤ k+1`,
/// `1 ≤ j ≤ k`) at height `i + 1/2` spanning `[1-i-j, i+k+1-j]`, each
/// stabbing `j` rects on the left and `k+1-j` on the right.
pub fn gen_double_staircase(levels: usize) -> Result<DoubleStaircase> {
    if levels < 2 || levels % 2 == 1 {
        return Err(Error::InvalidParameter(format!("staircase needs even levels >= 2, got {levels}")));
    }
    let l = levels as i64;
    let k = levels / 2;
    let rects = (-l..=l)
        .enumerate()
        .map(|(id, i)| Rect::new(id as u64, int(i), int(i + 1), int(0), int(i.abs() + 1)))
        .collect::<Result<Vec<_>>>()?;
    let universal = Segment::horizontal(0, int(-l), int(l + 1), frac(1, 2));
    let kk = k as i64;
    let mut lines = Vec::new();
    for i in 1..=kk + 1 {
        for j in 1..=kk {
            let id = lines.len() as u64 + 1;
            lines.push(Segment::horizontal(id, int(1 - i - j), int(i + kk + 1 - j), int(i) + frac(1, 2)));
        }
    }
    let mut fixed = vec![universal.clone()];
    fixed.extend(lines.iter().cloned());
    Ok(DoubleStaircase {
        instance: StabInstance::new(rects, Some(fixed), Objective::Length)?,
        k,
        universal,
        lines,
    })
}

/// Smallest even `ℓ` from which the staircase line count exceeds twice the
/// slab count for every larger even `ℓ`.
pub fn staircase_slab_threshold() -> usize {
    // k(k+1) > 4(2ℓ+1) with k = ℓ/2 is a quadratic in ℓ; it holds from its
    // larger root onward, so scan until it first holds
    (2..).step_by(2).find(|&l: &usize| (l / 2) * (l / 2 + 1) > 4 * (2 * l + 1)).unwrap()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Box3 {
    pub id: u64,
    pub lo: [Rational; 3],
    pub hi: [Rational; 3],
}

impl Box3 {
    pub fn contains(&self, p: &Point3) -> bool {
        (0..3).all(|a| self.lo[a] <= p.coords[a] && p.coords[a] <= self.hi[a])
    }

    pub fn is_empty(&self) -> bool {
        (0..3).any(|a| self.lo[a] > self.hi[a])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point3 {
    pub id: u64,
    pub coords: [Rational; 3],
    pub weight: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiercingInstance3D {
    pub boxes: Vec<Box3>,
    pub points: Vec<Point3>,
}

/// Lift segment `[l, r] × {y}` to the point `(l, r, y)` of weight `r - l`
/// and rect `[x1, x2] × [y1, y2]` to the box `u ≤ x1, v ≥ x2, y1 ≤ w ≤ y2`,
/// closed off at one unit beyond the segment coordinates on each axis.
/// Vertical segments are lifted in the transposed frame.
pub fn embed_piercing_3d(rects: &[Rect], segs: &[Segment]) -> Result<PiercingInstance3D> {
    let Some(first) = segs.first() else {
        return Ok(PiercingInstance3D {
            boxes: Vec::new(),
            points: Vec::new(),
        });
    };
    let o = first.orientation;
    if segs.iter().any(|s| s.orientation != o) {
        return Err(Error::InvalidParameter("piercing lift expects one orientation".into()));
    }
    let points: Vec<Point3> = segs
        .iter()
        .map(|s| Point3 { id: s.id, coords: [s.x_left.clone(), s.x_right.clone(), s.y.clone()], weight: s.len() })
        .collect();
    let axis = |a: usize| {
        let lo = points.iter().map(|p| &p.coords[a]).min().unwrap() - int(1);
        let hi = points.iter().map(|p| &p.coords[a]).max().unwrap() + int(1);
        (lo, hi)
    };
    let bounds = [axis(0), axis(1), axis(2)];
    let boxes = rects
        .iter()
        .map(|r| {
            let (left, right, bottom, top) = r.frame(o);
            let (left, right, bottom, top) = (left.clone(), right.clone(), bottom.clone(), top.clone());
            let clamp_hi = |v: Rational, a: usize| v.min(bounds[a].1.clone());
            let clamp_lo = |v: Rational, a: usize| v.max(bounds[a].0.clone());
            Box3 {
                id: r.id,
                lo: [bounds[0].0.clone(), clamp_lo(right, 1), clamp_lo(bottom, 2)],
                hi: [clamp_hi(left, 0), bounds[1].1.clone(), clamp_hi(top, 2)],
            }
        })
        .collect();
    Ok(PiercingInstance3D { boxes, points })
}

/// Count `(segment, rect)` pairs where the lift disagrees with `stabs`.
pub fn piercing_mismatches(rects: &[Rect], segs: &[Segment], lift: &PiercingInstance3D) -> usize {
    let mut bad = 0;
    for (s, p) in segs.iter().zip(&lift.points) {
        if p.weight != s.len() {
            bad += 1;
        }
        for (r, b) in rects.iter().zip(&lift.boxes) {
            if b.contains(p) != stabs(s, r) {
                bad += 1;
            }
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitset::BitSet;
    use crate::candidates::stab_sets;
    use std::collections::HashSet;

    #[test]
    fn random_is_reproducible() {
        let p = RandomParams::default();
        assert_eq!(gen_random(1, 3, &p).unwrap().rects.len(), 1);
        assert_eq!(gen_random(30, 5, &p).unwrap(), gen_random(30, 5, &p).unwrap());
        assert_ne!(gen_random(30, 5, &p).unwrap(), gen_random(30, 6, &p).unwrap());
        let big = gen_random(100, 1, &p).unwrap();
        assert!(big.validate().is_ok());
        assert!(gen_random(0, 1, &p).is_err());
    }

    #[test]
    fn scc_counterexample_structure() {
        assert!(gen_scc_counterexample(3).is_err());
        for m in [2usize, 4, 6, 10] {
            let inst = gen_scc_counterexample(m).unwrap();
            let segs = inst.fixed_candidates.as_ref().unwrap();
            assert_eq!(inst.rects.len(), m * m / 4);
            let sets = stab_sets(segs, &inst.rects);
            let mut per_rect = vec![BitSet::new(m); inst.rects.len()];
            for (s, set) in sets.iter().enumerate() {
                for r in set.iter() {
                    per_rect[r].insert(s);
                }
            }
            assert!(per_rect.iter().all(|b| b.len() == 2));
            let distinct: HashSet<_> = per_rect.iter().collect();
            assert_eq!(distinct.len(), m * m / 4);
        }
    }

    #[test]
    fn trap_shapes() {
        let trap = gen_greedy_trap(1, &frac(1, 100), false).unwrap();
        assert_eq!(trap.b_rects.len(), 3);
        assert_eq!(trap.t_rects.len(), 3);
        let rects = &trap.instance.rects;
        for &(id, _) in &trap.b_rects {
            assert!(stabs(&trap.b, &rects[id as usize]));
        }
        for &id in &trap.t_rects {
            assert!(stabs(&trap.t, &rects[id as usize]));
        }
        let tops: HashSet<_> = trap.b_rects.iter().map(|&(id, _)| rects[id as usize].y_top.clone()).collect();
        assert_eq!(tops.len(), 3);

        let w = gen_greedy_trap(4, &frac(1, 100), true).unwrap();
        let level4 = w.b_rects.iter().filter(|&&(_, l)| l == 4).count();
        // 16 rects on level 4, each ⌈16/(1 - 4/100)⌉ = 17 times
        assert_eq!(level4, 16 * 17);
        assert!(w.b_rects.iter().all(|&(_, l)| l % 2 == 0));
        assert!(gen_greedy_trap(3, &frac(1, 100), true).is_err());
        assert!(gen_greedy_trap(3, &frac(1, 4), false).is_err());
    }

    #[test]
    fn trap_nesting_is_strict() {
        let trap = gen_greedy_trap(3, &frac(1, 100), false).unwrap();
        let rects = &trap.instance.rects;
        for &(a, la) in &trap.b_rects {
            for &(b, lb) in &trap.b_rects {
                let (ra, rb) = (&rects[a as usize], &rects[b as usize]);
                let overlap = ra.x_left < rb.x_right && rb.x_left < ra.x_right;
                if la == lb && a != b {
                    assert!(!overlap);
                }
                if la < lb && overlap {
                    assert!(ra.x_left < rb.x_left && rb.x_right < ra.x_right);
                }
            }
        }
    }

    #[test]
    fn staircase_examples() {
        let st = gen_double_staircase(2).unwrap();
        assert_eq!(st.n(), 5);
        assert_eq!(st.k, 1);
        assert_eq!(st.lines.len(), 2);
        let sets = stab_sets(&st.lines, &st.instance.rects);
        assert!(sets.iter().all(|s| s.len() == 2));
        let uni = stab_sets(std::slice::from_ref(&st.universal), &st.instance.rects);
        assert_eq!(uni[0].len(), 5);

        let st = gen_double_staircase(4).unwrap();
        let sets = stab_sets(&st.lines, &st.instance.rects);
        let distinct: HashSet<_> = sets.iter().collect();
        assert_eq!(distinct.len(), 6);
        assert!(sets.iter().all(|s| s.len() == 3));
        assert!(gen_double_staircase(3).is_err());
    }

    #[test]
    fn slab_threshold() {
        let t = staircase_slab_threshold();
        assert_eq!(t, 32);
        assert!(!gen_double_staircase(12).unwrap().beats_slab_bound());
        assert!(!gen_double_staircase(t - 2).unwrap().beats_slab_bound());
        for l in [t, t + 2, t + 10] {
            assert!(gen_double_staircase(l).unwrap().beats_slab_bound());
        }
    }

    #[test]
    fn piercing_examples() {
        let r = Rect::new(0, frac(1, 2), frac(3, 2), int(0), int(2)).unwrap();
        let s = Segment::horizontal(0, int(0), int(2), int(1));
        let lift = embed_piercing_3d(std::slice::from_ref(&r), std::slice::from_ref(&s)).unwrap();
        assert_eq!(lift.points[0].coords, [int(0), int(2), int(1)]);
        assert_eq!(lift.points[0].weight, int(2));
        assert!(lift.boxes[0].contains(&lift.points[0]));

        let miss = Segment::horizontal(0, int(0), int(1), int(1));
        let lift = embed_piercing_3d(std::slice::from_ref(&r), std::slice::from_ref(&miss)).unwrap();
        assert!(!lift.boxes[0].contains(&lift.points[0]));

        let inst = gen_scc_counterexample(4).unwrap();
        let segs = inst.fixed_candidates.clone().unwrap();
        let lift = embed_piercing_3d(&inst.rects, &segs).unwrap();
        assert_eq!(piercing_mismatches(&inst.rects, &segs, &lift), 0);
    }
}
