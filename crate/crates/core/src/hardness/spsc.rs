//! The special set cover family and its encoding by fixed segments.
//!
//! Elements are indexed `a_i → i` (0-based) and `w_t, x_t, y_t, z_t →
//! n + 4t + 0..4`. Each triple `t = (i, j, k)` contributes the five sets
//! `{a_i, w_t}`, `{w_t, x_t}`, `{a_j, x_t, y_t}`, `{y_t, z_t}`,
//! `{a_k, z_t}` in that order.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::MAX_ENUMERATION;
use crate::error::{Error, Result};
use crate::geom::{stabs, Objective, Rect, Segment, StabInstance};
use crate::rational::{frac, int, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpscInstance {
    pub n: usize,
    pub m: usize,
    /// `(i, j, k)` with `i < j < k`, 0-based.
    pub triples: Vec<(usize, usize, usize)>,
    /// Element indices of each set, five per triple.
    pub sets: Vec<Vec<usize>>,
}

impl SpscInstance {
    pub fn from_triples(triples: Vec<(usize, usize, usize)>) -> Result<SpscInstance> {
        let m = triples.len();
        if m == 0 || m % 2 == 1 {
            return Err(Error::InvalidParameter(format!("m must be even and positive, got {m}")));
        }
        let n = 3 * m / 2;
        let mut sets = Vec::with_capacity(5 * m);
        for (t, &(i, j, k)) in triples.iter().enumerate() {
            let base = n + 4 * t;
            let (w, x, y, z) = (base, base + 1, base + 2, base + 3);
            sets.push(vec![i, w]);
            sets.push(vec![w, x]);
            sets.push(vec![j, x, y]);
            sets.push(vec![y, z]);
            sets.push(vec![k, z]);
        }
        let inst = SpscInstance { n, m, triples, sets };
        inst.validate()?;
        Ok(inst)
    }

    pub fn n_elements(&self) -> usize {
        self.n + 4 * self.m
    }

    pub fn element_name(&self, e: usize) -> String {
        if e < self.n {
            format!("a{}", e + 1)
        } else {
            let t = (e - self.n) / 4;
            format!("{}{}", ["w", "x", "y", "z"][(e - self.n) % 4], t + 1)
        }
    }

    /// Indices of a smallest cover, by enumerating all subfamilies; at most
    /// [`MAX_ENUMERATION`] sets.
    pub fn min_cover_exhaustive(&self) -> Result<Vec<usize>> {
        let k = self.sets.len();
        if k > MAX_ENUMERATION || self.n_elements() > 64 {
            return Err(Error::InvalidParameter(format!(
                "set cover enumeration supports at most {MAX_ENUMERATION} sets, got {k}"
            )));
        }
        let masks: Vec<u64> = self.sets.iter().map(|s| s.iter().fold(0, |a, &e| a | 1 << e)).collect();
        let full = u64::MAX >> (64 - self.n_elements());
        let best = (0u32..1 << k)
            .filter(|pick| (0..k).filter(|i| pick >> i & 1 == 1).fold(0, |a, i| a | masks[i]) == full)
            .min_by_key(|pick| pick.count_ones())
            .expect("the whole family covers");
        Ok((0..k).filter(|&i| best >> i & 1 == 1).collect())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if 2 * self.n != 3 * self.m || self.triples.len() != self.m || self.sets.len() != 5 * self.m {
            return bad("sizes must satisfy 2n = 3m with 5m sets".into());
        }
        if let Some(&(i, j, k)) = self.triples.iter().find(|&&(i, j, k)| !(i < j && j < k && k < self.n)) {
            return bad(format!("triple ({i}, {j}, {k}) is not increasing within 0..{}", self.n));
        }
        let mut count = vec![0usize; self.n_elements()];
        for s in &self.sets {
            for &e in s {
                if e >= count.len() {
                    return bad(format!("element {e} outside the universe"));
                }
                count[e] += 1;
            }
        }
        if let Some(e) = (0..count.len()).find(|&e| count[e] != 2) {
            return bad(format!("element {} lies in {} sets, want 2", self.element_name(e), count[e]));
        }
        Ok(())
    }
}

/// A random valid instance: every `a_i` is listed twice, the list is
/// shuffled and cut into triples until no triple repeats an element.
pub fn gen_spsc(m: usize, seed: u64) -> Result<SpscInstance> {
    if m == 0 || m % 2 == 1 {
        return Err(Error::InvalidParameter(format!("m must be even and positive, got {m}")));
    }
    let n = 3 * m / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<usize> = (0..n).flat_map(|i| [i, i]).collect();
    loop {
        pool.shuffle(&mut rng);
        let triples: Vec<(usize, usize, usize)> = pool
            .chunks(3)
            .map(|c| {
                let mut t = [c[0], c[1], c[2]];
                t.sort_unstable();
                (t[0], t[1], t[2])
            })
            .collect();
        if triples.iter().all(|&(i, j, k)| i < j && j < k) {
            return SpscInstance::from_triples(triples);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpscMode {
    /// Unit cost per segment.
    Cardinality,
    /// Segment lengths `1` or `1 + δ`, `δ = 1/(10m)`.
    Constrained,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpscStabbing {
    /// Rect ids are element indices; fixed segment ids are set indices.
    pub instance: StabInstance,
    pub delta: Rational,
}

/// Shifted copies of a `(1 + δ)`-wide rect for `A`, whose common part
/// `[δ, 1 + δ]` is cut into `m` horizontal bands, four thin rects per band.
/// Both modes restrict solutions to the `5m` set segments.
pub fn spsc_to_stabbing(spsc: &SpscInstance, mode: SpscMode) -> Result<SpscStabbing> {
    spsc.validate()?;
    let (n, m) = (spsc.n, spsc.m);
    let delta = frac(1, 10 * m as i64);
    let one = int(1);
    let band = 10i64;
    let top = int(band * m as i64);
    let shift = |i: usize| &delta * frac(i as i64, n as i64 - 1);
    let a_span = |i: usize| (shift(i), shift(i) + &one + &delta);
    let inner = (delta.clone(), &one + &delta);

    let mut rects = Vec::new();
    for i in 0..n {
        let (x1, x2) = a_span(i);
        rects.push(Rect::new(i as u64, x1, x2, int(0), top.clone())?);
    }
    // band t, counted from the top, spans [b, b + 10]
    let base = |t: usize| int(band * (m - 1 - t) as i64);
    for t in 0..m {
        let b = base(t);
        for (q, (lo, hi)) in [(7, 9), (5, 8), (3, 6), (1, 4)].into_iter().enumerate() {
            let id = (n + 4 * t + q) as u64;
            rects.push(Rect::new(id, inner.0.clone(), inner.1.clone(), &b + int(lo), &b + int(hi))?);
        }
    }

    let mut segs = Vec::new();
    for (t, &(i, j, k)) in spsc.triples.iter().enumerate() {
        let b = base(t);
        let at = |h: i64| &b + int(h);
        let s = 5 * t as u64;
        let (ai, aj, ak) = (a_span(i), a_span(j), a_span(k));
        segs.push(Segment::horizontal(s, ai.0, ai.1, at(9)));
        segs.push(Segment::horizontal(s + 1, inner.0.clone(), inner.1.clone(), at(8)));
        segs.push(Segment::horizontal(s + 2, aj.0, aj.1, at(6)));
        segs.push(Segment::horizontal(s + 3, inner.0.clone(), inner.1.clone(), at(4)));
        segs.push(Segment::horizontal(s + 4, ak.0, ak.1, at(2)));
    }
    for (s, set) in segs.iter().zip(&spsc.sets) {
        let mut hit: Vec<usize> = rects.iter().filter(|r| stabs(s, r)).map(|r| r.id as usize).collect();
        hit.sort_unstable();
        let mut want = set.clone();
        want.sort_unstable();
        if hit != want {
            return Err(Error::Layout(format!("segment {} stabs {hit:?}, expected {want:?}", s.id)));
        }
    }
    let objective = match mode {
        SpscMode::Cardinality => Objective::Cardinality,
        SpscMode::Constrained => Objective::Length,
    };
    Ok(SpscStabbing { instance: StabInstance::new(rects, Some(segs), objective)?, delta })
}
