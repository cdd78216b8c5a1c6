//! Shallow-cell complexity measurements.
//!
//! A cell of a segment family is a class of rects stabbed by exactly the
//! same segments. Only rects stabbed by between 1 and `k` segments count;
//! rects stabbed by nothing are reported as orphans.

use std::collections::{BTreeMap, HashSet};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bitset::BitSet;
use crate::candidates::stab_sets;
use crate::error::{Error, Result};
use crate::geom::{Rect, Segment};

/// Largest family handled by [`scc_exhaustive`].
pub const EXHAUSTIVE_MAX_M: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellCensus {
    pub cells: usize,
    pub orphans: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ProfileRow {
    pub m: usize,
    pub k: usize,
    pub cells: usize,
}

/// For every rect, the set of segment indices stabbing it.
fn stabbers(rects: &[Rect], segs: &[Segment]) -> Vec<BitSet> {
    let by_seg = stab_sets(segs, rects);
    let mut by_rect = vec![BitSet::new(segs.len()); rects.len()];
    for (s, set) in by_seg.iter().enumerate() {
        for r in set.iter() {
            by_rect[r].insert(s);
        }
    }
    by_rect
}

fn census_masked(by_rect: &[BitSet], mask: Option<&BitSet>, k: usize) -> CellCensus {
    let mut seen: HashSet<BitSet> = HashSet::new();
    let mut orphans = 0;
    for set in by_rect {
        let mut key = set.clone();
        if let Some(m) = mask {
            key.intersect_with(m);
        }
        let d = key.len();
        if d == 0 {
            orphans += 1;
        } else if d <= k {
            seen.insert(key);
        }
    }
    CellCensus { cells: seen.len(), orphans }
}

pub fn cell_census(rects: &[Rect], segs: &[Segment], k: usize) -> Result<CellCensus> {
    if k == 0 || k > segs.len() {
        return Err(Error::InvalidParameter(format!("k = {k} outside 1..={}", segs.len())));
    }
    Ok(census_masked(&stabbers(rects, segs), None, k))
}

pub fn cell_count(rects: &[Rect], segs: &[Segment], k: usize) -> Result<usize> {
    Ok(cell_census(rects, segs, k)?.cells)
}

fn fold_rows(rows: impl IntoIterator<Item = ProfileRow>) -> Vec<ProfileRow> {
    let mut best: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for r in rows {
        let e = best.entry((r.m, r.k)).or_insert(0);
        *e = (*e).max(r.cells);
    }
    best.into_iter().map(|((m, k), cells)| ProfileRow { m, k, cells }).collect()
}

fn rows_for(by_rect: &[BitSet], mask: &BitSet) -> Vec<ProfileRow> {
    let m = mask.len();
    (1..=m)
        .map(|k| ProfileRow { m, k, cells: census_masked(by_rect, Some(mask), k).cells })
        .collect()
}

/// Max cells per `(m', k)` over `samples` random subfamilies whose size is
/// drawn uniformly from `1..=m`. Deterministic in `seed`.
pub fn scc_profile(rects: &[Rect], segs: &[Segment], samples: usize, seed: u64) -> Vec<ProfileRow> {
    let sizes: Vec<usize> = (1..=segs.len()).collect();
    scc_profile_sizes(rects, segs, &sizes, samples, seed)
}

/// As [`scc_profile`], with subfamily sizes drawn from `sizes`.
pub fn scc_profile_sizes(
    rects: &[Rect],
    segs: &[Segment],
    sizes: &[usize],
    samples: usize,
    seed: u64,
) -> Vec<ProfileRow> {
    let m = segs.len();
    let sizes: Vec<usize> = sizes.iter().copied().filter(|&s| (1..=m).contains(&s)).collect();
    if samples == 0 || sizes.is_empty() {
        return Vec::new();
    }
    let by_rect = stabbers(rects, segs);
    let rows: Vec<ProfileRow> = (0..samples as u64)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let size = sizes[rng.gen_range(0..sizes.len())];
            let mut mask = BitSet::new(m);
            for s in sample(&mut rng, m, size) {
                mask.insert(s);
            }
            rows_for(&by_rect, &mask)
        })
        .collect();
    fold_rows(rows)
}

/// Max cells per `(m', k)` over every nonempty subfamily.
pub fn scc_exhaustive(rects: &[Rect], segs: &[Segment]) -> Result<Vec<ProfileRow>> {
    let m = segs.len();
    if m > EXHAUSTIVE_MAX_M {
        return Err(Error::InvalidParameter(format!(
            "exhaustive profile supports at most {EXHAUSTIVE_MAX_M} segments, got {m}"
        )));
    }
    let by_rect = stabbers(rects, segs);
    let rows: Vec<ProfileRow> = (1u32..(1 << m))
        .into_par_iter()
        .flat_map_iter(|bits| {
            let mut mask = BitSet::new(m);
            for s in 0..m {
                if bits >> s & 1 == 1 {
                    mask.insert(s);
                }
            }
            rows_for(&by_rect, &mask)
        })
        .collect();
    Ok(fold_rows(rows))
}
