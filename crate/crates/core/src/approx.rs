//! LP-relative stabbing: laminarize the candidates, solve one LP, split it
//! between the laminar families and round each side by sampling.

use std::collections::HashMap;

use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::BitSet;
use crate::candidates::{candidate_segments_oriented, prune_dominated, stab_sets};
use crate::cover::greedy::greedy_from;
use crate::cover::{
    decompose_and_conquer, lp_solve, to_set_cover, CoverSet, FractionalSolution, GreedyMode,
    SetCoverInstance,
};
use crate::error::{Error, Result};
use crate::geom::{
    canonicalize_solution, stabs, trim_to, Objective, Orientation, Rect, Segment, Solution,
    StabInstance,
};
use crate::laminar::laminarize;
use crate::rational::{int, serde_frac, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundingParams {
    pub seed: u64,
    pub trials: usize,
    /// Each set is kept with probability `min(1, λ·z)` for every λ here.
    pub inflation: Vec<Rational>,
    pub repair: GreedyMode,
}

impl Default for RoundingParams {
    fn default() -> Self {
        RoundingParams { seed: 0, trials: 32, inflation: vec![int(2), int(4), int(8)], repair: GreedyMode::Count }
    }
}

impl RoundingParams {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if self.inflation.is_empty() || self.inflation.iter().any(|l| *l < Rational::one()) {
            return Err(Error::InvalidParameter("inflation values must be >= 1 and nonempty".into()));
        }
        Ok(())
    }

    fn reseeded(&self, salt: u64) -> RoundingParams {
        RoundingParams { seed: self.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15), ..self.clone() }
    }
}

/// Set cover over the given rects and segments with sets aligned to `segs`
/// (empty stab sets included).
fn aligned_cover(rects: &[Rect], segs: &[Segment], objective: Objective) -> SetCoverInstance {
    let sets = segs
        .iter()
        .zip(stab_sets(segs, rects))
        .map(|(s, members)| CoverSet { id: s.id, members, cost: s.cost(objective) })
        .collect();
    SetCoverInstance {
        elements: rects.iter().map(|r| r.id).collect(),
        weights: rects.iter().map(|r| r.multiplicity as u64).collect(),
        widths: rects.iter().map(Rect::width).collect(),
        sets,
    }
}

/// Drop sets whose elements are all covered by the others, most expensive
/// first.
fn drop_redundant(sc: &SetCoverInstance, chosen: &mut Vec<usize>) {
    let mut order = chosen.clone();
    order.sort_by(|&a, &b| sc.sets[b].cost.cmp(&sc.sets[a].cost).then(b.cmp(&a)));
    let mut count = vec![0usize; sc.n_elements()];
    for &i in chosen.iter() {
        for e in sc.sets[i].members.iter() {
            count[e] += 1;
        }
    }
    let mut keep = BitSet::new(sc.n_sets());
    for &i in chosen.iter() {
        keep.insert(i);
    }
    for i in order {
        if sc.sets[i].members.iter().all(|e| count[e] > 1) {
            for e in sc.sets[i].members.iter() {
                count[e] -= 1;
            }
            keep.remove(i);
        }
    }
    chosen.retain(|&i| keep.contains(i));
}

/// Assign each rect to the first chosen segment stabbing it and trim.
fn trimmed(rects: &[Rect], segs: &[Segment], chosen: &[usize]) -> Vec<Segment> {
    let mut mine: Vec<Vec<&Rect>> = vec![Vec::new(); chosen.len()];
    for r in rects {
        if let Some(k) = chosen.iter().position(|&i| stabs(&segs[i], r)) {
            mine[k].push(r);
        }
    }
    chosen.iter().zip(&mine).filter_map(|(&i, rs)| trim_to(&segs[i], rs)).collect()
}

/// Sample-and-repair rounding of `z` (aligned with `segs`) over `rects`.
/// Every trial and inflation value gives one candidate cover; the cheapest
/// after trimming wins, ties going to the smaller sorted id list.
pub fn round_laminar(
    rects: &[Rect],
    segs: &[Segment],
    z: &[Rational],
    objective: Objective,
    params: &RoundingParams,
) -> Result<Solution> {
    params.validate()?;
    if z.len() != segs.len() {
        return Err(Error::InvalidParameter("z must have one value per segment".into()));
    }
    let sc = aligned_cover(rects, segs, objective);
    let all: Vec<usize> = (0..segs.len()).collect();
    let zf: Vec<f64> = z.iter().map(|v| v.to_f64().unwrap_or(0.0)).collect();
    let lambdas: Vec<f64> = params.inflation.iter().map(|l| l.to_f64().unwrap_or(1.0)).collect();

    let outcomes: Vec<(Rational, Vec<u64>, Vec<Segment>)> = (0..params.trials as u64)
        .into_par_iter()
        .flat_map_iter(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            rng.set_stream(t);
            let draws: Vec<Vec<f64>> =
                lambdas.iter().map(|_| (0..segs.len()).map(|_| rng.gen::<f64>()).collect()).collect();
            let (sc, all, zf, lambdas) = (&sc, &all, &zf, &lambdas);
            draws.into_iter().zip(lambdas.iter()).map(move |(u, &lambda)| {
                // z = 1 sets are always kept; z = 0 never
                let mut chosen: Vec<usize> = (0..segs.len())
                    .filter(|&i| z[i] >= Rational::one() || (!z[i].is_zero() && u[i] < (lambda * zf[i]).min(1.0)))
                    .collect();
                let mut uncovered = BitSet::full(sc.n_elements());
                for &i in &chosen {
                    uncovered.difference_with(&sc.sets[i].members);
                }
                chosen.extend(greedy_from(sc, params.repair, &mut uncovered, all));
                chosen.sort_unstable();
                chosen.dedup();
                drop_redundant(sc, &mut chosen);
                let out = trimmed(rects, segs, &chosen);
                let cost = out.iter().fold(Rational::zero(), |a, s| a + s.cost(objective));
                let mut ids: Vec<u64> = out.iter().map(|s| s.id).collect();
                ids.sort_unstable();
                (cost, ids, out)
            })
        })
        .collect();
    let (_, _, best) = outcomes
        .into_iter()
        .min_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)))
        .expect("at least one trial");
    if let Some(r) = rects.iter().find(|r| !best.iter().any(|s| stabs(s, r))) {
        return Err(Error::Uncoverable(r.id));
    }
    Ok(Solution::from_segments(best, objective))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApproxStats {
    /// LP optimum over the canonical candidates; a lower bound on any cover.
    #[serde(with = "serde_frac")]
    pub lp_bound: Rational,
    #[serde(with = "serde_frac")]
    pub cost: Rational,
    pub ratio_vs_lp: f64,
    pub candidates: usize,
    pub pruned: usize,
    pub laminar_segments: usize,
    /// LP optimum over the laminarized family.
    #[serde(with = "serde_frac")]
    pub lp_laminar: Rational,
}

#[derive(Clone, Debug)]
pub struct ApproxOutcome {
    pub solution: Solution,
    pub stats: ApproxStats,
}

struct Prepared {
    candidates: usize,
    pruned: Vec<Segment>,
    lp_bound: Rational,
    /// Laminar segments with fresh ids, and their family tag:
    /// `(orientation, laminar family)`.
    laminar: Vec<Segment>,
    tags: Vec<(Orientation, u8)>,
}

fn prepare(inst: &StabInstance, orientations: &[Orientation]) -> Result<Prepared> {
    if inst.is_constrained() {
        return Err(Error::ConstrainedInstance);
    }
    inst.validate()?;
    let mut candidates = 0;
    let mut pruned = Vec::new();
    let mut laminar = Vec::new();
    let mut tags = Vec::new();
    for &o in orientations {
        let cands = candidate_segments_oriented(&inst.rects, o);
        candidates += cands.len();
        let kept = prune_dominated(&cands, &inst.rects);
        let lam = laminarize(&inst.rects, &kept)?;
        for s in &lam.snapped {
            laminar.push(s.segment.clone().with_id(laminar.len() as u64));
            tags.push((o, s.family));
        }
        pruned.extend(kept);
    }
    let pruned: Vec<Segment> =
        pruned.into_iter().enumerate().map(|(i, s)| s.with_id(i as u64)).collect();
    let lp_bound = if inst.rects.is_empty() {
        Rational::zero()
    } else {
        lp_solve(&to_set_cover(inst, &pruned)?).objective
    };
    Ok(Prepared { candidates, pruned, lp_bound, laminar, tags })
}

type SideRounder<'a> =
    Box<dyn Fn(&SetCoverInstance, &FractionalSolution) -> Result<Vec<usize>> + Sync + 'a>;

/// Rounder for one laminar family: maps the sub-instance back to geometry,
/// rounds, and returns the chosen set positions.
fn laminar_rounder<'a>(
    inst: &'a StabInstance,
    rect_pos: &'a HashMap<u64, usize>,
    segs: &'a [Segment],
    params: RoundingParams,
) -> SideRounder<'a> {
    Box::new(move |sub: &SetCoverInstance, z: &FractionalSolution| {
        let rects: Vec<Rect> = sub.elements.iter().map(|id| inst.rects[rect_pos[id]].clone()).collect();
        let fam: Vec<Segment> = sub.sets.iter().map(|s| segs[s.id as usize].clone()).collect();
        let sol = round_laminar(&rects, &fam, &z.z, inst.objective, &params)?;
        let pos: HashMap<u64, usize> = sub.sets.iter().enumerate().map(|(k, s)| (s.id, k)).collect();
        Ok(sol.segments.iter().map(|s| pos[&s.id]).collect())
    })
}

/// Decompose on `split` and round both halves with laminar rounders.
fn split_rounder<'a>(
    inst: &'a StabInstance,
    rect_pos: &'a HashMap<u64, usize>,
    segs: &'a [Segment],
    tags: &'a [(Orientation, u8)],
    split: fn(&(Orientation, u8)) -> bool,
    params: RoundingParams,
) -> SideRounder<'a> {
    Box::new(move |sub: &SetCoverInstance, z: &FractionalSolution| {
        let in_f1: Vec<bool> = sub.sets.iter().map(|s| split(&tags[s.id as usize])).collect();
        let r1 = laminar_rounder(inst, rect_pos, segs, params.reseeded(1));
        let r2 = laminar_rounder(inst, rect_pos, segs, params.reseeded(2));
        Ok(decompose_and_conquer(sub, &in_f1, z, &int(1), &int(1), &*r1, &*r2)?.chosen)
    })
}

fn finish(inst: &StabInstance, prep: &Prepared, chosen: &[usize], sc: &SetCoverInstance, lp_laminar: Rational) -> Result<ApproxOutcome> {
    let segs: Vec<Segment> = chosen.iter().map(|&i| prep.laminar[sc.sets[i].id as usize].clone()).collect();
    let solution = canonicalize_solution(inst, &Solution::from_segments(segs, inst.objective))?;
    let ratio_vs_lp = if prep.lp_bound.is_zero() {
        if solution.cost.is_zero() { 1.0 } else { f64::INFINITY }
    } else {
        (&solution.cost / &prep.lp_bound).to_f64().unwrap_or(f64::INFINITY)
    };
    Ok(ApproxOutcome {
        stats: ApproxStats {
            lp_bound: prep.lp_bound.clone(),
            cost: solution.cost.clone(),
            ratio_vs_lp,
            candidates: prep.candidates,
            pruned: prep.pruned.len(),
            laminar_segments: prep.laminar.len(),
            lp_laminar,
        },
        solution,
    })
}

fn run(inst: &StabInstance, params: &RoundingParams, orientations: &[Orientation]) -> Result<ApproxOutcome> {
    params.validate()?;
    let prep = prepare(inst, orientations)?;
    if inst.rects.is_empty() {
        return finish(inst, &prep, &[], &SetCoverInstance { elements: vec![], weights: vec![], widths: vec![], sets: vec![] }, Rational::zero());
    }
    let sc = to_set_cover(inst, &prep.laminar)?;
    let z = lp_solve(&sc);
    let rect_pos: HashMap<u64, usize> = inst.rects.iter().enumerate().map(|(i, r)| (r.id, i)).collect();
    let chosen = if orientations.len() == 1 {
        let in_f1: Vec<bool> = sc.sets.iter().map(|s| prep.tags[s.id as usize].1 == 1).collect();
        let r1 = laminar_rounder(inst, &rect_pos, &prep.laminar, params.reseeded(1));
        let r2 = laminar_rounder(inst, &rect_pos, &prep.laminar, params.reseeded(2));
        decompose_and_conquer(&sc, &in_f1, &z, &int(1), &int(1), &*r1, &*r2)?.chosen
    } else {
        let in_h: Vec<bool> =
            sc.sets.iter().map(|s| prep.tags[s.id as usize].0 == Orientation::Horizontal).collect();
        let f1 = |t: &(Orientation, u8)| t.1 == 1;
        let rh = split_rounder(inst, &rect_pos, &prep.laminar, &prep.tags, f1, params.reseeded(3));
        let rv = split_rounder(inst, &rect_pos, &prep.laminar, &prep.tags, f1, params.reseeded(4));
        decompose_and_conquer(&sc, &in_h, &z, &int(1), &int(1), &*rh, &*rv)?.chosen
    };
    finish(inst, &prep, &chosen, &sc, z.objective)
}

/// Horizontal stabbing through the laminar LP pipeline.
pub fn approx_stab(inst: &StabInstance, params: &RoundingParams) -> Result<ApproxOutcome> {
    run(inst, params, &[Orientation::Horizontal])
}

/// Horizontal-vertical stabbing: one LP over both laminarized families,
/// split first by orientation and then by laminar family.
pub fn approx_hv(inst: &StabInstance, params: &RoundingParams) -> Result<ApproxOutcome> {
    run(inst, params, &[Orientation::Horizontal, Orientation::Vertical])
}

/// LP optimum over both orientations' canonical candidates.
pub fn hv_lp_bound(inst: &StabInstance) -> Result<Rational> {
    Ok(prepare(inst, &[Orientation::Horizontal, Orientation::Vertical])?.lp_bound)
}

/// Both orientations' pruned canonical candidates, ids `0..`.
pub fn hv_candidates(rects: &[Rect]) -> Vec<Segment> {
    [Orientation::Horizontal, Orientation::Vertical]
        .iter()
        .flat_map(|&o| prune_dominated(&candidate_segments_oriented(rects, o), rects))
        .enumerate()
        .map(|(i, s)| s.with_id(i as u64))
        .collect()
}
