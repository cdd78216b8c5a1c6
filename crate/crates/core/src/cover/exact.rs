//! Branch-and-bound for weighted set cover.
//!
//! Costs are scaled to integers so the search runs on `i128`. The lower
//! bound at a node starts from the root LP duals restricted to the
//! still-uncovered elements (rounded down to a fixed-point grid, which keeps
//! them dual feasible) and is then raised by dual ascent over the residual
//! slack of the sets that are still allowed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::greedy::{greedy_cover, greedy_from, GreedyMode};
use super::lp::lp_solve;
use super::SetCoverInstance;
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::rational::Rational;

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// Reads `SEGSTAB_NODE_BUDGET`, falling back to [`DEFAULT_NODE_BUDGET`].
pub fn node_budget_from_env() -> u64 {
    std::env::var("SEGSTAB_NODE_BUDGET")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_NODE_BUDGET)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverStatus {
    /// The search tree was exhausted.
    Optimal,
    /// The node budget ran out; the result is the best cover found.
    Unproven,
}

#[derive(Clone, Debug)]
pub struct ExactResult {
    /// Chosen set indices, ascending.
    pub chosen: Vec<usize>,
    pub cost: Rational,
    pub status: CoverStatus,
    pub nodes: u64,
    pub lp_bound: Rational,
}

impl ExactResult {
    pub fn is_optimal(&self) -> bool {
        self.status == CoverStatus::Optimal
    }
}

/// Fixed-point resolution for the inherited duals.
const DUAL_GRID: i128 = 1 << 20;

struct Search<'a> {
    sets: &'a [BitSet],
    costs: Vec<i128>,
    covering: Vec<Vec<usize>>,
    duals: Vec<i128>,
    /// Σ duals plus the reduced cost of each set: a lower bound on any cover
    /// using that set.
    with_set: Vec<i128>,
    budget: u64,
    nodes: u64,
    exhausted: bool,
    best_cost: i128,
    best: Vec<usize>,
    stack: Vec<usize>,
}

impl Search<'_> {
    fn usable(&self, allowed: &BitSet, s: usize) -> bool {
        allowed.contains(s) && self.with_set[s] < self.best_cost
    }

    fn bound(&self, uncovered: &BitSet, allowed: &BitSet, order: &[usize]) -> i128 {
        let mut y: Vec<i128> = vec![0; self.duals.len()];
        for e in uncovered.iter() {
            y[e] = self.duals[e];
        }
        let mut slack: Vec<Option<i128>> = vec![None; self.sets.len()];
        for &e in order {
            for &s in &self.covering[e] {
                if slack[s].is_none() && self.usable(allowed, s) {
                    let load: i128 = self.sets[s].iter().filter(|&x| uncovered.contains(x)).map(|x| y[x]).sum();
                    slack[s] = Some(self.costs[s] - load);
                }
            }
        }
        for &e in order {
            let delta = self.covering[e]
                .iter()
                .filter_map(|&s| slack[s])
                .min()
                .unwrap_or(0);
            if delta > 0 {
                y[e] += delta;
                for &s in &self.covering[e] {
                    if let Some(sl) = slack[s].as_mut() {
                        *sl -= delta;
                    }
                }
            }
        }
        order.iter().map(|&e| y[e]).sum()
    }

    fn dfs(&mut self, uncovered: &BitSet, allowed: &mut BitSet, committed: i128) {
        if self.exhausted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        if uncovered.is_empty() {
            if committed < self.best_cost {
                self.best_cost = committed;
                self.best = self.stack.clone();
            }
            return;
        }
        let mut order: Vec<(usize, usize)> = uncovered
            .iter()
            .map(|e| (self.covering[e].iter().filter(|&&s| self.usable(allowed, s)).count(), e))
            .collect();
        order.sort_unstable();
        if order[0].0 == 0 {
            return;
        }
        let order_ids: Vec<usize> = order.iter().map(|&(_, e)| e).collect();
        let lb = self.bound(uncovered, allowed, &order_ids);
        // every cover cost is a multiple of the grid
        let lb = (lb + DUAL_GRID - 1) / DUAL_GRID * DUAL_GRID;
        if committed + lb >= self.best_cost {
            return;
        }

        let pivot = order_ids[0];
        let mut children: Vec<usize> =
            self.covering[pivot].iter().copied().filter(|&s| self.usable(allowed, s)).collect();
        // cheapest per newly covered element first, for early incumbents
        let gains: Vec<i128> = children
            .iter()
            .map(|&s| self.sets[s].intersection_len(uncovered) as i128)
            .collect();
        let mut idx: Vec<usize> = (0..children.len()).collect();
        idx.sort_by(|&a, &b| {
            (self.costs[children[a]] * gains[b])
                .cmp(&(self.costs[children[b]] * gains[a]))
                .then(children[a].cmp(&children[b]))
        });
        children = idx.into_iter().map(|i| children[i]).collect();

        let mut removed = Vec::new();
        for &s in &children {
            if !self.usable(allowed, s) {
                continue;
            }
            let mut next = uncovered.clone();
            next.difference_with(&self.sets[s]);
            self.stack.push(s);
            self.dfs(&next, allowed, committed + self.costs[s]);
            self.stack.pop();
            if self.exhausted {
                break;
            }
            allowed.remove(s);
            removed.push(s);
        }
        for s in removed {
            allowed.insert(s);
        }
    }
}

fn to_i128(v: &BigInt, what: &'static str) -> Result<i128> {
    v.to_i128().ok_or(Error::Overflow(what))
}

/// Minimum-cost cover. Stops after `budget` search nodes with
/// [`CoverStatus::Unproven`] and the best cover found so far.
pub fn exact_cover(sc: &SetCoverInstance, budget: u64) -> Result<ExactResult> {
    sc.validate()?;
    let root = lp_solve(sc);

    let mut scale = BigInt::one();
    for s in &sc.sets {
        scale = scale.lcm(s.cost.denom());
    }
    let grid = BigInt::from(DUAL_GRID);
    let costs = sc
        .sets
        .iter()
        .map(|s| to_i128(&(s.cost.numer() * (&scale / s.cost.denom()) * &grid), "cost scaling"))
        .collect::<Result<Vec<_>>>()?;
    let factor = Rational::from_integer(&scale * &grid);
    let duals = root
        .duals
        .iter()
        .map(|y| to_i128(&(y * &factor).floor().to_integer(), "dual scaling"))
        .collect::<Result<Vec<_>>>()?;
    costs.iter().try_fold(0i128, |a, &c| a.checked_add(c)).ok_or(Error::Overflow("cost sum"))?;

    let sets: Vec<BitSet> = sc.sets.iter().map(|s| s.members.clone()).collect();
    let mut covering = vec![Vec::new(); sc.n_elements()];
    for (i, s) in sets.iter().enumerate() {
        for e in s.iter() {
            covering[e].push(i);
        }
    }

    let dual_total: i128 = duals.iter().sum();
    let with_set: Vec<i128> = sets
        .iter()
        .zip(&costs)
        .map(|(s, &c)| dual_total + c - s.iter().map(|e| duals[e]).sum::<i128>())
        .collect();

    // incumbent: the better of plain greedy and greedy over the LP support
    let greedy = greedy_cover(sc, GreedyMode::Count);
    let support: Vec<usize> = (0..sc.n_sets()).filter(|&i| !root.z[i].is_zero()).collect();
    let mut uncovered = BitSet::full(sc.n_elements());
    let mut rounded = greedy_from(sc, GreedyMode::Count, &mut uncovered, &support);
    if !uncovered.is_empty() {
        rounded.extend(greedy_from(sc, GreedyMode::Count, &mut uncovered, &(0..sc.n_sets()).collect::<Vec<_>>()));
    }
    let cost_of = |v: &[usize]| -> i128 { v.iter().map(|&i| costs[i]).sum() };
    let greedy = if cost_of(&rounded) < cost_of(&greedy) { rounded } else { greedy };
    let greedy_cost = cost_of(&greedy);
    let mut search = Search {
        sets: &sets,
        costs,
        covering,
        duals,
        with_set,
        budget,
        nodes: 0,
        exhausted: false,
        best_cost: greedy_cost,
        best: greedy,
        stack: Vec::new(),
    };
    let mut allowed = BitSet::full(sc.n_sets());
    search.dfs(&BitSet::full(sc.n_elements()), &mut allowed, 0);

    let mut chosen = search.best;
    chosen.sort_unstable();
    chosen.dedup();
    let cost = sc.cost_of(&chosen);
    Ok(ExactResult {
        chosen,
        cost,
        status: if search.exhausted { CoverStatus::Unproven } else { CoverStatus::Optimal },
        nodes: search.nodes,
        lp_bound: root.objective,
    })
}
