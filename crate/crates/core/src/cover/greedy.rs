//! Cost-efficiency greedy.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use super::SetCoverInstance;
use crate::bitset::BitSet;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum GreedyMode {
    /// cost per newly covered element (counting multiplicity)
    #[default]
    Count,
    /// cost per unit of newly covered width (counting multiplicity)
    Width,
}

/// Repeatedly take the set with the smallest cost per unit of gain over
/// the still-uncovered elements; ties go to the lowest set id. Returns set
/// indices in pick order.
pub fn greedy_cover(sc: &SetCoverInstance, mode: GreedyMode) -> Vec<usize> {
    let mut uncovered = BitSet::full(sc.n_elements());
    greedy_from(sc, mode, &mut uncovered, &(0..sc.n_sets()).collect::<Vec<_>>())
}

/// Greedy over the allowed sets until `uncovered` is empty or no allowed
/// set helps.
pub fn greedy_from(
    sc: &SetCoverInstance,
    mode: GreedyMode,
    uncovered: &mut BitSet,
    allowed: &[usize],
) -> Vec<usize> {
    let unit: Vec<Rational> = match mode {
        GreedyMode::Count => {
            sc.weights.iter().map(|&w| Rational::from_integer(BigInt::from(w))).collect()
        }
        GreedyMode::Width => sc
            .widths
            .iter()
            .zip(&sc.weights)
            .map(|(x, &w)| x * Rational::from_integer(BigInt::from(w)))
            .collect(),
    };
    let gain_of = |i: usize, uncovered: &BitSet| -> Rational {
        sc.sets[i]
            .members
            .iter()
            .filter(|&e| uncovered.contains(e))
            .fold(Rational::zero(), |acc, e| acc + &unit[e])
    };
    // Efficiencies only grow as elements get covered, so a popped entry
    // whose key is still current is the true minimum.
    let initial: Vec<Reverse<(Rational, u64, usize)>> = allowed
        .par_iter()
        .filter_map(|&i| {
            let gain = gain_of(i, uncovered);
            (!gain.is_zero()).then(|| Reverse((&sc.sets[i].cost / gain, sc.sets[i].id, i)))
        })
        .collect();
    let mut heap = BinaryHeap::from(initial);
    let mut picks = Vec::new();
    while !uncovered.is_empty() {
        let Some(Reverse((eff, id, i))) = heap.pop() else { break };
        let gain = gain_of(i, uncovered);
        if gain.is_zero() {
            continue;
        }
        let now = &sc.sets[i].cost / gain;
        if now == eff {
            uncovered.difference_with(&sc.sets[i].members);
            picks.push(i);
        } else {
            heap.push(Reverse((now, id, i)));
        }
    }
    picks
}
