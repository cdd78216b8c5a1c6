//! Weighted set cover: model, LP relaxation, exact search, greedy and the
//! two-family decomposition.

pub mod decompose;
pub mod exact;
pub mod greedy;
pub mod lp;

use num_traits::{One, Zero};

use crate::bitset::BitSet;
use crate::candidates::stab_sets;
use crate::error::{Error, Result};
use crate::geom::{Objective, Segment, StabInstance};
use crate::rational::Rational;

pub use decompose::{decompose_and_conquer, Decomposition};
pub use exact::{exact_cover, node_budget_from_env, CoverStatus, ExactResult, DEFAULT_NODE_BUDGET};
pub use greedy::{greedy_cover, GreedyMode};
pub use lp::{lp_solve, lp_solve_f64, FractionalSolution};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSet {
    pub id: u64,
    /// Indices into [`SetCoverInstance::elements`].
    pub members: BitSet,
    pub cost: Rational,
}

/// `(U, F, c)`. Elements are addressed by position; `elements[i]` is the
/// external id (a rect id for stabbing instances).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetCoverInstance {
    pub elements: Vec<u64>,
    /// Multiplicity of each element, used by greedy gains.
    pub weights: Vec<u64>,
    /// Width of each element, used by width-mode greedy.
    pub widths: Vec<Rational>,
    pub sets: Vec<CoverSet>,
}

impl SetCoverInstance {
    /// Plain instance with unit weights and widths.
    pub fn new(n_elements: usize, sets: Vec<(u64, Vec<usize>, Rational)>) -> Result<Self> {
        let sets = sets
            .into_iter()
            .map(|(id, members, cost)| {
                let mut b = BitSet::new(n_elements);
                for e in members {
                    if e >= n_elements {
                        return Err(Error::InvalidParameter(format!(
                            "set {id} references element {e} outside the universe"
                        )));
                    }
                    b.insert(e);
                }
                Ok(CoverSet { id, members: b, cost })
            })
            .collect::<Result<Vec<_>>>()?;
        let sc = SetCoverInstance {
            elements: (0..n_elements as u64).collect(),
            weights: vec![1; n_elements],
            widths: vec![Rational::one(); n_elements],
            sets,
        };
        sc.validate()?;
        Ok(sc)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(s) = self.sets.iter().find(|s| s.cost <= Rational::zero()) {
            return Err(Error::InvalidParameter(format!("set {} has non-positive cost", s.id)));
        }
        let mut covered = BitSet::new(self.n_elements());
        for s in &self.sets {
            covered.union_with(&s.members);
        }
        if let Some(e) = (0..self.n_elements()).find(|&e| !covered.contains(e)) {
            return Err(Error::Uncoverable(self.elements[e]));
        }
        Ok(())
    }

    pub fn n_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn n_sets(&self) -> usize {
        self.sets.len()
    }

    pub fn cost_of(&self, chosen: &[usize]) -> Rational {
        chosen.iter().fold(Rational::zero(), |acc, &i| acc + &self.sets[i].cost)
    }

    pub fn covers(&self, chosen: &[usize]) -> bool {
        self.uncovered_by(chosen).is_empty()
    }

    pub fn uncovered_by(&self, chosen: &[usize]) -> Vec<usize> {
        let mut covered = BitSet::new(self.n_elements());
        for &i in chosen {
            covered.union_with(&self.sets[i].members);
        }
        (0..self.n_elements()).filter(|&e| !covered.contains(e)).collect()
    }

    /// Restrict to the given elements and sets. Sets keep their ids; element
    /// indices are renumbered in the given order.
    pub fn restrict(&self, elements: &[usize], sets: &[usize]) -> SetCoverInstance {
        let sub_sets = sets
            .iter()
            .map(|&i| {
                let s = &self.sets[i];
                let mut b = BitSet::new(elements.len());
                for (k, &e) in elements.iter().enumerate() {
                    if s.members.contains(e) {
                        b.insert(k);
                    }
                }
                CoverSet { id: s.id, members: b, cost: s.cost.clone() }
            })
            .collect();
        SetCoverInstance {
            elements: elements.iter().map(|&e| self.elements[e]).collect(),
            weights: elements.iter().map(|&e| self.weights[e]).collect(),
            widths: elements.iter().map(|&e| self.widths[e].clone()).collect(),
            sets: sub_sets,
        }
    }
}

/// One set per candidate that stabs something; members are the stabbed
/// rects, cost is the length (or 1 in cardinality mode). Rect multiplicities
/// become element weights.
pub fn to_set_cover(inst: &StabInstance, cands: &[Segment]) -> Result<SetCoverInstance> {
    let stabbed = stab_sets(cands, &inst.rects);
    let mut covered = BitSet::new(inst.rects.len());
    let mut sets = Vec::new();
    for (s, members) in cands.iter().zip(stabbed) {
        if members.is_empty() {
            continue;
        }
        covered.union_with(&members);
        let cost = match inst.objective {
            Objective::Length => s.len(),
            Objective::Cardinality => Rational::one(),
        };
        sets.push(CoverSet { id: s.id, members, cost });
    }
    if let Some(i) = (0..inst.rects.len()).find(|&i| !covered.contains(i)) {
        return Err(Error::Uncoverable(inst.rects[i].id));
    }
    Ok(SetCoverInstance {
        elements: inst.rects.iter().map(|r| r.id).collect(),
        weights: inst.rects.iter().map(|r| r.multiplicity as u64).collect(),
        widths: inst.rects.iter().map(|r| r.width()).collect(),
        sets,
    })
}

/// Map chosen set indices back to the candidate segments with those ids.
pub fn chosen_segments(sc: &SetCoverInstance, chosen: &[usize], cands: &[Segment]) -> Vec<Segment> {
    let mut ids: Vec<u64> = chosen.iter().map(|&i| sc.sets[i].id).collect();
    ids.sort_unstable();
    ids.dedup();
    ids.iter()
        .map(|id| cands.iter().find(|s| s.id == *id).expect("set id from candidate list").clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Rect;
    use crate::rational::int;

    #[test]
    fn one_rect_one_candidate() {
        let inst = StabInstance::unconstrained(vec![
            Rect::new(5, int(0), int(2), int(0), int(1)).unwrap()
        ])
        .unwrap();
        let cands = vec![Segment::horizontal(0, int(0), int(2), int(1))];
        let sc = to_set_cover(&inst, &cands).unwrap();
        assert_eq!(sc.elements, vec![5]);
        assert_eq!(sc.sets.len(), 1);
        assert_eq!(sc.sets[0].cost, int(2));
        assert_eq!(sc.sets[0].members.iter().collect::<Vec<_>>(), vec![0]);

        let card = StabInstance::new(inst.rects.clone(), None, Objective::Cardinality).unwrap();
        let sc = to_set_cover(&card, &cands).unwrap();
        assert_eq!(sc.sets[0].cost, int(1));
    }

    #[test]
    fn uncoverable_rect_is_reported() {
        let inst = StabInstance::unconstrained(vec![
            Rect::new(5, int(0), int(2), int(0), int(1)).unwrap(),
            Rect::new(6, int(10), int(12), int(0), int(1)).unwrap(),
        ])
        .unwrap();
        let cands = vec![Segment::horizontal(0, int(0), int(2), int(1))];
        assert!(matches!(to_set_cover(&inst, &cands), Err(Error::Uncoverable(6))));
    }

    #[test]
    fn restrict_renumbers() {
        let sc = SetCoverInstance::new(
            3,
            vec![(10, vec![0, 2], int(1)), (11, vec![1], int(1)), (12, vec![2], int(5))],
        )
        .unwrap();
        let sub = sc.restrict(&[2], &[0, 2]);
        assert_eq!(sub.elements, vec![2]);
        assert_eq!(sub.sets.iter().map(|s| s.id).collect::<Vec<_>>(), vec![10, 12]);
        assert!(sub.covers(&[1]));
    }
}
