//! Split the family into F1 and F2, send each element to the side holding
//! enough of its LP mass, scale, solve both sides and take the union.

use num_traits::{One, Zero};

use super::lp::FractionalSolution;
use super::SetCoverInstance;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Outcome of one decomposition step, in indices of the parent instance.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub u1: Vec<usize>,
    pub u2: Vec<usize>,
    pub chosen: Vec<usize>,
    pub cost: Rational,
}

/// A side's solver: gets the restricted instance and the scaled fractional
/// solution, returns chosen set indices of that instance.
pub type Rounder<'a> =
    dyn Fn(&SetCoverInstance, &FractionalSolution) -> Result<Vec<usize>> + Sync + 'a;

/// `in_f1[i]` says whether `sc.sets[i]` belongs to F1. `z` must be feasible
/// for `sc`.
pub fn decompose_and_conquer(
    sc: &SetCoverInstance,
    in_f1: &[bool],
    z: &FractionalSolution,
    a1: &Rational,
    a2: &Rational,
    rounder1: &Rounder<'_>,
    rounder2: &Rounder<'_>,
) -> Result<Decomposition> {
    if in_f1.len() != sc.n_sets() || z.z.len() != sc.n_sets() {
        return Err(Error::InvalidParameter("partition or z does not match the set family".into()));
    }
    if *a1 <= Rational::zero() || *a2 <= Rational::zero() {
        return Err(Error::InvalidParameter("decomposition factors must be positive".into()));
    }
    let total = a1 + a2;
    let threshold = a1 / &total;

    let mut mass1 = vec![Rational::zero(); sc.n_elements()];
    for (i, s) in sc.sets.iter().enumerate() {
        if in_f1[i] && !z.z[i].is_zero() {
            for e in s.members.iter() {
                mass1[e] += &z.z[i];
            }
        }
    }
    let (u1, u2): (Vec<usize>, Vec<usize>) =
        (0..sc.n_elements()).partition(|&e| mass1[e] >= threshold);

    let f1: Vec<usize> = (0..sc.n_sets()).filter(|&i| in_f1[i]).collect();
    let f2: Vec<usize> = (0..sc.n_sets()).filter(|&i| !in_f1[i]).collect();

    let side = |family: u8, elems: &[usize], sets: &[usize], factor: Rational, rounder: &Rounder<'_>| -> Result<Vec<usize>> {
        if elems.is_empty() {
            return Ok(Vec::new());
        }
        let sub = sc.restrict(elems, sets);
        let one = Rational::one();
        let zs: Vec<Rational> = sets
            .iter()
            .map(|&i| {
                let v = &factor * &z.z[i];
                if v > one { one.clone() } else { v }
            })
            .collect();
        let objective = sub.sets.iter().zip(&zs).fold(Rational::zero(), |a, (s, v)| a + &s.cost * v);
        let scaled = FractionalSolution { z: zs, objective, duals: Vec::new() };
        for (k, cov) in scaled.coverage(&sub).iter().enumerate() {
            if *cov < one {
                return Err(Error::InfeasibleScaledLp { family, element: sub.elements[k] });
            }
        }
        let picked = rounder(&sub, &scaled)?;
        if let Some(&k) = sub.uncovered_by(&picked).first() {
            return Err(Error::InfeasibleSubCover { family, element: sub.elements[k] });
        }
        Ok(picked.into_iter().map(|k| sets[k]).collect())
    };

    let (r1, r2) = rayon::join(
        || side(1, &u1, &f1, &total / a1, rounder1),
        || side(2, &u2, &f2, &total / a2, rounder2),
    );
    let mut chosen = r1?;
    chosen.extend(r2?);
    chosen.sort_unstable();
    chosen.dedup();
    let cost = sc.cost_of(&chosen);
    Ok(Decomposition { u1, u2, chosen, cost })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{exact_cover, lp_solve};
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    fn exact_rounder(sub: &SetCoverInstance, _: &FractionalSolution) -> Result<Vec<usize>> {
        Ok(exact_cover(sub, 1_000_000)?.chosen)
    }

    #[test]
    fn empty_f2_defers_to_rounder1() {
        let sc = SetCoverInstance::new(2, vec![(0, vec![0, 1], int(3)), (1, vec![0], int(1))]).unwrap();
        let z = lp_solve(&sc);
        let d = decompose_and_conquer(&sc, &[true, true], &z, &int(1), &int(1), &exact_rounder, &exact_rounder)
            .unwrap();
        assert_eq!(d.u1, vec![0, 1]);
        assert!(d.u2.is_empty());
        assert_eq!(d.chosen, vec![0]);
    }

    #[test]
    fn tie_goes_to_u1() {
        let sc = SetCoverInstance::new(1, vec![(0, vec![0], int(1)), (1, vec![0], int(1))]).unwrap();
        let z = FractionalSolution { z: vec![frac(1, 2), frac(1, 2)], objective: int(1), duals: vec![] };
        let d = decompose_and_conquer(&sc, &[true, false], &z, &int(1), &int(1), &exact_rounder, &exact_rounder)
            .unwrap();
        assert_eq!(d.u1, vec![0]);
        assert_eq!(d.chosen, vec![0]);
    }

    #[test]
    fn bad_rounder_is_reported() {
        let sc = SetCoverInstance::new(1, vec![(0, vec![0], int(1))]).unwrap();
        let z = lp_solve(&sc);
        let lazy = |_: &SetCoverInstance, _: &FractionalSolution| -> Result<Vec<usize>> { Ok(vec![]) };
        let err = decompose_and_conquer(&sc, &[true], &z, &int(1), &int(1), &lazy, &lazy).unwrap_err();
        assert!(matches!(err, Error::InfeasibleSubCover { family: 1, element: 0 }));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn exact_sides_stay_within_twice_lp(
            m in 1usize..7,
            raw in proptest::collection::vec((proptest::collection::vec(0usize..6, 1..6), 1i64..12, any::<bool>()), 1..10),
            singles in proptest::collection::vec(any::<bool>(), 6),
        ) {
            let mut sets: Vec<(u64, Vec<usize>, Rational)> = Vec::new();
            let mut part = Vec::new();
            for (i, (mem, c, f)) in raw.into_iter().enumerate() {
                sets.push((i as u64, mem.into_iter().map(|e| e % m).collect(), int(c)));
                part.push(f);
            }
            let base = sets.len() as u64;
            for (e, &single) in singles.iter().enumerate().take(m) {
                sets.push((base + e as u64, vec![e], int(15)));
                part.push(single);
            }
            let sc = SetCoverInstance::new(m, sets).unwrap();
            let z = lp_solve(&sc);
            let d = decompose_and_conquer(&sc, &part, &z, &int(1), &int(1), &exact_rounder, &exact_rounder).unwrap();
            prop_assert_eq!(d.u1.len() + d.u2.len(), m);
            prop_assert!(d.u1.iter().all(|e| !d.u2.contains(e)));
            prop_assert!(sc.covers(&d.chosen));
            prop_assert!(d.cost <= int(2) * &z.objective);
        }
    }
}
