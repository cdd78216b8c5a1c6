use proptest::prelude::*;

use segstab_core::approx::{approx_hv, approx_stab, RoundingParams};
use segstab_core::candidates::{candidate_segments, candidate_segments_oriented, prune_dominated};
use segstab_core::cover::exact::{exact_cover, DEFAULT_NODE_BUDGET};
use segstab_core::cover::greedy::{greedy_cover, GreedyMode};
use segstab_core::cover::{chosen_segments, lp_solve, to_set_cover};
use segstab_core::forge::{embed_piercing_3d, gen_random, piercing_mismatches, RandomParams};
use segstab_core::io::{read_instance, read_solution, write_instance, write_solution};
use segstab_core::laminar::laminarize;
use segstab_core::scc::cell_count;
use segstab_core::{canonicalize_solution, verify_solution, Orientation, Solution, StabInstance};

fn instance(n: usize, seed: u64) -> StabInstance {
    gen_random(n, seed, &RandomParams::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn json_round_trip(n in 1usize..15, seed in any::<u64>()) {
        let inst = instance(n, seed);
        prop_assert_eq!(read_instance(&write_instance(&inst).unwrap()).unwrap(), inst.clone());
        let cands = prune_dominated(&candidate_segments(&inst.rects), &inst.rects);
        let sc = to_set_cover(&inst, &cands).unwrap();
        let sol = Solution::from_segments(chosen_segments(&sc, &greedy_cover(&sc, GreedyMode::Count), &cands), inst.objective)
            .with_assignment(&inst.rects);
        prop_assert_eq!(read_solution(&write_solution(&sol, None).unwrap()).unwrap(), sol);
    }

    #[test]
    fn canonical_form_is_feasible_cheaper_and_idempotent(n in 1usize..12, seed in any::<u64>()) {
        let inst = instance(n, seed);
        let cands = candidate_segments(&inst.rects);
        let sc = to_set_cover(&inst, &cands).unwrap();
        let sol = Solution::from_segments(chosen_segments(&sc, &greedy_cover(&sc, GreedyMode::Width), &cands), inst.objective);
        let canon = canonicalize_solution(&inst, &sol).unwrap();
        prop_assert!(verify_solution(&inst, &canon).feasible);
        prop_assert!(canon.cost <= sol.cost);
        prop_assert_eq!(canonicalize_solution(&inst, &canon).unwrap(), canon);
    }

    #[test]
    fn approx_is_feasible_and_bounded_below_by_opt(n in 1usize..10, seed in any::<u64>(), rs in 0u64..4) {
        let inst = instance(n, seed);
        let out = approx_stab(&inst, &RoundingParams { seed: rs, trials: 8, ..Default::default() }).unwrap();
        let rep = verify_solution(&inst, &out.solution);
        prop_assert!(rep.feasible && rep.cost_matches);
        let cands = prune_dominated(&candidate_segments(&inst.rects), &inst.rects);
        let sc = to_set_cover(&inst, &cands).unwrap();
        let opt = exact_cover(&sc, DEFAULT_NODE_BUDGET).unwrap().cost;
        prop_assert_eq!(&out.stats.lp_bound, &lp_solve(&sc).objective);
        prop_assert!(out.stats.lp_bound <= opt && opt <= out.solution.cost);
        let hv = approx_hv(&inst, &RoundingParams { seed: rs, trials: 8, ..Default::default() }).unwrap();
        prop_assert!(verify_solution(&inst, &hv.solution).feasible);
        prop_assert!(hv.stats.lp_bound <= out.stats.lp_bound);
    }

    #[test]
    fn vertical_piercing_lift_agrees(n in 1usize..10, seed in any::<u64>()) {
        let inst = instance(n, seed);
        let segs = candidate_segments_oriented(&inst.rects, Orientation::Vertical);
        let lift = embed_piercing_3d(&inst.rects, &segs).unwrap();
        prop_assert_eq!(piercing_mismatches(&inst.rects, &segs, &lift), 0);
    }

    #[test]
    fn laminar_families_have_shallow_cells(n in 2usize..14, seed in any::<u64>()) {
        let inst = instance(n, seed);
        let lam = laminarize(&inst.rects, &prune_dominated(&candidate_segments(&inst.rects), &inst.rects)).unwrap();
        for f in [1, 2] {
            let fam = lam.family(f);
            let m = fam.len();
            for k in 1..=m.min(6) {
                prop_assert!(cell_count(&inst.rects, &fam, k).unwrap() <= m * k * k);
            }
        }
    }
}
