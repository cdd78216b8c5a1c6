//! Acceptance criteria 1 to 10. Every test writes one `criterion N: PASS|FAIL`
//! line to stderr (bypassing the test harness capture) before asserting.

use std::collections::HashSet;
use std::io::Write;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use segstab_core::approx::{approx_hv, approx_stab, RoundingParams};
use segstab_core::candidates::{candidate_segments, prune_dominated};
use segstab_core::cover::exact::{exact_cover, DEFAULT_NODE_BUDGET};
use segstab_core::cover::greedy::{greedy_cover, GreedyMode};
use segstab_core::cover::{chosen_segments, lp_solve, to_set_cover};
use segstab_core::forge::{
    embed_piercing_3d, gen_double_staircase, gen_greedy_trap, gen_random, gen_scc_counterexample, RandomParams,
};
use segstab_core::hardness::{build_visibility, compile_np_instance, gen_spsc, spsc_to_stabbing, Graph, SpscMode};
use segstab_core::laminar::{is_x_laminar, laminarize};
use segstab_core::rational::{frac, int};
use segstab_core::scc::cell_count;
use segstab_core::{verify_solution, Rational, Rect, Segment, StabInstance};

fn report(n: u32, ok: bool, detail: String) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "criterion {n:>2}: {verdict}  {detail}");
    assert!(ok, "criterion {n}: {detail}");
}

// Oracles, written against the definitions and independent of the library.

fn stab_oracle(s: &Segment, r: &Rect) -> bool {
    s.x_left <= r.x_left && r.x_right <= s.x_right && r.y_bottom <= s.y && s.y <= r.y_top
}

/// Optimum by enumerating set partitions of the rects: a group is feasible
/// when its y-ranges share a point and then costs the width of its x-hull.
fn partition_optimum(rects: &[Rect]) -> Rational {
    struct Group {
        lo: Rational,
        hi: Rational,
        bottom: Rational,
        top: Rational,
    }
    fn go(rects: &[Rect], i: usize, groups: &mut Vec<Group>, best: &mut Option<Rational>) {
        if i == rects.len() {
            let cost: Rational = groups.iter().map(|g| &g.hi - &g.lo).sum();
            if best.as_ref().is_none_or(|b| cost < *b) {
                *best = Some(cost);
            }
            return;
        }
        let r = &rects[i];
        for g in 0..groups.len() {
            let bottom = groups[g].bottom.clone().max(r.y_bottom.clone());
            let top = groups[g].top.clone().min(r.y_top.clone());
            if bottom > top {
                continue;
            }
            let merged = Group {
                lo: groups[g].lo.clone().min(r.x_left.clone()),
                hi: groups[g].hi.clone().max(r.x_right.clone()),
                bottom,
                top,
            };
            let saved = std::mem::replace(&mut groups[g], merged);
            go(rects, i + 1, groups, best);
            groups[g] = saved;
        }
        groups.push(Group {
            lo: r.x_left.clone(),
            hi: r.x_right.clone(),
            bottom: r.y_bottom.clone(),
            top: r.y_top.clone(),
        });
        go(rects, i + 1, groups, best);
        groups.pop();
    }
    let mut best = None;
    go(rects, 0, &mut Vec::new(), &mut best);
    best.unwrap_or_else(Rational::zero)
}

fn laminar_oracle(segs: &[Segment]) -> bool {
    segs.iter().enumerate().all(|(i, a)| {
        segs[i + 1..].iter().all(|b| {
            let nested = (a.x_left <= b.x_left && b.x_right <= a.x_right)
                || (b.x_left <= a.x_left && a.x_right <= b.x_right);
            nested || a.x_right <= b.x_left || b.x_right <= a.x_left
        })
    })
}

/// Distinct nonempty stabbed-by signatures of depth at most `k`.
fn cells_oracle(rects: &[Rect], segs: &[Segment], k: usize) -> usize {
    let sigs: HashSet<Vec<usize>> = rects
        .iter()
        .map(|r| (0..segs.len()).filter(|&s| stab_oracle(&segs[s], r)).collect::<Vec<_>>())
        .filter(|sig| !sig.is_empty() && sig.len() <= k)
        .collect();
    sigs.len()
}

fn min_vertex_cover(g: &Graph) -> usize {
    (0u32..1 << g.n)
        .filter(|mask| g.edges.iter().all(|&(u, v)| mask >> u & 1 == 1 || mask >> v & 1 == 1))
        .map(|mask| mask.count_ones() as usize)
        .min()
        .unwrap()
}

fn min_set_cover(universe: usize, sets: &[Vec<usize>]) -> usize {
    let masks: Vec<u64> = sets.iter().map(|s| s.iter().fold(0u64, |a, &e| a | 1 << e)).collect();
    let full = (1u64 << universe) - 1;
    (0u64..1 << masks.len())
        .filter(|pick| (0..masks.len()).filter(|i| pick >> i & 1 == 1).fold(0, |a, i| a | masks[i]) == full)
        .map(|pick| pick.count_ones() as usize)
        .min()
        .unwrap()
}

fn solve_exact(inst: &StabInstance, cands: &[Segment]) -> Rational {
    let res = exact_cover(&to_set_cover(inst, cands).unwrap(), DEFAULT_NODE_BUDGET).unwrap();
    assert!(res.is_optimal(), "node budget exhausted");
    res.cost
}

fn exact_optimum(inst: &StabInstance) -> Rational {
    match &inst.fixed_candidates {
        Some(f) => solve_exact(inst, f),
        None => solve_exact(inst, &prune_dominated(&candidate_segments(&inst.rects), &inst.rects)),
    }
}

fn small_corpus(count: u64, max_n: u64) -> Vec<StabInstance> {
    let p = RandomParams::default();
    (0..count).map(|seed| gen_random((1 + seed % max_n) as usize, seed, &p).unwrap()).collect()
}

fn secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}

#[test]
fn criterion_01_oracle_consistency() {
    let start = Instant::now();
    let mut mismatches = 0;
    for inst in small_corpus(200, 7) {
        let cands = candidate_segments(&inst.rects);
        if solve_exact(&inst, &cands) != partition_optimum(&inst.rects) {
            mismatches += 1;
        }
    }
    let t = start.elapsed();
    report(
        1,
        mismatches == 0 && t < Duration::from_secs(120),
        format!("200 instances, n <= 7: {mismatches} mismatches vs partition brute force, {}", secs(t)),
    );
}

#[test]
fn criterion_02_lp_soundness() {
    let mut violations = 0;
    let mut tight = 0;
    for inst in small_corpus(200, 7) {
        let cands = candidate_segments(&inst.rects);
        let sc = to_set_cover(&inst, &cands).unwrap();
        let lp = lp_solve(&sc).objective;
        let opt = partition_optimum(&inst.rects);
        if lp > opt {
            violations += 1;
        }
        if lp == opt {
            tight += 1;
        }
    }
    report(2, violations == 0, format!("200 instances: {violations} violations of lp <= opt ({tight} tight)"));
}

#[test]
fn criterion_03_laminarization_bound() {
    let start = Instant::now();
    let mut bad_ratio = 0;
    let mut bad_stretch = 0;
    let mut not_laminar = 0;
    let mut worst = Rational::zero();
    for inst in small_corpus(100, 6) {
        let cands = candidate_segments(&inst.rects);
        let lam = laminarize(&inst.rects, &cands).unwrap();
        for f in [1, 2] {
            let fam = lam.family(f);
            if !is_x_laminar(&fam) || !laminar_oracle(&fam) {
                not_laminar += 1;
            }
        }
        for s in &lam.snapped {
            let orig = cands.iter().find(|c| c.id == s.original_id).unwrap();
            let contains = s.segment.x_left <= orig.x_left && orig.x_right <= s.segment.x_right && s.segment.y == orig.y;
            if !contains || s.segment.len() > int(6) * orig.len() || s.stretch > int(6) {
                bad_stretch += 1;
            }
        }
        let opt = solve_exact(&inst, &cands);
        let opt_lam = solve_exact(&inst, &lam.segments());
        if opt_lam > int(6) * &opt {
            bad_ratio += 1;
        }
        worst = worst.max(opt_lam / opt);
    }
    let t = start.elapsed();
    report(
        3,
        bad_ratio == 0 && bad_stretch == 0 && not_laminar == 0 && t < Duration::from_secs(300),
        format!(
            "100 instances, n <= 6: worst opt_lam/opt = {worst}, {bad_ratio} above 6, \
             {bad_stretch} stretch violations, {not_laminar} non-laminar families, {}",
            secs(t)
        ),
    );
}

#[test]
fn criterion_04_scc_bounds() {
    let mut counter_ok = true;
    for m in (2..=20).step_by(2) {
        let inst = gen_scc_counterexample(m).unwrap();
        let segs = inst.fixed_candidates.clone().unwrap();
        let cells = cell_count(&inst.rects, &segs, 2).unwrap();
        counter_ok &= cells == m * m / 4 && cells_oracle(&inst.rects, &segs, 2) == cells;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let p = RandomParams::default();
    let mut checks = 0;
    let mut violations = 0;
    for seed in 0..30 {
        let inst = gen_random(8 + seed as usize % 18, 1000 + seed, &p).unwrap();
        let cands = prune_dominated(&candidate_segments(&inst.rects), &inst.rects);
        let lam = laminarize(&inst.rects, &cands).unwrap();
        for f in [1, 2] {
            let fam = lam.family(f);
            if fam.is_empty() {
                continue;
            }
            let mut subfamilies = Vec::new();
            if fam.len() <= 40 {
                subfamilies.push(fam.clone());
            }
            for _ in 0..10 {
                let m = rng.gen_range(1..=fam.len().min(40));
                let mut pick: Vec<Segment> = fam.clone();
                for i in 0..m {
                    let j = rng.gen_range(i..pick.len());
                    pick.swap(i, j);
                }
                pick.truncate(m);
                subfamilies.push(pick);
            }
            for sub in subfamilies {
                let m = sub.len();
                for k in 1..=m {
                    let cells = cell_count(&inst.rects, &sub, k).unwrap();
                    checks += 1;
                    if cells != cells_oracle(&inst.rects, &sub, k) || cells > m * k * k {
                        violations += 1;
                    }
                }
            }
        }
    }
    report(
        4,
        counter_ok && violations == 0,
        format!(
            "counterexample cells = m^2/4 for m = 2..20: {counter_ok}; \
             laminar families: {violations} violations of cells <= m k^2 in {checks} checks"
        ),
    );
}

#[test]
fn criterion_05_greedy_trap() {
    let eps = frac(1, 100);
    let mut greedy_ok = true;
    let mut opts = Vec::new();
    for l in 2..=5 {
        let trap = gen_greedy_trap(l, &eps, false).unwrap();
        let inst = &trap.instance;
        let cands = prune_dominated(&candidate_segments(&inst.rects), &inst.rects);
        let sc = to_set_cover(inst, &cands).unwrap();
        let picked = chosen_segments(&sc, &greedy_cover(&sc, GreedyMode::Count), &cands);
        let same = picked.len() == trap.b_top_edges.len()
            && trap.b_top_edges.iter().all(|t| picked.iter().any(|s| s.same_place(t)));
        let cost: Rational = picked.iter().map(Segment::len).sum();
        let want: Rational = (0..=l as i64).map(|i| int(1) - &eps * int(i)).sum();
        greedy_ok &= same && cost == want;
        opts.push((l, solve_exact(inst, &cands), cost));
    }
    let mut width_ok = true;
    for l in [2, 4] {
        let trap = gen_greedy_trap(l, &eps, true).unwrap();
        let inst = &trap.instance;
        let cands = prune_dominated(&candidate_segments(&inst.rects), &inst.rects);
        let sc = to_set_cover(inst, &cands).unwrap();
        let picked = chosen_segments(&sc, &greedy_cover(&sc, GreedyMode::Width), &cands);
        width_ok &= picked.len() == trap.b_top_edges.len()
            && trap.b_top_edges.iter().all(|t| picked.iter().any(|s| s.same_place(t)));
    }
    let opt_is_two = opts.iter().all(|(_, opt, _)| *opt == int(2));
    let ratios: Vec<String> = opts.iter().map(|(l, opt, cost)| format!("l={l}: opt {opt}, ratio {:.3}", segstab_core::rational::to_f64(&(cost / opt)))).collect();
    report(
        5,
        greedy_ok && width_ok && opt_is_two,
        format!(
            "greedy(count) = B top edges with cost sum(1 - i eps): {greedy_ok}; \
             weighted width-greedy = B top edges: {width_ok}; optimum == 2: {opt_is_two} [{}]",
            ratios.join("; ")
        ),
    );
}

#[test]
fn criterion_06_np_gadget_identity() {
    let start = Instant::now();
    let graphs = [
        ("P2", Graph::path(2)),
        ("P3", Graph::path(3)),
        ("C3", Graph::cycle(3)),
        ("C4", Graph::cycle(4)),
        ("K1,3", Graph::star(3)),
        ("K4-e", Graph::k4_minus_edge()),
    ];
    let mut failed = Vec::new();
    for (name, g) in &graphs {
        let np = compile_np_instance(&build_visibility(g).unwrap()).unwrap();
        let want = &np.c + int(min_vertex_cover(g) as i64);
        if exact_optimum(&np.instance) != want {
            failed.push(*name);
        }
    }
    let t = start.elapsed();
    report(
        6,
        failed.is_empty() && t < Duration::from_secs(600),
        format!("opt = c + vc on {} graphs, failures {failed:?}, {}", graphs.len(), secs(t)),
    );
}

#[test]
fn criterion_07_spsc_correspondence() {
    let mut card_bad = 0;
    let mut cons_bad = 0;
    let mut runs = 0;
    for m in [2, 4] {
        for seed in 0..3 {
            let s = gen_spsc(m, seed).unwrap();
            let opt = int(min_set_cover(s.n_elements(), &s.sets) as i64);
            let card = exact_optimum(&spsc_to_stabbing(&s, SpscMode::Cardinality).unwrap().instance);
            let cons = exact_optimum(&spsc_to_stabbing(&s, SpscMode::Constrained).unwrap().instance);
            card_bad += usize::from(card != opt);
            cons_bad += usize::from(cons > int(2) * &opt);
            runs += 1;
        }
    }
    report(
        7,
        card_bad == 0 && cons_bad == 0,
        format!("{runs} instances, m in {{2, 4}}: {card_bad} cardinality mismatches, {cons_bad} constrained above 2x"),
    );
}

#[test]
fn criterion_08_piercing_isomorphism() {
    let p = RandomParams::default();
    let mut violations = 0;
    let mut pairs = 0;
    for seed in 0..50u64 {
        let rects = gen_random(1 + seed as usize % 12, 800 + seed, &p).unwrap().rects;
        let mut segs = prune_dominated(&candidate_segments(&rects), &rects);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let first_free = segs.iter().map(|s| s.id + 1).max().unwrap_or(0);
        for extra in 0..10 {
            let a = rng.gen_range(0..80);
            let b = rng.gen_range(a + 1..=81);
            let id = first_free + extra;
            segs.push(Segment::horizontal(id, frac(a, 4), frac(b, 4), frac(rng.gen_range(0..=80), 4)));
        }
        let inst = StabInstance::new(rects, Some(segs.clone()), segstab_core::Objective::Length).unwrap();
        let lift = embed_piercing_3d(&inst.rects, &segs).unwrap();
        for (s, pt) in segs.iter().zip(&lift.points) {
            violations += usize::from(pt.weight != s.len());
            for (r, bx) in inst.rects.iter().zip(&lift.boxes) {
                let inside = (0..3).all(|a| bx.lo[a] <= pt.coords[a] && pt.coords[a] <= bx.hi[a]);
                violations += usize::from(inside != stab_oracle(s, r));
                pairs += 1;
            }
        }
    }
    report(8, violations == 0, format!("50 constrained instances, {pairs} pairs: {violations} violations"));
}

#[test]
fn criterion_09_double_staircase() {
    let mut rows = Vec::new();
    let mut ok = true;
    for l in [4, 8, 12] {
        let st = gen_double_staircase(l).unwrap();
        let k = st.k;
        let rects = &st.instance.rects;
        let sets: Vec<Vec<usize>> =
            st.lines.iter().map(|s| (0..rects.len()).filter(|&r| stab_oracle(s, &rects[r])).collect()).collect();
        let distinct: HashSet<&Vec<usize>> = sets.iter().collect();
        let equal_card = sets.iter().all(|s| s.len() == k + 1);
        let universal = rects.iter().all(|r| stab_oracle(&st.universal, r));
        ok &= distinct.len() == k * (k + 1) && sets.len() == k * (k + 1) && equal_card && universal;
        rows.push(format!("l={l}: {} distinct of size {}", distinct.len(), k + 1));
    }
    report(9, ok, format!("k(k+1) distinct equal-size stab sets plus a universal line [{}]", rows.join("; ")));
}

#[test]
fn criterion_10_approximation_pipeline() {
    let start = Instant::now();
    let p = RandomParams::default();
    let mut infeasible = 0;
    let mut non_finite = 0;
    let mut over = 0;
    let mut worst: f64 = 0.0;
    let mut small = 0;
    for seed in 0..500u64 {
        let n = 1 + (seed % 50) as usize;
        let inst = gen_random(n, 5000 + seed, &p).unwrap();
        let out = approx_stab(&inst, &RoundingParams { seed, ..Default::default() }).unwrap();
        let rep = verify_solution(&inst, &out.solution);
        infeasible += usize::from(!rep.feasible || !rep.cost_matches);
        non_finite += usize::from(!out.stats.ratio_vs_lp.is_finite());
        if n <= 6 {
            small += 1;
            let opt = partition_optimum(&inst.rects);
            for s in 0..20 {
                let run = approx_stab(&inst, &RoundingParams { seed: s, ..Default::default() }).unwrap();
                let r = segstab_core::rational::to_f64(&(&run.solution.cost / &opt));
                worst = worst.max(r);
                over += usize::from(run.solution.cost > int(12) * &opt);
            }
        }
    }
    let mut hv_infeasible = 0;
    for seed in 0..100u64 {
        let inst = gen_random(1 + (seed % 30) as usize, 9000 + seed, &p).unwrap();
        let out = approx_hv(&inst, &RoundingParams { seed, ..Default::default() }).unwrap();
        let rep = verify_solution(&inst, &out.solution);
        hv_infeasible += usize::from(!rep.feasible || !rep.cost_matches);
    }
    let t = start.elapsed();
    report(
        10,
        infeasible == 0 && non_finite == 0 && over == 0 && hv_infeasible == 0 && t < Duration::from_secs(900),
        format!(
            "500 instances: {infeasible} infeasible, {non_finite} non-finite ratios; \
             {small} with n <= 6 x 20 seeds: worst cost/opt {worst:.3}, {over} above 12; \
             100 HV instances: {hv_infeasible} infeasible; {}",
            secs(t)
        ),
    );
}
