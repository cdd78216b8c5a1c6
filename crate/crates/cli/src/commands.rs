use std::path::{Path, PathBuf};

use num_traits::Zero;
use serde_json::{json, Value};

use segstab_core::approx::{approx_hv, approx_stab, hv_candidates, RoundingParams};
use segstab_core::candidates::{candidate_segments, candidate_segments_oriented, prune_dominated};
use segstab_core::cover::{
    chosen_segments, exact_cover, greedy_cover, lp_solve, node_budget_from_env, to_set_cover, CoverStatus, GreedyMode,
};
use segstab_core::forge::{
    embed_piercing_3d, gen_double_staircase, gen_greedy_trap, gen_random, gen_scc_counterexample, RandomParams,
};
use segstab_core::hardness::{
    build_visibility, compile_np_instance, gen_spsc, spsc_to_stabbing, Graph, NpGadgetInstance, SpscMode,
};
use segstab_core::io::{read_instance, read_solution, segments_to_json, write_instance, write_solution, SegmentJson};
use segstab_core::laminar::{laminarize, LaminarDecomposition};
use segstab_core::rational::{parse_fraction, to_f64, to_fraction_string, Rational};
use segstab_core::scc::{scc_exhaustive, scc_profile, ProfileRow, EXHAUSTIVE_MAX_M};
use segstab_core::{verify_solution, Orientation, Segment, Solution, StabInstance};

use crate::svg::render_svg;
use crate::{bench, Algo, CliError, CliResult, Command, Format, GenCommand, HardenCommand, Output, SpscModeArg};

const DEFAULT_SAMPLES: usize = 200;

pub fn dispatch(cmd: Command) -> CliResult<()> {
    match cmd {
        Command::Gen(g) => gen(g),
        Command::Candidates { instance, prune, hv, out } => {
            let inst = load_instance(&instance)?;
            let segs = if hv {
                let all: Vec<Segment> = [Orientation::Horizontal, Orientation::Vertical]
                    .iter()
                    .flat_map(|&o| {
                        let c = candidate_segments_oriented(&inst.rects, o);
                        if prune { prune_dominated(&c, &inst.rects) } else { c }
                    })
                    .collect();
                all.into_iter().enumerate().map(|(i, s)| s.with_id(i as u64)).collect()
            } else {
                let c = candidate_segments(&inst.rects);
                if prune { prune_dominated(&c, &inst.rects) } else { c }
            };
            emit_json(&out, &json!({ "candidates": segments_to_json(&segs) }))
        }
        Command::Laminarize { instance, out } => {
            let inst = load_instance(&instance)?;
            let lam = laminarize(&inst.rects, &working_candidates(&inst, false))?;
            emit_json(&out, &laminar_json(&lam))
        }
        Command::Solve { instance, algo, hv, seed, trials, out } => {
            let inst = load_instance(&instance)?;
            let run = solve_with(&inst, algo, hv, &rounding(seed, trials))?;
            match &run.solution {
                Some(sol) => emit(&out, &write_solution(sol, Some(run.stats))?),
                None => emit_json(&out, &run.stats),
            }
        }
        Command::Approx { instance, hv, seed, trials, out } => {
            let inst = load_instance(&instance)?;
            let run = solve_with(&inst, Algo::Approx, hv, &rounding(seed, trials))?;
            emit(&out, &write_solution(run.solution.as_ref().expect("approx yields a solution"), Some(run.stats))?)
        }
        Command::Scc { instance, k, samples, seed, laminar, format, out } => {
            let inst = load_instance(&instance)?;
            let cands = working_candidates(&inst, false);
            let segs = if laminar { laminarize(&inst.rects, &cands)?.segments() } else { cands };
            let rows: Vec<ProfileRow> = match samples {
                None if segs.len() <= EXHAUSTIVE_MAX_M => scc_exhaustive(&inst.rects, &segs)?,
                s => scc_profile(&inst.rects, &segs, s.unwrap_or(DEFAULT_SAMPLES), seed),
            };
            let rows: Vec<ProfileRow> = rows.into_iter().filter(|r| r.k <= k).collect();
            match format {
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["m", "k", "cells"]).map_err(csv_err)?;
                    for r in &rows {
                        w.write_record([r.m.to_string(), r.k.to_string(), r.cells.to_string()]).map_err(csv_err)?;
                    }
                    emit(&out, &String::from_utf8(w.into_inner().map_err(|e| csv_err(e.into_error().into()))?).unwrap())
                }
                Format::Json => emit_json(
                    &out,
                    &Value::Array(rows.iter().map(|r| json!({ "m": r.m, "k": r.k, "cells": r.cells })).collect()),
                ),
                Format::Svg => Err(CliError::Usage("scc writes csv or json".into())),
            }
        }
        Command::Harden(h) => harden(h),
        Command::Render { instance, solution, laminar, format, out } => {
            if format != Format::Svg {
                return Err(CliError::Usage("render writes svg only".into()));
            }
            let inst = load_instance(&instance)?;
            let sol = solution.map(|p| read_text(&p).and_then(|t| Ok(read_solution(&t)?))).transpose()?;
            let dec = if laminar {
                let lam = laminarize(&inst.rects, &working_candidates(&inst, false))?;
                Some(lam.snapped.iter().map(|s| (s.segment.clone(), s.family)).collect::<Vec<_>>())
            } else {
                None
            };
            emit(&out, &render_svg(&inst, sol.as_ref(), dec.as_deref()))
        }
        Command::Bench { dir, algo, hv, seed, trials, format, out } => {
            let rows = bench::run_bench(&dir, &algo, hv, &rounding(seed, trials))?;
            match format {
                Format::Csv => emit(&out, &bench::to_csv(&rows)?),
                Format::Json => emit_json(&out, &serde_json::to_value(&rows).expect("rows serialize")),
                Format::Svg => Err(CliError::Usage("bench writes csv or json".into())),
            }
        }
        Command::Verify { instance, solution } => {
            let inst = load_instance(&instance)?;
            let sol = read_solution(&read_text(&solution)?)?;
            let rep = verify_solution(&inst, &sol);
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "feasible": rep.feasible,
                    "uncovered": rep.uncovered,
                    "foreign_segments": rep.foreign_segments,
                    "recomputed_cost": frac(&rep.recomputed_cost),
                    "cost_matches": rep.cost_matches,
                }))
                .expect("report serializes")
            );
            if rep.feasible && rep.cost_matches {
                Ok(())
            } else {
                Err(CliError::Rejected(format!(
                    "solution rejected: {} uncovered, {} foreign segments, cost matches: {}",
                    rep.uncovered.len(),
                    rep.foreign_segments.len(),
                    rep.cost_matches
                )))
            }
        }
    }
}

fn gen(cmd: GenCommand) -> CliResult<()> {
    match cmd {
        GenCommand::Random { n, seed, range, denom, max_side, out } => {
            let inst = gen_random(n, seed, &RandomParams { range, denom, max_side })?;
            emit(&out, &write_instance(&inst)?)
        }
        GenCommand::Scc { m, out } => emit(&out, &write_instance(&gen_scc_counterexample(m)?)?),
        GenCommand::GreedyTrap { levels, eps, weighted, out } => {
            let trap = gen_greedy_trap(levels, &parse_fraction(&eps)?, weighted)?;
            emit(&out, &write_instance(&trap.instance)?)
        }
        GenCommand::Staircase { levels, out } => emit(&out, &write_instance(&gen_double_staircase(levels)?.instance)?),
        GenCommand::Piercing { instance, out } => {
            let inst = load_instance(&instance)?;
            let segs = working_candidates(&inst, false);
            let lift = embed_piercing_3d(&inst.rects, &segs)?;
            let triple = |c: &[Rational; 3]| c.iter().map(frac).collect::<Vec<_>>();
            emit_json(
                &out,
                &json!({
                    "boxes": lift.boxes.iter().map(|b| json!({ "id": b.id, "lo": triple(&b.lo), "hi": triple(&b.hi) })).collect::<Vec<_>>(),
                    "points": lift.points.iter().map(|p| json!({ "id": p.id, "coords": triple(&p.coords), "weight": frac(&p.weight) })).collect::<Vec<_>>(),
                }),
            )
        }
    }
}

fn harden(cmd: HardenCommand) -> CliResult<()> {
    match cmd {
        HardenCommand::Vc { graph, oracle, cert, out } => {
            let g = Graph::parse_edge_list(&read_text(&graph)?)?;
            let np = compile_np_instance(&build_visibility(&g)?)?;
            let mut c = vc_certificate(&np);
            if oracle {
                let k = g.min_vertex_cover()?.len();
                c["min_vertex_cover"] = json!(k);
                c["expected_optimum"] = json!(frac(&np.expected_optimum(k)));
            }
            write_hardened(&np.instance, c, &out, cert)
        }
        HardenCommand::Spsc { m, mode, seed, oracle, cert, out } => {
            let spsc = gen_spsc(m, seed)?;
            let mode = match mode {
                SpscModeArg::Card => SpscMode::Cardinality,
                SpscModeArg::Constr => SpscMode::Constrained,
            };
            let enc = spsc_to_stabbing(&spsc, mode)?;
            let mut c = json!({
                "kind": "spsc",
                "mode": match mode { SpscMode::Cardinality => "card", SpscMode::Constrained => "constr" },
                "n": spsc.n,
                "m": spsc.m,
                "seed": seed,
                "delta": frac(&enc.delta),
                "triples": spsc.triples,
                "sets": spsc.sets,
            });
            if oracle {
                c["set_cover_optimum"] = json!(spsc.min_cover_exhaustive()?.len());
            }
            write_hardened(&enc.instance, c, &out, cert)
        }
    }
}

fn vc_certificate(np: &NpGadgetInstance) -> Value {
    let vis = &np.vis;
    json!({
        "kind": "vertex-cover",
        "n": vis.graph.n,
        "edges": vis.graph.edges,
        "c": frac(&np.c),
        "overlap": np.overlap,
        "column_spacing": np.column_spacing,
        "level_spacing": np.level_spacing,
        "visibility": { "columns": vis.columns, "spans": vis.spans, "levels": vis.levels },
        "vertex_gadgets": np.vertex_gadgets.iter().map(|g| json!({
            "vertex": g.vertex,
            "rect_ids": g.rect_ids,
            "s_act": segments_to_json(&g.s_act),
            "s_ina": segments_to_json(&g.s_ina),
            "len_act": frac(&g.len_act()),
            "len_ina": frac(&g.len_ina()),
        })).collect::<Vec<_>>(),
        "edge_rects": np.edge_rects,
    })
}

/// Instance to `--out` and certificate beside it; both to standard output
/// as one object when no path is given.
fn write_hardened(inst: &StabInstance, cert: Value, out: &Output, cert_path: Option<PathBuf>) -> CliResult<()> {
    let inst_json = serde_json::to_value(segstab_core::io::instance_to_json(inst)).expect("instance serializes");
    match (&out.out, cert_path) {
        (None, None) => emit_json(out, &json!({ "instance": inst_json, "certificate": cert })),
        (o, c) => {
            let cert_path = c.or_else(|| o.as_ref().map(|p| p.with_extension("cert.json"))).expect("one path is set");
            emit_json(out, &inst_json)?;
            emit_json(&Output { out: Some(cert_path) }, &cert)
        }
    }
}

/// The outcome of one algorithm run. `solution` is absent for the LP.
pub struct Run {
    pub solution: Option<Solution>,
    pub cost: Rational,
    pub lp_bound: Rational,
    pub stats: Value,
}

pub fn rounding(seed: u64, trials: usize) -> RoundingParams {
    RoundingParams { seed, trials, ..RoundingParams::default() }
}

/// Fixed candidates when the instance has them, otherwise the pruned
/// canonical family (both orientations with `hv`).
pub fn working_candidates(inst: &StabInstance, hv: bool) -> Vec<Segment> {
    match &inst.fixed_candidates {
        Some(f) => f.clone(),
        None if hv => hv_candidates(&inst.rects),
        None => prune_dominated(&candidate_segments(&inst.rects), &inst.rects),
    }
}

pub fn solve_with(inst: &StabInstance, algo: Algo, hv: bool, params: &RoundingParams) -> CliResult<Run> {
    if algo == Algo::Approx {
        let out = if hv { approx_hv(inst, params)? } else { approx_stab(inst, params)? };
        let mut stats = serde_json::to_value(&out.stats).expect("stats serialize");
        stats["algo"] = json!("approx");
        stats["seed"] = json!(params.seed);
        stats["trials"] = json!(params.trials);
        return Ok(Run { cost: out.solution.cost.clone(), lp_bound: out.stats.lp_bound, solution: Some(out.solution), stats });
    }
    let cands = working_candidates(inst, hv);
    let sc = to_set_cover(inst, &cands)?;
    let lp = lp_solve(&sc);
    let mut stats = json!({
        "algo": algo.name(),
        "candidates": cands.len(),
        "lp_bound": frac(&lp.objective),
    });
    let chosen = match algo {
        Algo::Lp => {
            stats["z"] = Value::Array(
                lp.z_by_id(&sc)
                    .into_iter()
                    .filter(|(_, z)| !z.is_zero())
                    .map(|(id, z)| {
                        let s = cands.iter().find(|s| s.id == id).expect("candidate id");
                        json!({ "segment": SegmentJson::from(s), "z": frac(&z) })
                    })
                    .collect(),
            );
            stats["cost"] = json!(frac(&lp.objective));
            return Ok(Run { solution: None, cost: lp.objective.clone(), lp_bound: lp.objective, stats });
        }
        Algo::Exact => {
            let res = exact_cover(&sc, node_budget_from_env())?;
            stats["status"] = json!(match res.status {
                CoverStatus::Optimal => "optimal",
                CoverStatus::Unproven => "unproven",
            });
            stats["nodes"] = json!(res.nodes);
            res.chosen
        }
        Algo::Greedy => greedy_cover(&sc, GreedyMode::Count),
        Algo::GreedyWidth => greedy_cover(&sc, GreedyMode::Width),
        Algo::Approx => unreachable!("handled above"),
    };
    let sol = Solution::from_segments(chosen_segments(&sc, &chosen, &cands), inst.objective).with_assignment(&inst.rects);
    stats["cost"] = json!(frac(&sol.cost));
    stats["ratio_vs_lp"] = json!(to_f64(&(&sol.cost / &lp.objective)));
    Ok(Run { cost: sol.cost.clone(), lp_bound: lp.objective, solution: Some(sol), stats })
}

fn laminar_json(lam: &LaminarDecomposition) -> Value {
    let n = lam.snapped.len();
    let mean = if n == 0 { 0.0 } else { lam.snapped.iter().map(|s| to_f64(&s.stretch)).sum::<f64>() / n as f64 };
    json!({
        "scale": frac(&lam.scale),
        "offset": frac(&lam.offset),
        "segments": lam.snapped.iter().map(|s| json!({
            "segment": SegmentJson::from(&s.segment),
            "original_id": s.original_id,
            "family": s.family,
            "level": s.level,
            "stretch": frac(&s.stretch),
        })).collect::<Vec<_>>(),
        "stats": {
            "count": n,
            "family_1": lam.snapped.iter().filter(|s| s.family == 1).count(),
            "family_2": lam.snapped.iter().filter(|s| s.family == 2).count(),
            "max_stretch": lam.max_stretch().map(|r| frac(&r)),
            "mean_stretch": mean,
        },
    })
}

pub fn frac(r: &Rational) -> String {
    to_fraction_string(r)
}

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

pub fn load_instance(path: &Path) -> CliResult<StabInstance> {
    Ok(read_instance(&read_text(path)?)?)
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Usage(format!("csv: {e}"))
}

pub fn emit(out: &Output, text: &str) -> CliResult<()> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &out.out {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io { path: p.display().to_string(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(out: &Output, v: &Value) -> CliResult<()> {
    emit(out, &serde_json::to_string_pretty(v).expect("json value serializes"))
}
