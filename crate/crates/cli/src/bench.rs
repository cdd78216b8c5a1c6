//! Ratio tables over a directory of instance files.

use std::path::Path;
use std::time::Instant;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use segstab_core::approx::RoundingParams;
use segstab_core::rational::{to_decimal, to_fraction_string};

use crate::commands::{load_instance, solve_with};
use crate::{Algo, CliError, CliResult};

/// Significant digits of the decimal columns.
const DIGITS: usize = 12;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BenchRow {
    pub instance: String,
    pub n: usize,
    pub algo: String,
    pub cost: String,
    pub cost_exact: String,
    pub lp_bound: String,
    pub lp_bound_exact: String,
    pub ratio: String,
    pub ms: u128,
}

/// Every `*.json` file in `dir`, in name order, times every algorithm.
/// Instances run in parallel; rows come back in input order.
pub fn run_bench(dir: &Path, algos: &[Algo], hv: bool, params: &RoundingParams) -> CliResult<Vec<BenchRow>> {
    let entries = std::fs::read_dir(dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
    let mut files: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(CliError::Usage(format!("no .json instances in {}", dir.display())));
    }
    let per_file: Vec<CliResult<Vec<BenchRow>>> = files
        .par_iter()
        .map(|path| {
            let inst = load_instance(path)?;
            let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            algos
                .iter()
                .map(|&algo| {
                    let start = Instant::now();
                    let run = solve_with(&inst, algo, hv, params)?;
                    let ms = start.elapsed().as_millis();
                    let ratio = if run.lp_bound.is_zero() {
                        "inf".to_string()
                    } else {
                        to_decimal(&(&run.cost / &run.lp_bound), DIGITS)
                    };
                    Ok(BenchRow {
                        instance: name.clone(),
                        n: inst.rects.len(),
                        algo: algo.name().to_string(),
                        cost: to_decimal(&run.cost, DIGITS),
                        cost_exact: to_fraction_string(&run.cost),
                        lp_bound: to_decimal(&run.lp_bound, DIGITS),
                        lp_bound_exact: to_fraction_string(&run.lp_bound),
                        ratio,
                        ms,
                    })
                })
                .collect()
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_file {
        rows.extend(r?);
    }
    Ok(rows)
}

pub fn to_csv(rows: &[BenchRow]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Usage(format!("csv: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(format!("csv: {}", e.error())))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
