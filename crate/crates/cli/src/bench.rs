//! Benchmark harness: every suite circuit under every strategy, medians
//! over seeds.

use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::json;

use qtrans_core::mapping::{Heuristic, InitStrategy};
use qtrans_core::resource::{ChipRecord, MiningConfig, Qpu, ResourceDb};
use qtrans_core::selector::Preference;
use qtrans_core::transpiler::{PassDescriptor, PassFlow};

use crate::compile::{compile_task, CompileTask};
use crate::CliError;

/// `x_y_z`: selection preference, routing heuristic, initial layout.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchStrategy {
    pub name: String,
    pub preference: Preference,
    pub heuristic: Heuristic,
    pub init: InitStrategy,
}

impl BenchStrategy {
    pub fn passflow(&self) -> PassFlow {
        let h = match self.heuristic {
            Heuristic::Distance => "distance",
            Heuristic::Fidelity => "fidelity",
            Heuristic::Mixture => "mixture",
        };
        let init = match self.init {
            InitStrategy::Degree => "degree",
            InitStrategy::Weight => "weight",
            InitStrategy::Random => "random",
            InitStrategy::Trivial => "trivial",
        };
        let d = PassDescriptor::new;
        PassFlow::new(vec![
            d("unroll_to_2q"),
            PassDescriptor::with("sabre_layout", json!({"heuristic": h, "init": init, "iterations": 1})),
            PassDescriptor::with("sabre_route", json!({"heuristic": h})),
            d("unroll_to_basis"),
            d("cancel_inverses"),
            d("fuse_1q"),
            d("cancel_inverses"),
        ])
    }
}

/// Parses names such as `fid_HM_degree` or `struc_H_D_rand`.
pub fn parse_strategy(name: &str) -> Result<BenchStrategy, String> {
    let bad = || format!("bad strategy '{name}' (expected <fid|struc>_<HD|HFi|HM>_<rand|degree|weight>)");
    let (x, rest) = name.split_once('_').ok_or_else(bad)?;
    let (y, z) = rest.rsplit_once('_').ok_or_else(bad)?;
    let preference = match x {
        "fid" => Preference::Fidelity,
        "struc" => Preference::Structure,
        _ => return Err(bad()),
    };
    let heuristic = match y.replace('_', "").as_str() {
        "HD" => Heuristic::Distance,
        "HFi" => Heuristic::Fidelity,
        "HM" => Heuristic::Mixture,
        _ => return Err(bad()),
    };
    let init = match z {
        "rand" => InitStrategy::Random,
        "degree" => InitStrategy::Degree,
        "weight" => InitStrategy::Weight,
        _ => return Err(bad()),
    };
    Ok(BenchStrategy { name: name.into(), preference, heuristic, init })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub circuit: String,
    pub strategy: String,
    pub runs: usize,
    pub median_time_ms: f64,
    pub median_depth: f64,
    pub median_2q_gates: f64,
    pub median_cost: f64,
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    }
}

/// Loads `*.qasm` files of `suite` in name order.
pub fn load_suite(suite: &Path) -> Result<Vec<(String, String)>, CliError> {
    let entries = std::fs::read_dir(suite).map_err(|e| CliError::User(format!("cannot read suite {}: {e}", suite.display())))?;
    let mut files: Vec<_> = entries
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "qasm"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).map_err(|e| CliError::User(format!("{}: {e}", p.display())))?;
            Ok((p.file_stem().unwrap_or_default().to_string_lossy().into_owned(), text))
        })
        .collect()
}

pub fn run_bench(
    suite: &[(String, String)],
    chip_name: &str,
    chip_json: &str,
    strategies: &[BenchStrategy],
    seeds: usize,
) -> Result<Vec<BenchRow>, CliError> {
    let qpu = Qpu::from_json(chip_name, chip_json).map_err(|e| CliError::User(e.to_string()))?;
    let rec = ChipRecord::build(qpu, &MiningConfig::default()).map_err(|e| CliError::User(e.to_string()))?;
    let db = ResourceDb { chips: [(chip_name.to_string(), rec)].into() };
    let mut rows = Vec::new();
    for (name, text) in suite {
        for s in strategies {
            let (mut times, mut depths, mut twoq, mut costs) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
            for seed in 0..seeds as u64 {
                let mut task = CompileTask::new(text);
                task.vqpu_preferred = s.preference;
                task.passflow = Some(s.passflow());
                task.seed = seed;
                let t = Instant::now();
                let r = compile_task(&db, &task)?;
                times.push(t.elapsed().as_secs_f64() * 1e3);
                let m = r.compiled_info.metrics;
                depths.push(m.depth as f64);
                twoq.push(m.two_qubit_gates as f64);
                costs.push(m.circuit_cost.unwrap_or(f64::NAN));
            }
            rows.push(BenchRow {
                circuit: name.clone(),
                strategy: s.name.clone(),
                runs: seeds,
                median_time_ms: median(times),
                median_depth: median(depths),
                median_2q_gates: median(twoq),
                median_cost: median(costs),
            });
        }
    }
    Ok(rows)
}

const CSV_HEADER: &str = "circuit,strategy,runs,median_time_ms,median_depth,median_2q_gates,median_cost";

/// CSV when `path` ends in `.csv`, JSON otherwise.
pub fn write_report(rows: &[BenchRow], path: &Path) -> std::io::Result<()> {
    let text = if path.extension().is_some_and(|x| x == "csv") {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for r in rows {
            s.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.circuit, r.strategy, r.runs, r.median_time_ms, r.median_depth, r.median_2q_gates, r.median_cost
            ));
        }
        s
    } else {
        serde_json::to_string_pretty(rows).expect("rows serialize") + "\n"
    };
    std::fs::write(path, text)
}

pub fn read_report(path: &Path) -> Result<Vec<BenchRow>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    if !path.extension().is_some_and(|x| x == "csv") {
        return serde_json::from_str(&text).map_err(|e| e.to_string());
    }
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err("unexpected CSV header".into());
    }
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            if f.len() != 7 {
                return Err(format!("bad row '{l}'"));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|e| format!("{s}: {e}"));
            Ok(BenchRow {
                circuit: f[0].into(),
                strategy: f[1].into(),
                runs: f[2].parse().map_err(|e| format!("{}: {e}", f[2]))?,
                median_time_ms: num(f[3])?,
                median_depth: num(f[4])?,
                median_2q_gates: num(f[5])?,
                median_cost: num(f[6])?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategy_names() {
        let s = parse_strategy("fid_HM_degree").unwrap();
        assert_eq!((s.preference, s.heuristic, s.init), (Preference::Fidelity, Heuristic::Mixture, InitStrategy::Degree));
        let s = parse_strategy("struc_H_Fi_rand").unwrap();
        assert_eq!((s.preference, s.heuristic, s.init), (Preference::Structure, Heuristic::Fidelity, InitStrategy::Random));
        assert!(parse_strategy("fid_HX_degree").is_err());
        assert!(parse_strategy("fid").is_err());
    }

    #[test]
    fn medians() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
