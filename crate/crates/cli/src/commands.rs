use std::fs;
use std::io::Write;

use kgres::cutoffs::{CutoffFamily, CutoffKind, FamilyOptions};
use kgres::resonance::{
    all_hold, exceptional_candidates, find_admissible_constants, fmt17, scan_all, sweep_speed, verify_constants,
    ConstantsSearch, ResonanceReport, ScanParams, Slack,
};
use kgres::simulator::{run_resonant_amplification, ExperimentConfig};
use kgres::PhaseIndex;
use serde::Serialize;

use crate::{probes, Cli, Command, ScanArgs};

pub const CONSTANTS_SCHEMA: &str = "constants/1";

pub type CmdResult = Result<u8, String>;

fn emit(cli: &Cli, text: &str) -> Result<(), String> {
    match &cli.output {
        Some(p) => fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| e.to_string())
        }
    }
}

fn params(s: &ScanArgs) -> ScanParams<f64> {
    ScanParams { r_max: s.r_max, grid_step: s.grid_step, tau_sep: s.tau_sep }
}

fn scan(c: f64, s: &ScanArgs) -> Result<ResonanceReport<f64>, String> {
    scan_all(c, &params(s)).map_err(|e| e.to_string())
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable output");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct ConstantsOut<'a> {
    schema: &'static str,
    mode: &'static str,
    a: f64,
    n_order: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    search: Option<&'a ConstantsSearch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verified: Option<Verified<'a>>,
}

#[derive(Serialize)]
struct Verified<'a> {
    delta1: f64,
    delta2: f64,
    delta3: f64,
    n_reg: u64,
    all_hold: bool,
    slacks: &'a [Slack],
}

pub fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Resonances { c, scan: s } => {
            let report = scan(*c, s)?;
            let mut text = report.to_json();
            text.push('\n');
            emit(cli, &text)?;
            Ok(if report.separated { 0 } else { 2 })
        }
        Command::Sweep { from, to, steps, scan: s } => {
            if *steps == 0 {
                return Err("--steps must be at least 1".into());
            }
            let rows = sweep_speed(*from, *to, *steps, &params(s)).map_err(|e| e.to_string())?;
            let mut text = String::from("c,separated,min_gap\n");
            for r in &rows {
                text.push_str(&r.csv_line());
                text.push('\n');
            }
            emit(cli, &text)?;
            let exceptional: Vec<String> = exceptional_candidates(&rows, s.tau_sep).into_iter().map(fmt17).collect();
            if exceptional.is_empty() {
                eprintln!("summary: all {} speeds separated at tau = {}", rows.len(), fmt17(s.tau_sep));
            } else {
                eprintln!("summary: candidate exceptional speeds: {}", exceptional.join(" "));
            }
            Ok(0)
        }
        Command::Constants { a, n, verify } => {
            if let Some(v) = verify {
                if v.len() != 4 {
                    return Err(format!("--verify takes delta1,delta2,delta3,N; got {} values", v.len()));
                }
                let n_reg = v[3];
                if !(n_reg >= 1.0 && n_reg.fract() == 0.0 && n_reg <= 2f64.powi(53)) {
                    return Err(format!("N must be a positive integer, got {n_reg}"));
                }
                let slacks = verify_constants(*a, v[0], v[1], v[2], n_reg as u64);
                let ok = all_hold(&slacks);
                let out = ConstantsOut {
                    schema: CONSTANTS_SCHEMA,
                    mode: "verify",
                    a: *a,
                    n_order: *n,
                    search: None,
                    verified: Some(Verified {
                        delta1: v[0],
                        delta2: v[1],
                        delta3: v[2],
                        n_reg: n_reg as u64,
                        all_hold: ok,
                        slacks: &slacks,
                    }),
                };
                emit(cli, &to_json(&out))?;
                return Ok(if ok { 0 } else { 2 });
            }
            let search = find_admissible_constants(*a, *n);
            let out = ConstantsOut {
                schema: CONSTANTS_SCHEMA,
                mode: "search",
                a: *a,
                n_order: *n,
                search: Some(&search),
                verified: None,
            };
            emit(cli, &to_json(&out))?;
            Ok(match search {
                ConstantsSearch::Feasible(_) => 0,
                ConstantsSearch::Infeasible { .. } => 2,
            })
        }
        Command::CutoffExport { c, phase, kind, rho, lo, hi, points, m, delta0, scan: s } => {
            let idx: PhaseIndex = phase.parse().map_err(|e: kgres::Error| e.to_string())?;
            let kind: CutoffKind = kind.parse().map_err(|e: kgres::Error| e.to_string())?;
            if !(*rho > 0.0 && *rho <= 1.0) {
                return Err(format!("--rho must lie in (0, 1], got {rho}"));
            }
            let report = scan(*c, s)?;
            let fam = CutoffFamily::new(report, FamilyOptions { m: *m, delta0: *delta0, n: None })
                .map_err(|e| e.to_string())?;
            let grid = fam.slice_grid(kind, &idx, *rho, *lo, *hi, *points).map_err(|e| e.to_string())?;
            let mut text = String::from("x,y,value\n");
            for (x, y, v) in grid {
                text.push_str(&format!("{},{},{}\n", fmt17(x), fmt17(y), fmt17(v)));
            }
            emit(cli, &text)?;
            Ok(0)
        }
        Command::OperatorProbe { probe, opts } => {
            let value = probes::run(*probe, opts, cli.seed)?;
            emit(cli, &to_json(&value))?;
            Ok(0)
        }
        Command::Simulate { config, csv } => {
            let text = fs::read_to_string(config).map_err(|e| format!("cannot read {}: {e}", config.display()))?;
            let cfg = ExperimentConfig::parse(&text).map_err(|e| e.to_string())?;
            let report =
                scan_all(cfg.c, &ScanParams { r_max: cfg.r_max, grid_step: cfg.grid_step, tau_sep: cfg.tau_sep })
                    .map_err(|e| e.to_string())?;
            let record = run_resonant_amplification(&report, &cfg).map_err(|e| e.to_string())?;
            emit(cli, &to_json(&record))?;
            if let Some(p) = csv {
                fs::write(p, record.timeseries_csv()).map_err(|e| format!("cannot write {}: {e}", p.display()))?;
            }
            if record.is_conclusive() {
                Ok(0)
            } else {
                eprintln!("blow-up guard tripped: record is partial");
                Ok(3)
            }
        }
    }
}
