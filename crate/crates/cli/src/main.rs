//! `kgres`: resonance scans, sweeps, constants, cut-off exports, operator
//! probes and simulations.
//!
//! Exit codes: 0 success, 1 error, 2 negative verdict (not separated,
//! infeasible constants), 3 blow-up guard tripped.

mod commands;
mod probes;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "kgres", version, about = "Space-time resonance toolkit for two-speed Klein-Gordon systems")]
pub struct Cli {
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Seed for every randomized probe.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct ScanArgs {
    /// Largest radius scanned.
    #[arg(long, default_value_t = 100.0)]
    pub r_max: f64,
    /// Bracketing grid step.
    #[arg(long, default_value_t = 1e-3)]
    pub grid_step: f64,
    /// Separation tolerance on outcome/source gaps.
    #[arg(long, default_value_t = 1e-6)]
    pub tau_sep: f64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Resonant components, outcome and source radii, separation verdict (JSON).
    Resonances {
        #[arg(long)]
        c: f64,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Separation verdicts over a range of speeds (CSV).
    Sweep {
        #[arg(long = "from")]
        from: f64,
        #[arg(long = "to")]
        to: f64,
        #[arg(long)]
        steps: usize,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Search for (or verify) the small-constant budget (JSON).
    Constants {
        #[arg(long, default_value_t = 10.0)]
        a: f64,
        /// Intersection order.
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// Verify `delta1,delta2,delta3,N` instead of searching.
        #[arg(long, value_delimiter = ',')]
        verify: Option<Vec<f64>>,
    },
    /// Cut-off values on the colinear slice ξ = x e1, η = y e1 (CSV).
    CutoffExport {
        #[arg(long)]
        c: f64,
        #[arg(long, default_value = "c11+--")]
        phase: String,
        /// theta, chi_o, chi_o_tilde, chi_r, chi_s or chi_t.
        #[arg(long, default_value = "chi_r")]
        kind: String,
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        hi: f64,
        /// Points per axis.
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[arg(long)]
        m: Option<f64>,
        #[arg(long)]
        delta0: Option<f64>,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Randomized measurements of operator bounds (JSON).
    OperatorProbe {
        #[arg(long, value_enum)]
        probe: Probe,
        #[command(flatten)]
        opts: probes::ProbeArgs,
    },
    /// Resonant-amplification experiment from a key = value config (JSON record).
    Simulate {
        config: PathBuf,
        /// Also write the sampled time series here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Probe {
    Bernstein,
    Holder,
    Translation,
    Radial,
    Cutoff,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
