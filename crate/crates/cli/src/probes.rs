//! Operator-bound probes behind `kgres operator-probe`.

use clap::Args;
use kgres::bilinear::{
    bernstein_check, pseudo_product_table, radial_shell_ratio, random_band_limited, random_localized, symbol_l1_norm,
    SpectralField, SymbolGrid, TranslationSymbol,
};
use kgres::cutoffs::profile::plateau;
use kgres::cutoffs::{bound_probe, CutoffFamily, FamilyOptions};
use kgres::resonance::{scan_all, ScanParams};
use kgres::PhaseIndex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::Probe;

pub const PROBE_SCHEMA: &str = "operator-probe/1";

#[derive(Args, Debug, Clone)]
pub struct ProbeArgs {
    /// Target exponent p (`inf` allowed).
    #[arg(long, default_value_t = 6.0)]
    pub p: f64,
    /// Source exponent q.
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    /// Random fields per Bernstein row.
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Random field pairs for the Hölder and translation probes.
    #[arg(long, default_value_t = 100)]
    pub pairs: usize,
    /// Largest dyadic index for the Bernstein probe.
    #[arg(long, default_value_t = 5)]
    pub j_max: i32,
    /// Comma-separated scales ρ.
    #[arg(long, value_delimiter = ',')]
    pub rhos: Option<Vec<f64>>,
    /// Translation factor λ in χ((ξ - λη)/ρ); rounded to an integer.
    #[arg(long, default_value_t = 2.0)]
    pub lambda: f64,
    /// Weight exponent s of the radial-shell probe.
    #[arg(long, default_value_t = 0.5)]
    pub s: f64,
    /// Speed ratio for the cut-off probe.
    #[arg(long, default_value_t = 5.0)]
    pub c: f64,
    #[arg(long, default_value = "c11+--")]
    pub phase: String,
    /// Sample points per ρ for the cut-off probe.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
}

fn exponent(p: f64) -> String {
    if p.is_infinite() {
        "inf".into()
    } else {
        format!("{p}")
    }
}

fn err(e: kgres::Error) -> String {
    e.to_string()
}

fn spread(v: &[f64]) -> f64 {
    let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = v.iter().cloned().fold(0.0, f64::max);
    hi / lo
}

const HOLDER_TRIPLES: [(f64, f64, f64); 5] =
    [(2.0, 2.0, 1.0), (4.0, 4.0, 2.0), (3.0, 6.0, 2.0), (f64::INFINITY, 2.0, 2.0), (2.0, f64::INFINITY, 2.0)];

fn bernstein(a: &ProbeArgs, seed: u64) -> Result<Value, String> {
    let like = SpectralField::zeros(1, 8192, 256.0).map_err(err)?;
    let mut rows = Vec::new();
    for j in 0..=a.j_max {
        rows.push(bernstein_check(&like, j, a.p, a.q, a.trials, seed.wrapping_add(j as u64)).map_err(err)?);
    }
    let ratios: Vec<f64> = rows.iter().map(|r| r.max_ratio).collect();
    Ok(json!({
        "schema": PROBE_SCHEMA,
        "probe": "bernstein",
        "seed": seed,
        "grid": {"dims": 1, "n": 8192, "box_length": 256.0},
        "p": exponent(a.p),
        "q": exponent(a.q),
        "trials": a.trials,
        "rows": rows,
        "spread": spread(&ratios),
    }))
}

fn holder(a: &ProbeArgs, seed: u64) -> Result<Value, String> {
    let like = SpectralField::zeros(1, 64, std::f64::consts::TAU * 8.0).map_err(err)?;
    let lam = a.lambda;
    let symbols: Vec<(&str, Box<dyn Fn(&[f64; 3], &[f64; 3]) -> f64 + Sync>)> = vec![
        ("gaussian_translation", Box::new(move |xi, eta| (-(xi[0] - lam * eta[0]).powi(2)).exp())),
        ("rational", Box::new(|xi, eta| 1.0 / (1.0 + xi[0] * xi[0] + eta[0] * eta[0]))),
        ("tensor_plateau", Box::new(|xi, eta| plateau(eta[0] / 3.0) * plateau((xi[0] - eta[0]) / 2.0))),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for (name, m) in &symbols {
        let grid = SymbolGrid::sample(&|xi: &[f64; 3], eta: &[f64; 3]| m(xi, eta), &like).map_err(err)?;
        let norm = symbol_l1_norm(&grid);
        let mut worst: f64 = 0.0;
        for _ in 0..a.pairs {
            let f = random_band_limited(&like, 20, &mut rng);
            let g = random_band_limited(&like, 20, &mut rng);
            let t = pseudo_product_table(&grid, &f, &g).map_err(err)?;
            for (p, q, r) in HOLDER_TRIPLES {
                worst = worst.max(t.lp_norm(r) / (f.lp_norm(p) * g.lp_norm(q)));
            }
        }
        rows.push(json!({
            "symbol": name,
            "bound": norm.norm,
            "boundary_fraction": norm.boundary_fraction,
            "truncation_warning": norm.truncation_warning,
            "max_ratio": worst,
            "max_ratio_over_bound": worst / norm.norm,
        }));
    }
    Ok(json!({
        "schema": PROBE_SCHEMA,
        "probe": "holder",
        "seed": seed,
        "grid": {"dims": 1, "n": 64, "box_length": like.box_length()},
        "pairs": a.pairs,
        "rows": rows,
    }))
}

fn translation(a: &ProbeArgs, seed: u64) -> Result<Value, String> {
    let like = SpectralField::zeros(1, 8192, std::f64::consts::TAU * 1000.0).map_err(err)?;
    let lambda = a.lambda.round();
    if !(lambda.is_finite() && lambda.abs() <= 1e6) {
        return Err(format!("--lambda out of range: {}", a.lambda));
    }
    let rhos = a.rhos.clone().unwrap_or_else(|| vec![1.0, 0.1, 0.01]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut bounds = Vec::new();
    for &rho in &rhos {
        if !(rho > 0.0) {
            return Err(format!("--rhos must be positive, got {rho}"));
        }
        let sym = TranslationSymbol { h: move |s: &[f64; 3]| plateau(s[0] / rho), lambda: lambda as i64, support: rho };
        let bound = sym.l1_norm(&like).map_err(err)?;
        let mut worst: f64 = 0.0;
        for _ in 0..a.pairs {
            let f = random_band_limited(&like, 1000, &mut rng);
            let g = random_band_limited(&like, 1000, &mut rng);
            let t = sym.apply(&f, &g).map_err(err)?;
            for (p, q, r) in HOLDER_TRIPLES {
                worst = worst.max(t.lp_norm(r) / (f.lp_norm(p) * g.lp_norm(q)));
            }
        }
        bounds.push(bound);
        rows.push(json!({"rho": rho, "bound": bound, "max_ratio": worst}));
    }
    Ok(json!({
        "schema": PROBE_SCHEMA,
        "probe": "translation",
        "seed": seed,
        "grid": {"dims": 1, "n": 8192, "box_length": like.box_length()},
        "lambda": lambda,
        "lambda_rounding_error": (lambda - a.lambda).abs(),
        "pairs": a.pairs,
        "rows": rows,
        "spread": spread(&bounds),
    }))
}

fn radial(a: &ProbeArgs, seed: u64) -> Result<Value, String> {
    let like = SpectralField::zeros(1, 1 << 15, 8192.0).map_err(err)?;
    let rhos = a.rhos.clone().unwrap_or_else(|| vec![0.1, 0.01]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fields: Vec<_> = (0..4).map(|_| random_localized(&like, &mut rng)).collect::<Result<_, _>>().map_err(err)?;
    let mut rows = Vec::new();
    let mut sups = Vec::new();
    for &rho in &rhos {
        if !(rho > 0.0) {
            return Err(format!("--rhos must be positive, got {rho}"));
        }
        let sup = fields.iter().map(|f| radial_shell_ratio(f, 1.0, rho, a.s, plateau)).fold(0.0, f64::max);
        sups.push(sup);
        rows.push(json!({"rho": rho, "sup_ratio": sup}));
    }
    let decays: Vec<Value> = (1..rhos.len())
        .map(|i| {
            json!({
                "observed": sups[i - 1] / sups[i],
                "predicted": (rhos[i - 1] / rhos[i]).powf(a.s / 3.0),
            })
        })
        .collect();
    Ok(json!({
        "schema": PROBE_SCHEMA,
        "probe": "radial",
        "seed": seed,
        "grid": {"dims": 1, "n": 1 << 15, "box_length": 8192.0},
        "radius": 1.0,
        "s": a.s,
        "rows": rows,
        "decay": decays,
    }))
}

fn cutoff(a: &ProbeArgs, seed: u64) -> Result<Value, String> {
    let idx: PhaseIndex = a.phase.parse().map_err(err)?;
    let report = scan_all(a.c, &ScanParams::default()).map_err(err)?;
    let fam = CutoffFamily::new(report, FamilyOptions::default()).map_err(err)?;
    let rhos = a.rhos.clone().unwrap_or_else(|| vec![1.0, 0.1, 0.01]);
    let probe = bound_probe(&fam, &idx, &rhos, a.samples, seed);
    Ok(json!({
        "schema": PROBE_SCHEMA,
        "probe": "cutoff",
        "seed": seed,
        "c": a.c,
        "result": probe,
    }))
}

pub fn run(probe: Probe, a: &ProbeArgs, seed: u64) -> Result<Value, String> {
    match probe {
        Probe::Bernstein => bernstein(a, seed),
        Probe::Holder => holder(a, seed),
        Probe::Translation => translation(a, seed),
        Probe::Radial => radial(a, seed),
        Probe::Cutoff => cutoff(a, seed),
    }
}
