//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use kgres::bilinear::{
    bernstein_check, lp_project, pseudo_product_table, radial_shell_ratio, random_band_limited, random_localized,
    symbol_l1_norm, LpMode, SymbolGrid, TranslationSymbol,
};
use kgres::cutoffs::profile::plateau;
use kgres::cutoffs::{CutoffFamily, FamilyOptions};
use kgres::dispersion::{FrequencyPair, PhaseIndex};
use kgres::resonance::{
    all_hold, check_separation, find_admissible_constants, find_resonant_components, scan_all, verify_constants,
    ConstantsSearch, ScanParams,
};
use kgres::simulator::{
    diagonalize, profile_of, run_resonant_amplification, ExperimentConfig, Integrator, NonlinearityCoefficients,
    SpeciesData, SystemState,
};
use kgres::{ResonantComponent, SpectralField, SpeedPair};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const TAU: f64 = std::f64::consts::TAU;

// Reference values at c = 5.
const OUTCOME_RADII: [f64; 2] = [0.3535533906, 0.3603654667];
const SOURCE_RADII: [f64; 3] = [0.01314860997, 0.1767766953, 0.3472168567];
const MIN_GAP: f64 = 0.0063365;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn kgres(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_kgres")).args(args).output().expect("binary runs")
}

fn numbers(v: &Value) -> Vec<f64> {
    let mut out: Vec<f64> = v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    out.sort_by(f64::total_cmp);
    out
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn golden_values() -> Outcome {
    let start = Instant::now();
    let o = kgres(&["resonances", "--c", "5"]);
    let secs = start.elapsed().as_secs_f64();
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    let mut phases: Vec<&str> =
        doc["resonant_phases"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    phases.sort();
    let outcome = numbers(&doc["outcome_radii"]);
    let source = numbers(&doc["source_radii"]);
    let ok_len = outcome.len() == 2 && source.len() == 3;
    let e_out = if ok_len { max_abs_diff(&outcome, &OUTCOME_RADII) } else { f64::INFINITY };
    let e_src = if ok_len { max_abs_diff(&source, &SOURCE_RADII) } else { f64::INFINITY };
    check(
        o.status.code() == Some(0) && phases == ["c11+--", "cc1+--"] && e_out <= 1e-8 && e_src <= 1e-8 && secs < 10.0,
        format!("phases {phases:?}, outcome err {e_out:.1e}, source err {e_src:.1e}, runtime {secs:.2} s"),
    )
}

fn closed_form_root() -> Outcome {
    let idx: PhaseIndex = "c11+--".parse().unwrap();
    let mut worst: f64 = 0.0;
    for c in [2.0, 5.0, 10.0] {
        let sp = SpeedPair::new(c).unwrap();
        let comps = find_resonant_components(&sp, &idx, 100.0, 1e-3).components;
        if comps.len() != 1 {
            return Err(format!("c = {c}: {} components", comps.len()));
        }
        let expect = (3.0 / (4.0 * (c * c - 1.0))).sqrt();
        worst = worst.max((comps[0].radius - expect).abs()).max((comps[0].lambda - 2.0).abs());
    }
    check(worst <= 1e-10, format!("max error {worst:.1e} over c in {{2, 5, 10}}"))
}

fn separation_verdict() -> Outcome {
    let report = scan_all(5.0f64, &ScanParams::default()).unwrap();
    let s = check_separation(&report, 1e-6);
    let flipped = !check_separation(&report, 0.01).separated;
    let o = kgres(&["resonances", "--c", "5", "--tau-sep", "0.01"]);
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    let cli_flip = o.status.code() == Some(2) && doc["separated"] == false;
    check(
        s.separated && (s.min_gap - MIN_GAP).abs() <= 1e-6 && flipped && cli_flip,
        format!("min_gap {:.10}, separated {}, flips at tau 0.01: {}", s.min_gap, s.separated, flipped && cli_flip),
    )
}

fn constants_feasibility() -> Outcome {
    let b = match find_admissible_constants(10.0, 1) {
        ConstantsSearch::Feasible(b) => b,
        ConstantsSearch::Infeasible { binding, slack, .. } => {
            return Err(format!("infeasible: {binding} slack {slack:e}"))
        }
    };
    let replay = verify_constants(b.a, b.delta1, b.delta2, b.delta3, b.n_reg);
    let min_slack = replay.iter().map(|s| s.slack).fold(f64::INFINITY, f64::min);
    let archived = verify_constants(10.0, 5e-4, 0.04, 1e-4, 13200);
    check(
        replay.len() == 12 && all_hold(&replay) && all_hold(&archived),
        format!(
            "budget d1 {:e} d2 {:e} d3 {:e} N {}, min slack {min_slack:.2e}, archived example holds: {}",
            b.delta1,
            b.delta2,
            b.delta3,
            b.n_reg,
            all_hold(&archived)
        ),
    )
}

fn unit(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 0.1 && n <= 1.0 {
            return v.map(|x| x / n);
        }
    }
}

fn near(comp: &ResonantComponent, d: f64, rng: &mut ChaCha8Rng) -> FrequencyPair {
    let q = comp.point(&unit(rng));
    let a = unit(rng);
    let b = unit(rng);
    let s: f64 = rng.gen_range(0.0..1.0);
    FrequencyPair::new(
        std::array::from_fn(|j| q.xi[j] + d * s * a[j]),
        std::array::from_fn(|j| q.eta[j] + d * (1.0 - s * s).sqrt() * b[j]),
    )
}

/// Mix of points close to the resonant set, inside the cut-off ball and at all scales.
fn sample_point(fam: &CutoffFamily, idx: &PhaseIndex, rng: &mut ChaCha8Rng, k: usize) -> FrequencyPair {
    let comps = fam.report.components_for(idx);
    match k % 3 {
        0 if !comps.is_empty() => {
            let c = &comps[rng.gen_range(0..comps.len())];
            let d = 10f64.powf(rng.gen_range(-7.0..0.0));
            near(c, d, rng)
        }
        1 => {
            let r = rng.gen_range(0.0..fam.m + 2.0);
            let s: f64 = rng.gen_range(0.0..1.0);
            FrequencyPair::new(unit(rng).map(|x| x * r * s), unit(rng).map(|x| x * r * (1.0 - s * s).sqrt()))
        }
        _ => {
            let r = 10f64.powf(rng.gen_range(-3.0..3.0));
            FrequencyPair::new(unit(rng).map(|x| x * r), unit(rng).map(|x| x * r * rng.gen_range(0.0..2.0)))
        }
    }
}

fn cutoff_partition() -> Outcome {
    let report = scan_all(5.0f64, &ScanParams::default()).unwrap();
    let fam = CutoffFamily::new(report, FamilyOptions::default()).unwrap();
    let idxs: Vec<PhaseIndex> =
        ["c11+--", "cc1+--", "c1c+--", "1cc-++", "111+--"].iter().map(|s| s.parse().unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut sum_err: f64 = 0.0;
    let mut rho_dep: f64 = 0.0;
    let mut far = 0usize;
    let mut kill: f64 = 0.0;
    for rho in [1.0, 0.1, 0.01] {
        for k in 0..100_000 {
            let idx = &idxs[k % idxs.len()];
            let p = sample_point(&fam, idx, &mut rng, k);
            let part = fam.partition(idx, &p, rho);
            sum_err = sum_err.max((part.r + part.s + part.t - 1.0).abs());
            kill = kill.max((fam.chi_o_tilde(&p.xi) * part.r).abs());
            if rho == 1.0 && fam.dist_resonant(idx, &p) > 2.0 * fam.delta0 {
                far += 1;
                for other in [0.1, 0.01] {
                    let q = fam.partition(idx, &p, other);
                    rho_dep = rho_dep.max((q.s - part.s).abs()).max((q.t - part.t).abs());
                }
            }
        }
    }
    // points inside the χ_R support, where χ̃_O must vanish
    for comp in fam.report.all_components() {
        for rho in [1.0, 0.1, 0.01] {
            for _ in 0..5000 {
                let d = fam.chi_r_support(&comp, rho) * rng.gen_range(0.0..1.5);
                let p = near(&comp, d, &mut rng);
                kill = kill.max((fam.chi_o_tilde(&p.xi) * fam.chi_r(&comp.idx, &p, rho)).abs());
            }
        }
    }
    check(
        sum_err <= 1e-12 && rho_dep <= 1e-14 && kill == 0.0 && far > 10_000,
        format!(
            "|R+S+T-1| {sum_err:.1e}, rho dependence off B_2d0 {rho_dep:.1e} ({far} pts), max |chi_O~ chi_R| {kill:e}"
        ),
    )
}

fn norm_triples() -> [(f64, f64, f64); 5] {
    [(2.0, 2.0, 1.0), (4.0, 4.0, 2.0), (3.0, 6.0, 2.0), (f64::INFINITY, 2.0, 2.0), (2.0, f64::INFINITY, 2.0)]
}

fn operator_bounds() -> Outcome {
    let like = SpectralField::zeros(1, 64, TAU * 8.0).unwrap();
    let symbols: Vec<Box<dyn Fn(&[f64; 3], &[f64; 3]) -> f64 + Sync>> = vec![
        Box::new(|xi, eta| (-(xi[0] - 2.0 * eta[0]).powi(2)).exp()),
        Box::new(|xi, eta| 1.0 / (1.0 + xi[0] * xi[0] + eta[0] * eta[0])),
        Box::new(|xi, eta| plateau(eta[0] / 3.0) * plateau((xi[0] - eta[0]) / 2.0)),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut holder: f64 = 0.0;
    for m in &symbols {
        let grid = SymbolGrid::sample(&|xi: &[f64; 3], eta: &[f64; 3]| m(xi, eta), &like).unwrap();
        let bound = symbol_l1_norm(&grid).norm;
        for _ in 0..100 {
            let f = random_band_limited(&like, 20, &mut rng);
            let g = random_band_limited(&like, 20, &mut rng);
            let t = pseudo_product_table(&grid, &f, &g).unwrap();
            for (p, q, r) in norm_triples() {
                holder = holder.max(t.lp_norm(r) / (bound * f.lp_norm(p) * g.lp_norm(q)));
            }
        }
    }

    let like = SpectralField::zeros(1, 8192, TAU * 1000.0).unwrap();
    let mut bounds = Vec::new();
    for rho in [1.0, 0.1, 0.01] {
        let sym = TranslationSymbol { h: move |s: &[f64; 3]| plateau(s[0] / rho), lambda: 2, support: rho };
        let bound = sym.l1_norm(&like).unwrap();
        for _ in 0..10 {
            let f = random_band_limited(&like, 1000, &mut rng);
            let g = random_band_limited(&like, 1000, &mut rng);
            let t = sym.apply(&f, &g).unwrap();
            for (p, q, r) in norm_triples() {
                holder = holder.max(t.lp_norm(r) / (bound * f.lp_norm(p) * g.lp_norm(q)));
            }
        }
        bounds.push(bound);
    }
    let lo = bounds.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = bounds.iter().cloned().fold(0.0, f64::max);
    let variation = hi / lo - 1.0;

    let like = SpectralField::zeros(1, 1 << 15, 8192.0).unwrap();
    let fields: Vec<_> = (0..4).map(|_| random_localized(&like, &mut rng).unwrap()).collect();
    let s = 0.5;
    let sup = |rho: f64| fields.iter().map(|f| radial_shell_ratio(f, 1.0, rho, s, plateau)).fold(0.0, f64::max);
    let decay = (sup(0.1) / sup(0.01)) / 10f64.powf(s / 3.0);
    check(
        holder <= 1.0 + 1e-6 && variation < 0.1 && (1.0 / 3.0..=3.0).contains(&decay),
        format!(
            "max observed/bound {holder:.4}, translation bound variation {:.2}%, radial decay/predicted {decay:.3}",
            100.0 * variation
        ),
    )
}

fn littlewood_paley() -> Outcome {
    let base = SpectralField::zeros(1, 1024, TAU * 8.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let f = random_band_limited(&base, 200, &mut rng);
    let vmax = |v: &[Complex<f64>]| v.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut orth: f64 = 0.0;
    for j in -3i32..6 {
        for jp in -3..6 {
            if (j - jp).abs() >= 2 {
                let pp = lp_project(&lp_project(&f, j, LpMode::Annulus), jp, LpMode::Annulus);
                orth = orth.max(vmax(&pp.values()));
            }
        }
    }
    let mut sum = lp_project(&f, -3, LpMode::Ball);
    for j in -3..=5 {
        sum = sum.add(&lp_project(&f, j, LpMode::Annulus)).unwrap();
    }
    let diff: Vec<Complex<f64>> = sum.values().iter().zip(f.values()).map(|(a, b)| a - b).collect();
    let tele = vmax(&diff) / vmax(&f.values()).max(1.0);

    let like = SpectralField::zeros(1, 8192, 256.0).unwrap();
    let mut spread: f64 = 0.0;
    for (p, q) in [(6.0, 2.0), (f64::INFINITY, 2.0), (4.0, 1.0)] {
        let rows: Vec<f64> =
            (0..=5).map(|j| bernstein_check(&like, j, p, q, 100, 40 + j as u64).unwrap().max_ratio).collect();
        let lo = rows.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = rows.iter().cloned().fold(0.0, f64::max);
        spread = spread.max(hi / lo);
    }
    check(
        orth <= 1e-12 && tele <= 1e-12 && spread <= 2.0,
        format!("|P_j P_j'| {orth:.1e}, telescoping error {tele:.1e}, Bernstein spread {spread:.3}"),
    )
}

fn smooth_real(n: usize, l: f64, amp: f64, rng: &mut ChaCha8Rng) -> SpectralField {
    let terms: Vec<(f64, f64, f64)> =
        (1..=4).map(|k| (k as f64, amp * rng.gen_range(-1.0..1.0) / k as f64, rng.gen_range(0.0..TAU))).collect();
    SpectralField::from_fn(1, n, l, |x| terms.iter().map(|(k, a, ph)| a * (TAU * k * x[0] / l + ph).cos()).sum::<f64>())
        .unwrap()
}

fn smooth_state(sp: &SpeedPair, n: usize, l: f64, amp: f64, seed: u64) -> SystemState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data: [SpeciesData; 2] = std::array::from_fn(|_| SpeciesData {
        u0: smooth_real(n, l, amp, &mut rng),
        u1: smooth_real(n, l, amp, &mut rng),
    });
    diagonalize(sp, &data).unwrap()
}

fn random_coeffs(rng: &mut ChaCha8Rng) -> NonlinearityCoefficients {
    let mut v = || rng.gen_range(-1.0..1.0);
    NonlinearityCoefficients { alpha: v(), beta: v(), gamma: v(), delta: v(), epsilon: v(), zeta: v() }
}

fn state_distance(a: &SystemState, b: &SystemState) -> f64 {
    a.fields
        .iter()
        .zip(&b.fields)
        .flat_map(|(x, y)| x.coeffs().iter().zip(y.coeffs()).map(|(u, v)| (u - v).norm()))
        .fold(0.0, f64::max)
}

fn simulator_integrity() -> Outcome {
    let sp = SpeedPair::new(5.0).unwrap();
    let lin = Integrator::new(sp, NonlinearityCoefficients::zero());
    let state = smooth_state(&sp, 128, 40.0, 1.0, 5);
    let mut modulus: f64 = 0.0;
    for dt in [1e-3, 0.1, 1.0, 7.3, 250.0] {
        let next = lin.step(&state, dt).unwrap();
        for (a, b) in state.fields.iter().zip(&next.fields) {
            for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
                modulus = modulus.max((x.norm() - y.norm()).abs() / x.norm().max(1e-300));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let integ = Integrator::new(sp, random_coeffs(&mut rng));
    let s0 = smooth_state(&sp, 32, TAU * 2.0, 0.5, 7);
    let solve = |dt: f64| integ.run(&s0, dt, 2.0, |_| {}).unwrap();
    let reference = solve(0.05 / 8.0);
    let order = (state_distance(&solve(0.05), &reference) / state_distance(&solve(0.025), &reference)).log2();

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let integ = Integrator::new(sp, random_coeffs(&mut rng));
    let drift = |eps: f64| {
        let s = smooth_state(&sp, 64, 30.0, eps, 10);
        let p0 = profile_of(&sp, &s);
        profile_of(&sp, &integ.run(&s, 0.1, 10.0, |_| {}).unwrap()).distance(&p0)
    };
    let scaling = drift(1e-2) / drift(1e-3) / 100.0;
    check(
        modulus <= 1e-14 && (order - 4.0).abs() <= 0.3 && (0.5..=2.0).contains(&scaling),
        format!("modulus drift {modulus:.1e}, order {order:.3}, drift ratio / eps^2 ratio {scaling:.3}"),
    )
}

fn resonant_amplification() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs");
    let run = |name: &str| {
        let text = std::fs::read_to_string(dir.join(name)).unwrap();
        let cfg = ExperimentConfig::parse(&text).unwrap();
        let report =
            scan_all(cfg.c, &ScanParams { r_max: cfg.r_max, grid_step: cfg.grid_step, tau_sep: cfg.tau_sep }).unwrap();
        run_resonant_amplification(&report, &cfg).unwrap()
    };
    let res = run("c5_resonant.conf");
    let lin = run("c5_linear.conf");
    let g = res.growth_ratio.unwrap_or(f64::NAN);
    let one = lin.growth_ratio.unwrap_or(f64::NAN);
    check(
        g >= 5.0 && (one - 1.0).abs() <= 1e-9,
        format!("growth ratio {g:.1}, zero-coefficient ratio 1 {:+.1e}", one - 1.0),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("c=5 golden values", golden_values),
        ("closed-form root", closed_form_root),
        ("separation verdict", separation_verdict),
        ("constants feasibility", constants_feasibility),
        ("cut-off partition", cutoff_partition),
        ("operator bounds", operator_bounds),
        ("Littlewood-Paley and Bernstein", littlewood_paley),
        ("simulator integrity", simulator_integrity),
        ("resonant amplification", resonant_amplification),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(d) => println!("criterion {}: PASS  {name}: {d}", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {d}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
