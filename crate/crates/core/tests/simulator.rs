use kgres::bilinear::SpectralField;
use kgres::resonance::{scan_all, ScanParams};
use kgres::simulator::{
    diagonalize, expand_quadratic, profile_of, run_resonant_amplification, ExperimentConfig, Integrator,
    NonlinearityCoefficients, SpeciesData, SystemState,
};
use kgres::{Error, Sign, SpeedPair, SpeedTag};
use num_complex::Complex;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TAU: f64 = std::f64::consts::TAU;

fn sp() -> SpeedPair {
    SpeedPair::new(5.0).unwrap()
}

/// Smooth real field: a few low cosines with random amplitude and phase.
fn smooth_real(n: usize, l: f64, modes: i64, amp: f64, rng: &mut ChaCha8Rng) -> SpectralField {
    let terms: Vec<(f64, f64, f64)> =
        (1..=modes).map(|k| (k as f64, amp * rng.gen_range(-1.0..1.0) / k as f64, rng.gen_range(0.0..TAU))).collect();
    SpectralField::from_fn(1, n, l, |x| terms.iter().map(|(k, a, ph)| a * (TAU * k * x[0] / l + ph).cos()).sum::<f64>())
        .unwrap()
}

fn smooth_data(n: usize, l: f64, amp: f64, seed: u64) -> [SpeciesData; 2] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    std::array::from_fn(|_| SpeciesData {
        u0: smooth_real(n, l, 4, amp, &mut rng),
        u1: smooth_real(n, l, 4, amp, &mut rng),
    })
}

fn random_coeffs(rng: &mut ChaCha8Rng) -> NonlinearityCoefficients {
    let mut v = || rng.gen_range(-1.0..1.0);
    NonlinearityCoefficients { alpha: v(), beta: v(), gamma: v(), delta: v(), epsilon: v(), zeta: v() }
}

fn max_diff(a: &[Complex<f64>], b: &[Complex<f64>]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[test]
fn diagonalize_examples() {
    let sp = sp();
    let l = 20.0;
    let zero = SpectralField::zeros(1, 64, l).unwrap();
    let u1 = SpectralField::from_fn(1, 64, l, |x| (TAU * 3.0 * x[0] / l).sin()).unwrap();
    let s = diagonalize(
        &sp,
        &[SpeciesData { u0: zero.clone(), u1: u1.clone() }, SpeciesData { u0: zero.clone(), u1: u1.clone() }],
    )
    .unwrap();
    for f in &s.fields {
        assert_eq!(f, &u1);
    }

    let k0 = 5i64;
    let mode = SpectralField::from_fn(1, 64, l, |x| (TAU * k0 as f64 * x[0] / l).cos()).unwrap();
    let s = diagonalize(
        &sp,
        &[SpeciesData { u0: mode.clone(), u1: zero.clone() }, SpeciesData { u0: mode.clone(), u1: zero.clone() }],
    )
    .unwrap();
    let xi0 = TAU * k0 as f64 / l;
    for (k, c) in [(SpeedTag::One, 1.0), (SpeedTag::C, 5.0)] {
        let br = (1.0 + c * c * xi0 * xi0).sqrt();
        for sg in Sign::ALL {
            let want: Vec<Complex<f64>> =
                mode.coeffs().iter().map(|m| m * Complex::new(0.0, sg.value::<f64>() * br)).collect();
            assert!(max_diff(s.field(k, sg).coeffs(), &want) < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, failure_persistence: None, ..ProptestConfig::default() })]
    #[test]
    fn diagonalize_round_trip(seed in any::<u64>(), amp in 0.01f64..10.0) {
        let sp = sp();
        let data = smooth_data(64, 30.0, amp, seed);
        let back = diagonalize(&sp, &data).unwrap().reconstruct(&sp);
        for (a, b) in data.iter().zip(&back) {
            let scale = amp.max(1.0);
            prop_assert!(max_diff(a.u0.coeffs(), b.u0.coeffs()) <= 1e-12 * scale);
            prop_assert!(max_diff(a.u1.coeffs(), b.u1.coeffs()) <= 1e-12 * scale);
        }
    }
}

#[test]
fn reassembled_table_matches_direct_nonlinearity() {
    let sp = sp();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for trial in 0..10 {
        let q = random_coeffs(&mut rng);
        let table = expand_quadratic(&q);
        let data = smooth_data(64, 25.0, 1.0, 100 + trial);
        let state = diagonalize(&sp, &data).unwrap();
        // v[ℓ][ε] = u^ℓ_ε / <D>_ℓ in physical space
        let v: Vec<Vec<Vec<Complex<f64>>>> = [SpeedTag::One, SpeedTag::C]
            .iter()
            .map(|&k| {
                Sign::ALL
                    .iter()
                    .map(|&s| {
                        let f = state.field(k, s);
                        f.multiply(|xi| 1.0 / sp.bracket_vec(k, xi)).values()
                    })
                    .collect()
            })
            .collect();
        let u1 = data[0].u0.values();
        let uc = data[1].u0.values();
        for i in 0..64 {
            let pt = [[v[0][0][i], v[0][1][i]], [v[1][0][i], v[1][1][i]]];
            for k in [SpeedTag::One, SpeedTag::C] {
                let [a, b, g] = match k {
                    SpeedTag::One => [q.alpha, q.beta, q.gamma],
                    SpeedTag::C => [q.delta, q.epsilon, q.zeta],
                };
                let direct = u1[i] * u1[i] * a + uc[i] * uc[i] * b + u1[i] * uc[i] * g;
                for e0 in Sign::ALL {
                    assert!((table.reassemble(k, e0, &pt) - direct).norm() <= 1e-10);
                }
            }
        }
    }
}

#[test]
fn linear_flow_is_exact() {
    let sp = sp();
    let state = diagonalize(&sp, &smooth_data(128, 40.0, 1.0, 5)).unwrap();
    let integ = Integrator::new(sp, NonlinearityCoefficients::zero());
    for dt in [1e-3, 0.1, 1.0, 7.3, 250.0] {
        let next = integ.step(&state, dt).unwrap();
        for (a, b) in state.fields.iter().zip(&next.fields) {
            for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
                assert!((x.norm() - y.norm()).abs() <= 1e-14 * x.norm().max(1e-300));
            }
        }
    }
    // phase advance of a single mode
    let l = 40.0;
    let k0 = 3.0;
    let xi0 = TAU * k0 / l;
    let mode = SpectralField::from_fn(1, 128, l, |x| (xi0 * x[0]).cos()).unwrap();
    let s0 = SystemState::from_plus(0.0, mode.clone(), mode.clone()).unwrap();
    let t = 13.7;
    let s = integ.run(&s0, 0.37, t, |_| {}).unwrap();
    assert!((s.t - t).abs() < 1e-12);
    for (k, c) in [(SpeedTag::One, 1.0), (SpeedTag::C, 5.0)] {
        for sg in Sign::ALL {
            let e = Complex::new(0.0, sg.value::<f64>() * t * (1.0 + c * c * xi0 * xi0).sqrt()).exp();
            let want: Vec<Complex<f64>> = s0.field(k, sg).coeffs().iter().map(|v| v * e).collect();
            assert!(max_diff(s.field(k, sg).coeffs(), &want) <= 1e-12);
        }
    }
}

fn solve(state: &SystemState, integ: &Integrator, dt: f64, t: f64) -> SystemState {
    integ.run(state, dt, t, |_| {}).unwrap()
}

fn state_distance(a: &SystemState, b: &SystemState) -> f64 {
    a.fields.iter().zip(&b.fields).map(|(x, y)| max_diff(x.coeffs(), y.coeffs())).fold(0.0, f64::max)
}

#[test]
fn fourth_order_convergence() {
    let sp = sp();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let integ = Integrator::new(sp, random_coeffs(&mut rng));
    let state = diagonalize(&sp, &smooth_data(32, TAU * 2.0, 0.5, 7)).unwrap();
    let t = 2.0;
    // asymptotic regime: max <ξ>_c dt stays below 2
    let dt = 0.05;
    let reference = solve(&state, &integ, dt / 8.0, t);
    let e1 = state_distance(&solve(&state, &integ, dt, t), &reference);
    let e2 = state_distance(&solve(&state, &integ, dt / 2.0, t), &reference);
    let order = (e1 / e2).log2();
    println!("errors {e1:e} {e2:e}, order {order}");
    assert!((order - 4.0).abs() <= 0.3);
}

#[test]
fn profiles() {
    let sp = sp();
    let state = diagonalize(&sp, &smooth_data(64, 30.0, 1.0, 8)).unwrap();
    let p0 = profile_of(&sp, &state);
    assert_eq!(p0.fields, state.fields);
    let lin = Integrator::new(sp, NonlinearityCoefficients::zero());
    let later = solve(&state, &lin, 0.5, 17.0);
    assert!(profile_of(&sp, &later).distance(&p0) <= 1e-12);
}

#[test]
fn profile_drift_scales_quadratically() {
    let sp = sp();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let integ = Integrator::new(sp, random_coeffs(&mut rng));
    let drift = |eps: f64| {
        let s = diagonalize(&sp, &smooth_data(64, 30.0, eps, 10)).unwrap();
        let p0 = profile_of(&sp, &s);
        profile_of(&sp, &solve(&s, &integ, 0.1, 10.0)).distance(&p0)
    };
    let ratio = drift(1e-2) / drift(1e-3);
    println!("drift ratio {ratio}");
    assert!(ratio >= 50.0 && ratio <= 200.0);
}

#[test]
fn band_energy_properties() {
    let sp = sp();
    let s = diagonalize(&sp, &smooth_data(128, 30.0, 1.0, 11)).unwrap();
    assert_eq!(s.band_energy(50.0, 60.0).unwrap(), 0.0);
    let full = s.band_energy(0.0, f64::INFINITY).unwrap();
    let phys: f64 = s.fields.iter().map(|f| f.lp_norm(2.0).powi(2)).sum();
    assert!((full - phys).abs() <= 1e-12 * phys);
    let parts = s.band_energy(0.0, 0.5).unwrap()
        + s.band_energy(0.5, 1.3).unwrap()
        + s.band_energy(1.3, f64::INFINITY).unwrap();
    assert!((parts - full).abs() <= 1e-12 * full);
    assert!(matches!(s.band_energy(1.0, 1.0), Err(Error::InvalidParameter { .. })));
}

#[test]
fn nonlinear_flow_stays_real() {
    let sp = sp();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let integ = Integrator::new(sp, random_coeffs(&mut rng));
    let s = diagonalize(&sp, &smooth_data(128, 40.0, 0.3, 13)).unwrap();
    let mut worst: f64 = 0.0;
    integ.run(&s, 0.1, 30.0, |st| worst = worst.max(st.reality_defect(&sp))).unwrap();
    println!("reality defect {worst:e}");
    assert!(worst <= 1e-12);
}

#[test]
fn blowup_guard_rejects_steps() {
    let sp = sp();
    let integ =
        Integrator::new(sp, NonlinearityCoefficients { alpha: 1.0, delta: 1.0, ..NonlinearityCoefficients::zero() });
    let s = diagonalize(&sp, &smooth_data(64, 30.0, 50.0, 14)).unwrap();
    assert!(matches!(integ.run(&s, 0.5, 10.0, |_| {}), Err(Error::StepRejected { .. })));
}

fn c5_report() -> kgres::ResonanceReport {
    scan_all(5.0f64, &ScanParams::default()).unwrap()
}

fn calibrated() -> ExperimentConfig {
    ExperimentConfig::parse(
        "c = 5\nphase = c11+--\ndelta = 1\namplitude = 0.01\nseed_amplitude = 1e-4\nt_final = 100\n",
    )
    .unwrap()
}

#[test]
fn zero_coefficients_give_unit_ratio() {
    let cfg = ExperimentConfig { t_final: 20.0, ..calibrated() };
    let cfg = ExperimentConfig { coeffs: NonlinearityCoefficients::zero(), ..cfg };
    let rec = run_resonant_amplification(&c5_report(), &cfg).unwrap();
    for run in [&rec.resonant, &rec.detuned] {
        let e0 = run.samples[0].band_energy;
        for s in &run.samples {
            assert!((s.band_energy - e0).abs() <= 1e-12 * e0);
        }
    }
    assert!((rec.growth_ratio.unwrap() - 1.0).abs() <= 1e-9);
}

#[test]
fn resonant_run_outgrows_detuned_run() {
    let rec = run_resonant_amplification(&c5_report(), &calibrated()).unwrap();
    assert_eq!(rec.status, "completed");
    assert_eq!(rec.component.phase, "c11+--");
    assert!(rec.resonant.carriers.rounding_error == 0.0);
    assert!(rec.detuned.carriers.rounding_error <= 0.01);
    let g = rec.growth_ratio.unwrap();
    println!("growth ratio {g}");
    assert!(g >= 5.0);
}

#[test]
fn forced_amplitude_is_linear_at_early_times() {
    let report = c5_report();
    let at = |t: f64| {
        let cfg = ExperimentConfig { t_final: t, samples: 2, ..calibrated() };
        let rec = run_resonant_amplification(&report, &cfg).unwrap();
        (rec.resonant.samples[1].deviation, rec.detuned.samples[1].deviation)
    };
    let (r1, d1) = at(5.0);
    let (r2, d2) = at(10.0);
    println!("resonant {} detuned {}", r2 / r1, d2 / d1);
    assert!((r2 / r1 - 2.0).abs() <= 0.3);
    assert!(d2 / d1 <= 1.5);
}

#[test]
fn experiment_inputs_are_checked() {
    assert!(matches!(ExperimentConfig::parse("bogus = 1"), Err(Error::Config(_))));
    assert!(matches!(ExperimentConfig::parse("c = 5\nc = 6"), Err(Error::Config(_))));
    assert!(matches!(ExperimentConfig::parse("dt = fast"), Err(Error::Config(_))));
    assert!(matches!(ExperimentConfig::parse("grid = 100"), Err(Error::Config(_))));
    assert!(ExperimentConfig::parse("# comment\n\n  dt = 0.05  # trailing\n").is_ok());

    let tight = scan_all(5.0f64, &ScanParams { tau_sep: 0.01, ..ScanParams::default() }).unwrap();
    assert!(matches!(run_resonant_amplification(&tight, &calibrated()), Err(Error::NotSeparated { .. })));

    let no_comp = ExperimentConfig { phase: "111+++".parse().unwrap(), ..calibrated() };
    assert!(run_resonant_amplification(&c5_report(), &no_comp).is_err());

    let small = ExperimentConfig { grid: 64, ..calibrated() };
    assert!(run_resonant_amplification(&c5_report(), &small).is_err());

    let loud = ExperimentConfig { amplitude: 30.0, t_final: 20.0, ..calibrated() };
    let rec = run_resonant_amplification(&c5_report(), &loud).unwrap();
    assert_eq!(rec.status, "inconclusive");
    assert!(rec.growth_ratio.is_none());
}
