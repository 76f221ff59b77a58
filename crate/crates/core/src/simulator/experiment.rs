//! Resonant versus detuned forcing of the outcome band.
//!
//! Two runs share everything but the carrier frequencies. In the resonant
//! run the packets sit on a space-time resonant configuration
//! `(ξ, η) = (λR, R)`; in the control run `R` is shifted by a multiple of the
//! packet bandwidth. Both runs seed the outcome species weakly at the
//! product frequency, and the observable is the outcome-band energy.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_complex::Complex;
use serde::Serialize;

use super::coeffs::NonlinearityCoefficients;
use super::state::{band_sum, conj_reflect, profile_of, ProfileState, SystemState};
use super::step::Integrator;
use crate::bilinear::SpectralField;
use crate::dispersion::{PhaseIndex, Sign, SpeedTag};
use crate::error::{Error, Result};
use crate::resonance::{ResonanceReport, ResonantComponent};
use crate::scalar::Real;

pub const RECORD_SCHEMA: &str = "experiment-record/1";

pub const ONE_D_CAVEAT: &str = "1-D periodic box: resonance radii come from the 3-D radial analysis and are reused as \
     1-D carrier frequencies; colinear configurations have the same phase, so the time-resonance condition is unchanged.";

/// Parameters of [`run_resonant_amplification`], read from `key = value`
/// lines.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub c: f64,
    pub phase: PhaseIndex,
    pub coeffs: NonlinearityCoefficients<f64>,
    /// Peak physical amplitude of each source packet.
    pub amplitude: f64,
    /// Peak physical amplitude of the outcome seed.
    pub seed_amplitude: f64,
    /// Gaussian width of the packets in frequency.
    pub bandwidth: f64,
    /// Control-run carrier shift, in bandwidths.
    pub detune: f64,
    /// Lattice cells per source radius; fixes the box length.
    pub cells: u32,
    pub grid: usize,
    pub dt: f64,
    pub t_final: f64,
    pub samples: usize,
    /// Half-width of the outcome band around the product carrier.
    pub band_halfwidth: f64,
    pub dealias: bool,
    pub r_max: f64,
    pub grid_step: f64,
    pub tau_sep: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            c: 5.0,
            phase: "c11+--".parse().expect("valid label"),
            coeffs: NonlinearityCoefficients::zero(),
            amplitude: 0.01,
            seed_amplitude: 1e-4,
            bandwidth: 0.02,
            detune: 10.0,
            cells: 28,
            grid: 512,
            dt: 0.1,
            t_final: 100.0,
            samples: 21,
            band_halfwidth: 0.08,
            dealias: true,
            r_max: 100.0,
            grid_step: 1e-3,
            tau_sep: 1e-6,
        }
    }
}

fn parse_num<V: FromStr>(key: &str, v: &str) -> Result<V> {
    v.parse().map_err(|_| Error::Config(format!("`{key}`: cannot parse `{v}`")))
}

impl ExperimentConfig {
    /// Blank lines and `#` comments are skipped; unknown or repeated keys
    /// are errors. Missing keys keep their defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut seen = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) =
                line.split_once('=').ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", n + 1)))?;
            let (k, v) = (k.trim().to_string(), v.trim().to_string());
            if seen.insert(k.clone(), v).is_some() {
                return Err(Error::Config(format!("line {}: duplicate key `{k}`", n + 1)));
            }
        }
        let mut cfg = Self::default();
        for (k, v) in &seen {
            let k = k.as_str();
            match k {
                "c" => cfg.c = parse_num(k, v)?,
                "phase" => cfg.phase = v.parse()?,
                "alpha" => cfg.coeffs.alpha = parse_num(k, v)?,
                "beta" => cfg.coeffs.beta = parse_num(k, v)?,
                "gamma" => cfg.coeffs.gamma = parse_num(k, v)?,
                "delta" => cfg.coeffs.delta = parse_num(k, v)?,
                "epsilon" => cfg.coeffs.epsilon = parse_num(k, v)?,
                "zeta" => cfg.coeffs.zeta = parse_num(k, v)?,
                "amplitude" => cfg.amplitude = parse_num(k, v)?,
                "seed_amplitude" => cfg.seed_amplitude = parse_num(k, v)?,
                "bandwidth" => cfg.bandwidth = parse_num(k, v)?,
                "detune" => cfg.detune = parse_num(k, v)?,
                "cells" => cfg.cells = parse_num(k, v)?,
                "grid" => cfg.grid = parse_num(k, v)?,
                "dt" => cfg.dt = parse_num(k, v)?,
                "t_final" => cfg.t_final = parse_num(k, v)?,
                "samples" => cfg.samples = parse_num(k, v)?,
                "band_halfwidth" => cfg.band_halfwidth = parse_num(k, v)?,
                "dealias" => cfg.dealias = parse_num(k, v)?,
                "r_max" => cfg.r_max = parse_num(k, v)?,
                "grid_step" => cfg.grid_step = parse_num(k, v)?,
                "tau_sep" => cfg.tau_sep = parse_num(k, v)?,
                _ => return Err(Error::Config(format!("unknown key `{k}`"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("amplitude", self.amplitude),
            ("bandwidth", self.bandwidth),
            ("dt", self.dt),
            ("t_final", self.t_final),
            ("band_halfwidth", self.band_halfwidth),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("`{name}` must be positive, got {v}")));
            }
        }
        if !(self.seed_amplitude.is_finite() && self.seed_amplitude >= 0.0) {
            return Err(Error::Config("`seed_amplitude` must be nonnegative".into()));
        }
        if !self.coeffs.is_finite() || !self.detune.is_finite() {
            return Err(Error::Config("coefficients and detune must be finite".into()));
        }
        if self.cells == 0 || self.samples < 2 {
            return Err(Error::Config("need cells >= 1 and samples >= 2".into()));
        }
        if !self.grid.is_power_of_two() || self.grid < 8 {
            return Err(Error::Config(format!("`grid` must be a power of two >= 8, got {}", self.grid)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    pub band_energy: f64,
    /// Outcome-band norm of `f(t) - f(0)` for the outcome species.
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Carriers {
    /// Lattice frequencies of the first source, second source and outcome.
    pub eta: f64,
    pub zeta: f64,
    pub xi: f64,
    /// Largest relative error from snapping to the lattice.
    pub rounding_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRecord {
    pub carriers: Carriers,
    pub band: [f64; 2],
    pub samples: Vec<Sample>,
    /// `E(T)/E(0)` in the outcome band; absent after a rejected step.
    pub energy_ratio: Option<f64>,
    pub blowup: Option<BlowUp>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlowUp {
    pub t: f64,
    pub jump: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentSummary {
    pub phase: String,
    pub radius: f64,
    pub lambda: f64,
    pub outcome_radius: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub schema: String,
    pub caveat: String,
    pub config: ExperimentConfig,
    pub component: ComponentSummary,
    pub box_length: f64,
    pub dxi: f64,
    pub resonant: RunRecord,
    pub detuned: RunRecord,
    /// `[E_res(T)/E_res(0)] / [E_det(T)/E_det(0)]`.
    pub growth_ratio: Option<f64>,
    /// `completed` or `inconclusive` (blow-up guard).
    pub status: String,
}

impl ExperimentRecord {
    pub fn is_conclusive(&self) -> bool {
        self.status == "completed"
    }

    /// `run,t,band_energy,deviation`.
    pub fn timeseries_csv(&self) -> String {
        let mut out = String::from("run,t,band_energy,deviation\n");
        for (name, run) in [("resonant", &self.resonant), ("detuned", &self.detuned)] {
            for s in &run.samples {
                out.push_str(&format!("{name},{:.16e},{:.16e},{:.16e}\n", s.t, s.band_energy, s.deviation));
            }
        }
        out
    }
}

fn snap(x: f64, dxi: f64) -> (i64, f64) {
    let k = (x / dxi).round() as i64;
    let err = if x == 0.0 { 0.0 } else { ((k as f64 * dxi - x) / x).abs() };
    (k, err)
}

/// `amp/bw · exp(-(ξ-k0)^2/(2bw^2))` added to `f` at signed carrier `k0`:
/// physically `amp · exp(-bw^2 x^2/2) e^{i k0 x}`.
fn add_packet<T: Real>(f: &mut SpectralField<T>, k0: f64, amp: f64, bw: f64) {
    for i in 0..f.len() {
        let x = f.frequency(i)[0].as_f64();
        let g = amp / bw * (-(x - k0).powi(2) / (2.0 * bw * bw)).exp();
        let c = f.coeffs()[i];
        f.coeffs_mut()[i] = c + Complex::new(T::lit(g), T::zero());
    }
}

struct Setup<T> {
    state: SystemState<T>,
    carriers: Carriers,
    band: [f64; 2],
}

fn setup<T: Real>(
    cfg: &ExperimentConfig,
    comp: &ResonantComponent<T>,
    like: &SpectralField<T>,
    eta: f64,
) -> Result<Setup<T>> {
    let dxi = like.dxi().as_f64();
    let lambda = comp.lambda.as_f64();
    let idx = comp.idx;
    let [e0, e1, e2] = idx.field_signs();
    let (k_eta, err_eta) = snap(eta, dxi);
    let (k_zeta, err_zeta) = snap((lambda - 1.0) * eta, dxi);
    let (k_xi, err_xi) = snap(lambda * eta, dxi);
    let rounding_error = err_eta.max(err_zeta).max(err_xi);
    if rounding_error > 0.01 {
        return Err(Error::InvalidParameter {
            name: "cells",
            reason: format!("carriers are lattice-representable only to {rounding_error:.3e} (> 1%); enlarge the box"),
        });
    }
    let n = like.grid_size() as i64;
    let reach = k_xi.abs().max(k_eta.abs()).max(k_zeta.abs()) as f64 + (cfg.band_halfwidth / dxi).ceil();
    if 3.0 * reach > n as f64 {
        return Err(Error::InvalidParameter {
            name: "grid",
            reason: format!("outcome band reaches lattice index {reach}, beyond the dealiased range N/3 = {}", n / 3),
        });
    }
    let (eta, zeta, xi) = (k_eta as f64 * dxi, k_zeta as f64 * dxi, k_xi as f64 * dxi);

    // injected parts: [species][sign], then symmetrized to real data
    let mut parts: [[SpectralField<T>; 2]; 2] = std::array::from_fn(|_| std::array::from_fn(|_| like.clone()));
    let slot = |k: SpeedTag| if k == SpeedTag::One { 0 } else { 1 };
    let sgn = |s: Sign| if s == Sign::Plus { 0 } else { 1 };
    add_packet(&mut parts[slot(idx.first)][sgn(e1)], eta, cfg.amplitude, cfg.bandwidth);
    add_packet(&mut parts[slot(idx.second)][sgn(e2)], zeta, cfg.amplitude, cfg.bandwidth);
    add_packet(&mut parts[slot(idx.output)][sgn(e0)], xi, cfg.seed_amplitude, cfg.bandwidth);
    let plus = |k: usize| parts[k][0].add(&conj_reflect(&parts[k][1])).expect("same grid");
    let state = SystemState::from_plus(T::zero(), plus(0), plus(1))?;
    let band = [(xi.abs() - cfg.band_halfwidth).max(0.0), xi.abs() + cfg.band_halfwidth];
    Ok(Setup { state, carriers: Carriers { eta, zeta, xi, rounding_error }, band })
}

fn deviation<T: Real>(k: SpeedTag, f: &ProfileState<T>, f0: &ProfileState<T>, band: [T; 2]) -> T {
    let mut e = T::zero();
    for s in Sign::ALL {
        let a = f.field(k, s);
        let b = f0.field(k, s);
        let diff = a.add(&b.scale(Complex::new(-T::one(), T::zero()))).expect("same grid");
        e = e + band_sum(&diff, band[0], band[1]);
    }
    e.sqrt()
}

fn run_one<T: Real>(cfg: &ExperimentConfig, integ: &Integrator<T>, k: SpeedTag, setup: Setup<T>) -> RunRecord {
    let band = [T::lit(setup.band[0]), T::lit(setup.band[1])];
    let energy = |s: &SystemState<T>| s.species_band_energy(k, band[0], band[1]).expect("ordered band").as_f64();
    let f0 = profile_of(&integ.speeds, &setup.state);
    let e0 = energy(&setup.state);
    let mut samples = vec![Sample { t: 0.0, band_energy: e0, deviation: 0.0 }];
    let mut state = setup.state;
    let mut blowup = None;
    for j in 1..cfg.samples {
        let t = cfg.t_final * j as f64 / (cfg.samples - 1) as f64;
        match integ.run(&state, T::lit(cfg.dt), T::lit(t), |_| {}) {
            Ok(s) => state = s,
            Err(Error::StepRejected { t, jump }) => {
                blowup = Some(BlowUp { t, jump });
                break;
            }
            Err(e) => unreachable!("validated step size: {e}"),
        }
        let f = profile_of(&integ.speeds, &state);
        samples.push(Sample {
            t: state.t.as_f64(),
            band_energy: energy(&state),
            deviation: deviation(k, &f, &f0, band).as_f64(),
        });
    }
    let energy_ratio = match (&blowup, samples.last()) {
        (None, Some(last)) if e0 > 0.0 => Some(last.band_energy / e0),
        _ => None,
    };
    RunRecord { carriers: setup.carriers, band: setup.band, samples, energy_ratio, blowup }
}

/// Resonant and detuned runs for the first component of `cfg.phase`
/// (taken from `report`); both runs execute in parallel.
pub fn run_resonant_amplification<T: Real>(
    report: &ResonanceReport<T>,
    cfg: &ExperimentConfig,
) -> Result<ExperimentRecord> {
    cfg.validate()?;
    if !report.separated {
        return Err(Error::NotSeparated { min_gap: report.min_gap.as_f64(), tau: report.params.tau_sep.as_f64() });
    }
    let comp = report.components_for(&cfg.phase).into_iter().next().ok_or_else(|| Error::InvalidParameter {
        name: "phase",
        reason: format!("{} has no resonant component at c = {}", cfg.phase, report.c),
    })?;
    let radius = comp.radius.as_f64();
    let dxi = radius / cfg.cells as f64;
    let box_length = std::f64::consts::TAU / dxi;
    let like = SpectralField::<T>::zeros(1, cfg.grid, T::lit(box_length))?;
    let res = setup(cfg, &comp, &like, radius)?;
    let det = setup(cfg, &comp, &like, radius + cfg.detune * cfg.bandwidth)?;

    let mut integ = Integrator::new(
        report.speeds(),
        NonlinearityCoefficients {
            alpha: T::lit(cfg.coeffs.alpha),
            beta: T::lit(cfg.coeffs.beta),
            gamma: T::lit(cfg.coeffs.gamma),
            delta: T::lit(cfg.coeffs.delta),
            epsilon: T::lit(cfg.coeffs.epsilon),
            zeta: T::lit(cfg.coeffs.zeta),
        },
    );
    integ.dealias = cfg.dealias;
    let k = comp.idx.output;
    let (resonant, detuned) = rayon::join(|| run_one(cfg, &integ, k, res), || run_one(cfg, &integ, k, det));
    let growth_ratio = match (resonant.energy_ratio, detuned.energy_ratio) {
        (Some(a), Some(b)) if b > 0.0 => Some(a / b),
        _ => None,
    };
    let status = if resonant.blowup.is_some() || detuned.blowup.is_some() { "inconclusive" } else { "completed" };
    Ok(ExperimentRecord {
        schema: RECORD_SCHEMA.to_string(),
        caveat: ONE_D_CAVEAT.to_string(),
        config: cfg.clone(),
        component: ComponentSummary {
            phase: comp.idx.to_string(),
            radius,
            lambda: comp.lambda.as_f64(),
            outcome_radius: comp.outcome_radius.as_f64(),
        },
        box_length,
        dxi,
        resonant,
        detuned,
        growth_ratio,
        status: status.to_string(),
    })
}
