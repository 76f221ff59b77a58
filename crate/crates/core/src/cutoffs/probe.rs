//! Monte-Carlo estimates of the sizes of `χ_S/φ` and `χ_T ∂_η φ / |∂_η φ|^2`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::CutoffFamily;
use crate::dispersion::{FrequencyPair, PhaseIndex};
use crate::scalar::{norm3, Real};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeRow {
    pub rho: f64,
    /// Empirical sup of `|χ_S/φ|` over the low-frequency samples.
    pub sup_s_over_phase: f64,
    /// Empirical sup of `χ_T / |∂_η φ|`.
    pub sup_t_over_grad: f64,
    /// Sup of `|χ_S/φ|` restricted to samples with `|φ| >= 1`.
    pub sup_s_over_phase_large: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShellProbe {
    pub r_min: f64,
    pub r_max: f64,
    pub sup_s_over_phase: f64,
    /// Sup of `|χ_S/φ| / |p|^n`.
    pub sup_weighted: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundProbe {
    pub idx: PhaseIndex,
    pub n: u32,
    pub samples: usize,
    pub rows: Vec<ProbeRow>,
    /// Least-squares slope of `log sup |χ_S/φ|` against `log(1/ρ)`.
    pub exponent_s: f64,
    pub exponent_t: f64,
    pub shell: ShellProbe,
}

/// Standard normal by Box-Muller.
fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = 1.0 - rng.gen::<f64>();
    let v: f64 = rng.gen();
    (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}

fn unit6(rng: &mut ChaCha8Rng) -> [f64; 6] {
    loop {
        let v: [f64; 6] = std::array::from_fn(|_| gauss(rng));
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-12 {
            return v.map(|x| x / n);
        }
    }
}

fn to_pair<T: Real>(v: &[f64; 6]) -> FrequencyPair<T> {
    FrequencyPair::new([T::lit(v[0]), T::lit(v[1]), T::lit(v[2])], [T::lit(v[3]), T::lit(v[4]), T::lit(v[5])])
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| x.is_finite() && y.is_finite() && **y > 0.0)
        .map(|(x, y)| (*x, y.ln()))
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Samples `|p| <= M` (half of the points near the resonant set of `idx`)
/// for every `ρ`, plus a high-frequency shell `M <= |p| <= 10^3`.
///
/// Sups are reported as found; `inf` means a sample hit `φ = 0` (or
/// `∂_η φ = 0`) where the cut-off did not vanish.
pub fn bound_probe<T: Real>(
    family: &CutoffFamily<T>,
    idx: &PhaseIndex,
    rhos: &[f64],
    samples: usize,
    seed: u64,
) -> BoundProbe {
    let sp = family.speeds();
    let comps = family.report.components_for(idx);
    let m = family.m.as_f64();
    let mut rows = Vec::with_capacity(rhos.len());
    for (k, &rho) in rhos.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
        let rho_t = T::lit(rho);
        let mut row = ProbeRow { rho, sup_s_over_phase: 0.0, sup_t_over_grad: 0.0, sup_s_over_phase_large: 0.0 };
        for i in 0..samples {
            let v: [f64; 6] = if !comps.is_empty() && i % 2 == 0 {
                // near a component: offset of log-uniform size in [ρ ρ0 / 10, 1]
                let c = &comps[rng.gen_range(0..comps.len())];
                let w = unit6(&mut rng);
                let omega = [w[0], w[1], w[2]];
                let on = omega.map(|x| x / norm3(&omega));
                let q = c.point(&on.map(T::lit));
                let lo = (rho * family.rho0().as_f64() / 10.0).ln();
                let d = rng.gen_range(lo..0.0).exp();
                let off = unit6(&mut rng);
                std::array::from_fn(|j| {
                    let base = if j < 3 { q.xi[j] } else { q.eta[j - 3] };
                    base.as_f64() + d * off[j]
                })
            } else {
                let r = m * rng.gen::<f64>().powf(1.0 / 6.0);
                unit6(&mut rng).map(|x| x * r)
            };
            let p = to_pair::<T>(&v);
            if p.norm().as_f64() > m {
                continue;
            }
            let part = family.partition(idx, &p, rho_t);
            let phi = sp.phase(idx, &p).as_f64().abs();
            let g = norm3(&sp.grad_eta_phase(idx, &p)).as_f64();
            let s = part.s.as_f64();
            let t = part.t.as_f64();
            let qs = if s == 0.0 { 0.0 } else { s / phi };
            let qt = if t == 0.0 { 0.0 } else { t / g };
            row.sup_s_over_phase = row.sup_s_over_phase.max(qs);
            row.sup_t_over_grad = row.sup_t_over_grad.max(qt);
            if phi >= 1.0 {
                row.sup_s_over_phase_large = row.sup_s_over_phase_large.max(qs);
            }
        }
        rows.push(row);
    }
    let xs: Vec<f64> = rhos.iter().map(|r| (1.0 / r).ln()).collect();
    let exponent_s = slope(&xs, &rows.iter().map(|r| r.sup_s_over_phase).collect::<Vec<_>>());
    let exponent_t = slope(&xs, &rows.iter().map(|r| r.sup_t_over_grad).collect::<Vec<_>>());

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let r_max = 1e3f64.max(m);
    let mut shell = ShellProbe { r_min: m, r_max, sup_s_over_phase: 0.0, sup_weighted: 0.0 };
    for _ in 0..samples {
        let r = (m.ln() + rng.gen::<f64>() * (r_max.ln() - m.ln())).exp();
        let p = to_pair::<T>(&unit6(&mut rng).map(|x| x * r));
        let s = family.partition(idx, &p, T::one()).s.as_f64();
        if s == 0.0 {
            continue;
        }
        let q = s / sp.phase(idx, &p).as_f64().abs();
        shell.sup_s_over_phase = shell.sup_s_over_phase.max(q);
        shell.sup_weighted = shell.sup_weighted.max(q / r.powi(family.n as i32));
    }

    BoundProbe { idx: *idx, n: family.n, samples, rows, exponent_s, exponent_t, shell }
}
