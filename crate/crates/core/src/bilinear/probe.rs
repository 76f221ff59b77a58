//! Randomized measurements of the operator inequalities.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::field::SpectralField;
use super::lp::{lp_project, LpMode};
use crate::error::{Error, Result};
use crate::scalar::{norm3, Real};

/// Random field with coefficients supported in `|k_a| <= band` (lattice
/// units) and Gaussian-distributed real and imaginary parts.
pub fn random_band_limited<T: Real>(like: &SpectralField<T>, band: i64, rng: &mut ChaCha8Rng) -> SpectralField<T> {
    let mut out = like.clone();
    for i in 0..out.len() {
        let k = out.lattice(i);
        let inside = k[..out.dims()].iter().all(|v| v.abs() <= band);
        out.coeffs_mut()[i] = if inside {
            Complex::new(T::lit(gauss(rng)), T::lit(gauss(rng)))
        } else {
            Complex::new(T::zero(), T::zero())
        };
    }
    out
}

/// Sum of `spikes` unit impulses with random signs at random grid points.
pub fn random_spikes<T: Real>(
    like: &SpectralField<T>,
    spikes: usize,
    rng: &mut ChaCha8Rng,
) -> Result<SpectralField<T>> {
    let mut v = vec![Complex::new(T::zero(), T::zero()); like.len()];
    for _ in 0..spikes {
        let i = rng.gen_range(0..like.len());
        let a = if rng.gen::<bool>() { T::one() } else { -T::one() };
        v[i] = v[i] + Complex::new(a * T::lit(rng.gen_range(0.5..1.5)), T::zero());
    }
    SpectralField::from_values(like.dims(), like.grid_size(), like.box_length(), v)
}

pub fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = 1.0 - rng.gen::<f64>();
    let v: f64 = rng.gen();
    (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BernsteinRow {
    pub j: i32,
    pub max_ratio: f64,
}

/// Max over `trials` random fields `P_j f` (with `f` a sparse spike train)
/// of `‖P_j f‖_p / (2^{d j (1/q - 1/p)} ‖P_j f‖_q)`.
pub fn bernstein_check<T: Real>(
    like: &SpectralField<T>,
    j: i32,
    p: f64,
    q: f64,
    trials: usize,
    seed: u64,
) -> Result<BernsteinRow> {
    if !(q >= 1.0 && p >= q) {
        return Err(Error::InvalidParameter {
            name: "exponents",
            reason: format!("need 1 <= q <= p, got p = {p}, q = {q}"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = like.dims() as f64;
    let inv_p = if p.is_infinite() { 0.0 } else { 1.0 / p };
    let factor = 2f64.powf(d * j as f64 * (1.0 / q - inv_p));
    let mut best: f64 = 0.0;
    for t in 0..trials {
        let f = random_spikes(like, 1 + t % 4, &mut rng)?;
        let pj = lp_project(&f, j, LpMode::Annulus);
        let v = pj.values();
        let cell = like.cell();
        let num = super::field::lp_norm(&v, p, cell).as_f64();
        let den = super::field::lp_norm(&v, q, cell).as_f64();
        if den > 0.0 {
            best = best.max(num / (factor * den));
        }
    }
    Ok(BernsteinRow { j, max_ratio: best })
}

/// `‖χ((|D| - R)/ρ) f‖_2 / ‖|x|^s f‖_2` with `|x|` the distance to the
/// origin on the torus.
pub fn radial_shell_ratio<T: Real>(f: &SpectralField<T>, radius: T, rho: T, s: T, chi: impl Fn(T) -> T) -> T {
    let lhs = f.multiply(|xi| chi((norm3(xi) - radius) / rho)).spectral_l2_squared().sqrt();
    let values = f.values();
    let half = f.box_length() / T::lit(2.0);
    let weighted: Vec<Complex<T>> = values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let x = f.position(i).map(|c| if c >= half { c - f.box_length() } else { c });
            *v * norm3(&x).powf(s)
        })
        .collect();
    lhs / super::field::lp_norm(&weighted, 2.0, f.cell())
}

/// Localized random test field: a few Gaussian packets of unit width near
/// the origin with random carriers in `[0, 2]`.
pub fn random_localized<T: Real>(like: &SpectralField<T>, rng: &mut ChaCha8Rng) -> Result<SpectralField<T>> {
    let packets: Vec<(f64, f64, f64, f64)> = (0..3)
        .map(|_| (rng.gen_range(-3.0..3.0), rng.gen_range(0.5..2.0), rng.gen_range(0.0..2.0), gauss(rng)))
        .collect();
    let half = like.box_length().as_f64() / 2.0;
    let values = (0..like.len())
        .map(|i| {
            let x = like.position(i).map(|c| {
                let c = c.as_f64();
                if c >= half {
                    c - 2.0 * half
                } else {
                    c
                }
            });
            let mut acc = Complex::new(0.0, 0.0);
            for &(x0, w, k, a) in &packets {
                let r2 = (x[0] - x0).powi(2) + x[1].powi(2) + x[2].powi(2);
                acc += Complex::new(0.0, k * x[0]).exp() * a * (-r2 / (2.0 * w * w)).exp();
            }
            Complex::new(T::lit(acc.re), T::lit(acc.im))
        })
        .collect();
    SpectralField::from_values(like.dims(), like.grid_size(), like.box_length(), values)
}
