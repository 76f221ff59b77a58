//! Integrating-factor Runge-Kutta stepping.

use num_complex::Complex;

use super::coeffs::NonlinearityCoefficients;
use super::state::{bracket_table, SystemState, SLOTS};
use crate::bilinear::SpectralField;
use crate::dispersion::{SpeedPair, SpeedTag};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Relative linear-energy jump above which a step is rejected.
pub const BLOWUP_JUMP: f64 = 0.1;

/// `∂_t u^k_± = ±i<D>_k u^k_± + Q^k(u^1, u^c)`, advanced with the linear
/// part exact and the classical four-stage scheme on the rest (Lawson
/// form, order 4).
#[derive(Clone, Debug)]
pub struct Integrator<T = f64> {
    pub speeds: SpeedPair<T>,
    pub coeffs: NonlinearityCoefficients<T>,
    /// Zero the nonlinear term outside `|k| <= N/3` (lattice units).
    pub dealias: bool,
    /// `None` disables the blow-up guard.
    pub guard: Option<T>,
}

type Coeffs<T> = [Vec<Complex<T>>; 4];

impl<T: Real> Integrator<T> {
    pub fn new(speeds: SpeedPair<T>, coeffs: NonlinearityCoefficients<T>) -> Self {
        Self { speeds, coeffs, dealias: true, guard: Some(T::lit(BLOWUP_JUMP)) }
    }

    /// `Q̂^k` for both species, as coefficient vectors.
    pub fn nonlinearity(&self, state: &SystemState<T>) -> [Vec<Complex<T>>; 2] {
        let like = &state.fields[0];
        let zero = Complex::new(T::zero(), T::zero());
        if self.coeffs.is_zero() {
            return [vec![zero; like.len()], vec![zero; like.len()]];
        }
        let data = state.reconstruct(&self.speeds);
        let u1 = data[0].u0.values();
        let uc = data[1].u0.values();
        let n = like.grid_size() as i64;
        [SpeedTag::One, SpeedTag::C].map(|k| {
            let q: Vec<Complex<T>> = u1.iter().zip(&uc).map(|(a, b)| self.coeffs.eval(k, *a, *b)).collect();
            let mut c = SpectralField::from_values(like.dims(), like.grid_size(), like.box_length(), q)
                .expect("grid of a valid state")
                .into_coeffs();
            if self.dealias {
                for (i, v) in c.iter_mut().enumerate() {
                    if like.lattice(i).iter().any(|x| 3 * x.abs() > n) {
                        *v = zero;
                    }
                }
            }
            c
        })
    }

    fn rhs(&self, like: &SystemState<T>, u: &Coeffs<T>) -> Coeffs<T> {
        let mut s = like.clone();
        for (f, c) in s.fields.iter_mut().zip(u) {
            f.coeffs_mut().copy_from_slice(c);
        }
        let [q1, qc] = self.nonlinearity(&s);
        [q1.clone(), q1, qc.clone(), qc]
    }

    fn propagators(&self, like: &SpectralField<T>, tau: T) -> Coeffs<T> {
        SLOTS.map(|(k, s)| {
            let sg = s.value::<T>();
            bracket_table(&self.speeds, k, like)
                .into_iter()
                .map(|b| Complex::new(T::zero(), sg * tau * b).exp())
                .collect()
        })
    }

    /// One step of size `dt`; rejects it when the linear energy changes by
    /// more than the guard.
    pub fn step(&self, state: &SystemState<T>, dt: T) -> Result<SystemState<T>> {
        if !(dt > T::zero() && dt.is_finite()) {
            return Err(Error::InvalidParameter { name: "dt", reason: format!("must be positive, got {dt}") });
        }
        let like = &state.fields[0];
        let half = dt / T::lit(2.0);
        let eh = self.propagators(like, half);
        let ef = self.propagators(like, dt);
        let u: Coeffs<T> = state.fields.clone().map(|f| f.into_coeffs());

        let mul = |e: &Coeffs<T>, v: &Coeffs<T>| -> Coeffs<T> {
            std::array::from_fn(|n| e[n].iter().zip(&v[n]).map(|(a, b)| a * b).collect())
        };
        let axpy = |x: &Coeffs<T>, a: T, y: &Coeffs<T>| -> Coeffs<T> {
            std::array::from_fn(|n| x[n].iter().zip(&y[n]).map(|(p, q)| p + q * a).collect())
        };

        let k1 = self.rhs(state, &u);
        let u2 = mul(&eh, &axpy(&u, half, &k1));
        let k2 = self.rhs(state, &u2);
        let eh_u = mul(&eh, &u);
        let u3 = axpy(&eh_u, half, &k2);
        let k3 = self.rhs(state, &u3);
        let u4 = axpy(&mul(&ef, &u), dt, &mul(&eh, &k3));
        let k4 = self.rhs(state, &u4);

        let sixth = dt / T::lit(6.0);
        let two = T::lit(2.0);
        let ef_u = mul(&ef, &u);
        let ef_k1 = mul(&ef, &k1);
        let mid: Coeffs<T> = std::array::from_fn(|n| k2[n].iter().zip(&k3[n]).map(|(a, b)| (a + b) * two).collect());
        let eh_mid = mul(&eh, &mid);
        let next: Coeffs<T> = std::array::from_fn(|n| {
            (0..u[n].len()).map(|i| ef_u[n][i] + (ef_k1[n][i] + eh_mid[n][i] + k4[n][i]) * sixth).collect()
        });

        let mut out = state.clone();
        out.t = state.t + dt;
        for (f, c) in out.fields.iter_mut().zip(next) {
            f.coeffs_mut().copy_from_slice(&c);
        }
        if let Some(limit) = self.guard {
            let e0 = state.linear_energy();
            let e1 = out.linear_energy();
            if e0 > T::zero() {
                let jump = ((e1 - e0) / e0).abs();
                if !(jump <= limit) {
                    return Err(Error::StepRejected { t: state.t.as_f64(), jump: jump.as_f64() });
                }
            }
        }
        Ok(out)
    }

    /// Advances to `t_final` in steps of at most `dt` (the last one is
    /// shortened), calling `observe` after every step.
    pub fn run(
        &self,
        state: &SystemState<T>,
        dt: T,
        t_final: T,
        mut observe: impl FnMut(&SystemState<T>),
    ) -> Result<SystemState<T>> {
        let mut s = state.clone();
        let steps = ((t_final - s.t) / dt).ceil().to_usize().unwrap_or(0);
        if steps == 0 {
            return Ok(s);
        }
        let h = (t_final - s.t) / T::of_usize(steps);
        for _ in 0..steps {
            s = self.step(&s, h)?;
            observe(&s);
        }
        Ok(s)
    }
}
