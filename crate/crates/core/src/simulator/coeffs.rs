//! Quadratic nonlinearities and their expansion in the diagonal unknowns.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::dispersion::{Sign, SpeedTag};
use crate::scalar::Real;

/// `Q^1 = α (u^1)^2 + β (u^c)^2 + γ u^1 u^c` and
/// `Q^c = δ (u^1)^2 + ε (u^c)^2 + ζ u^1 u^c`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NonlinearityCoefficients<T = f64> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
    pub delta: T,
    pub epsilon: T,
    pub zeta: T,
}

impl<T: Real> NonlinearityCoefficients<T> {
    pub fn zero() -> Self {
        Self {
            alpha: T::zero(),
            beta: T::zero(),
            gamma: T::zero(),
            delta: T::zero(),
            epsilon: T::zero(),
            zeta: T::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_array().iter().all(|v| *v == T::zero())
    }

    pub fn as_array(&self) -> [T; 6] {
        [self.alpha, self.beta, self.gamma, self.delta, self.epsilon, self.zeta]
    }

    pub fn is_finite(&self) -> bool {
        self.as_array().iter().all(|v| v.is_finite())
    }

    /// `(coefficient of (u^1)^2, of (u^c)^2, of u^1 u^c)` in `Q^k`.
    pub fn for_species(&self, k: SpeedTag) -> [T; 3] {
        match k {
            SpeedTag::One => [self.alpha, self.beta, self.gamma],
            SpeedTag::C => [self.delta, self.epsilon, self.zeta],
        }
    }

    /// Pointwise `Q^k(u^1, u^c)`.
    pub fn eval(&self, k: SpeedTag, u1: Complex<T>, uc: Complex<T>) -> Complex<T> {
        let [a, b, g] = self.for_species(k);
        u1 * u1 * a + uc * uc * b + u1 * uc * g
    }
}

pub(crate) fn species_slot(t: SpeedTag) -> usize {
    match t {
        SpeedTag::One => 0,
        SpeedTag::C => 1,
    }
}

pub(crate) fn sign_slot(s: Sign) -> usize {
    match s {
        Sign::Plus => 0,
        Sign::Minus => 1,
    }
}

/// Table of the real coefficients `a^{k,ℓ,m}_{ε0,ε1,ε2}`, indexed
/// `[k][ℓ][m][ε0][ε1][ε2]` with species slot 0 = `1`, 1 = `c` and sign slot
/// 0 = `+`, 1 = `-`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadraticTable<T = f64> {
    pub a: [[[[[[T; 2]; 2]; 2]; 2]; 2]; 2],
}

impl<T: Real> QuadraticTable<T> {
    pub fn get(&self, k: SpeedTag, l: SpeedTag, m: SpeedTag, e: [Sign; 3]) -> T {
        self.a[species_slot(k)][species_slot(l)][species_slot(m)][sign_slot(e[0])][sign_slot(e[1])][sign_slot(e[2])]
    }

    /// `Σ a^{k,ℓ,m}_{ε0,ε1,ε2} v^ℓ_{ε1} v^m_{ε2}` at one point, where
    /// `v[ℓ][ε]` stands for `u^ℓ_ε / <D>_ℓ`.
    pub fn reassemble(&self, k: SpeedTag, e0: Sign, v: &[[Complex<T>; 2]; 2]) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for l in SpeedTag::ALL {
            for m in SpeedTag::ALL {
                for e1 in Sign::ALL {
                    for e2 in Sign::ALL {
                        let a = self.get(k, l, m, [e0, e1, e2]);
                        acc = acc + v[species_slot(l)][sign_slot(e1)] * v[species_slot(m)][sign_slot(e2)] * a;
                    }
                }
            }
        }
        acc
    }
}

/// Substitutes `u^k = (u^k_+ - u^k_-)/(2i<D>_k)` into `Q^k`.
///
/// `u^ℓ u^m = -(1/4) Σ ε1 ε2 (u^ℓ_{ε1}/<D>_ℓ)(u^m_{ε2}/<D>_m)`; the mixed
/// coefficient is split evenly between `(ℓ,m) = (1,c)` and `(c,1)`. The
/// table does not depend on `ε0`.
pub fn expand_quadratic<T: Real>(q: &NonlinearityCoefficients<T>) -> QuadraticTable<T> {
    let mut a = [[[[[[T::zero(); 2]; 2]; 2]; 2]; 2]; 2];
    let quarter = T::lit(0.25);
    for k in SpeedTag::ALL {
        let [sq1, sqc, mixed] = q.for_species(k);
        let half_mixed = mixed / T::lit(2.0);
        for l in SpeedTag::ALL {
            for m in SpeedTag::ALL {
                let base = match (l, m) {
                    (SpeedTag::One, SpeedTag::One) => sq1,
                    (SpeedTag::C, SpeedTag::C) => sqc,
                    _ => half_mixed,
                };
                for e0 in Sign::ALL {
                    for e1 in Sign::ALL {
                        for e2 in Sign::ALL {
                            let s = e1.value::<T>() * e2.value::<T>();
                            a[species_slot(k)][species_slot(l)][species_slot(m)][sign_slot(e0)][sign_slot(e1)]
                                [sign_slot(e2)] = -quarter * s * base;
                        }
                    }
                }
            }
        }
    }
    QuadraticTable { a }
}
