//! Smooth dyadic (Littlewood-Paley) projections.
//!
//! `φ0` equals 1 on `|ξ| <= 3/4` and 0 on `|ξ| >= 1`; `ψ(ξ) = φ0(ξ/2) - φ0(ξ)`
//! lives in the annulus `3/4 < |ξ| < 2` and equals 1 at `|ξ| = 1`. Then
//! `P_j = ψ(D/2^j)` and `P_{<j} = φ0(D/2^j)`, so the sum of `P_j` over
//! `j_min <= j <= j_max` plus `P_{<j_min}` is `P_{<j_max+1}`.

use super::field::SpectralField;
use crate::cutoffs::profile::smooth_step;
use crate::scalar::{norm3, Real};

pub fn phi0<T: Real>(r: T) -> T {
    smooth_step(T::lit(4.0) * (T::one() - r))
}

pub fn psi<T: Real>(r: T) -> T {
    phi0(r / T::lit(2.0)) - phi0(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpMode {
    /// `P_j`
    Annulus,
    /// `P_{<j}`
    Ball,
}

fn scale<T: Real>(j: i32) -> T {
    T::lit(2.0).powi(j)
}

/// `P_j f` or `P_{<j} f`.
pub fn lp_project<T: Real>(f: &SpectralField<T>, j: i32, mode: LpMode) -> SpectralField<T> {
    let s = scale::<T>(j);
    match mode {
        LpMode::Annulus => f.multiply(|xi| psi(norm3(xi) / s)),
        LpMode::Ball => f.multiply(|xi| phi0(norm3(xi) / s)),
    }
}
