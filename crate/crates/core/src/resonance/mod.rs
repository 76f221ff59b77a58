//! Space, time and space-time resonant sets of the quadratic phases.
//!
//! For `r = |η| > 0` the space-resonant set `∂_η φ = 0` forces `η` and
//! `ξ - η` to be colinear. Writing `ξ = λη`, the signed length
//! `s = (λ - 1) r` solves the monotone scalar equation
//!
//! ```text
//! c_m^2 s / <s>_m = s1 s2 c_l^2 r / <r>_l
//! ```
//!
//! whose solution is explicit (see [`space_resonance_lambda`]). Restricting
//! the phase to that curve gives a function `Z(r)` of one variable whose
//! zeros are exactly the radii of the space-time resonant spheres.

mod constants;
mod report;
pub mod roots;

pub use constants::{
    all_hold, find_admissible_constants, verify_constants, ConstantsBudget, ConstantsSearch, Inequality, Slack,
    INEQUALITIES,
};
pub use report::{
    check_separation, exceptional_candidates, fmt17, scan_all, sweep_speed, ResonanceReport, ScanParams, Separation,
    SweepRow, REPORT_SCHEMA,
};
pub use roots::OrderFit;

use serde::{Deserialize, Serialize};

use crate::dispersion::{FrequencyPair, PhaseIndex, SpeedPair, Transform};
use crate::scalar::{norm3, Real};
use roots::{estimate_zero_order, scan_roots, ScanOptions};

/// Supremum of radii `r` for which a space resonance exists (`+∞` when it
/// exists for every radius).
pub fn space_resonance_domain<T: Real>(sp: &SpeedPair<T>, idx: &PhaseIndex) -> T {
    let cl = sp.speed(idx.first);
    let cm = sp.speed(idx.second);
    if cl <= cm {
        T::infinity()
    } else {
        cm / (cl * (cl * cl - cm * cm).sqrt())
    }
}

/// Colinearity ratio `λ` with `∂_η φ(λ r ω, r ω) = 0`, if it exists.
///
/// Closed form: `λ = 1 + s1 s2 c_l^2 / (c_m sqrt(c_m^2 + c_l^2 (c_m^2 - c_l^2) r^2))`.
pub fn space_resonance_lambda<T: Real>(sp: &SpeedPair<T>, idx: &PhaseIndex, r: T) -> Option<T> {
    if !(r > T::zero()) {
        return None;
    }
    let cl = sp.speed(idx.first);
    let cm = sp.speed(idx.second);
    let sigma = idx.signs[1].product(idx.signs[2]).value::<T>();
    let radicand = cm * cm + cl * cl * (cm * cm - cl * cl) * r * r;
    if !(radicand > T::zero()) {
        return None;
    }
    Some(T::one() + sigma * cl * cl / (cm * radicand.sqrt()))
}

/// `Z(r)`: the phase along the space-resonant curve.
pub fn time_resonance_gap<T: Real>(sp: &SpeedPair<T>, idx: &PhaseIndex, r: T) -> Option<T> {
    let lambda = space_resonance_lambda(sp, idx, r)?;
    Some(sp.phase_colinear(idx, r, lambda))
}

/// The point `p(r, ω) = (λ r ω, r ω)`.
pub fn resonance_point<T: Real>(r: T, lambda: T, omega: &[T; 3]) -> FrequencyPair<T> {
    let eta = [r * omega[0], r * omega[1], r * omega[2]];
    FrequencyPair::new([lambda * eta[0], lambda * eta[1], lambda * eta[2]], eta)
}

/// One sphere-and-ray component `{|η| = R, ξ = λη}` of a space-time
/// resonant set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResonantComponent<T = f64> {
    pub idx: PhaseIndex,
    pub radius: T,
    pub lambda: T,
    pub order: u32,
    pub order_slope: f64,
    pub order_fit_ok: bool,
    pub tangent: bool,
    pub outcome_radius: T,
    pub source_radii: [T; 2],
    /// `|Z(R)|`.
    pub residual_phase: T,
    /// `|∂_η φ|` at `p(R, e_1)`.
    pub residual_grad: T,
}

impl<T: Real> ResonantComponent<T> {
    fn build(sp: &SpeedPair<T>, idx: PhaseIndex, radius: T, tangent: bool) -> Option<Self> {
        let lambda = space_resonance_lambda(sp, &idx, radius)?;
        let p = resonance_point(radius, lambda, &[T::one(), T::zero(), T::zero()]);
        let fit = zero_order(sp, &idx, radius);
        Some(Self {
            idx,
            radius,
            lambda,
            order: fit.order,
            order_slope: fit.slope,
            order_fit_ok: fit.ok,
            tangent,
            outcome_radius: lambda.abs() * radius,
            source_radii: [radius, (lambda - T::one()).abs() * radius],
            residual_phase: sp.phase(&idx, &p).abs(),
            residual_grad: norm3(&sp.grad_eta_phase(&idx, &p)),
        })
    }

    /// The same set seen through a symmetry of the index.
    ///
    /// A sign flip leaves `(R, λ)` unchanged; the swap `η <-> ξ - η` maps it
    /// to `(|λ - 1| R, λ / (λ - 1))`.
    pub fn transformed(&self, t: Transform) -> Self {
        let mut out = self.clone();
        out.idx = self.idx.apply(t);
        if t.swap {
            let lm1 = self.lambda - T::one();
            out.radius = lm1.abs() * self.radius;
            out.lambda = self.lambda / lm1;
            out.source_radii = [self.source_radii[1], self.source_radii[0]];
        }
        out
    }

    /// Point of the component in direction `ω` (unit vector).
    pub fn point(&self, omega: &[T; 3]) -> FrequencyPair<T> {
        resonance_point(self.radius, self.lambda, omega)
    }

    /// Euclidean distance in `R^6` from `p` to the component.
    pub fn distance(&self, p: &FrequencyPair<T>) -> T {
        dist_to_component(p, self.radius, self.lambda)
    }
}

/// Exact distance from `p` to `{(λ R ω, R ω) : |ω| = 1}`.
///
/// Closed form `sqrt(|ξ|^2 + |η|^2 + R^2 (λ^2 + 1) - 2 R |λ ξ + η|)`; the
/// minimizing direction is `ω = (λξ + η) / |λξ + η|`, which is used directly
/// to avoid cancellation near the set.
pub fn dist_to_component<T: Real>(p: &FrequencyPair<T>, radius: T, lambda: T) -> T {
    let v = [lambda * p.xi[0] + p.eta[0], lambda * p.xi[1] + p.eta[1], lambda * p.xi[2] + p.eta[2]];
    let nv = norm3(&v);
    if nv > T::zero() {
        let w = [v[0] / nv, v[1] / nv, v[2] / nv];
        let q = resonance_point(radius, lambda, &w);
        let dx = crate::scalar::sub3(&p.xi, &q.xi);
        let de = crate::scalar::sub3(&p.eta, &q.eta);
        return (norm3(&dx).powi(2) + norm3(&de).powi(2)).sqrt();
    }
    let d2 = norm3(&p.xi).powi(2) + norm3(&p.eta).powi(2) + radius * radius * (lambda * lambda + T::one());
    d2.max(T::zero()).sqrt()
}

pub fn dist_to_r<T: Real>(p: &FrequencyPair<T>, comp: &ResonantComponent<T>) -> T {
    comp.distance(p)
}

/// Order of the zero of `Z` at `radius`, by log-log fit.
pub fn zero_order<T: Real>(sp: &SpeedPair<T>, idx: &PhaseIndex, radius: T) -> OrderFit {
    let hi = space_resonance_domain(sp, idx);
    estimate_zero_order(|r| time_resonance_gap(sp, idx, r), radius, T::zero(), hi)
}

pub fn intersection_order<T: Real>(comp: &ResonantComponent<T>) -> u32 {
    comp.order
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentSearch<T = f64> {
    pub idx: PhaseIndex,
    pub components: Vec<ResonantComponent<T>>,
    /// `Z` at the end of the scanned range is within `10 * tol` of zero, so
    /// the root list may be incomplete.
    pub end_warning: bool,
    pub end_value: Option<T>,
}

/// Tolerance on `|Z|` for a refined root.
pub const ROOT_TOL: f64 = 1e-12;
pub const TANGENT_TOL: f64 = 1e-9;

/// All zeros of `Z` on `(0, r_max]` (or up to the edge of the
/// space-resonance domain, whichever is smaller).
pub fn find_resonant_components<T: Real>(
    sp: &SpeedPair<T>,
    idx: &PhaseIndex,
    r_max: T,
    grid_step: T,
) -> ComponentSearch<T> {
    let edge = space_resonance_domain(sp, idx);
    let hi = if edge.is_finite() { r_max.min(edge * (T::one() - T::lit(1e-9))) } else { r_max };
    // bounded domains get at least 2000 grid cells
    let step = if edge.is_finite() { grid_step.min(hi / T::lit(2000.0)) } else { grid_step };
    let opts = ScanOptions { step, x_tol: T::tol(1e-14), tangent_tol: T::tol(TANGENT_TOL) };
    let scan = scan_roots(|r| time_resonance_gap(sp, idx, r), T::zero(), hi, &opts);
    let components =
        scan.roots.iter().filter_map(|root| ResonantComponent::build(sp, *idx, root.x, root.tangent)).collect();
    let end_value = scan.end.map(|(_, v)| v);
    let end_warning = end_value.is_none_or(|v| v.abs() <= T::lit(10.0) * T::tol(ROOT_TOL));
    ComponentSearch { idx: *idx, components, end_warning, end_value }
}
