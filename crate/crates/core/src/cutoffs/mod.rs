//! Smooth frequency cut-offs adapted to the resonant sets of a report.
//!
//! For a phase index the partition `χ_R^ρ + χ_S^ρ + χ_T^ρ = 1` separates
//! a `ρ`-neighbourhood of the space-time resonant set (`χ_R`), a region
//! away from time resonances where one divides by `φ` (`χ_S`), and a
//! region away from space resonances where one integrates by parts in `η`
//! (`χ_T`). `θ` splits low from high frequencies and `χ_O` localizes
//! outputs near the outcome spheres.

mod probe;
pub mod profile;

pub use probe::{bound_probe, BoundProbe, ProbeRow, ShellProbe};

use serde::Serialize;

use crate::dispersion::{FrequencyPair, PhaseIndex, SpeedPair};
use crate::error::{Error, Result};
use crate::resonance::{space_resonance_domain, ResonanceReport, ResonantComponent};
use crate::scalar::{norm3, Real};
use profile::{plateau, smooth_step, step_pm1};

/// Floor on gradient and Hessian sizes in the distance surrogates.
pub const GRAD_FLOOR: f64 = 1e-8;

/// Shape of the one-dimensional profiles, echoed in exports.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BumpProfile {
    pub primitive: &'static str,
    pub plateau_radius: f64,
    pub support_radius: f64,
}

impl Default for BumpProfile {
    fn default() -> Self {
        Self { primitive: "exp(-1/t)", plateau_radius: 0.5, support_radius: 1.0 }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct FamilyOptions<T> {
    /// High-frequency threshold; default `2 * max |p| over ℛ + 1`.
    pub m: Option<T>,
    /// Outcome neighbourhood size; default the report's `δ0`.
    pub delta0: Option<T>,
    /// Intersection order; default the largest component order.
    pub n: Option<u32>,
}

/// Which cut-off to evaluate in exports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutoffKind {
    Theta,
    ChiO,
    ChiOTilde,
    ChiR,
    ChiS,
    ChiT,
}

impl std::str::FromStr for CutoffKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "theta" => Self::Theta,
            "chi_o" => Self::ChiO,
            "chi_o_tilde" => Self::ChiOTilde,
            "chi_r" => Self::ChiR,
            "chi_s" => Self::ChiS,
            "chi_t" => Self::ChiT,
            _ => {
                return Err(Error::InvalidParameter {
                    name: "cutoff",
                    reason: format!("unknown cut-off {s:?}; expected theta, chi_o, chi_o_tilde, chi_r, chi_s or chi_t"),
                })
            }
        })
    }
}

/// Values of the three-way partition at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Partition<T> {
    pub r: T,
    pub s: T,
    pub t: T,
}

/// Cut-off functions tied to one resonance report.
#[derive(Clone, Debug)]
pub struct CutoffFamily<T = f64> {
    pub report: ResonanceReport<T>,
    pub m: T,
    pub delta0: T,
    pub n: u32,
    pub bump: BumpProfile,
    sp: SpeedPair<T>,
    /// Support scale of the bumps in `χ_R` at `ρ = 1`.
    rho0: T,
}

impl<T: Real> CutoffFamily<T> {
    /// Builds the family. The report must be separated.
    pub fn new(report: ResonanceReport<T>, opts: FamilyOptions<T>) -> Result<Self> {
        if !report.separated {
            return Err(Error::NotSeparated { min_gap: report.min_gap.as_f64(), tau: report.params.tau_sep.as_f64() });
        }
        let sp = report.speeds();
        let all = report.all_components();
        let max_norm = report.max_component_norm();
        let m = opts.m.unwrap_or(T::lit(2.0) * max_norm + T::one());
        if !(m > T::zero() && m.is_finite()) || !(T::lit(2.0) * max_norm < m) {
            return Err(Error::InvalidParameter {
                name: "M",
                reason: format!("the resonant set must lie in B(0, M/2); need M > {}", T::lit(2.0) * max_norm),
            });
        }
        let delta0 = opts.delta0.unwrap_or(report.delta0);
        if !(delta0 > T::zero() && delta0.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "delta0",
                reason: format!("must be positive and finite, got {delta0}"),
            });
        }
        let n = opts.n.unwrap_or_else(|| all.iter().map(|c| c.order).max().unwrap_or(1)).max(1);
        let lam_max = all.iter().map(|c| c.lambda.abs()).fold(T::zero(), T::max);
        let rho0 = delta0 / (T::lit(2.0) * (T::one() + lam_max));
        Ok(Self { report, m, delta0, n, bump: BumpProfile::default(), sp, rho0 })
    }

    pub fn speeds(&self) -> &SpeedPair<T> {
        &self.sp
    }

    /// Bump support scale of `χ_R` at `ρ = 1`.
    pub fn rho0(&self) -> T {
        self.rho0
    }

    /// `χ_R^ρ` vanishes beyond this distance from the component.
    pub fn chi_r_support(&self, comp: &ResonantComponent<T>, rho: T) -> T {
        let a = T::one() + comp.lambda.abs();
        rho * self.rho0 * (T::one() + a * a).sqrt()
    }

    /// `1` on `B(0, M)`, `0` outside `B(0, M + 1)`.
    pub fn theta(&self, p: &FrequencyPair<T>) -> T {
        theta_radial(p.norm(), self.m)
    }

    /// `1` within `δ0/2` of an outcome sphere, `0` beyond `δ0`.
    pub fn chi_o(&self, xi: &[T; 3]) -> T {
        let r = norm3(xi);
        let d = self.report.outcome_radii.iter().map(|&o| (r - o).abs()).fold(T::infinity(), T::min);
        if d.is_finite() {
            plateau(d / self.delta0)
        } else {
            T::zero()
        }
    }

    pub fn chi_o_tilde(&self, xi: &[T; 3]) -> T {
        T::one() - self.chi_o(xi)
    }

    /// Product-of-bumps factor of one component.
    pub fn chi_r_component(&self, p: &FrequencyPair<T>, comp: &ResonantComponent<T>, rho: T) -> T {
        let w = rho * self.rho0;
        let a = plateau((norm3(&p.eta) - comp.radius) / w);
        if a == T::zero() {
            return T::zero();
        }
        let d = [p.xi[0] - comp.lambda * p.eta[0], p.xi[1] - comp.lambda * p.eta[1], p.xi[2] - comp.lambda * p.eta[2]];
        a * plateau(norm3(&d) / w)
    }

    /// `χ_R^ρ` for the index: the sum over its components, clamped at 1.
    pub fn chi_r(&self, idx: &PhaseIndex, p: &FrequencyPair<T>, rho: T) -> T {
        self.chi_r_with(&self.report.components_for(idx), p, rho)
    }

    fn chi_r_with(&self, comps: &[ResonantComponent<T>], p: &FrequencyPair<T>, rho: T) -> T {
        comps.iter().map(|c| self.chi_r_component(p, c, rho)).fold(T::zero(), |a, b| a + b).min(T::one())
    }

    /// Distance surrogate to the time-resonant set, clamped at 1.
    pub fn dist_time(&self, idx: &PhaseIndex, p: &FrequencyPair<T>) -> T {
        let g = self.sp.grad_norm(idx, p).max(T::lit(GRAD_FLOOR));
        (self.sp.phase(idx, p).abs() / g).min(T::one())
    }

    /// Distance surrogate to the space-resonant set, clamped at 1.
    pub fn dist_space(&self, idx: &PhaseIndex, p: &FrequencyPair<T>) -> T {
        let h = self.sp.eta_hessian_bound(idx, p).max(T::lit(GRAD_FLOOR));
        (norm3(&self.sp.grad_eta_phase(idx, p)) / h).min(T::one())
    }

    /// Exact distance to the space-time resonant set of the index.
    pub fn dist_resonant(&self, idx: &PhaseIndex, p: &FrequencyPair<T>) -> T {
        min_distance(&self.report.components_for(idx), p)
    }

    /// Low-frequency `χ_S` factor: `χ2((d_T - d_S) / min(d_R, 1)^(n+1))`.
    fn chi_s_low(&self, idx: &PhaseIndex, comps: &[ResonantComponent<T>], p: &FrequencyPair<T>) -> T {
        let dr = min_distance(comps, p).min(T::one());
        let num = self.dist_time(idx, p) - self.dist_space(idx, p);
        let den = dr.powi(self.n as i32 + 1);
        if den > T::zero() {
            step_pm1(num / den)
        } else if num > T::zero() {
            T::one()
        } else {
            T::zero()
        }
    }

    /// High-frequency `χ_S` factor: a neighbourhood of the asymptotic
    /// space-resonant set.
    fn chi_s_high(&self, idx: &PhaseIndex, p: &FrequencyPair<T>) -> T {
        let cl = self.sp.speed(idx.first);
        let cm = self.sp.speed(idx.second);
        if cl < cm {
            let s_inf = cl / (cm * (cm * cm - cl * cl).sqrt());
            plateau((norm3(&p.diff()) - s_inf) / (s_inf / T::lit(2.0)))
        } else if cl > cm {
            let r_sup = space_resonance_domain(&self.sp, idx);
            plateau((norm3(&p.eta) - r_sup) / (r_sup / T::lit(2.0)))
        } else {
            let lam = if idx.signs[1] == idx.signs[2] { T::lit(2.0) } else { T::zero() };
            let d = [p.xi[0] - lam * p.eta[0], p.xi[1] - lam * p.eta[1], p.xi[2] - lam * p.eta[2]];
            plateau(norm3(&d) / T::lit(0.5))
        }
    }

    fn partition_with(
        &self,
        idx: &PhaseIndex,
        comps: &[ResonantComponent<T>],
        p: &FrequencyPair<T>,
        rho: T,
    ) -> Partition<T> {
        let r = self.chi_r_with(comps, p, rho);
        let th = self.theta(p);
        let mut mix = T::zero();
        if th > T::zero() {
            mix = mix + th * self.chi_s_low(idx, comps, p);
        }
        if th < T::one() {
            mix = mix + (T::one() - th) * self.chi_s_high(idx, p);
        }
        let s = (T::one() - r) * mix;
        Partition { r, s, t: T::one() - r - s }
    }

    /// `(χ_R^ρ, χ_S^ρ, χ_T^ρ)` at `p`.
    pub fn partition(&self, idx: &PhaseIndex, p: &FrequencyPair<T>, rho: T) -> Partition<T> {
        self.partition_with(idx, &self.report.components_for(idx), p, rho)
    }

    pub fn chi_s(&self, idx: &PhaseIndex, p: &FrequencyPair<T>, rho: T) -> T {
        self.partition(idx, p, rho).s
    }

    pub fn chi_t(&self, idx: &PhaseIndex, p: &FrequencyPair<T>, rho: T) -> T {
        self.partition(idx, p, rho).t
    }

    /// Evaluates any cut-off at `p`; `θ` and `χ_O` ignore `idx` and `ρ`.
    pub fn eval(&self, kind: CutoffKind, idx: &PhaseIndex, p: &FrequencyPair<T>, rho: T) -> T {
        match kind {
            CutoffKind::Theta => self.theta(p),
            CutoffKind::ChiO => self.chi_o(&p.xi),
            CutoffKind::ChiOTilde => self.chi_o_tilde(&p.xi),
            CutoffKind::ChiR => self.chi_r(idx, p, rho),
            CutoffKind::ChiS => self.chi_s(idx, p, rho),
            CutoffKind::ChiT => self.chi_t(idx, p, rho),
        }
    }

    /// Evaluates a cut-off on the colinear slice `ξ = x e1`, `η = y e1`
    /// over an `n x n` lattice of `[lo, hi]^2`. Rows are `(x, y, value)`.
    pub fn slice_grid(
        &self,
        kind: CutoffKind,
        idx: &PhaseIndex,
        rho: T,
        lo: T,
        hi: T,
        n: usize,
    ) -> Result<Vec<(T, T, T)>> {
        if n < 2 || !(lo < hi) {
            return Err(Error::InvalidParameter {
                name: "grid",
                reason: format!("need n >= 2 and lo < hi, got n = {n}, [{lo}, {hi}]"),
            });
        }
        let comps = self.report.components_for(idx);
        let h = (hi - lo) / T::of_usize(n - 1);
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let x = lo + h * T::of_usize(i);
                let y = lo + h * T::of_usize(j);
                let z = T::zero();
                let p = FrequencyPair::new([x, z, z], [y, z, z]);
                let v = match kind {
                    CutoffKind::ChiR => self.chi_r_with(&comps, &p, rho),
                    CutoffKind::ChiS => self.partition_with(idx, &comps, &p, rho).s,
                    CutoffKind::ChiT => self.partition_with(idx, &comps, &p, rho).t,
                    _ => self.eval(kind, idx, &p, rho),
                };
                out.push((x, y, v));
            }
        }
        Ok(out)
    }
}

/// Radial transition `1` on `[0, M]`, `0` on `[M + 1, ∞)`.
pub fn theta_radial<T: Real>(r: T, m: T) -> T {
    smooth_step(m + T::one() - r)
}

fn min_distance<T: Real>(comps: &[ResonantComponent<T>], p: &FrequencyPair<T>) -> T {
    comps.iter().map(|c| c.distance(p)).fold(T::infinity(), T::min)
}
