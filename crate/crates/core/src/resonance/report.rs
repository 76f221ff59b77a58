use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{find_resonant_components, ResonantComponent};
use crate::dispersion::{canonical_phases, symmetry_reduce, PhaseIndex, SpeedPair, Transform};
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const REPORT_SCHEMA: &str = "resonance-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanParams<T = f64> {
    pub r_max: T,
    pub grid_step: T,
    pub tau_sep: T,
}

impl<T: Real> Default for ScanParams<T> {
    fn default() -> Self {
        Self { r_max: T::lit(100.0), grid_step: T::lit(1e-3), tau_sep: T::lit(1e-6) }
    }
}

impl<T: Real> ScanParams<T> {
    pub fn validate(&self) -> Result<()> {
        let pos = |name: &'static str, v: T| {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter { name, reason: format!("must be positive and finite, got {v}") })
            }
        };
        pos("r_max", self.r_max)?;
        pos("grid_step", self.grid_step)?;
        pos("tau_sep", self.tau_sep)
    }
}

/// Full result of a resonance scan at one speed ratio.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct ResonanceReport<T = f64> {
    pub schema: String,
    pub c: T,
    pub params: ScanParams<T>,
    /// Canonical phases with at least one component.
    pub resonant_phases: Vec<PhaseIndex>,
    /// Components of the canonical phases; the other phases are recovered
    /// through [`ResonanceReport::components_for`].
    pub components: Vec<ResonantComponent<T>>,
    pub outcome_radii: Vec<T>,
    pub source_radii: Vec<T>,
    pub separated: bool,
    #[serde(serialize_with = "ser_inf", deserialize_with = "de_inf")]
    pub min_gap: T,
    pub delta0: T,
    pub warnings: Vec<String>,
}

fn ser_inf<T: Real + Serialize, S: Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        v.serialize(s)
    } else {
        s.serialize_none()
    }
}

fn de_inf<'de, T: Real + Deserialize<'de>, D: Deserializer<'de>>(d: D) -> std::result::Result<T, D::Error> {
    Ok(Option::<T>::deserialize(d)?.unwrap_or_else(T::infinity))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Separation<T = f64> {
    pub separated: bool,
    pub min_gap: T,
    pub delta0: T,
}

impl<T: Real> ResonanceReport<T> {
    pub fn speeds(&self) -> SpeedPair<T> {
        SpeedPair::new(self.c).expect("report built from a valid speed")
    }

    /// Components of any of the 64 phases, mapped from the canonical ones.
    pub fn components_for(&self, idx: &PhaseIndex) -> Vec<ResonantComponent<T>> {
        let (canonical, to_canonical) = symmetry_reduce(idx);
        // every transform in the group is an involution and they commute
        self.components
            .iter()
            .filter(|c| c.idx == canonical)
            .map(|c| {
                let back = c.transformed(to_canonical);
                debug_assert_eq!(back.idx, *idx);
                back
            })
            .collect()
    }

    /// Every component of every phase (all symmetry images).
    pub fn all_components(&self) -> Vec<ResonantComponent<T>> {
        PhaseIndex::all().iter().flat_map(|i| self.components_for(i)).collect()
    }

    /// Largest `|(ξ, η)|` on any component.
    pub fn max_component_norm(&self) -> T {
        self.all_components().iter().map(|c| c.radius * (T::one() + c.lambda * c.lambda).sqrt()).fold(T::zero(), T::max)
    }

    pub fn to_json(&self) -> String
    where
        T: Serialize,
    {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn sorted_dedup<T: Real>(mut v: Vec<T>) -> Vec<T> {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out: Vec<T> = Vec::with_capacity(v.len());
    for x in v {
        match out.last() {
            Some(&last) if (x - last).abs() <= T::tol(1e-10) * x.abs().max(T::one()) => {}
            _ => out.push(x),
        }
    }
    out
}

/// Separation verdict for a tolerance: every outcome radius must be more
/// than `tau` away from every source radius.
pub fn check_separation<T: Real>(report: &ResonanceReport<T>, tau: T) -> Separation<T> {
    separation_of(&report.outcome_radii, &report.source_radii, tau)
}

fn separation_of<T: Real>(outcomes: &[T], sources: &[T], tau: T) -> Separation<T> {
    let min_gap =
        outcomes.iter().flat_map(|o| sources.iter().map(move |s| (*o - *s).abs())).fold(T::infinity(), T::min);
    if !min_gap.is_finite() {
        return Separation { separated: true, min_gap, delta0: T::one() };
    }
    Separation { separated: min_gap > tau, min_gap, delta0: min_gap / T::lit(10.0) }
}

/// Scans every canonical phase at speed `c`.
pub fn scan_all<T: Real + Send + Sync>(c: T, params: &ScanParams<T>) -> Result<ResonanceReport<T>> {
    let sp = SpeedPair::new(c)?;
    params.validate()?;
    let searches: Vec<_> = canonical_phases()
        .par_iter()
        .map(|idx| find_resonant_components(&sp, idx, params.r_max, params.grid_step))
        .collect();

    let mut components = Vec::new();
    let mut warnings = Vec::new();
    for s in searches {
        if s.end_warning {
            warnings.push(format!(
                "{}: Z is within tolerance of 0 at the end of the scanned range; roots beyond r_max may be missed",
                s.idx
            ));
        }
        for comp in &s.components {
            if comp.tangent {
                warnings.push(format!("{}: tangent zero at r = {}", s.idx, comp.radius));
            }
            if !comp.order_fit_ok {
                warnings.push(format!("{}: zero order fit not near an integer (slope {:.3})", s.idx, comp.order_slope));
            }
        }
        components.extend(s.components);
    }

    let mut resonant_phases: Vec<PhaseIndex> = components.iter().map(|c| c.idx).collect();
    resonant_phases.sort();
    resonant_phases.dedup();

    // outcome and source sets are invariant under the symmetry group, but
    // are built from every image anyway
    let images: Vec<ResonantComponent<T>> =
        components.iter().flat_map(|c| Transform::ALL.iter().map(move |&t| c.transformed(t))).collect();
    let outcome_radii = sorted_dedup(images.iter().map(|c| c.outcome_radius).collect());
    let source_radii = sorted_dedup(images.iter().flat_map(|c| c.source_radii).collect());
    let sep = separation_of(&outcome_radii, &source_radii, params.tau_sep);

    Ok(ResonanceReport {
        schema: REPORT_SCHEMA.to_string(),
        c,
        params: *params,
        resonant_phases,
        components,
        outcome_radii,
        source_radii,
        separated: sep.separated,
        min_gap: sep.min_gap,
        delta0: sep.delta0,
        warnings,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepRow<T = f64> {
    pub c: T,
    pub separated: bool,
    pub min_gap: T,
    pub components: usize,
}

impl<T: Real> SweepRow<T> {
    /// `c,separated,min_gap` with 17 significant digits.
    pub fn csv_line(&self) -> String {
        format!("{},{},{}", fmt17(self.c.as_f64()), self.separated, fmt17(self.min_gap.as_f64()))
    }
}

/// 17 significant digits, lossless for `f64`.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// Separation verdicts on `steps` equally spaced speeds in `[c_min, c_max]`.
pub fn sweep_speed<T: Real + Send + Sync>(
    c_min: T,
    c_max: T,
    steps: usize,
    params: &ScanParams<T>,
) -> Result<Vec<SweepRow<T>>> {
    if steps == 0 {
        return Err(Error::InvalidParameter { name: "steps", reason: "must be at least 1".into() });
    }
    if !(c_min > T::zero()) || !c_max.is_finite() || (steps > 1 && !(c_min < c_max)) {
        return Err(Error::InvalidParameter {
            name: "range",
            reason: format!("need 0 < c_min < c_max, got [{c_min}, {c_max}]"),
        });
    }
    let hi = if steps == 1 { c_min } else { c_max };
    if c_min <= T::one() && hi >= T::one() {
        return Err(Error::RangeContainsDegenerate { lo: c_min.as_f64(), hi: hi.as_f64() });
    }
    let speeds: Vec<T> = (0..steps)
        .map(|i| if steps == 1 { c_min } else { c_min + (c_max - c_min) * T::of_usize(i) / T::of_usize(steps - 1) })
        .collect();
    speeds
        .par_iter()
        .map(|&c| {
            let r = scan_all(c, params)?;
            Ok(SweepRow { c, separated: r.separated, min_gap: r.min_gap, components: r.components.len() })
        })
        .collect()
}

/// Speeds whose gap dips below `tau` (candidate exceptional speeds).
pub fn exceptional_candidates<T: Real>(rows: &[SweepRow<T>], tau: T) -> Vec<T> {
    rows.iter().filter(|r| !(r.min_gap > tau)).map(|r| r.c).collect()
}
