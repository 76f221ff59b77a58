//! Diagonal unknowns `u^k_±`, their profiles and band observables.

use num_complex::Complex;

use super::coeffs::{sign_slot, species_slot};
use crate::bilinear::SpectralField;
use crate::dispersion::{Sign, SpeedPair, SpeedTag};
use crate::error::{Error, Result};
use crate::scalar::{norm3, Real};

/// Physical data `(u^k(0), ∂_t u^k(0))` of one species.
#[derive(Clone, Debug, PartialEq)]
pub struct SpeciesData<T = f64> {
    pub u0: SpectralField<T>,
    pub u1: SpectralField<T>,
}

/// `u^k_± = ∂_t u^k ± i<D>_k u^k` for both species at time `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemState<T = f64> {
    pub t: T,
    /// Slot `2 * species + sign`, species 0 = `1`, 1 = `c`; sign 0 = `+`.
    pub fields: [SpectralField<T>; 4],
}

/// `f^k_± = e^{∓it<D>_k} u^k_±`, same layout as [`SystemState`].
#[derive(Clone, Debug, PartialEq)]
pub struct ProfileState<T = f64> {
    pub t: T,
    pub fields: [SpectralField<T>; 4],
}

pub(crate) fn slot(k: SpeedTag, s: Sign) -> usize {
    2 * species_slot(k) + sign_slot(s)
}

pub(crate) const SLOTS: [(SpeedTag, Sign); 4] =
    [(SpeedTag::One, Sign::Plus), (SpeedTag::One, Sign::Minus), (SpeedTag::C, Sign::Plus), (SpeedTag::C, Sign::Minus)];

/// `<ξ>_k` on every lattice point of `like`.
pub fn bracket_table<T: Real>(sp: &SpeedPair<T>, k: SpeedTag, like: &SpectralField<T>) -> Vec<T> {
    (0..like.len()).map(|i| sp.bracket_vec(k, &like.frequency(i))).collect()
}

/// `û(ξ) ↦ conj(û(-ξ))`: the coefficients of the complex conjugate field.
pub fn conj_reflect<T: Real>(f: &SpectralField<T>) -> SpectralField<T> {
    let mut out = f.clone();
    for i in 0..f.len() {
        let k = f.lattice(i);
        let j = f.flat_of_lattice(&[-k[0], -k[1], -k[2]]);
        out.coeffs_mut()[i] = f.coeffs()[j].conj();
    }
    out
}

pub fn diagonalize<T: Real>(sp: &SpeedPair<T>, data: &[SpeciesData<T>; 2]) -> Result<SystemState<T>> {
    let like = &data[0].u0;
    for d in data {
        like.ensure_same_grid(&d.u0)?;
        like.ensure_same_grid(&d.u1)?;
    }
    let fields = SLOTS.map(|(k, s)| {
        let d = &data[species_slot(k)];
        let br = bracket_table(sp, k, like);
        let sg = s.value::<T>();
        let mut out = d.u1.clone();
        for (i, c) in out.coeffs_mut().iter_mut().enumerate() {
            *c = *c + Complex::new(T::zero(), sg * br[i]) * d.u0.coeffs()[i];
        }
        out
    });
    Ok(SystemState { t: T::zero(), fields })
}

impl<T: Real> SystemState<T> {
    pub fn field(&self, k: SpeedTag, s: Sign) -> &SpectralField<T> {
        &self.fields[slot(k, s)]
    }

    pub fn field_mut(&mut self, k: SpeedTag, s: Sign) -> &mut SpectralField<T> {
        &mut self.fields[slot(k, s)]
    }

    /// State whose `u_-` fields are the conjugate reflections of the given
    /// `u_+` fields, i.e. real physical data.
    pub fn from_plus(t: T, plus_one: SpectralField<T>, plus_c: SpectralField<T>) -> Result<Self> {
        plus_one.ensure_same_grid(&plus_c)?;
        let m1 = conj_reflect(&plus_one);
        let mc = conj_reflect(&plus_c);
        Ok(Self { t, fields: [plus_one, m1, plus_c, mc] })
    }

    /// `u^k = (u^k_+ - u^k_-)/(2i<D>_k)`, `∂_t u^k = (u^k_+ + u^k_-)/2`.
    pub fn reconstruct(&self, sp: &SpeedPair<T>) -> [SpeciesData<T>; 2] {
        [SpeedTag::One, SpeedTag::C].map(|k| {
            let p = self.field(k, Sign::Plus);
            let m = self.field(k, Sign::Minus);
            let br = bracket_table(sp, k, p);
            let two = T::lit(2.0);
            let mut u0 = p.clone();
            let mut u1 = p.clone();
            for i in 0..p.len() {
                let (a, b) = (p.coeffs()[i], m.coeffs()[i]);
                u0.coeffs_mut()[i] = (a - b) / Complex::new(T::zero(), two * br[i]);
                u1.coeffs_mut()[i] = (a + b) / two;
            }
            SpeciesData { u0, u1 }
        })
    }

    /// Largest `|Im u^k(x)|` relative to the largest `|u^k(x)|`, over both
    /// species.
    pub fn reality_defect(&self, sp: &SpeedPair<T>) -> T {
        let mut worst = T::zero();
        for d in self.reconstruct(sp) {
            let v = d.u0.values();
            let scale = v.iter().map(|c| c.norm()).fold(T::zero(), T::max);
            if scale > T::zero() {
                let im = v.iter().map(|c| c.im.abs()).fold(T::zero(), T::max);
                worst = worst.max(im / scale);
            }
        }
        worst
    }

    /// `Σ |û|^2 dξ^d` over the four fields: conserved by the linear flow.
    pub fn linear_energy(&self) -> T {
        self.fields.iter().map(|f| f.spectral_l2_squared()).fold(T::zero(), |a, b| a + b)
    }

    /// Energy of both signs of all species with `lo <= |ξ| < hi`.
    pub fn band_energy(&self, lo: T, hi: T) -> Result<T> {
        let mut e = T::zero();
        for k in SpeedTag::ALL {
            e = e + self.species_band_energy(k, lo, hi)?;
        }
        Ok(e)
    }

    pub fn species_band_energy(&self, k: SpeedTag, lo: T, hi: T) -> Result<T> {
        if !(lo < hi) {
            return Err(Error::InvalidParameter {
                name: "band",
                reason: format!("need radius_lo < radius_hi, got [{lo}, {hi})"),
            });
        }
        let mut e = T::zero();
        for s in Sign::ALL {
            e = e + band_sum(self.field(k, s), lo, hi);
        }
        Ok(e)
    }
}

pub(crate) fn band_sum<T: Real>(f: &SpectralField<T>, lo: T, hi: T) -> T {
    let mut e = T::zero();
    for (i, c) in f.coeffs().iter().enumerate() {
        let r = norm3(&f.frequency(i));
        if r >= lo && r < hi {
            e = e + c.norm_sqr();
        }
    }
    e * f.dual_cell()
}

/// Multiplies the coefficients of `u^k_±` by `e^{∓iτ<ξ>_k}`.
pub(crate) fn rotate<T: Real>(sp: &SpeedPair<T>, fields: &[SpectralField<T>; 4], tau: T) -> [SpectralField<T>; 4] {
    let mut out = fields.clone();
    for (n, (k, s)) in SLOTS.iter().enumerate() {
        let br = bracket_table(sp, *k, &fields[n]);
        let sg = s.value::<T>();
        for (i, c) in out[n].coeffs_mut().iter_mut().enumerate() {
            *c = *c * Complex::new(T::zero(), -sg * tau * br[i]).exp();
        }
    }
    out
}

pub fn profile_of<T: Real>(sp: &SpeedPair<T>, state: &SystemState<T>) -> ProfileState<T> {
    ProfileState { t: state.t, fields: rotate(sp, &state.fields, state.t) }
}

impl<T: Real> ProfileState<T> {
    pub fn field(&self, k: SpeedTag, s: Sign) -> &SpectralField<T> {
        &self.fields[slot(k, s)]
    }

    /// `(Σ_fields ‖f - g‖_2^2)^{1/2}`.
    pub fn distance(&self, other: &Self) -> T {
        let mut acc = T::zero();
        for (a, b) in self.fields.iter().zip(&other.fields) {
            let d: T =
                a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| (*x - *y).norm_sqr()).fold(T::zero(), |s, v| s + v);
            acc = acc + d * a.dual_cell();
        }
        acc.sqrt()
    }
}
