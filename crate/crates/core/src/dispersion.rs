//! Dispersion relations and the 64 quadratic interaction phases.
//!
//! A phase is labelled by three speed tags and three signs. The signs are
//! stored exactly as they appear in front of each bracket:
//!
//! ```text
//! phase(ξ, η) = s0 <ξ>_k + s1 <η>_l + s2 <ξ-η>_m
//! ```
//!
//! so the slow-slow-to-fast interaction `<ξ>_c = <η> + <ξ-η>` is written
//! `c11+--`. A field sign `u_±` in the Duhamel integrand enters the phase with
//! the opposite sign; see [`PhaseIndex::field_signs`].

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{norm3, sub3, Real};

/// Which of the two wave families a bracket refers to.
///
/// The derived ordering (`C` before `One`) is the one used to pick canonical
/// representatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpeedTag {
    C,
    One,
}

impl SpeedTag {
    pub const ALL: [SpeedTag; 2] = [SpeedTag::C, SpeedTag::One];

    pub fn as_char(self) -> char {
        match self {
            SpeedTag::C => 'c',
            SpeedTag::One => '1',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const ALL: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value<T: Real>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn product(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// The two propagation speeds. The slow speed is normalized to 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpeedPair<T = f64> {
    pub c_fast: T,
    pub c_slow: T,
}

impl<T: Real> SpeedPair<T> {
    pub fn new(c: T) -> Result<Self> {
        if !(c.is_finite() && c > T::zero()) {
            return Err(Error::InvalidSpeed(c.as_f64()));
        }
        if c == T::one() {
            return Err(Error::DegenerateSpeed(c.as_f64()));
        }
        Ok(Self { c_fast: c, c_slow: T::one() })
    }

    pub fn speed(&self, tag: SpeedTag) -> T {
        match tag {
            SpeedTag::C => self.c_fast,
            SpeedTag::One => self.c_slow,
        }
    }

    /// Japanese bracket `sqrt(1 + c_tag^2 |x|^2)` of a modulus.
    pub fn bracket(&self, tag: SpeedTag, x: T) -> T {
        let c = self.speed(tag);
        (T::one() + c * c * x * x).sqrt()
    }

    pub fn bracket_vec(&self, tag: SpeedTag, x: &[T; 3]) -> T {
        self.bracket(tag, norm3(x))
    }

    /// `c^2 x / <x>_c`, the group velocity of the `tag` family at `x`.
    pub fn group_velocity(&self, tag: SpeedTag, x: &[T; 3]) -> [T; 3] {
        let c = self.speed(tag);
        let f = c * c / self.bracket_vec(tag, x);
        [f * x[0], f * x[1], f * x[2]]
    }

    pub fn phase(&self, idx: &PhaseIndex, p: &FrequencyPair<T>) -> T {
        let [s0, s1, s2] = idx.signs.map(Sign::value::<T>);
        let diff = p.diff();
        s0 * self.bracket_vec(idx.output, &p.xi)
            + s1 * self.bracket_vec(idx.first, &p.eta)
            + s2 * self.bracket_vec(idx.second, &diff)
    }

    /// Phase restricted to a colinear configuration `ξ = λη`, `|η| = r`.
    pub fn phase_colinear(&self, idx: &PhaseIndex, r: T, lambda: T) -> T {
        let [s0, s1, s2] = idx.signs.map(Sign::value::<T>);
        s0 * self.bracket(idx.output, lambda * r)
            + s1 * self.bracket(idx.first, r)
            + s2 * self.bracket(idx.second, (lambda - T::one()) * r)
    }

    pub fn grad_eta_phase(&self, idx: &PhaseIndex, p: &FrequencyPair<T>) -> [T; 3] {
        let s1 = idx.signs[1].value::<T>();
        let s2 = idx.signs[2].value::<T>();
        let ge = self.group_velocity(idx.first, &p.eta);
        let gd = self.group_velocity(idx.second, &p.diff());
        [s1 * ge[0] - s2 * gd[0], s1 * ge[1] - s2 * gd[1], s1 * ge[2] - s2 * gd[2]]
    }

    pub fn grad_xi_phase(&self, idx: &PhaseIndex, p: &FrequencyPair<T>) -> [T; 3] {
        let s0 = idx.signs[0].value::<T>();
        let s2 = idx.signs[2].value::<T>();
        let gx = self.group_velocity(idx.output, &p.xi);
        let gd = self.group_velocity(idx.second, &p.diff());
        [s0 * gx[0] + s2 * gd[0], s0 * gx[1] + s2 * gd[1], s0 * gx[2] + s2 * gd[2]]
    }

    /// Full 6-D gradient norm `|(∂_ξ φ, ∂_η φ)|`.
    pub fn grad_norm(&self, idx: &PhaseIndex, p: &FrequencyPair<T>) -> T {
        let a = self.grad_xi_phase(idx, p);
        let b = self.grad_eta_phase(idx, p);
        (norm3(&a).powi(2) + norm3(&b).powi(2)).sqrt()
    }

    /// Upper bound on the operator norm of `∂_η² φ`.
    pub fn eta_hessian_bound(&self, idx: &PhaseIndex, p: &FrequencyPair<T>) -> T {
        let cl = self.speed(idx.first);
        let cm = self.speed(idx.second);
        cl * cl / self.bracket_vec(idx.first, &p.eta) + cm * cm / self.bracket_vec(idx.second, &p.diff())
    }
}

/// A pair of frequencies `(ξ, η)`; the third one is `ξ - η`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrequencyPair<T = f64> {
    pub xi: [T; 3],
    pub eta: [T; 3],
}

impl<T: Real> FrequencyPair<T> {
    pub fn new(xi: [T; 3], eta: [T; 3]) -> Self {
        Self { xi, eta }
    }

    pub fn diff(&self) -> [T; 3] {
        sub3(&self.xi, &self.eta)
    }

    /// `(ξ, η) -> (ξ, ξ - η)`, an involution.
    pub fn swapped(&self) -> Self {
        Self { xi: self.xi, eta: self.diff() }
    }

    pub fn norm(&self) -> T {
        (norm3(&self.xi).powi(2) + norm3(&self.eta).powi(2)).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.xi.iter().chain(self.eta.iter()).all(|v| v.is_finite())
    }
}

/// Label of one interaction phase: speed tags of the output, first and
/// second input, and the sign in front of each bracket.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PhaseIndex {
    pub output: SpeedTag,
    pub first: SpeedTag,
    pub second: SpeedTag,
    pub signs: [Sign; 3],
}

impl PhaseIndex {
    pub const fn new(output: SpeedTag, first: SpeedTag, second: SpeedTag, signs: [Sign; 3]) -> Self {
        Self { output, first, second, signs }
    }

    fn key(&self) -> (SpeedTag, SpeedTag, SpeedTag, Sign, Sign, Sign) {
        (self.output, self.first, self.second, self.signs[0], self.signs[1], self.signs[2])
    }

    /// All three signs reversed; the phase changes sign.
    pub fn negated(&self) -> Self {
        Self { signs: self.signs.map(Sign::flip), ..*self }
    }

    /// Exchange the roles of `η` and `ξ - η`.
    pub fn swapped(&self) -> Self {
        Self {
            output: self.output,
            first: self.second,
            second: self.first,
            signs: [self.signs[0], self.signs[2], self.signs[1]],
        }
    }

    pub fn apply(&self, t: Transform) -> Self {
        let mut out = *self;
        if t.swap {
            out = out.swapped();
        }
        if t.flip {
            out = out.negated();
        }
        out
    }

    /// Signs `(ε0, ε1, ε2)` of the diagonal unknowns `u_±` whose product
    /// oscillates with this phase: `ε0 = s0`, `ε1 = -s1`, `ε2 = -s2`.
    pub fn field_signs(&self) -> [Sign; 3] {
        [self.signs[0], self.signs[1].flip(), self.signs[2].flip()]
    }

    /// Every index, in lexicographic order.
    pub fn all() -> Vec<PhaseIndex> {
        let mut out = Vec::with_capacity(64);
        for &a in &SpeedTag::ALL {
            for &b in &SpeedTag::ALL {
                for &c in &SpeedTag::ALL {
                    for &s0 in &Sign::ALL {
                        for &s1 in &Sign::ALL {
                            for &s2 in &Sign::ALL {
                                out.push(PhaseIndex::new(a, b, c, [s0, s1, s2]));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn canonical(&self) -> (PhaseIndex, Transform) {
        symmetry_reduce(self)
    }

    pub fn is_canonical(&self) -> bool {
        symmetry_reduce(self).0 == *self
    }
}

impl PartialOrd for PhaseIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PhaseIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for PhaseIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = [
            self.output.as_char(),
            self.first.as_char(),
            self.second.as_char(),
            self.signs[0].as_char(),
            self.signs[1].as_char(),
            self.signs[2].as_char(),
        ]
        .iter()
        .collect();
        f.write_str(&s)
    }
}

impl FromStr for PhaseIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadPhaseIndex(s.to_string());
        // accept the unicode minus sign as well
        let chars: Vec<char> = s.trim().chars().map(|c| if c == '−' { '-' } else { c }).collect();
        if chars.len() != 6 {
            return Err(bad());
        }
        let tag = |c: char| match c {
            'c' | 'C' => Ok(SpeedTag::C),
            '1' => Ok(SpeedTag::One),
            _ => Err(bad()),
        };
        let sign = |c: char| match c {
            '+' => Ok(Sign::Plus),
            '-' => Ok(Sign::Minus),
            _ => Err(bad()),
        };
        Ok(PhaseIndex::new(
            tag(chars[0])?,
            tag(chars[1])?,
            tag(chars[2])?,
            [sign(chars[3])?, sign(chars[4])?, sign(chars[5])?],
        ))
    }
}

impl Serialize for PhaseIndex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PhaseIndex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Element of the symmetry group `{id, flip, swap, flip∘swap}` acting on
/// phase indices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Transform {
    /// All signs reversed (phase value negated).
    pub flip: bool,
    /// `η <-> ξ - η`.
    pub swap: bool,
}

impl Transform {
    pub const IDENTITY: Transform = Transform { flip: false, swap: false };

    pub const ALL: [Transform; 4] = [
        Transform { flip: false, swap: false },
        Transform { flip: true, swap: false },
        Transform { flip: false, swap: true },
        Transform { flip: true, swap: true },
    ];

    /// `σ` in `phase(idx, p) = σ phase(idx.apply(t), t(p))`.
    pub fn sign<T: Real>(&self) -> T {
        if self.flip {
            -T::one()
        } else {
            T::one()
        }
    }

    pub fn map_pair<T: Real>(&self, p: &FrequencyPair<T>) -> FrequencyPair<T> {
        if self.swap {
            p.swapped()
        } else {
            *p
        }
    }
}

/// Lexicographically smallest element of the orbit of `idx`, together with
/// the transform that produces it.
pub fn symmetry_reduce(idx: &PhaseIndex) -> (PhaseIndex, Transform) {
    Transform::ALL
        .iter()
        .map(|&t| (idx.apply(t), t))
        .min_by(|a, b| a.0.cmp(&b.0).then((a.1.swap, a.1.flip).cmp(&(b.1.swap, b.1.flip))))
        .expect("orbit is non-empty")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PhaseEntry {
    pub index: PhaseIndex,
    pub canonical: PhaseIndex,
    pub transform: Transform,
}

/// All 64 indices with their canonical representative.
pub fn enumerate_phases() -> Vec<PhaseEntry> {
    PhaseIndex::all()
        .into_iter()
        .map(|index| {
            let (canonical, transform) = symmetry_reduce(&index);
            PhaseEntry { index, canonical, transform }
        })
        .collect()
}

/// Sorted, deduplicated canonical representatives.
pub fn canonical_phases() -> Vec<PhaseIndex> {
    let mut v: Vec<PhaseIndex> = enumerate_phases().into_iter().map(|e| e.canonical).collect();
    v.sort();
    v.dedup();
    v
}
