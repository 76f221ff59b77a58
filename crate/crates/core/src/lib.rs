//! Space-time resonance analysis for two-speed quadratic Klein-Gordon
//! systems.
//!
//! The crate is organised bottom-up:
//!
//! * [`dispersion`]: brackets, the 64 interaction phases and their symmetries;
//! * [`resonance`]: resonant spheres, outcome/source radii, separation and the
//!   small-constant budget;
//! * [`cutoffs`]: the smooth partition adapted to the resonant sets;
//! * [`bilinear`]: periodic spectral fields, Littlewood-Paley projections and
//!   pseudo-products;
//! * [`simulator`]: pseudo-spectral integration of the diagonalized system.
//!
//! Numerical code is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64`, which is what the command-line front end
//! and the golden tests use.

pub mod bilinear;
pub mod cutoffs;
pub mod dispersion;
pub mod error;
pub mod resonance;
pub mod scalar;
pub mod simulator;

pub use error::{Error, Result};
pub use scalar::Real;

pub use dispersion::{FrequencyPair, PhaseIndex, Sign, SpeedTag, Transform};

pub type SpeedPair = dispersion::SpeedPair<f64>;
pub type SpeedPair32 = dispersion::SpeedPair<f32>;
pub type ResonantComponent = resonance::ResonantComponent<f64>;
pub type ResonanceReport = resonance::ResonanceReport<f64>;
pub type ResonanceReport32 = resonance::ResonanceReport<f32>;
pub type CutoffFamily = cutoffs::CutoffFamily<f64>;
pub type SpectralField = bilinear::SpectralField<f64>;
pub type SystemState = simulator::SystemState<f64>;
pub type Integrator = simulator::Integrator<f64>;
pub type NonlinearityCoefficients = simulator::NonlinearityCoefficients<f64>;
