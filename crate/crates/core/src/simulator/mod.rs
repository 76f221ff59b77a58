//! Pseudo-spectral integration of the diagonalized two-speed system on a
//! periodic box, and the resonant-amplification experiment.

pub mod coeffs;
pub mod experiment;
pub mod state;
pub mod step;

pub use coeffs::{expand_quadratic, NonlinearityCoefficients, QuadraticTable};
pub use experiment::{run_resonant_amplification, ExperimentConfig, ExperimentRecord, RunRecord, Sample};
pub use state::{conj_reflect, diagonalize, profile_of, ProfileState, SpeciesData, SystemState};
pub use step::{Integrator, BLOWUP_JUMP};
