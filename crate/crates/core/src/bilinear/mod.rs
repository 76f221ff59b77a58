//! Periodic spectral fields, Littlewood-Paley projections and bilinear
//! pseudo-products.

pub mod field;
pub mod io;
pub mod lp;
pub mod probe;
pub mod product;

pub use field::{fft_nd, lp_norm, SpectralField};
pub use lp::{lp_project, phi0, psi, LpMode};
pub use probe::{
    bernstein_check, radial_shell_ratio, random_band_limited, random_localized, random_spikes, BernsteinRow,
};
pub use product::{
    commensurate_lambda, pseudo_product, pseudo_product_table, separable_product, shift_representation, symbol_l1_norm,
    Symbol, SymbolGrid, SymbolNorm, TranslationSymbol,
};
