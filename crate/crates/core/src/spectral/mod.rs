//! Coefficient-space representation of periodic functions.

mod evolution;
mod field;
mod multiplier;
mod product;
mod random;

pub use evolution::{free_evolution, free_velocity, half_wave, wave_energy};
pub use field::SpectralField;
pub use multiplier::{
    apply_multiplier, bracket, dispersion, gauge_phase, p_symbol, sobolev_norm, MultiplierId, Sign,
};
pub(crate) use multiplier::cis;
pub use product::{quadratic_product, ProductKernel};
pub use random::{random_sobolev_field, ROUGH_SLACK};
