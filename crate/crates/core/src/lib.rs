//! Fourier-pseudospectral tools for the periodic "good" Boussinesq equation
//!
//! ```text
//! u_tt + u_xxxx - u_xx + (u^2)_xx = 0,   x in T = [0, 2pi)
//! ```
//!
//! The crate is organised around four layers:
//!
//! * [`spectral`]: truncated Fourier coefficient fields, Fourier multipliers,
//!   Sobolev norms and alias-free quadratic products.
//! * [`normal_form`]: the bilinear operator `T` that removes the non-resonant
//!   quadratic interactions of free waves, the correction `h` and its error term.
//! * [`dynamics`]: reduction of the initial data, a direct integrator and a
//!   decomposed integrator (free wave + normal form + remainder), and the
//!   remainder / smoothing diagnostics.
//! * [`estimates`]: exhaustive lattice scans of the multiplier suprema that
//!   control the bilinear and trilinear estimates, resonance identities and the
//!   sharpness counterexample.
//!
//! All public operations are pure functions of their inputs.

pub mod dynamics;
pub mod error;
pub mod estimates;
pub mod fit;
pub mod normal_form;
pub mod params;
pub mod spectral;

pub use error::{Error, Result};
pub use params::ModelParams;
pub use spectral::{MultiplierId, Sign, SpectralField};
