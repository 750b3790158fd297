//! Diversity spectra of spatial multipath fading.
//!
//! The spatial autocorrelation of a scalar fading field observed over a planar
//! aperture defines a compact, positive integral operator. Its eigenvalues
//! (the diversity spectrum) and the diversity measure `ω = (Σλ)²/Σλ²` are
//! computed from a truncated Bessel-basis representation: a Gram matrix `G_N`
//! of the basis functions over the aperture and the Toeplitz matrix `R̃_N` of
//! power-azimuth-spectrum Fourier coefficients, with `eig(R_N) = eig(R̃_N G_N)`.

// Validation is written as `!(x > 0.0)` so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod aperture;
pub mod cli;
pub mod error;
pub mod integrate;
pub mod operator;
pub mod pas;
pub mod specfun;
pub mod spectrum;

pub use error::{Error, Result};
