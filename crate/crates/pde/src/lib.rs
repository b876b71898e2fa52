//! Wave-type propagators on periodic grids: Poisson and Kirchhoff averages,
//! general-dimension ascent, Klein–Gordon and its damped continuation, plus
//! matrix models of the harmonic oscillator and the Grushin operator.

pub mod grid;
pub mod kernel;
pub mod matrix;
pub mod rewrite;
pub mod wave;

pub use grid::{spectral_wave_reference, wavenumbers, FieldHeader, GridField, SpectralOperator};
pub use kernel::{FieldAscent, Mass};
pub use matrix::{grushin_demo, harmonic_oscillator};
pub use rewrite::cos_to_exp_rewrite_check;
pub use wave::{damped_wave, klein_gordon, wave2d_poisson, wave3d_kirchhoff, wave_general, KGKernelSpec};
