//! Independent ground-truth evaluators: truncated building-block series,
//! Gauss–Legendre quadrature and a dense matrix exponential.
//!
//! Nothing here calls into the closed-form modules, so agreement between the
//! two sides is meaningful.

pub mod expm;
pub mod quadrature;
pub mod series;

pub use expm::expm_generic;
pub use quadrature::{integrate, integrate_2d, lift_kernel, quadrature_lift};
pub use series::{series_eval, BlockTemplate, SeriesSpec};
