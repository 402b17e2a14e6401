//! Closed-form building-block sequences `Γ_ℓ` for matrix Lie groups.
//!
//! The crate assembles group elements, adjoints and left Jacobians for SO(2),
//! SE(2), SO(3), SE(3), SE₂(3), SGal(3) and Sim(3) from a small set of
//! rotation-level kernels, and ships independent oracles (truncated series,
//! Gauss–Legendre quadrature and a dense matrix exponential) that every
//! closed form is checked against.

pub mod algebra;
pub mod calculus;
pub mod checks;
#[cfg(feature = "cli")]
pub mod cli;
pub mod coeffs;
pub mod error;
pub mod groups;
pub mod identities;
pub mod linalg;
pub mod oracle;
pub mod sampling;
pub mod so3;

pub use algebra::{curlywedge, vee, wedge, GroupId, TangentVector};
pub use error::{Error, Result};
