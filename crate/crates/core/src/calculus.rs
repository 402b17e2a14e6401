//! Time and partial derivatives of the building blocks, plus the
//! finite-difference machinery that checks them.

use crate::algebra::{curlywedge, wedge, GroupId, TangentVector};
use crate::error::{Error, Result};
use crate::groups::{gamma_adjoint, gamma_group, jacobian_any};
use crate::linalg::{max_abs, skew3, to_dyn3, Mat3, MatN, Vec3};
use crate::oracle::lift_kernel;
use crate::so3::{gamma3_so3, gamma_so3};

/// A point `x` on a curve in the Lie algebra together with its rate `ẋ`.
#[derive(Debug, Clone, PartialEq)]
pub struct KinematicState {
    pub group: GroupId,
    pub x: TangentVector,
    pub xdot: TangentVector,
}

impl KinematicState {
    pub fn new(x: TangentVector, xdot: TangentVector) -> Result<Self> {
        if x.group() != xdot.group() {
            return Err(Error::GroupMismatch {
                expected: x.group(),
                got: xdot.group(),
            });
        }
        Ok(KinematicState {
            group: x.group(),
            x,
            xdot,
        })
    }
}

fn apply(m: &MatN, v: &TangentVector) -> TangentVector {
    TangentVector::from_vector(v.group(), &(m * v.to_vector())).expect("square operator keeps the layout")
}

/// Body velocity `v = 𝒥(x) ẋ`.
pub fn body_velocity(state: &KinematicState) -> TangentVector {
    apply(&jacobian_any(&state.x), &state.xdot)
}

fn hat(v: &TangentVector, adjoint: bool) -> MatN {
    if adjoint {
        curlywedge(v)
    } else {
        wedge(v)
    }
}

/// `Γ₀(sX, sY, sX) = s (𝒥(sx) y)^ Γ₀(sX)`, with `^` the chosen representation.
fn sandwich0_scaled(state: &KinematicState, s: f64, adjoint: bool) -> MatN {
    let x = state.x.scaled(s);
    let v = apply(&jacobian_any(&x), &state.xdot);
    let g0 = if adjoint {
        gamma_adjoint(0, &x)
    } else {
        gamma_group(0, &x)
    };
    hat(&v, adjoint) * g0 * s
}

/// `Γ_ℓ(X, Ẋ, X)` with `X = x^` (or `x^⋏` when `adjoint` is set), which is the
/// time derivative of `Γ_ℓ(X)` along the state's trajectory.
pub fn gamma_time_derivative(ell: usize, state: &KinematicState, adjoint: bool) -> MatN {
    if let (TangentVector::So3 { phi }, TangentVector::So3 { phi: rate }) = (&state.x, &state.xdot) {
        if ell <= 1 {
            return to_dyn3(&gamma3_so3(ell, phi, rate));
        }
    }
    if ell == 0 {
        return sandwich0_scaled(state, 1.0, adjoint);
    }
    lift_kernel(|s| sandwich0_scaled(state, s, adjoint), 0, ell)
}

/// Rate of the body velocity: `v̇ = Γ₁(x^⋏, ẋ^⋏, x^⋏) ẋ + 𝒥(x) ẍ`.
pub fn acceleration_term(state: &KinematicState, xddot: &TangentVector) -> Result<TangentVector> {
    if xddot.group() != state.group {
        return Err(Error::GroupMismatch {
            expected: state.group,
            got: xddot.group(),
        });
    }
    let a = gamma_time_derivative(1, state, true) * state.xdot.to_vector() + jacobian_any(&state.x) * xddot.to_vector();
    TangentVector::from_vector(state.group, &a)
}

/// `∂γ₀(x^⋏, y)/∂x = Γ₁(x^⋏, y^⋏, x^⋏) − γ₀(x^⋏, y)^⋏ Γ₁(x^⋏)`.
///
/// Always evaluated through the generic sandwich path, so the SO(3) helpers
/// below give an independent comparison.
pub fn partial_gamma0(x: &TangentVector, y: &TangentVector) -> Result<MatN> {
    if x.group() != y.group() {
        return Err(Error::GroupMismatch {
            expected: x.group(),
            got: y.group(),
        });
    }
    let state = KinematicState::new(*x, *y)?;
    let j = jacobian_any(x);
    let r = apply(&j, y);
    let sandwich = lift_kernel(|s| sandwich0_scaled(&state, s, true), 0, 1);
    Ok(sandwich - curlywedge(&r) * j)
}

/// `∂(J(φ)ρ)/∂φ = Q(φ, ρ) − (J(φ)ρ)^ J(φ)`.
pub fn so3_translation_partial(phi: &Vec3, rho: &Vec3) -> Mat3 {
    let j = gamma_so3(1, phi);
    gamma3_so3(1, phi, rho) - skew3(&(j * rho)) * j
}

/// `J̇ − ω^ J` with `ω = J(φ)φ̇` the angular velocity.
pub fn so3_jacobian_rate_residual(phi: &Vec3, phidot: &Vec3) -> Mat3 {
    let j = gamma_so3(1, phi);
    gamma3_so3(1, phi, phidot) - skew3(&(j * phidot)) * j
}

/// Default finite-difference step.
pub const FD_STEP: f64 = 1e-5;

/// Five-point central difference `f'(0)` with step `h`.
pub fn central_difference(f: impl Fn(f64) -> MatN, h: f64) -> MatN {
    (f(-2.0 * h) - f(2.0 * h) + (f(h) - f(-h)) * 8.0) / (12.0 * h)
}

/// Result of a finite-difference comparison with one step halving.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdComparison {
    /// `‖analytic − FD(h)‖∞`.
    pub error: f64,
    /// `‖analytic − FD(h/2)‖∞`.
    pub error_half: f64,
}

impl FdComparison {
    /// The halved step must not be worse than the expected `O(h²)` drop,
    /// allowing for the round-off floor.
    pub fn richardson_ok(&self) -> bool {
        self.error_half <= (self.error / 4.0).max(1e-8)
    }

    pub fn max_error(&self) -> f64 {
        self.error.max(self.error_half)
    }
}

/// Compares `analytic` with the derivative at 0 of `f`.
pub fn fd_compare(f: impl Fn(f64) -> MatN, analytic: &MatN, h: f64) -> FdComparison {
    let error = max_abs(&(central_difference(&f, h) - analytic));
    let error_half = max_abs(&(central_difference(&f, h / 2.0) - analytic));
    FdComparison { error, error_half }
}
