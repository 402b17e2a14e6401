//! Rotation-level building-block kernels. Every larger group is assembled
//! from these.
//!
//! Closed forms exist for `Γ_ℓ(φ^)` at every ℓ and for the multi-argument
//! kernels at `ℓ ≤ 1`. Higher indices of the multi-argument kernels are
//! obtained by a single weighted quadrature from the `ℓ = 1` closed form.

use crate::coeffs::{self, inv_factorial, rotation_series};
use crate::error::{Error, Result};
use crate::linalg::{skew3, Mat2, Mat3, Vec3};
use crate::oracle::{lift_kernel, BlockTemplate};

fn quadratic(a: [f64; 3], p: &Mat3) -> Mat3 {
    Mat3::identity() * a[0] + p * a[1] + p * p * a[2]
}

/// `Γ_ℓ(φ^) = Σ_m φ^ᵐ/(ℓ+m)!`.
pub fn gamma_so3(ell: usize, phi: &Vec3) -> Mat3 {
    let angle = phi.norm();
    let p = skew3(phi);
    let a = match ell {
        0 => coeffs::c(angle),
        1 => coeffs::j(angle),
        2 => coeffs::n(angle),
        _ => [
            inv_factorial(ell),
            rotation_series(ell + 1, angle),
            rotation_series(ell + 2, angle),
        ],
    };
    quadratic(a, &p)
}

/// `γ_ℓ(φ^, y) = Γ_{ℓ+1}(φ^) y`.
pub fn gamma_vec(ell: usize, phi: &Vec3, y: &Vec3) -> Vec3 {
    gamma_so3(ell + 1, phi) * y
}

/// `γ_ℓ(φ^, y, τ) = Γ_{ℓ+2}(φ^) y τ`.
pub fn gamma_vec_tau(ell: usize, phi: &Vec3, y: &Vec3, tau: f64) -> Vec3 {
    gamma_so3(ell + 2, phi) * y * tau
}

/// The SE(3) Jacobian coupling block `Q(φ, ρ) = Γ₁(φ^, ρ^, φ^)`.
pub fn q_block(phi: &Vec3, rho: &Vec3) -> Mat3 {
    let q = coeffs::q(phi.norm());
    let p = skew3(phi);
    let r = skew3(rho);
    let pr = p * r;
    let rp = r * p;
    let prp = pr * p;
    let pp = p * p;
    r * q[0] + (pr + rp + prp) * q[1] + (pp * r + rp * p - prp * 3.0) * q[2] + (pp * r * p + prp * p) * q[3]
}

/// `Γ_ℓ(φ^, y^, φ^) = Σ_{m,n} φ^ᵐ y^ φ^ⁿ/(ℓ+m+n+1)!`.
pub fn gamma3_so3(ell: usize, phi: &Vec3, y: &Vec3) -> Mat3 {
    match ell {
        0 => skew3(&(gamma_so3(1, phi) * y)) * gamma_so3(0, phi),
        1 => q_block(phi, y),
        _ => lift_kernel(|s| q_block(&(phi * s), y) * s, 1, ell - 1),
    }
}

/// `Γ₁(φ^, τ)/τ = g₀1 + g₁φ^ + g₂φ^²`.
fn g12_block(phi: &Vec3) -> Mat3 {
    quadratic(coeffs::g12(phi.norm()), &skew3(phi))
}

/// `Γ_ℓ(φ^, τ) = Σ_m (m+1) φ^ᵐ τ/(ℓ+m+1)!`.
pub fn gamma_phi_tau(ell: usize, phi: &Vec3, tau: f64) -> Mat3 {
    match ell {
        0 => gamma_so3(0, phi) * tau,
        1 => g12_block(phi) * tau,
        _ => lift_kernel(|s| g12_block(&(phi * s)) * s, 1, ell - 1) * tau,
    }
}

/// `Γ₁(φ^, y^, φ^, τ)/τ` on its seven-matrix basis.
fn g13_block(phi: &Vec3, y: &Vec3) -> Mat3 {
    let g = coeffs::g13(phi.norm());
    let p = skew3(phi);
    let v = skew3(y);
    let pv = p * v;
    let vp = v * p;
    let pp = p * p;
    let pvp = pv * p;
    v * g[0] + pv * g[1] + vp * g[2] + pp * v * g[3] + pvp * g[4] + vp * p * g[5] + (pp * v * p + pvp * p) * g[6]
}

/// `Γ_ℓ(φ^, y^, φ^, τ) = Σ_{m,n} (m+1) φ^ᵐ y^ φ^ⁿ τ/(ℓ+m+n+2)!`.
pub fn gamma4_so3(ell: usize, phi: &Vec3, y: &Vec3, tau: f64) -> Mat3 {
    match ell {
        0 => {
            let d = gamma_so3(1, phi) - gamma_so3(2, phi);
            skew3(&(d * y)) * gamma_so3(0, phi) * tau
        }
        1 => g13_block(phi, y) * tau,
        _ => lift_kernel(|s| g13_block(&(phi * s), y) * (s * s), 1, ell - 1) * tau,
    }
}

/// Planar `Γ_ℓ(φS) = a·1 + b·S`, returned as `(a, b)`.
pub fn gamma_so2_coeffs(ell: usize, phi: f64) -> (f64, f64) {
    let angle = phi.abs();
    match ell {
        0 => (phi.cos(), phi.sin()),
        1 => {
            let c = coeffs::c(angle);
            (c[1], phi * c[2])
        }
        2 => (coeffs::c(angle)[2], phi * coeffs::j(angle)[2]),
        _ => (rotation_series(ell, angle), phi * rotation_series(ell + 1, angle)),
    }
}

/// `Γ_ℓ(φS)` with `S` the canonical planar generator.
pub fn gamma_so2(ell: usize, phi: f64) -> Mat2 {
    let (a, b) = gamma_so2_coeffs(ell, phi);
    Mat2::new(a, -b, b, a)
}

/// A rotation-level building-block evaluation request.
#[derive(Debug, Clone, PartialEq)]
pub struct So3BlockRequest {
    pub template: BlockTemplate,
    pub ell: usize,
    pub phi: Vec3,
    pub y: Option<Vec3>,
    pub tau: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BlockValue {
    Matrix(Mat3),
    Vector(Vec3),
}

impl BlockValue {
    /// Row-wise view, for reporting.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        match self {
            BlockValue::Matrix(m) => (0..3).map(|i| (0..3).map(|j| m[(i, j)]).collect()).collect(),
            BlockValue::Vector(v) => (0..3).map(|i| vec![v[i]]).collect(),
        }
    }
}

impl So3BlockRequest {
    pub fn new(template: BlockTemplate, ell: usize, phi: Vec3) -> Self {
        So3BlockRequest {
            template,
            ell,
            phi,
            y: None,
            tau: None,
        }
    }

    pub fn with_y(mut self, y: Vec3) -> Self {
        self.y = Some(y);
        self
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = Some(tau);
        self
    }

    pub fn evaluate(&self) -> Result<BlockValue> {
        let t = self.template;
        let y = || {
            self.y
                .ok_or_else(|| Error::InvalidArgument(format!("template {t} requires y")))
        };
        let tau = || {
            self.tau
                .ok_or_else(|| Error::InvalidArgument(format!("template {t} requires tau")))
        };
        if !t.needs_y() && self.y.is_some() {
            return Err(Error::InvalidArgument(format!("template {t} does not take y")));
        }
        if !t.needs_tau() && self.tau.is_some() {
            return Err(Error::InvalidArgument(format!("template {t} does not take tau")));
        }
        let phi = &self.phi;
        Ok(match t {
            BlockTemplate::Gamma => BlockValue::Matrix(gamma_so3(self.ell, phi)),
            BlockTemplate::GammaVec => BlockValue::Vector(gamma_vec(self.ell, phi, &y()?)),
            BlockTemplate::Sandwich => BlockValue::Matrix(gamma3_so3(self.ell, phi, &y()?)),
            BlockTemplate::Tau => BlockValue::Matrix(gamma_phi_tau(self.ell, phi, tau()?)),
            BlockTemplate::VecTau => BlockValue::Vector(gamma_vec_tau(self.ell, phi, &y()?, tau()?)),
            BlockTemplate::SandwichTau => BlockValue::Matrix(gamma4_so3(self.ell, phi, &y()?, tau()?)),
        })
    }
}
