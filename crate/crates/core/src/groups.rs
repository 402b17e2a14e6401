//! Blockwise assembly of group elements, adjoints and left Jacobians for all
//! twelve matrix representations.
//!
//! [`gamma_group`] and [`gamma_adjoint`] return `Γ_ℓ(ξ^)` and `Γ_ℓ(ξ^⋏)` for
//! any ℓ. The exponential map, the adjoint and the left Jacobian are the
//! `ℓ = 0`, `ℓ = 0` and `ℓ = 1` members respectively.

use crate::algebra::{curlywedge, wedge, GroupId, TangentVector};
use crate::coeffs::{self, coeff_gamma_scalar, inv_factorial};
use crate::error::{Error, Result};
use crate::linalg::{canonical_skew, mat_inverse, mat_pow, max_abs, set_block, skew3, Mat3, MatN, Vec3};
use crate::oracle::{integrate, lift_kernel};
use crate::so3::{gamma3_so3, gamma4_so3, gamma_phi_tau, gamma_so2, gamma_so3};

/// A group (or adjoint-group) element stored as its dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub group: GroupId,
    pub matrix: MatN,
}

impl GroupElement {
    pub fn identity(group: GroupId) -> Self {
        let n = group.dim();
        GroupElement {
            group,
            matrix: MatN::identity(n, n),
        }
    }

    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.group != other.group {
            return Err(Error::GroupMismatch {
                expected: self.group,
                got: other.group,
            });
        }
        Ok(GroupElement {
            group: self.group,
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn inverse(&self) -> Result<GroupElement> {
        Ok(GroupElement {
            group: self.group,
            matrix: mat_inverse(&self.matrix)?,
        })
    }

    /// Rotation block of the element (2×2 for the planar groups).
    pub fn rotation(&self) -> MatN {
        let k = match self.group.base() {
            GroupId::So2 | GroupId::Se2 => 2,
            _ => 3,
        };
        self.matrix
            .view((0, 0), (k.min(self.matrix.nrows()), k.min(self.matrix.ncols())))
            .into_owned()
    }
}

/// Coefficients `(a₀, a₁, a₂)` of the Sim(3) translation block
/// `γ_ℓ(φ^, ρ, −λ) = (a₀1 + a₁φ^ + a₂φ^²)ρ`.
pub fn sim3_translation_coeffs(ell: usize, phi: f64, lambda: f64) -> [f64; 3] {
    if ell == 0 {
        return coeffs::m(phi, lambda);
    }
    let x = -lambda;
    let p2 = phi * phi;
    let mut a1 = 0.0;
    let mut a2 = 0.0;
    let mut w = 1.0;
    for k in 0..60 {
        let t1 = w * coeff_gamma_scalar(ell + 2 * k + 2, x);
        let t2 = w * coeff_gamma_scalar(ell + 2 * k + 3, x);
        a1 += t1;
        a2 += t2;
        if t1.abs() <= 1e-17 * a1.abs() && t2.abs() <= 1e-17 * a2.abs() {
            break;
        }
        w *= -p2;
    }
    [coeff_gamma_scalar(ell + 1, x), a1, a2]
}

fn sim3_m_block(ell: usize, phi: &Vec3, lambda: f64) -> Mat3 {
    let a = sim3_translation_coeffs(ell, phi.norm(), lambda);
    let p = skew3(phi);
    Mat3::identity() * a[0] + p * a[1] + p * p * a[2]
}

/// `Γ_ℓ(ξ^)`, assembled from rotation-level kernels.
pub fn gamma_group(ell: usize, xi: &TangentVector) -> MatN {
    let n = xi.group().dim();
    let mut g = MatN::zeros(n, n);
    let d = inv_factorial(ell);
    match *xi {
        TangentVector::So2 { phi } => set_block(&mut g, 0, 0, &gamma_so2(ell, phi)),
        TangentVector::Se2 { rho, phi } => {
            set_block(&mut g, 0, 0, &gamma_so2(ell, phi));
            set_block(&mut g, 0, 2, &(gamma_so2(ell + 1, phi) * rho));
            g[(2, 2)] = d;
        }
        TangentVector::So3 { phi } => set_block(&mut g, 0, 0, &gamma_so3(ell, &phi)),
        TangentVector::Se3 { rho, phi } => {
            set_block(&mut g, 0, 0, &gamma_so3(ell, &phi));
            set_block(&mut g, 0, 3, &(gamma_so3(ell + 1, &phi) * rho));
            g[(3, 3)] = d;
        }
        TangentVector::Se23 { rho, nu, phi } => {
            let g1 = gamma_so3(ell + 1, &phi);
            set_block(&mut g, 0, 0, &gamma_so3(ell, &phi));
            set_block(&mut g, 0, 3, &(g1 * nu));
            set_block(&mut g, 0, 4, &(g1 * rho));
            g[(3, 3)] = d;
            g[(4, 4)] = d;
        }
        TangentVector::SGal3 { rho, nu, phi, tau } => {
            let g1 = gamma_so3(ell + 1, &phi);
            let g2 = gamma_so3(ell + 2, &phi);
            set_block(&mut g, 0, 0, &gamma_so3(ell, &phi));
            set_block(&mut g, 0, 3, &(g1 * nu));
            set_block(&mut g, 0, 4, &(g1 * rho + g2 * nu * tau));
            g[(3, 3)] = d;
            g[(4, 4)] = d;
            g[(3, 4)] = tau * inv_factorial(ell + 1);
        }
        TangentVector::Sim3 { rho, phi, lambda } => {
            set_block(&mut g, 0, 0, &gamma_so3(ell, &phi));
            set_block(&mut g, 0, 3, &(sim3_m_block(ell, &phi, lambda) * rho));
            g[(3, 3)] = coeff_gamma_scalar(ell, -lambda);
        }
    }
    g
}

fn sim3_adjoint0(rho: &Vec3, phi: &Vec3, lambda: f64) -> MatN {
    let s = lambda.exp();
    let c = gamma_so3(0, phi);
    let r = sim3_m_block(0, phi, lambda) * rho;
    let mut a = MatN::zeros(7, 7);
    set_block(&mut a, 0, 0, &(c * s));
    set_block(&mut a, 0, 3, &(skew3(&r) * c * s));
    set_block(&mut a, 0, 6, &(-r * s));
    set_block(&mut a, 3, 3, &c);
    a[(6, 6)] = 1.0;
    a
}

/// `Γ_ℓ(ξ^⋏)`. For SO(2) this is the 1×1 matrix `[1/ℓ!]`. The Sim(3) blocks
/// for `ℓ ≥ 1` come from one weighted quadrature of the `ℓ = 0` closed form.
pub fn gamma_adjoint(ell: usize, xi: &TangentVector) -> MatN {
    let n = xi.group().adjoint_dim();
    let mut a = MatN::zeros(n, n);
    let d = inv_factorial(ell);
    match *xi {
        TangentVector::So2 { .. } => a[(0, 0)] = d,
        TangentVector::Se2 { rho, phi } => {
            set_block(&mut a, 0, 0, &gamma_so2(ell, phi));
            set_block(&mut a, 0, 2, &(-(canonical_skew() * gamma_so2(ell + 1, phi) * rho)));
            a[(2, 2)] = d;
        }
        TangentVector::So3 { phi } => set_block(&mut a, 0, 0, &gamma_so3(ell, &phi)),
        TangentVector::Se3 { rho, phi } => {
            let g = gamma_so3(ell, &phi);
            set_block(&mut a, 0, 0, &g);
            set_block(&mut a, 0, 3, &gamma3_so3(ell, &phi, &rho));
            set_block(&mut a, 3, 3, &g);
        }
        TangentVector::Se23 { rho, nu, phi } => {
            let g = gamma_so3(ell, &phi);
            for k in 0..3 {
                set_block(&mut a, 3 * k, 3 * k, &g);
            }
            set_block(&mut a, 0, 6, &gamma3_so3(ell, &phi, &rho));
            set_block(&mut a, 3, 6, &gamma3_so3(ell, &phi, &nu));
        }
        TangentVector::SGal3 { rho, nu, phi, tau } => {
            let g = gamma_so3(ell, &phi);
            for k in 0..3 {
                set_block(&mut a, 3 * k, 3 * k, &g);
            }
            set_block(&mut a, 0, 3, &(-gamma_phi_tau(ell, &phi, tau)));
            set_block(
                &mut a,
                0,
                6,
                &(gamma3_so3(ell, &phi, &rho) - gamma4_so3(ell, &phi, &nu, tau)),
            );
            set_block(&mut a, 0, 9, &(gamma_so3(ell + 1, &phi) * nu));
            set_block(&mut a, 3, 6, &gamma3_so3(ell, &phi, &nu));
            a[(9, 9)] = d;
        }
        TangentVector::Sim3 { rho, phi, lambda } => {
            if ell == 0 {
                return sim3_adjoint0(&rho, &phi, lambda);
            }
            return lift_kernel(|s| sim3_adjoint0(&(rho * s), &(phi * s), lambda * s), 0, ell);
        }
    }
    a
}

/// The group exponential `Γ₀(ξ^)`.
pub fn exp_group(xi: &TangentVector) -> GroupElement {
    GroupElement {
        group: xi.group(),
        matrix: gamma_group(0, xi),
    }
}

/// The adjoint `𝒯(ξ) = Γ₀(ξ^⋏)`.
pub fn adjoint_of(xi: &TangentVector) -> GroupElement {
    GroupElement {
        group: xi.group().adjoint(),
        matrix: gamma_adjoint(0, xi),
    }
}

/// The left Jacobian `𝒥(ξ) = Γ₁(ξ^⋏)`. Sim(3) has no closed form here; use
/// [`jacobian_by_quadrature`].
pub fn left_jacobian(xi: &TangentVector) -> Result<MatN> {
    match xi.group() {
        GroupId::Sim3 => Err(Error::NotImplementedClosedForm { group: GroupId::Sim3 }),
        _ => Ok(gamma_adjoint(1, xi)),
    }
}

/// `𝒥(ξ) = ∫₀¹ 𝒯(αξ) dα` by Gauss–Legendre quadrature.
pub fn jacobian_by_quadrature(xi: &TangentVector) -> MatN {
    integrate(|a| adjoint_of(&xi.scaled(a)).matrix)
}

/// Left Jacobian by whichever path exists: closed form, else quadrature.
pub fn jacobian_any(xi: &TangentVector) -> MatN {
    left_jacobian(xi).unwrap_or_else(|_| jacobian_by_quadrature(xi))
}

fn require_se3(xi: &TangentVector) -> Result<(MatN, f64)> {
    match xi {
        TangentVector::Se3 { phi, .. } => Ok((curlywedge(xi), phi.norm())),
        other => Err(Error::GroupMismatch {
            expected: GroupId::Se3,
            got: other.group(),
        }),
    }
}

fn monomial(coeffs: &[f64], x: &MatN) -> MatN {
    let n = x.nrows();
    let mut acc = MatN::zeros(n, n);
    let mut power = MatN::identity(n, n);
    for &c in coeffs {
        acc += &power * c;
        power = &power * x;
    }
    acc
}

/// `Σ_{i=0}^4 t_i(φ)(ξ^⋏)ⁱ`, the SE(3) adjoint as a polynomial in `ξ^⋏`.
pub fn adjoint_se3_monomial(xi: &TangentVector) -> Result<MatN> {
    let (x, angle) = require_se3(xi)?;
    Ok(monomial(&coeffs::t(angle), &x))
}

/// The SE(3) left Jacobian as a polynomial in `ξ^⋏`.
pub fn jacobian_se3_monomial(xi: &TangentVector) -> Result<MatN> {
    let (x, angle) = require_se3(xi)?;
    Ok(monomial(&coeffs::jt(angle), &x))
}

/// `‖p(X)‖∞` for the algebra's minimal polynomial `p`:
/// SO(2) `X² + φ²`, SO(3) `X³ + φ²X`, SE(3) `X⁴ + φ²X²`,
/// Ad(SE(3)) `X⁵ + 2φ²X³ + φ⁴X`.
pub fn minimal_poly_residual(algebra: GroupId, xi: &TangentVector) -> Result<f64> {
    if !matches!(algebra, GroupId::So2 | GroupId::So3 | GroupId::Se3 | GroupId::AdSe3) {
        return Err(Error::UnsupportedAlgebra(algebra));
    }
    if xi.group() != algebra.base() {
        return Err(Error::GroupMismatch {
            expected: algebra.base(),
            got: xi.group(),
        });
    }
    let p2 = xi.angle().powi(2);
    let x = if algebra.is_adjoint() {
        curlywedge(xi)
    } else {
        wedge(xi)
    };
    let n = x.nrows();
    let r = match algebra {
        GroupId::So2 => mat_pow(&x, 2) + MatN::identity(n, n) * p2,
        GroupId::So3 => mat_pow(&x, 3) + &x * p2,
        GroupId::Se3 => mat_pow(&x, 4) + mat_pow(&x, 2) * p2,
        _ => mat_pow(&x, 5) + mat_pow(&x, 3) * (2.0 * p2) + &x * (p2 * p2),
    };
    Ok(max_abs(&r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{expm_generic, series_eval, SeriesSpec};
    use std::f64::consts::LN_2;

    fn tv(group: GroupId, c: &[f64]) -> TangentVector {
        TangentVector::new(group, c).unwrap()
    }

    fn generic(group: GroupId) -> TangentVector {
        let c: Vec<f64> = (0..group.tangent_dim())
            .map(|i| 0.7 * ((i as f64) * 1.3 + 0.4).sin())
            .collect();
        tv(group, &c)
    }

    #[test]
    fn identities_at_zero() {
        for g in GroupId::BASE {
            let z = TangentVector::zero(g).unwrap();
            assert_eq!(exp_group(&z).matrix, MatN::identity(g.dim(), g.dim()));
            let ad = adjoint_of(&z).matrix;
            assert_eq!(ad, MatN::identity(ad.nrows(), ad.nrows()));
        }
    }

    #[test]
    fn sgal3_and_sim3_examples() {
        let x = tv(GroupId::SGal3, &[0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 2.0]);
        let t = exp_group(&x).matrix;
        assert!((t[(0, 4)] - 1.0).abs() < 1e-15);
        assert_eq!(t[(3, 4)], 2.0);
        let s = tv(GroupId::Sim3, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, LN_2]);
        let t = exp_group(&s).matrix;
        assert!((t[(0, 3)] - 0.5 / LN_2).abs() < 1e-14);
        assert!((t[(3, 3)] - 0.5).abs() < 1e-15);
        let a = tv(GroupId::SGal3, &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 3.0]);
        let ad = adjoint_of(&a).matrix;
        assert_eq!(ad.view((0, 3), (3, 3)).into_owned(), MatN::identity(3, 3) * -3.0);
    }

    #[test]
    fn matches_expm_for_every_representation() {
        for g in GroupId::BASE {
            let xi = generic(g);
            let e = expm_generic(&wedge(&xi));
            assert!(max_abs(&(exp_group(&xi).matrix - e)) < 1e-13, "{g}");
            let e = expm_generic(&curlywedge(&xi));
            assert!(max_abs(&(adjoint_of(&xi).matrix - e)) < 1e-13, "Ad {g}");
        }
    }

    #[test]
    fn higher_index_blocks_match_series() {
        for g in GroupId::BASE {
            let xi = generic(g);
            for ell in 0..4 {
                let s = series_eval(&SeriesSpec::gamma(ell, wedge(&xi))).unwrap();
                assert!(max_abs(&(gamma_group(ell, &xi) - s)) < 1e-13, "{g} ell {ell}");
                let s = series_eval(&SeriesSpec::gamma(ell, curlywedge(&xi))).unwrap();
                let tol = if g == GroupId::Sim3 && ell > 0 { 1e-11 } else { 1e-12 };
                assert!(max_abs(&(gamma_adjoint(ell, &xi) - s)) < tol, "Ad {g} ell {ell}");
            }
        }
    }

    #[test]
    fn jacobian_paths_agree() {
        for g in GroupId::BASE {
            let xi = generic(g);
            let q = jacobian_by_quadrature(&xi);
            match left_jacobian(&xi) {
                Ok(j) => assert!(max_abs(&(j - &q)) < 1e-12, "{g}"),
                Err(e) => assert_eq!(e, Error::NotImplementedClosedForm { group: GroupId::Sim3 }),
            }
        }
        let j = left_jacobian(&tv(GroupId::So2, &[1.3])).unwrap();
        assert_eq!(j, MatN::identity(1, 1));
    }

    #[test]
    fn sim3_quadrature_jacobian_pure_scale() {
        let lambda = 0.8_f64;
        let j = jacobian_by_quadrature(&tv(GroupId::Sim3, &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, lambda]));
        let expected = lambda.exp_m1() / lambda;
        for i in 0..3 {
            assert!((j[(i, i)] - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn se3_monomials() {
        let xi = generic(GroupId::Se3);
        let a = adjoint_se3_monomial(&xi).unwrap();
        assert!(max_abs(&(a - adjoint_of(&xi).matrix)) < 1e-13);
        let j = jacobian_se3_monomial(&xi).unwrap();
        assert!(max_abs(&(j - left_jacobian(&xi).unwrap())) < 1e-13);
        let bad = generic(GroupId::So3);
        assert!(matches!(adjoint_se3_monomial(&bad), Err(Error::GroupMismatch { .. })));
    }

    #[test]
    fn minimal_polynomials() {
        assert!(minimal_poly_residual(GroupId::So3, &generic(GroupId::So3)).unwrap() < 1e-14);
        assert!(minimal_poly_residual(GroupId::So2, &generic(GroupId::So2)).unwrap() < 1e-15);
        assert!(minimal_poly_residual(GroupId::Se3, &generic(GroupId::Se3)).unwrap() < 1e-13);
        assert!(minimal_poly_residual(GroupId::AdSe3, &generic(GroupId::Se3)).unwrap() < 1e-13);
        assert_eq!(
            minimal_poly_residual(GroupId::AdSe3, &TangentVector::zero(GroupId::Se3).unwrap()),
            Ok(0.0)
        );
        assert!(matches!(
            minimal_poly_residual(GroupId::Sim3, &generic(GroupId::Sim3)),
            Err(Error::UnsupportedAlgebra(GroupId::Sim3))
        ));
        assert!(matches!(
            minimal_poly_residual(GroupId::So3, &generic(GroupId::Se3)),
            Err(Error::GroupMismatch { .. })
        ));
    }

    #[test]
    fn inverse_and_compose() {
        let t = exp_group(&generic(GroupId::Se23));
        let i = t.compose(&t.inverse().unwrap()).unwrap();
        assert!(max_abs(&(i.matrix - MatN::identity(5, 5))) < 1e-14);
        let other = GroupElement::identity(GroupId::Se3);
        assert!(matches!(t.compose(&other), Err(Error::GroupMismatch { .. })));
    }
}
