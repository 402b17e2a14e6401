//! Exact beta integrals and the rotation-level product expansions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{mat3_pow, skew3, Mat3, Vec3};

pub type Rational = BigRational;

/// Largest `m + n` accepted by the exact integrals.
pub const MAX_EXACT_ORDER: usize = 40;

/// Largest power accepted by [`binomial_expand`].
pub const MAX_BINOMIAL_POWER: usize = 12;

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn ratio(num: BigInt, den: BigInt) -> Rational {
    Rational::new(num, den)
}

fn guard(m: usize, n: usize) -> Result<()> {
    if m + n > MAX_EXACT_ORDER {
        return Err(Error::Overflow {
            sum: m + n,
            bound: MAX_EXACT_ORDER,
        });
    }
    Ok(())
}

/// `∫₀¹ αᵐ(1−α)ⁿ dα = m! n!/(m+n+1)!`.
pub fn beta_integral(m: usize, n: usize) -> Result<Rational> {
    guard(m, n)?;
    Ok(ratio(factorial(m) * factorial(n), factorial(m + n + 1)))
}

/// `∫₀¹ α ∫₀¹ (αβ)ᵐ(1−αβ)ⁿ dβ dα = m!n!/(m+n+1)! − (m+1)!n!/(m+n+2)!`.
pub fn double_beta_integral(m: usize, n: usize) -> Result<Rational> {
    guard(m, n)?;
    let first = ratio(factorial(m) * factorial(n), factorial(m + n + 1));
    let second = ratio(factorial(m + 1) * factorial(n), factorial(m + n + 2));
    Ok(first - second)
}

/// `∫₀¹ αᵐ(1−α)ⁿ dα` by expanding the polynomial and integrating term by term:
/// `Σ_k C(n,k)(−1)ᵏ/(m+k+1)`. Shares nothing with [`beta_integral`].
pub fn beta_by_expansion(m: usize, n: usize) -> Rational {
    let mut acc = Rational::zero();
    let mut binom = BigInt::one();
    for k in 0..=n {
        let term = ratio(binom.clone(), BigInt::from(m + k + 1));
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
        binom = binom * BigInt::from(n - k) / BigInt::from(k + 1);
    }
    acc
}

/// Converts an exact value to the nearest double.
pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Grouped right-hand side of the expansion of
/// `((a₀1 + a₁φ^ + a₂φ^²)ρ)^ (b₀1 + b₁φ^ + b₂φ^²)` on the basis
/// `ρ^, φ^ρ^, ρ^φ^, φ^²ρ^, ρ^φ^², φ^ρ^φ^, ½(φ^²ρ^φ^ + φ^ρ^φ^²)`.
pub fn product_expand(a: [f64; 3], b: [f64; 3], phi: &Vec3, rho: &Vec3) -> Mat3 {
    let p2 = phi.norm_squared();
    let p = skew3(phi);
    let r = skew3(rho);
    let pr = p * r;
    let rp = r * p;
    let pp = p * p;
    let prp = pr * p;
    r * (a[0] * b[0])
        + pr * (a[1] * b[0])
        + rp * (a[0] * b[1] - a[1] * b[0] + p2 * (a[1] * b[2] - a[2] * b[1]))
        + pp * r * (a[2] * b[0])
        + rp * p * (a[0] * b[2] - a[1] * b[1] + a[2] * b[0] - p2 * a[2] * b[2])
        + prp * (a[1] * b[1] - 2.0 * a[2] * b[0] + p2 * a[2] * b[2])
        + (pp * r * p + prp * p) * (0.5 * (a[1] * b[2] - a[2] * b[1]))
}

/// The same product evaluated directly.
pub fn product_direct(a: [f64; 3], b: [f64; 3], phi: &Vec3, rho: &Vec3) -> Mat3 {
    let p = skew3(phi);
    let pa = Mat3::identity() * a[0] + p * a[1] + p * p * a[2];
    let pb = Mat3::identity() * b[0] + p * b[1] + p * p * b[2];
    skew3(&(pa * rho)) * pb
}

/// `Σ_k (−1)ᵏ C(m,k) φ^^{m−k} ρ^ φ^^k`, which equals `(φ^ᵐ ρ)^`.
pub fn binomial_expand(m: usize, phi: &Vec3, rho: &Vec3) -> Result<Mat3> {
    if m > MAX_BINOMIAL_POWER {
        return Err(Error::IndexOutOfRange {
            what: "binomial power",
            index: m,
            max: MAX_BINOMIAL_POWER,
        });
    }
    let p = skew3(phi);
    let r = skew3(rho);
    let mut acc = Mat3::zeros();
    let mut binom = 1.0;
    for k in 0..=m {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc += mat3_pow(&p, m - k) * r * mat3_pow(&p, k) * (sign * binom);
        binom = binom * (m - k) as f64 / (k + 1) as f64;
    }
    Ok(acc)
}

/// Sum of the absolute term magnitudes in [`binomial_expand`]; the natural
/// scale for its rounding error.
pub fn binomial_scale(m: usize, phi: &Vec3, rho: &Vec3) -> f64 {
    let mut binom = 1.0;
    let mut total = 0.0;
    for k in 0..=m {
        total += binom * phi.norm().powi(m as i32) * rho.norm();
        binom = binom * (m - k) as f64 / (k + 1) as f64;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs;
    use crate::linalg::max_abs;
    use crate::oracle::integrate_2d;
    use crate::so3::gamma3_so3;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn beta_examples() {
        assert_eq!(beta_integral(0, 0).unwrap(), q(1, 1));
        assert_eq!(beta_integral(1, 1).unwrap(), q(1, 6));
        assert_eq!(beta_integral(2, 3).unwrap(), q(1, 60));
        assert_eq!(double_beta_integral(0, 0).unwrap(), q(1, 2));
        assert_eq!(double_beta_integral(1, 0).unwrap(), q(1, 6));
    }

    #[test]
    fn beta_matches_expansion() {
        for m in 0..=12 {
            for n in 0..=(12 - m) {
                assert_eq!(beta_integral(m, n).unwrap(), beta_by_expansion(m, n), "({m},{n})");
            }
        }
    }

    #[test]
    fn double_beta_matches_quadrature() {
        let exact = to_f64(&double_beta_integral(2, 2).unwrap());
        let v = integrate_2d(|a, b| a * (a * b).powi(2) * (1.0 - a * b).powi(2));
        assert!((exact - v).abs() < 1e-15);
    }

    #[test]
    fn overflow_guard() {
        assert_eq!(beta_integral(30, 11), Err(Error::Overflow { sum: 41, bound: 40 }));
        assert!(double_beta_integral(20, 20).is_ok());
        assert!(matches!(
            binomial_expand(13, &Vec3::zeros(), &Vec3::zeros()),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn product_lemma() {
        let phi = Vec3::new(0.8, -0.3, 1.4);
        let rho = Vec3::new(-1.0, 0.5, 2.0);
        let (a, b) = ([0.3, -1.2, 0.7], [1.5, 0.2, -0.9]);
        assert!(max_abs(&(product_expand(a, b, &phi, &rho) - product_direct(a, b, &phi, &rho))) < 1e-14);
        let id = [1.0, 0.0, 0.0];
        assert_eq!(product_expand(id, id, &phi, &rho), skew3(&rho));
        let angle = phi.norm();
        let g = product_expand(coeffs::j(angle), coeffs::c(angle), &phi, &rho);
        assert!(max_abs(&(g - gamma3_so3(0, &phi, &rho))) < 1e-14);
    }

    #[test]
    fn binomial_examples() {
        let phi = Vec3::new(0.4, 0.9, -0.2);
        let rho = Vec3::new(1.0, -0.5, 0.3);
        assert_eq!(binomial_expand(0, &phi, &rho).unwrap(), skew3(&rho));
        let p = skew3(&phi);
        let r = skew3(&rho);
        assert!(max_abs(&(binomial_expand(1, &phi, &rho).unwrap() - (p * r - r * p))) < 1e-15);
        let direct = skew3(&(mat3_pow(&p, 3) * rho));
        assert!(max_abs(&(binomial_expand(3, &phi, &rho).unwrap() - direct)) < 1e-14);
    }
}
