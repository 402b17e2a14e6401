//! Scalar trigonometric coefficient families.
//!
//! Every family is an even function of the rotation angle. Closed forms are
//! used for `φ ≥ SERIES_SWITCH`; below that the defining power series in `φ²`
//! is summed to convergence, which avoids the cancellation that the closed
//! forms suffer near the origin (some divide by `φ⁶`).

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Angle below which coefficients are evaluated from their power series.
pub const SERIES_SWITCH: f64 = 1.0;

const SERIES_MAX_TERMS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoeffFamily {
    /// Rotation matrix `C = Γ₀(φ^)`.
    C,
    /// Left Jacobian `J = Γ₁(φ^)`.
    J,
    /// `N = Γ₂(φ^)`.
    N,
    /// Monomial expansion of the SE(3) adjoint.
    T,
    /// Monomial expansion of the SE(3) left Jacobian.
    Jt,
    /// Sim(3) translation map; takes the scale argument λ.
    M,
    /// `Γ₁(φ^, τ)`.
    G12,
    /// `Γ₁(φ^, ν^, φ^, τ)`.
    G13,
}

impl CoeffFamily {
    pub const ALL: [CoeffFamily; 8] = [
        CoeffFamily::C,
        CoeffFamily::J,
        CoeffFamily::N,
        CoeffFamily::T,
        CoeffFamily::Jt,
        CoeffFamily::M,
        CoeffFamily::G12,
        CoeffFamily::G13,
    ];

    pub fn max_index(self) -> usize {
        match self {
            CoeffFamily::C | CoeffFamily::J | CoeffFamily::N | CoeffFamily::M | CoeffFamily::G12 => 2,
            CoeffFamily::T | CoeffFamily::Jt => 4,
            CoeffFamily::G13 => 6,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CoeffFamily::C => "c",
            CoeffFamily::J => "j",
            CoeffFamily::N => "n",
            CoeffFamily::T => "t",
            CoeffFamily::Jt => "jt",
            CoeffFamily::M => "m",
            CoeffFamily::G12 => "g12",
            CoeffFamily::G13 => "g13",
        }
    }

    pub fn needs_lambda(self) -> bool {
        self == CoeffFamily::M
    }
}

impl fmt::Display for CoeffFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CoeffFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        CoeffFamily::ALL
            .iter()
            .copied()
            .find(|f| f.name() == key)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

/// `1/n!` in double precision; zero once `n!` overflows.
pub fn inv_factorial(n: usize) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut fact = 1.0_f64;
        (0..=170)
            .map(|k| {
                if k > 0 {
                    fact *= k as f64;
                }
                1.0 / fact
            })
            .collect()
    });
    table.get(n).copied().unwrap_or(0.0)
}

/// Signed term `(-1)^k / (p + 2k)!` of the rotation series.
fn s_term(p: usize, k: usize) -> f64 {
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * inv_factorial(p + 2 * k)
}

/// Sums `Σ_k a(k) x^k`, stopping after two consecutive negligible terms.
fn power_series(x: f64, a: impl Fn(usize) -> f64) -> f64 {
    let mut sum = 0.0;
    let mut xk = 1.0;
    let mut quiet = 0;
    for k in 0..SERIES_MAX_TERMS {
        let term = a(k) * xk;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() || term == 0.0 {
            quiet += 1;
            if quiet == 2 {
                break;
            }
        } else {
            quiet = 0;
        }
        xk *= x;
    }
    sum
}

/// The alternating rotation series `S_p(φ) = Σ_k (-1)^k φ^{2k} / (p+2k)!`.
///
/// `Γ_ℓ(φ^) = (1/ℓ!) 1 + S_{ℓ+1}(φ) φ^ + S_{ℓ+2}(φ) φ^²` for every ℓ, and the
/// planar kernels use `S_ℓ` and `S_{ℓ+1}` directly.
pub fn rotation_series(p: usize, phi: f64) -> f64 {
    let x = phi * phi;
    let mut term = inv_factorial(p);
    let mut sum = term;
    let mut k = 0usize;
    while k < 400 {
        let a = (p + 2 * k + 1) as f64;
        let b = (p + 2 * k + 2) as f64;
        term *= -x / (a * b);
        sum += term;
        k += 1;
        if term.abs() <= 1e-17 * sum.abs() || term == 0.0 {
            break;
        }
    }
    sum
}

/// Scalar building block `γ_ℓ(x) = Σ_m x^m / (ℓ+m)!`.
///
/// For `x < 0` the series is summed in its Kummer-transformed form
/// `e^x/ℓ! Σ_n ℓ/(ℓ+n) |x|^n/n!`, whose terms are all positive.
pub fn coeff_gamma_scalar(ell: usize, x: f64) -> f64 {
    if ell == 0 {
        return x.exp();
    }
    if x >= 0.0 {
        let mut term = inv_factorial(ell);
        let mut sum = term;
        for m in 0..2000 {
            term *= x / (ell + m + 1) as f64;
            sum += term;
            if term <= 1e-17 * sum {
                break;
            }
        }
        sum
    } else {
        let z = -x;
        let l = ell as f64;
        let mut a = 1.0;
        let mut sum = 1.0;
        for n in 1..2000 {
            a *= z / n as f64;
            let term = a * l / (l + n as f64);
            sum += term;
            if term <= 1e-17 * sum {
                break;
            }
        }
        x.exp() * inv_factorial(ell) * sum
    }
}

fn check(family: CoeffFamily, index: usize, phi: f64, lambda: Option<f64>) -> Result<(f64, f64)> {
    if index > family.max_index() {
        return Err(Error::IndexOutOfRange {
            what: family.name(),
            index,
            max: family.max_index(),
        });
    }
    if !phi.is_finite() {
        return Err(Error::InvalidArgument(format!("angle must be finite, got {phi}")));
    }
    match (family.needs_lambda(), lambda) {
        (true, Some(l)) if l.is_finite() => Ok((phi.abs(), l)),
        (true, Some(l)) => Err(Error::InvalidArgument(format!("lambda must be finite, got {l}"))),
        (true, None) => Err(Error::InvalidArgument("family m requires lambda".into())),
        (false, Some(_)) => Err(Error::InvalidArgument(format!("family {family} does not take lambda"))),
        (false, None) => Ok((phi.abs(), 0.0)),
    }
}

/// Evaluates one coefficient, switching to the series below [`SERIES_SWITCH`].
pub fn coeff(family: CoeffFamily, index: usize, phi: f64, lambda: Option<f64>) -> Result<f64> {
    let (phi, _) = check(family, index, phi, lambda)?;
    if phi < SERIES_SWITCH {
        coeff_series(family, index, phi, lambda)
    } else {
        coeff_closed(family, index, phi, lambda)
    }
}

/// Trigonometric closed form. Singular (NaN or inaccurate) near `φ = 0`.
pub fn coeff_closed(family: CoeffFamily, index: usize, phi: f64, lambda: Option<f64>) -> Result<f64> {
    let (p, l) = check(family, index, phi, lambda)?;
    let (s, c) = p.sin_cos();
    let p2 = p * p;
    let p3 = p2 * p;
    let p4 = p2 * p2;
    let p5 = p4 * p;
    let p6 = p3 * p3;
    Ok(match (family, index) {
        (CoeffFamily::C, 0) | (CoeffFamily::J, 0) => 1.0,
        (CoeffFamily::C, 1) => s / p,
        (CoeffFamily::C, 2) | (CoeffFamily::J, 1) => (1.0 - c) / p2,
        (CoeffFamily::J, 2) | (CoeffFamily::N, 1) => (p - s) / p3,
        (CoeffFamily::N, 0) => 0.5,
        (CoeffFamily::N, 2) => (p2 + 2.0 * c - 2.0) / (2.0 * p4),
        (CoeffFamily::T, 0) | (CoeffFamily::Jt, 0) => 1.0,
        (CoeffFamily::T, 1) => (3.0 * s - p * c) / (2.0 * p),
        (CoeffFamily::T, 2) | (CoeffFamily::Jt, 1) => (4.0 - p * s - 4.0 * c) / (2.0 * p2),
        (CoeffFamily::T, 3) => (s - p * c) / (2.0 * p3),
        (CoeffFamily::T, 4) | (CoeffFamily::Jt, 3) => (2.0 - p * s - 2.0 * c) / (2.0 * p4),
        (CoeffFamily::Jt, 2) => (4.0 * p - 5.0 * s + p * c) / (2.0 * p3),
        (CoeffFamily::Jt, 4) => (2.0 * p - 3.0 * s + p * c) / (2.0 * p5),
        (CoeffFamily::G12, 0) => 0.5,
        (CoeffFamily::G12, 1) => (s - p * c) / p3,
        (CoeffFamily::G12, 2) => (p2 - 2.0 * p * s - 2.0 * c + 2.0) / (2.0 * p4),
        (CoeffFamily::G13, 0) => 1.0 / 6.0,
        (CoeffFamily::G13, 1) => (2.0 - p * s - 2.0 * c) / p4,
        (CoeffFamily::G13, 2) => (p2 + 2.0 * c - 2.0) / (2.0 * p4),
        (CoeffFamily::G13, 3) => (p3 + 6.0 * p + 6.0 * p * c - 12.0 * s) / (6.0 * p5),
        (CoeffFamily::G13, 4) => (12.0 * s - 12.0 * p * c - 3.0 * p2 * s - p3) / (6.0 * p5),
        (CoeffFamily::G13, 5) => (p3 - 6.0 * p + 6.0 * s) / (6.0 * p5),
        (CoeffFamily::G13, 6) => (4.0 + p2 + p2 * c - 4.0 * p * s - 4.0 * c) / (4.0 * p6),
        (CoeffFamily::M, i) => {
            let m0 = if l == 0.0 { 1.0 } else { -(-l).exp_m1() / l };
            let d = l * l + p2;
            match i {
                0 => m0,
                1 => (p * (-l).exp() + l * s - p * c) / (p * d),
                _ => (l - p * s - l * c) / (p2 * d) + m0 / d,
            }
        }
        _ => unreachable!("index validated against max_index"),
    })
}

/// Coefficient evaluated from its defining power series in `φ²`.
pub fn coeff_series(family: CoeffFamily, index: usize, phi: f64, lambda: Option<f64>) -> Result<f64> {
    let (p, l) = check(family, index, phi, lambda)?;
    let x = p * p;
    let alt = |k: usize| if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let kf = |k: usize| k as f64;
    Ok(match (family, index) {
        (CoeffFamily::C, 0) | (CoeffFamily::J, 0) | (CoeffFamily::T, 0) | (CoeffFamily::Jt, 0) => 1.0,
        (CoeffFamily::N, 0) | (CoeffFamily::G12, 0) => 0.5,
        (CoeffFamily::G13, 0) => 1.0 / 6.0,
        (CoeffFamily::C, i) => power_series(x, |k| s_term(i, k)),
        (CoeffFamily::J, i) => power_series(x, |k| s_term(i + 1, k)),
        (CoeffFamily::N, i) => power_series(x, |k| s_term(i + 2, k)),
        (CoeffFamily::T, i) => power_series(x, |k| t_term(i, k)),
        (CoeffFamily::Jt, i) => power_series(x, |k| t_term(i, k) / (2 * k + i + 1) as f64),
        (CoeffFamily::G12, 1) => power_series(x, |k| s_term(1, k) / (2.0 * kf(k) + 3.0)),
        (CoeffFamily::G12, 2) => power_series(x, |k| s_term(2, k) / (2.0 * kf(k) + 4.0)),
        (CoeffFamily::G13, 1) => power_series(x, |k| (s_term(2, k) - s_term(3, k)) / (2.0 * kf(k) + 4.0)),
        (CoeffFamily::G13, 2) => power_series(x, |k| s_term(3, k) / (2.0 * kf(k) + 4.0)),
        (CoeffFamily::G13, 3) => power_series(x, |k| (s_term(3, k) - s_term(4, k)) / (2.0 * kf(k) + 5.0)),
        (CoeffFamily::G13, 4) => power_series(x, |k| (0.5 * s_term(2, k) - s_term(3, k)) / (2.0 * kf(k) + 5.0)),
        (CoeffFamily::G13, 5) => power_series(x, |k| s_term(4, k) / (2.0 * kf(k) + 5.0)),
        (CoeffFamily::G13, 6) => power_series(x, |k| 0.5 * (0.5 * s_term(3, k) - s_term(4, k)) / (2.0 * kf(k) + 6.0)),
        (CoeffFamily::M, 0) => coeff_gamma_scalar(1, -l),
        (CoeffFamily::M, i) => power_series(x, |k| alt(k) * coeff_gamma_scalar(2 * k + i + 1, -l)),
        _ => unreachable!("index validated against max_index"),
    })
}

/// Coefficient of `φ^{2k}` in `t_i`.
fn t_term(i: usize, k: usize) -> f64 {
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let kf = k as f64;
    match i {
        0 => {
            if k == 0 {
                1.0
            } else {
                0.0
            }
        }
        1 => sign * (1.0 - kf) * inv_factorial(2 * k + 1),
        2 => sign * (1.0 - kf) * inv_factorial(2 * k + 2),
        3 => sign * (kf + 1.0) * inv_factorial(2 * k + 3),
        _ => sign * (kf + 1.0) * inv_factorial(2 * k + 4),
    }
}

fn family_array<const K: usize>(family: CoeffFamily, phi: f64, lambda: Option<f64>) -> [f64; K] {
    std::array::from_fn(|i| coeff(family, i, phi, lambda).expect("valid index and finite angle"))
}

/// `(c₀, c₁, c₂)` with `C = c₀1 + c₁φ^ + c₂φ^²`.
pub fn c(phi: f64) -> [f64; 3] {
    family_array(CoeffFamily::C, phi, None)
}

/// `(j₀, j₁, j₂)` with `J = j₀1 + j₁φ^ + j₂φ^²`.
pub fn j(phi: f64) -> [f64; 3] {
    family_array(CoeffFamily::J, phi, None)
}

/// `(n₀, n₁, n₂)` with `N = n₀1 + n₁φ^ + n₂φ^²`.
pub fn n(phi: f64) -> [f64; 3] {
    family_array(CoeffFamily::N, phi, None)
}

pub fn t(phi: f64) -> [f64; 5] {
    family_array(CoeffFamily::T, phi, None)
}

pub fn jt(phi: f64) -> [f64; 5] {
    family_array(CoeffFamily::Jt, phi, None)
}

pub fn g12(phi: f64) -> [f64; 3] {
    family_array(CoeffFamily::G12, phi, None)
}

pub fn g13(phi: f64) -> [f64; 7] {
    family_array(CoeffFamily::G13, phi, None)
}

/// `(m₀, m₁, m₂)` with `M = m₀1 + m₁φ^ + m₂φ^²`.
pub fn m(phi: f64, lambda: f64) -> [f64; 3] {
    family_array(CoeffFamily::M, phi, Some(lambda))
}

/// Coefficients of the Q block on the basis
/// `ρ^`, `φ^ρ^ + ρ^φ^ + φ^ρ^φ^`, `φ^²ρ^ + ρ^φ^² − 3φ^ρ^φ^`, `φ^²ρ^φ^ + φ^ρ^φ^²`.
pub fn q(phi: f64) -> [f64; 4] {
    let nn = n(phi);
    [0.5, nn[1], nn[2], jt(phi)[4]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{LN_2, PI};

    fn all_indices() -> Vec<(CoeffFamily, usize)> {
        CoeffFamily::ALL
            .iter()
            .flat_map(|&f| (0..=f.max_index()).map(move |i| (f, i)))
            .collect()
    }

    fn lam(f: CoeffFamily, l: f64) -> Option<f64> {
        f.needs_lambda().then_some(l)
    }

    #[test]
    fn reference_values() {
        assert_relative_eq!(
            coeff(CoeffFamily::C, 1, PI / 2.0, None).unwrap(),
            2.0 / PI,
            epsilon = 1e-15
        );
        assert_relative_eq!(coeff(CoeffFamily::J, 2, 0.0, None).unwrap(), 1.0 / 6.0, epsilon = 1e-16);
        assert_relative_eq!(coeff(CoeffFamily::T, 1, PI, None).unwrap(), 0.5, epsilon = 1e-15);
        assert_relative_eq!(
            coeff(CoeffFamily::M, 0, 0.0, Some(LN_2)).unwrap(),
            0.5 / LN_2,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            coeff(CoeffFamily::N, 1, PI, None).unwrap(),
            1.0 / (PI * PI),
            epsilon = 1e-15
        );
    }

    #[test]
    fn origin_limits_are_finite() {
        let expected: &[(CoeffFamily, &[f64])] = &[
            (CoeffFamily::C, &[1.0, 1.0, 0.5]),
            (CoeffFamily::J, &[1.0, 0.5, 1.0 / 6.0]),
            (CoeffFamily::N, &[0.5, 1.0 / 6.0, 1.0 / 24.0]),
            (CoeffFamily::T, &[1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0]),
            (CoeffFamily::Jt, &[1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0, 1.0 / 120.0]),
            (CoeffFamily::G12, &[0.5, 1.0 / 3.0, 1.0 / 8.0]),
        ];
        for (f, vals) in expected {
            for (i, v) in vals.iter().enumerate() {
                assert_relative_eq!(coeff(*f, i, 0.0, None).unwrap(), v, epsilon = 1e-16);
            }
        }
        for (f, i) in all_indices() {
            assert!(coeff(f, i, 0.0, lam(f, 0.0)).unwrap().is_finite());
        }
    }

    #[test]
    fn closed_matches_series_across_range() {
        for (f, i) in all_indices() {
            for k in 0..60 {
                let phi = 0.3 + k as f64 * 0.05;
                for l in [-1.7, -0.2, 0.0, 0.4, 1.9] {
                    let a = coeff_closed(f, i, phi, lam(f, l)).unwrap();
                    let b = coeff_series(f, i, phi, lam(f, l)).unwrap();
                    assert!((a - b).abs() <= 1e-12, "{f}{i} at φ={phi}, λ={l}: {a} vs {b}");
                    if !f.needs_lambda() {
                        break;
                    }
                }
            }
        }
    }

    #[test]
    fn continuous_across_switch() {
        let eps = 1e-9;
        for (f, i) in all_indices() {
            for l in [-1.0, 0.0, 1.5] {
                for phi in [SERIES_SWITCH - eps, SERIES_SWITCH + eps] {
                    let closed = coeff_closed(f, i, phi, lam(f, l)).unwrap();
                    let series = coeff_series(f, i, phi, lam(f, l)).unwrap();
                    assert!((closed - series).abs() <= 1e-13, "{f}{i} at {phi}");
                }
                let below = coeff(f, i, SERIES_SWITCH - eps, lam(f, l)).unwrap();
                let above = coeff(f, i, SERIES_SWITCH + eps, lam(f, l)).unwrap();
                assert!((above - below).abs() <= 1e-8, "{f}{i}");
            }
        }
    }

    #[test]
    fn q_coefficient_underbraces() {
        for k in 1..100 {
            let phi = 1e-3 + k as f64 * (PI - 1e-3) / 100.0;
            let [_, c1, c2] = c(phi);
            let [_, j1, j2] = j(phi);
            let p2 = phi * phi;
            assert!((c1 - j1 + p2 * (j1 * c2 - j2 * c1) - j1).abs() <= 1e-14);
            assert!((c2 + j2 - j1 * c1 - p2 * j2 * c2 - j2).abs() <= 1e-14);
        }
    }

    #[test]
    fn m_reduces_to_j_as_lambda_vanishes() {
        for phi in [0.0, 0.5, 1.0, 2.0, 3.0] {
            let mm = m(phi, 0.0);
            let jj = j(phi);
            for i in 0..3 {
                assert_relative_eq!(mm[i], jj[i], epsilon = 1e-15);
            }
            let tiny = m(phi, 1e-10);
            for i in 0..3 {
                assert!((tiny[i] - jj[i]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn gamma_scalar_examples() {
        assert_relative_eq!(coeff_gamma_scalar(0, 1.0), std::f64::consts::E);
        assert_eq!(coeff_gamma_scalar(1, 0.0), 1.0);
        assert_eq!(coeff_gamma_scalar(2, 0.0), 0.5);
        // γ₁(x) = (e^x − 1)/x, γ₂(x) = (e^x − 1 − x)/x²
        for x in [-3.0_f64, -0.5, 0.7, 2.5] {
            assert_relative_eq!(coeff_gamma_scalar(1, x), x.exp_m1() / x, max_relative = 1e-14);
            assert_relative_eq!(
                coeff_gamma_scalar(2, x),
                (x.exp_m1() - x) / (x * x),
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn rotation_series_matches_trig() {
        for phi in [0.0_f64, 0.3, 1.0, 2.0, PI] {
            assert_relative_eq!(rotation_series(0, phi), phi.cos(), epsilon = 1e-15);
            if phi > 0.0 {
                assert_relative_eq!(rotation_series(1, phi), phi.sin() / phi, epsilon = 1e-15);
                assert_relative_eq!(
                    rotation_series(2, phi),
                    (1.0 - phi.cos()) / (phi * phi),
                    epsilon = 1e-15
                );
            }
        }
    }

    #[test]
    fn errors() {
        assert!(matches!("q".parse::<CoeffFamily>(), Err(Error::UnknownFamily(_))));
        assert_eq!("JT".parse::<CoeffFamily>().unwrap(), CoeffFamily::Jt);
        assert!(matches!(
            coeff(CoeffFamily::C, 3, 0.1, None),
            Err(Error::IndexOutOfRange { index: 3, max: 2, .. })
        ));
        assert!(matches!(
            coeff(CoeffFamily::M, 0, 0.1, None),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            coeff(CoeffFamily::C, 0, 0.1, Some(1.0)),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            coeff(CoeffFamily::C, 0, f64::NAN, None),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn even_in_phi() {
        for (f, i) in all_indices() {
            let a = coeff(f, i, 1.3, lam(f, 0.5)).unwrap();
            let b = coeff(f, i, -1.3, lam(f, 0.5)).unwrap();
            assert_eq!(a, b);
        }
    }
}
