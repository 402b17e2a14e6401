//! Fixed-order Gauss–Legendre quadrature on `[0, 1]`.

use std::ops::{Add, Mul};
use std::sync::OnceLock;

use crate::coeffs::inv_factorial;

pub const GL_ORDER: usize = 40;

/// Nodes and weights of the order-40 rule mapped to `[0, 1]`.
pub fn gauss_legendre() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| legendre_rule(GL_ORDER))
}

/// Newton iteration on the Legendre polynomial `P_n` starting from the
/// standard cosine estimates of its roots.
fn legendre_rule(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.push((0.5 * (x + 1.0), 0.5 * w));
    }
    rule.sort_by(|a, b| a.0.total_cmp(&b.0));
    rule
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `∫₀¹ f(α) dα` for any value type supporting `+` and scaling.
pub fn integrate<T, F>(mut f: F) -> T
where
    F: FnMut(f64) -> T,
    T: Add<Output = T> + Mul<f64, Output = T>,
{
    let mut acc: Option<T> = None;
    for &(a, w) in gauss_legendre() {
        let v = f(a) * w;
        acc = Some(match acc {
            Some(s) => s + v,
            None => v,
        });
    }
    acc.expect("rule is non-empty")
}

/// `∫₀¹ α^ℓ f(α) dα`: one step of the building-block recursion.
pub fn quadrature_lift<T, F>(mut f: F, ell: usize) -> T
where
    F: FnMut(f64) -> T,
    T: Add<Output = T> + Mul<f64, Output = T>,
{
    integrate(|a| f(a) * a.powi(ell as i32))
}

/// `∫₀¹ s^ℓ (1−s)^{k−1}/(k−1)! f(s) ds`, which takes a building block at index
/// `ℓ` (evaluated with every argument scaled by `s`) to index `ℓ + k` in one
/// integral. `k = 1` is [`quadrature_lift`].
pub fn lift_kernel<T, F>(mut f: F, ell: usize, k: usize) -> T
where
    F: FnMut(f64) -> T,
    T: Add<Output = T> + Mul<f64, Output = T>,
{
    assert!(k >= 1, "lift distance must be at least one");
    let c = inv_factorial(k - 1);
    integrate(|s| f(s) * (s.powi(ell as i32) * (1.0 - s).powi(k as i32 - 1) * c))
}

/// Tensor-product rule for `∫₀¹∫₀¹ f(a, b) db da`.
pub fn integrate_2d(mut f: impl FnMut(f64, f64) -> f64) -> f64 {
    let rule = gauss_legendre();
    let mut acc = 0.0;
    for &(a, wa) in rule {
        let mut inner = 0.0;
        for &(b, wb) in rule {
            inner += wb * f(a, b);
        }
        acc += wa * inner;
    }
    acc
}
