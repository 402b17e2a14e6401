//! Truncated evaluation of the six building-block series shapes.

use std::fmt;
use std::str::FromStr;

use crate::coeffs::inv_factorial;
use crate::error::{Error, Result};
use crate::linalg::{max_abs, MatN};

/// The six series shapes. With `w` the weight at `(m, n)`:
///
/// | template      | term                     | weight               |
/// |---------------|--------------------------|----------------------|
/// | `Gamma`       | `xᵐ`                     | `1/(ℓ+m)!`           |
/// | `GammaVec`    | `xᵐ y`                   | `1/(ℓ+m+1)!`         |
/// | `Sandwich`    | `xᵐ y zⁿ`                | `1/(ℓ+m+n+1)!`       |
/// | `Tau`         | `xᵐ τ`                   | `(m+1)/(ℓ+m+1)!`     |
/// | `VecTau`      | `xᵐ y τ`                 | `1/(ℓ+m+2)!`         |
/// | `SandwichTau` | `xᵐ y zⁿ τ`              | `(m+1)/(ℓ+m+n+2)!`   |
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockTemplate {
    Gamma,
    GammaVec,
    Sandwich,
    Tau,
    VecTau,
    SandwichTau,
}

impl BlockTemplate {
    pub const ALL: [BlockTemplate; 6] = [
        BlockTemplate::Gamma,
        BlockTemplate::GammaVec,
        BlockTemplate::Sandwich,
        BlockTemplate::Tau,
        BlockTemplate::VecTau,
        BlockTemplate::SandwichTau,
    ];

    pub fn weight(self, ell: usize, m: usize, n: usize) -> f64 {
        match self {
            BlockTemplate::Gamma => inv_factorial(ell + m),
            BlockTemplate::GammaVec => inv_factorial(ell + m + 1),
            BlockTemplate::Sandwich => inv_factorial(ell + m + n + 1),
            BlockTemplate::Tau => (m + 1) as f64 * inv_factorial(ell + m + 1),
            BlockTemplate::VecTau => inv_factorial(ell + m + 2),
            BlockTemplate::SandwichTau => (m + 1) as f64 * inv_factorial(ell + m + n + 2),
        }
    }

    pub fn needs_y(self) -> bool {
        !matches!(self, BlockTemplate::Gamma | BlockTemplate::Tau)
    }

    pub fn needs_z(self) -> bool {
        matches!(self, BlockTemplate::Sandwich | BlockTemplate::SandwichTau)
    }

    pub fn needs_tau(self) -> bool {
        matches!(
            self,
            BlockTemplate::Tau | BlockTemplate::VecTau | BlockTemplate::SandwichTau
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            BlockTemplate::Gamma => "gamma",
            BlockTemplate::GammaVec => "vec",
            BlockTemplate::Sandwich => "sandwich",
            BlockTemplate::Tau => "tau",
            BlockTemplate::VecTau => "vec-tau",
            BlockTemplate::SandwichTau => "sandwich-tau",
        }
    }
}

impl fmt::Display for BlockTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BlockTemplate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        BlockTemplate::ALL
            .iter()
            .copied()
            .find(|t| t.name() == key)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown block template `{s}`")))
    }
}

pub const DEFAULT_TOL: f64 = 1e-14;
pub const DEFAULT_MAX_TERMS: usize = 64;

/// Arguments for [`series_eval`]. `x` must be square; `y` has as many rows as
/// `x` and, for the sandwich shapes, as many columns as the square `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSpec {
    pub template: BlockTemplate,
    pub ell: usize,
    pub x: MatN,
    pub y: Option<MatN>,
    pub z: Option<MatN>,
    pub tau: Option<f64>,
    pub tol: f64,
    pub max_terms: usize,
}

impl SeriesSpec {
    fn base(template: BlockTemplate, ell: usize, x: MatN) -> Self {
        SeriesSpec {
            template,
            ell,
            x,
            y: None,
            z: None,
            tau: None,
            tol: DEFAULT_TOL,
            max_terms: DEFAULT_MAX_TERMS,
        }
    }

    pub fn gamma(ell: usize, x: MatN) -> Self {
        Self::base(BlockTemplate::Gamma, ell, x)
    }

    pub fn gamma_vec(ell: usize, x: MatN, y: MatN) -> Self {
        SeriesSpec {
            y: Some(y),
            ..Self::base(BlockTemplate::GammaVec, ell, x)
        }
    }

    pub fn sandwich(ell: usize, x: MatN, y: MatN, z: MatN) -> Self {
        SeriesSpec {
            y: Some(y),
            z: Some(z),
            ..Self::base(BlockTemplate::Sandwich, ell, x)
        }
    }

    pub fn tau(ell: usize, x: MatN, tau: f64) -> Self {
        SeriesSpec {
            tau: Some(tau),
            ..Self::base(BlockTemplate::Tau, ell, x)
        }
    }

    pub fn vec_tau(ell: usize, x: MatN, y: MatN, tau: f64) -> Self {
        SeriesSpec {
            y: Some(y),
            tau: Some(tau),
            ..Self::base(BlockTemplate::VecTau, ell, x)
        }
    }

    pub fn sandwich_tau(ell: usize, x: MatN, y: MatN, z: MatN, tau: f64) -> Self {
        SeriesSpec {
            y: Some(y),
            z: Some(z),
            tau: Some(tau),
            ..Self::base(BlockTemplate::SandwichTau, ell, x)
        }
    }

    pub fn with_tolerance(mut self, tol: f64, max_terms: usize) -> Self {
        self.tol = tol;
        self.max_terms = max_terms;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "series tolerance must be positive, got {}",
                self.tol
            )));
        }
        if self.max_terms < 8 {
            return Err(Error::InvalidArgument(format!(
                "series needs at least 8 terms, got {}",
                self.max_terms
            )));
        }
        let t = self.template;
        let missing = |what: &str| Error::InvalidArgument(format!("template {t} requires {what}"));
        if !self.x.is_square() {
            return Err(Error::InvalidArgument("x must be square".into()));
        }
        if t.needs_y() {
            let y = self.y.as_ref().ok_or_else(|| missing("y"))?;
            if y.nrows() != self.x.nrows() {
                return Err(Error::InvalidArgument("y must have as many rows as x".into()));
            }
            if t.needs_z() {
                let z = self.z.as_ref().ok_or_else(|| missing("z"))?;
                if !z.is_square() || z.nrows() != y.ncols() {
                    return Err(Error::InvalidArgument(
                        "z must be square and match the columns of y".into(),
                    ));
                }
            }
        }
        if t.needs_tau() && self.tau.is_none() {
            return Err(missing("tau"));
        }
        Ok(())
    }
}

/// Sums the requested series. Single series stop once two consecutive terms
/// fall below `tol·(‖partial sum‖∞ + 1)`; double series apply the same test to
/// whole anti-diagonal sweeps `m + n = d`.
pub fn series_eval(spec: &SeriesSpec) -> Result<MatN> {
    spec.validate()?;
    let t = spec.template;
    let tau = if t.needs_tau() { spec.tau.unwrap_or(1.0) } else { 1.0 };
    let n = spec.x.nrows();
    let start = match t {
        BlockTemplate::Gamma | BlockTemplate::Tau => MatN::identity(n, n),
        _ => spec.y.clone().expect("validated"),
    };
    let mut acc = MatN::zeros(start.nrows(), start.ncols());
    let mut quiet = 0;
    let mut last = f64::INFINITY;

    if !t.needs_z() {
        let mut power = start;
        for m in 0..spec.max_terms {
            let term = &power * (t.weight(spec.ell, m, 0) * tau);
            acc += &term;
            last = max_abs(&term);
            if converged(last, &acc, spec.tol, &mut quiet) {
                return Ok(acc);
            }
            power = &spec.x * power;
        }
    } else {
        let z = spec.z.as_ref().expect("validated");
        let mut xp = vec![MatN::identity(n, n)];
        // y·zⁿ, built up one sweep at a time
        let mut yz = vec![start];
        for d in 0..spec.max_terms {
            if d > 0 {
                xp.push(&spec.x * &xp[d - 1]);
                yz.push(&yz[d - 1] * z);
            }
            let mut sweep = MatN::zeros(acc.nrows(), acc.ncols());
            for mm in 0..=d {
                let w = t.weight(spec.ell, mm, d - mm);
                if w != 0.0 {
                    sweep += (&xp[mm] * &yz[d - mm]) * (w * tau);
                }
            }
            acc += &sweep;
            last = max_abs(&sweep);
            if converged(last, &acc, spec.tol, &mut quiet) {
                return Ok(acc);
            }
        }
    }
    Err(Error::SeriesNotConverged {
        max_terms: spec.max_terms,
        last_term: last,
    })
}

fn converged(term: f64, acc: &MatN, tol: f64, quiet: &mut usize) -> bool {
    if term < tol * (max_abs(acc) + 1.0) {
        *quiet += 1;
    } else {
        *quiet = 0;
    }
    *quiet >= 2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn skew(x: f64, y: f64, z: f64) -> MatN {
        MatN::from_row_slice(3, 3, &[0.0, -z, y, z, 0.0, -x, -y, x, 0.0])
    }

    #[test]
    fn gamma_of_zero_is_identity() {
        let r = series_eval(&SeriesSpec::gamma(0, MatN::zeros(3, 3))).unwrap();
        assert_eq!(r, MatN::identity(3, 3));
        let r = series_eval(&SeriesSpec::gamma(2, MatN::zeros(3, 3))).unwrap();
        assert_eq!(r, MatN::identity(3, 3) * 0.5);
    }

    #[test]
    fn gamma_quarter_turn() {
        let r = series_eval(&SeriesSpec::gamma(0, skew(0.0, 0.0, std::f64::consts::FRAC_PI_2))).unwrap();
        let expected = MatN::from_row_slice(3, 3, &[0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        assert!(max_abs(&(r - expected)) < 1e-13);
    }

    #[test]
    fn scalar_instances() {
        let x = MatN::from_element(1, 1, 0.7);
        let e = series_eval(&SeriesSpec::gamma(0, x.clone())).unwrap();
        assert!((e[(0, 0)] - 0.7_f64.exp()).abs() < 1e-15);
        // Σ (m+1)/(m+1)! xᵐ = eˣ at ℓ = 0
        let t = series_eval(&SeriesSpec::tau(0, x.clone(), 2.0)).unwrap();
        assert!((t[(0, 0)] - 2.0 * 0.7_f64.exp()).abs() < 1e-14);
        // double series with scalar arguments: Σ xᵐ zⁿ/(m+n+1)! = (eˣ − eᶻ)/(x − z)
        let z = MatN::from_element(1, 1, -0.4);
        let y = MatN::from_element(1, 1, 1.0);
        let s = series_eval(&SeriesSpec::sandwich(0, x, y, z)).unwrap();
        let expected = (0.7_f64.exp() - (-0.4_f64).exp()) / 1.1;
        assert!((s[(0, 0)] - expected).abs() < 1e-14);
    }

    #[test]
    fn remark_relations() {
        let x = skew(0.4, -1.1, 0.9);
        let y = MatN::from_column_slice(3, 1, &[0.2, 0.5, -1.0]);
        for ell in 0..3 {
            let a = series_eval(&SeriesSpec::gamma_vec(ell, x.clone(), y.clone())).unwrap();
            let b = series_eval(&SeriesSpec::gamma(ell + 1, x.clone())).unwrap() * &y;
            assert!(max_abs(&(a - b)) < 1e-14);
            let a = series_eval(&SeriesSpec::vec_tau(ell, x.clone(), y.clone(), 1.5)).unwrap();
            let b = series_eval(&SeriesSpec::gamma(ell + 2, x.clone())).unwrap() * &y * 1.5;
            assert!(max_abs(&(a - b)) < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_specs() {
        let x = MatN::zeros(3, 3);
        let bad = SeriesSpec::gamma(0, x.clone()).with_tolerance(0.0, 64);
        assert!(matches!(series_eval(&bad), Err(Error::InvalidArgument(_))));
        let bad = SeriesSpec::gamma(0, x.clone()).with_tolerance(1e-14, 4);
        assert!(matches!(series_eval(&bad), Err(Error::InvalidArgument(_))));
        let mut missing = SeriesSpec::sandwich(0, x.clone(), MatN::zeros(3, 3), MatN::zeros(3, 3));
        missing.z = None;
        assert!(matches!(series_eval(&missing), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn reports_non_convergence() {
        let x = skew(0.0, 0.0, 30.0);
        let spec = SeriesSpec::gamma(0, x).with_tolerance(1e-14, 8);
        assert!(matches!(
            series_eval(&spec),
            Err(Error::SeriesNotConverged { max_terms: 8, .. })
        ));
    }
}
