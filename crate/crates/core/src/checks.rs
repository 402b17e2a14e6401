//! Packaged property suites. Each suite draws seeded samples, compares a
//! closed form against an independent oracle and reports the largest
//! residual per check.
//!
//! Residuals are absolute elementwise maxima unless a check name says
//! otherwise in its `detail` field.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::algebra::{curlywedge, vee, wedge, GroupId, TangentVector};
use crate::calculus::{
    acceleration_term, body_velocity, fd_compare, gamma_time_derivative, partial_gamma0, so3_jacobian_rate_residual,
    so3_translation_partial, KinematicState, FD_STEP,
};
use crate::coeffs;
use crate::error::{Error, Result};
use crate::groups::{
    adjoint_of, adjoint_se3_monomial, exp_group, gamma_adjoint, gamma_group, jacobian_by_quadrature,
    jacobian_se3_monomial, left_jacobian, minimal_poly_residual, sim3_translation_coeffs,
};
use crate::identities::{
    beta_by_expansion, beta_integral, binomial_expand, binomial_scale, double_beta_integral, product_direct,
    product_expand, to_f64,
};
use crate::linalg::{
    canonical_skew, mat3_pow, mat_inverse, max_abs, norm_inf, skew3, to_dyn2, to_dyn3, Mat3, MatN, Vec3,
};
use crate::oracle::{expm_generic, integrate, integrate_2d, quadrature_lift, series_eval, SeriesSpec};
use crate::sampling::Sampler;
use crate::so3::{gamma3_so3, gamma4_so3, gamma_phi_tau, gamma_so2, gamma_so3};

/// Closed form against series or matrix exponential.
pub const TOL_CLOSED: f64 = 1e-12;
/// Paths that go through Gauss–Legendre quadrature.
pub const TOL_QUADRATURE: f64 = 1e-9;
/// Algebraic identities evaluated with an explicit inverse.
pub const TOL_IDENTITY: f64 = 1e-10;
/// Finite-difference comparisons.
pub const TOL_FD: f64 = 1e-6;
/// The compounding discrepancy must shrink by this factor per halving.
pub const BCH_MIN_RATIO: f64 = 3.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    MinimalPoly,
    OracleExp,
    OracleAdjoint,
    JacobianRecursion,
    AdjointIdentity,
    Table1,
    Derivatives,
    AppendixLemmas,
    Sim3Limits,
    BchOrder,
    KernelSeries,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::MinimalPoly,
        Suite::OracleExp,
        Suite::OracleAdjoint,
        Suite::JacobianRecursion,
        Suite::AdjointIdentity,
        Suite::Table1,
        Suite::Derivatives,
        Suite::AppendixLemmas,
        Suite::Sim3Limits,
        Suite::BchOrder,
        Suite::KernelSeries,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::MinimalPoly => "minimal-poly",
            Suite::OracleExp => "oracle-exp",
            Suite::OracleAdjoint => "oracle-adjoint",
            Suite::JacobianRecursion => "jacobian-recursion",
            Suite::AdjointIdentity => "adjoint-identity",
            Suite::Table1 => "table1",
            Suite::Derivatives => "derivatives",
            Suite::AppendixLemmas => "appendix-lemmas",
            Suite::Sim3Limits => "sim3-limits",
            Suite::BchOrder => "bch-order",
            Suite::KernelSeries => "kernel-series",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        Suite::ALL
            .iter()
            .copied()
            .find(|x| x.name() == key)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub group: String,
    pub quantity: String,
    pub max_abs_residual: f64,
    pub tolerance: f64,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub suite: String,
    pub seed: u64,
    pub samples: usize,
    pub passed: bool,
    pub max_residual: f64,
    pub checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub table: Option<Vec<Table1Row>>,
    pub wall_time_s: f64,
}

impl CheckReport {
    /// The report with its timing zeroed, for comparing runs.
    pub fn untimed(&self) -> CheckReport {
        CheckReport {
            wall_time_s: 0.0,
            ..self.clone()
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Per-check tolerance overrides keyed by check name; `"*"` applies to all.
pub type Overrides = BTreeMap<String, f64>;

/// Which check exercises each closed form. Enforced by a unit test.
pub const COVERAGE: &[(&str, &str)] = &[
    ("gamma_so3 (C, J, N)", "kernel/gamma_so3/l0"),
    ("gamma_so3 l=2", "kernel/gamma_so3/l2"),
    ("gamma3_so3 l=0", "kernel/gamma3_so3/l0"),
    ("Q block", "kernel/gamma3_so3/l1"),
    ("gamma_phi_tau", "kernel/gamma_phi_tau/l1"),
    ("gamma4_so3", "kernel/gamma4_so3/l1"),
    ("gamma_so2", "kernel/gamma_so2/l2"),
    ("SE(3) adjoint monomial", "kernel/se3-adjoint-monomial"),
    ("SE(3) jacobian monomial", "kernel/se3-jacobian-monomial"),
    ("Sim(3) M", "kernel/sim3-translation/l0"),
    ("commutation identities", "kernel/commutation"),
    ("exp SE(2)", "oracle-exp/SE2"),
    ("exp SGal(3)", "oracle-exp/SGal3"),
    ("exp Sim(3)", "oracle-exp/Sim3"),
    ("Ad SE(2)", "oracle-adjoint/AdSE2"),
    ("Ad SGal(3)", "oracle-adjoint/AdSGal3"),
    ("Ad Sim(3)", "oracle-adjoint/AdSim3"),
    ("SE(2) jacobian", "recursion/jacobian/SE2"),
    ("SE2(3) jacobian", "recursion/jacobian/SE23"),
    ("SGal(3) jacobian", "recursion/jacobian/SGal3"),
    ("J = integral of C", "recursion/so3/l0"),
    ("minimal polynomial SO(3)", "minimal-poly/SO3"),
    ("minimal polynomial Ad(SE(3))", "minimal-poly/AdSE3"),
    ("adjoint map", "adjoint-identity/SE3"),
    ("SE(2) adjoint chain", "adjoint-identity/SE2-chain"),
    ("time derivative", "derivatives/time/SE3"),
    ("adjoint time derivative", "derivatives/time-adjoint/SE3"),
    ("partial derivative", "derivatives/partial/SE3"),
    ("acceleration", "derivatives/acceleration/SO3"),
    ("J rate identity", "derivatives/so3-jacobian-rate"),
    ("translation partial identity", "derivatives/so3-translation-partial"),
    ("beta integral", "appendix/beta-exact"),
    ("double beta integral", "appendix/double-beta-exact"),
    ("product lemma", "appendix/product-lemma"),
    ("binomial expansion", "appendix/binomial"),
    ("sandwich factorization", "appendix/sandwich-factor-adse3"),
    ("tau sandwich factorization", "appendix/tau-sandwich-factor-so3"),
    ("Sim(3) small scale", "sim3/lambda-to-zero"),
    ("first-order compounding", "bch/halving-ratio"),
];

#[derive(Debug, Clone, Copy)]
struct Max {
    value: f64,
    count: usize,
}

impl Max {
    fn new() -> Self {
        Max { value: 0.0, count: 0 }
    }

    fn push(&mut self, r: f64) {
        let r = if r.is_nan() { f64::INFINITY } else { r.abs() };
        self.value = self.value.max(r);
        self.count += 1;
    }
}

struct Collector<'a> {
    overrides: &'a Overrides,
    checks: Vec<CheckResult>,
}

impl Collector<'_> {
    fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.overrides
            .get(name)
            .or_else(|| self.overrides.get("*"))
            .copied()
            .unwrap_or(default)
    }

    fn add(&mut self, name: impl Into<String>, default_tol: f64, m: Max, detail: Option<String>) {
        let name = name.into();
        let tolerance = self.tolerance(&name, default_tol);
        self.checks.push(CheckResult {
            passed: m.value <= tolerance,
            name,
            samples: m.count,
            max_residual: m.value,
            tolerance,
            detail,
        });
    }
}

fn diff(a: &MatN, b: &MatN) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    max_abs(&(a - b))
}

fn scaled_diff(a: &MatN, b: &MatN) -> f64 {
    diff(a, b) / norm_inf(b).max(1.0)
}

fn col(v: &Vec3) -> MatN {
    MatN::from_column_slice(3, 1, v.as_slice())
}

fn vec_col(v: &TangentVector) -> MatN {
    let x = v.to_vector();
    MatN::from_column_slice(x.len(), 1, x.as_slice())
}

/// Runs one suite. `samples` is the per-check sample count; exact checks
/// ignore it.
pub fn run_suite(suite: &str, samples: usize, seed: u64, overrides: &Overrides) -> Result<CheckReport> {
    let suite: Suite = suite.parse()?;
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let start = Instant::now();
    let mut sampler = Sampler::new(seed);
    let mut c = Collector {
        overrides,
        checks: Vec::new(),
    };
    let mut table = None;
    match suite {
        Suite::MinimalPoly => minimal_poly(samples, &mut sampler, &mut c)?,
        Suite::OracleExp => oracle_exp(samples, &mut sampler, &mut c),
        Suite::OracleAdjoint => oracle_adjoint(samples, &mut sampler, &mut c),
        Suite::JacobianRecursion => recursion(samples, &mut sampler, &mut c)?,
        Suite::AdjointIdentity => adjoint_identity(samples, &mut sampler, &mut c)?,
        Suite::Table1 => {
            let rows = table1_rows(samples, &mut sampler, &c)?;
            for r in &rows {
                let mut m = Max::new();
                m.count = samples;
                m.value = r.max_abs_residual;
                c.add(format!("table1/{}/{}", r.group, r.quantity), r.tolerance, m, None);
            }
            table = Some(rows);
        }
        Suite::Derivatives => derivatives(samples, &mut sampler, &mut c)?,
        Suite::AppendixLemmas => appendix(samples, &mut sampler, &mut c)?,
        Suite::Sim3Limits => sim3_limits(samples, &mut sampler, &mut c),
        Suite::BchOrder => bch_order(samples, &mut sampler, &mut c)?,
        Suite::KernelSeries => kernel_series(samples, &mut sampler, &mut c)?,
    }
    let passed = c.checks.iter().all(|x| x.passed);
    let max_residual = c.checks.iter().map(|x| x.max_residual).fold(0.0, f64::max);
    Ok(CheckReport {
        suite: suite.name().to_string(),
        seed,
        samples,
        passed,
        max_residual,
        checks: c.checks,
        table,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

fn minimal_poly(n: usize, s: &mut Sampler, c: &mut Collector) -> Result<()> {
    for alg in [GroupId::So2, GroupId::So3, GroupId::Se3, GroupId::AdSe3] {
        let mut m = Max::new();
        for _ in 0..n {
            let xi = s.tangent(alg.base());
            let scale = match alg {
                GroupId::So2 => xi.angle().powi(2),
                GroupId::So3 => xi.angle().powi(3),
                GroupId::Se3 => xi.norm().powi(4),
                _ => xi.norm().powi(5),
            };
            m.push(minimal_poly_residual(alg, &xi)? / scale.max(1.0));
        }
        c.add(
            format!("minimal-poly/{alg}"),
            TOL_CLOSED,
            m,
            Some("scaled by max(1, |x|^degree-1)".into()),
        );
    }
    Ok(())
}

fn oracle_exp(n: usize, s: &mut Sampler, c: &mut Collector) {
    for g in GroupId::BASE {
        let mut m = Max::new();
        for _ in 0..n {
            let xi = s.tangent(g);
            m.push(scaled_diff(&exp_group(&xi).matrix, &expm_generic(&wedge(&xi))));
        }
        c.add(
            format!("oracle-exp/{g}"),
            TOL_CLOSED,
            m,
            Some("scaled by max(1, |expm|_inf)".into()),
        );
    }
}

fn oracle_adjoint(n: usize, s: &mut Sampler, c: &mut Collector) {
    for g in GroupId::BASE {
        let mut m = Max::new();
        for _ in 0..n {
            let xi = s.tangent(g);
            m.push(scaled_diff(&adjoint_of(&xi).matrix, &expm_generic(&curlywedge(&xi))));
        }
        let name = match g {
            GroupId::So2 => "AdSO2".to_string(),
            GroupId::So3 => "AdSO3".to_string(),
            _ => g.adjoint().to_string(),
        };
        c.add(
            format!("oracle-adjoint/{name}"),
            TOL_CLOSED,
            m,
            Some("scaled by max(1, |expm|_inf)".into()),
        );
    }
}

fn recursion(n: usize, s: &mut Sampler, c: &mut Collector) -> Result<()> {
    for ell in 0..3 {
        let mut m = Max::new();
        for _ in 0..n {
            let phi = s.rotation();
            let lifted: Mat3 = quadrature_lift(|a| gamma_so3(ell, &(phi * a)), ell);
            m.push(max_abs(&(lifted - gamma_so3(ell + 1, &phi))));
        }
        c.add(format!("recursion/so3/l{ell}"), TOL_QUADRATURE, m, None);
    }
    for ell in 0..2 {
        let mut m = Max::new();
        for _ in 0..n {
            let phi = s.tangent(GroupId::So2).angle() * if s.uniform(0.0, 1.0) < 0.5 { -1.0 } else { 1.0 };
            let lifted: MatN = quadrature_lift(|a| to_dyn2(&gamma_so2(ell, phi * a)), ell);
            m.push(diff(&lifted, &to_dyn2(&gamma_so2(ell + 1, phi))));
        }
        c.add(format!("recursion/so2/l{ell}"), TOL_QUADRATURE, m, None);
    }
    let (mut k3, mut kt, mut k4) = (Max::new(), Max::new(), Max::new());
    for _ in 0..n {
        let phi = s.rotation();
        let y = s.normal3();
        let tau = s.uniform(-2.0, 2.0);
        let l3: Mat3 = quadrature_lift(|a| gamma3_so3(0, &(phi * a), &(y * a)), 0);
        k3.push(max_abs(&(l3 - gamma3_so3(1, &phi, &y))));
        let lt: Mat3 = quadrature_lift(|a| gamma_phi_tau(0, &(phi * a), tau * a), 0);
        kt.push(max_abs(&(lt - gamma_phi_tau(1, &phi, tau))));
        let l4: Mat3 = quadrature_lift(|a| gamma4_so3(0, &(phi * a), &(y * a), tau * a), 0);
        k4.push(max_abs(&(l4 - gamma4_so3(1, &phi, &y, tau))));
    }
    c.add("recursion/gamma3_so3/l0", TOL_QUADRATURE, k3, None);
    c.add("recursion/gamma_phi_tau/l0", TOL_QUADRATURE, kt, None);
    c.add("recursion/gamma4_so3/l0", TOL_QUADRATURE, k4, None);

    for g in GroupId::BASE {
        let mut grp = Max::new();
        let mut jac = Max::new();
        for _ in 0..n {
            let xi = s.tangent(g);
            for ell in 0..2 {
                let lifted: MatN = quadrature_lift(|a| gamma_group(ell, &xi.scaled(a)), ell);
                grp.push(diff(&lifted, &gamma_group(ell + 1, &xi)));
            }
            if g != GroupId::Sim3 {
                jac.push(diff(&left_jacobian(&xi)?, &jacobian_by_quadrature(&xi)));
            }
        }
        c.add(format!("recursion/group/{g}"), TOL_QUADRATURE, grp, None);
        if g != GroupId::Sim3 {
            c.add(format!("recursion/jacobian/{g}"), TOL_QUADRATURE, jac, None);
        }
    }

    let mut mono = Max::new();
    let mut lift_series = Max::new();
    for _ in 0..n {
        let xi = s.tangent(GroupId::Se3);
        let q: MatN = integrate(|a| adjoint_se3_monomial(&xi.scaled(a)).expect("SE(3) sample"));
        mono.push(diff(&jacobian_se3_monomial(&xi)?, &q));
        let x = wedge(&xi);
        for ell in 0..3 {
            let lifted: MatN = quadrature_lift(
                |a| series_eval(&SeriesSpec::gamma(ell, &x * a)).expect("series converges"),
                ell,
            );
            lift_series.push(diff(&lifted, &series_eval(&SeriesSpec::gamma(ell + 1, x.clone()))?));
        }
    }
    c.add("recursion/se3-monomial", TOL_QUADRATURE, mono, None);
    c.add("recursion/lift-series", 1e-10, lift_series, None);
    Ok(())
}

fn adjoint_identity(n: usize, s: &mut Sampler, c: &mut Collector) -> Result<()> {
    for g in GroupId::BASE {
        let (mut m, mut ma) = (Max::new(), Max::new());
        for _ in 0..n {
            let x1 = s.tangent(g);
            let x2 = s.tangent(g);
            let ad = adjoint_of(&x1).matrix;
            let moved = TangentVector::from_vector(g, &(&ad * x2.to_vector()))?;
            let t = exp_group(&x1).matrix;
            let conj = &t * wedge(&x2) * mat_inverse(&t)?;
            m.push(diff(&wedge(&moved), &conj));
            if g != GroupId::So2 {
                let conj = &ad * curlywedge(&x2) * mat_inverse(&ad)?;
                ma.push(diff(&curlywedge(&moved), &conj));
            }
        }
        c.add(format!("adjoint-identity/{g}"), TOL_IDENTITY, m, None);
        if g != GroupId::So2 {
            c.add(format!("adjoint-identity/{g}-adjoint"), TOL_IDENTITY, ma, None);
        }
    }
    // The planar chain written out block by block.
    let mut m = Max::new();
    for _ in 0..n {
        let (TangentVector::Se2 { rho: r1, phi: p1 }, TangentVector::Se2 { rho: r2, phi: p2 }) =
            (s.tangent(GroupId::Se2), s.tangent(GroupId::Se2))
        else {
            unreachable!("sampler returns the requested group")
        };
        let sk = canonical_skew();
        let top = gamma_so2(0, p1) * r2 - sk * gamma_so2(1, p1) * r1 * p2;
        let chain = MatN::from_column_slice(3, 1, &[top.x, top.y, p2]);
        let x1 = TangentVector::Se2 { rho: r1, phi: p1 };
        let x2 = TangentVector::Se2 { rho: r2, phi: p2 };
        let t = exp_group(&x1).matrix;
        let conj = vee(GroupId::Se2, &(&t * wedge(&x2) * mat_inverse(&t)?))?;
        m.push(diff(&chain, &vec_col(&conj)));
        m.push(diff(&chain, &(adjoint_of(&x1).matrix * vec_col(&x2))));
    }
    c.add("adjoint-identity/SE2-chain", TOL_IDENTITY, m, None);
    Ok(())
}

fn fd_residual(cmp: crate::calculus::FdComparison) -> f64 {
    if cmp.richardson_ok() {
        cmp.max_error()
    } else {
        f64::INFINITY
    }
}

fn derivatives(n: usize, s: &mut Sampler, c: &mut Collector) -> Result<()> {
    const FD_NOTE: &str = "5-point central difference, step 1e-5, halved once";
    for g in GroupId::BASE {
        let (mut time, mut time_ad, mut partial, mut accel, mut vel, mut product) =
            (Max::new(), Max::new(), Max::new(), Max::new(), Max::new(), Max::new());
        for _ in 0..n {
            let x = s.tangent(g);
            let xd = s.tangent(g);
            let xdd = s.tangent(g);
            let st = KinematicState::new(x, xd)?;
            let along = |t: f64| x.axpy(t, &xd).expect("same group");
            for ell in 0..2 {
                let a = gamma_time_derivative(ell, &st, false);
                time.push(fd_residual(fd_compare(|t| gamma_group(ell, &along(t)), &a, FD_STEP)));
                let a = gamma_time_derivative(ell, &st, true);
                time_ad.push(fd_residual(fd_compare(|t| gamma_adjoint(ell, &along(t)), &a, FD_STEP)));
            }

            let p = partial_gamma0(&x, &xd)?;
            for k in 0..g.tangent_dim() {
                let mut e = vec![0.0; g.tangent_dim()];
                e[k] = 1.0;
                let dir = TangentVector::new(g, &e)?;
                let f = |t: f64| {
                    let st = KinematicState::new(x.axpy(t, &dir).expect("same group"), xd).expect("same group");
                    vec_col(&body_velocity(&st))
                };
                let an = p.columns(k, 1).into_owned();
                partial.push(fd_residual(fd_compare(f, &an, FD_STEP)));
            }

            let a = vec_col(&acceleration_term(&st, &xdd)?);
            let f = |t: f64| {
                let xt = along(t).axpy(0.5 * t * t, &xdd).expect("same group");
                let vt = xd.axpy(t, &xdd).expect("same group");
                vec_col(&body_velocity(&KinematicState::new(xt, vt).expect("same group")))
            };
            accel.push(fd_residual(fd_compare(f, &a, FD_STEP)));

            // Ṫ T⁻¹ read back as a tangent vector equals the body velocity.
            let v = vec_col(&body_velocity(&st));
            let t0 = exp_group(&x).matrix;
            let tinv = mat_inverse(&t0)?;
            let rate = |t: f64| {
                let m = exp_group(&along(t)).matrix * &tinv;
                vec_col(&vee(g, &m).expect("group layout"))
            };
            vel.push(fd_residual(fd_compare(rate, &v, FD_STEP)));

            let lhs = gamma_time_derivative(0, &st, false);
            let vt = TangentVector::from_vector(g, &v.column(0).into_owned())?;
            product.push(diff(&lhs, &(wedge(&vt) * &t0)));
        }
        let note = || Some(FD_NOTE.to_string());
        c.add(format!("derivatives/time/{g}"), TOL_FD, time, note());
        c.add(format!("derivatives/time-adjoint/{g}"), TOL_FD, time_ad, note());
        c.add(format!("derivatives/partial/{g}"), TOL_FD, partial, note());
        c.add(format!("derivatives/acceleration/{g}"), TOL_FD, accel, note());
        c.add(format!("derivatives/body-velocity/{g}"), TOL_FD, vel, note());
        c.add(format!("derivatives/product-rule/{g}"), TOL_IDENTITY, product, None);
    }

    let (mut rate, mut trans, mut trans_fd, mut inverse) = (Max::new(), Max::new(), Max::new(), Max::new());
    for _ in 0..n {
        let phi = s.rotation();
        let y = s.normal3();
        let xs = TangentVector::So3 { phi };
        let ys = TangentVector::So3 { phi: y };
        let generic = partial_gamma0(&xs, &ys)?;
        let st = KinematicState::new(xs, ys)?;
        let jdot = gamma_time_derivative(1, &st, false);
        let j = gamma_so3(1, &phi);
        let omega_form = jdot - to_dyn3(&(skew3(&(j * y)) * j));
        rate.push(diff(&generic, &omega_form));
        rate.push(diff(&generic, &to_dyn3(&so3_jacobian_rate_residual(&phi, &y))));
        trans.push(diff(&generic, &to_dyn3(&so3_translation_partial(&phi, &y))));
        let closed = to_dyn3(&so3_translation_partial(&phi, &y));
        for k in 0..3 {
            let mut e = Vec3::zeros();
            e[k] = 1.0;
            let f = |t: f64| col(&(gamma_so3(1, &(phi + e * t)) * y));
            let an = closed.columns(k, 1).into_owned();
            trans_fd.push(fd_residual(fd_compare(f, &an, FD_STEP)));
        }
        // d/dα [α^{ℓ+1} Γ_{ℓ+1}(αφ^)] at α = 1 recovers Γ_ℓ(φ^).
        for ell in 0..3 {
            let f = |t: f64| to_dyn3(&(gamma_so3(ell + 1, &(phi * (1.0 + t))) * (1.0 + t).powi(ell as i32 + 1)));
            inverse.push(fd_residual(fd_compare(f, &to_dyn3(&gamma_so3(ell, &phi)), FD_STEP)));
        }
    }
    c.add("derivatives/so3-jacobian-rate", TOL_IDENTITY, rate, None);
    c.add("derivatives/so3-translation-partial", TOL_IDENTITY, trans, None);
    c.add("derivatives/so3-translation-partial-fd", TOL_FD, trans_fd, None);
    c.add("derivatives/lift-inverse", TOL_FD, inverse, None);
    Ok(())
}

fn appendix(n: usize, s: &mut Sampler, c: &mut Collector) -> Result<()> {
    let (mut exact, mut exact2, mut quad, mut quad2) = (Max::new(), Max::new(), Max::new(), Max::new());
    for m in 0..=12usize {
        for k in 0..=(12 - m) {
            let b = beta_integral(m, k)?;
            exact.push(to_f64(&(&b - beta_by_expansion(m, k)).abs()));
            // Swapping the integration order reduces the double integral to B(m, n+1).
            let d = double_beta_integral(m, k)?;
            exact2.push(to_f64(&(&d - beta_by_expansion(m, k + 1)).abs()));
            let q = integrate(|a: f64| a.powi(m as i32) * (1.0 - a).powi(k as i32));
            quad.push(to_f64(&b) - q);
            let q2 = integrate_2d(|a, bb| a * (a * bb).powi(m as i32) * (1.0 - a * bb).powi(k as i32));
            quad2.push(to_f64(&d) - q2);
        }
    }
    c.add(
        "appendix/beta-exact",
        0.0,
        exact,
        Some("exact rational arithmetic".into()),
    );
    c.add(
        "appendix/double-beta-exact",
        0.0,
        exact2,
        Some("exact rational arithmetic".into()),
    );
    c.add("appendix/beta-quadrature", TOL_CLOSED, quad, None);
    c.add("appendix/double-beta-quadrature", TOL_CLOSED, quad2, None);

    let (mut prod, mut prod_jc, mut binom) = (Max::new(), Max::new(), Max::new());
    let (mut b1_so3, mut b1_ad, mut b2_so3, mut b2_ad) = (Max::new(), Max::new(), Max::new(), Max::new());
    for _ in 0..n {
        let phi = s.rotation();
        let rho = s.normal3();
        let a = [s.normal(), s.normal(), s.normal()];
        let b = [s.normal(), s.normal(), s.normal()];
        prod.push(max_abs(
            &(product_expand(a, b, &phi, &rho) - product_direct(a, b, &phi, &rho)),
        ));
        let ang = phi.norm();
        prod_jc.push(max_abs(
            &(product_expand(coeffs::j(ang), coeffs::c(ang), &phi, &rho) - gamma3_so3(0, &phi, &rho)),
        ));
        for m in 0..=12 {
            let direct = skew3(&(mat3_pow(&skew3(&phi), m) * rho));
            let r = max_abs(&(binomial_expand(m, &phi, &rho)? - direct));
            binom.push(r / binomial_scale(m, &phi, &rho).max(1.0));
        }

        let x = to_dyn3(&skew3(&phi));
        let y = to_dyn3(&skew3(&rho));
        let tau = s.uniform(-2.0, 2.0);
        let factored = skew3(&(gamma_so3(1, &phi) * rho)) * gamma_so3(0, &phi);
        b1_so3.push(diff(
            &to_dyn3(&factored),
            &series_eval(&SeriesSpec::sandwich(0, x.clone(), y.clone(), x.clone()))?,
        ));
        let factored = skew3(&((gamma_so3(1, &phi) - gamma_so3(2, &phi)) * rho)) * gamma_so3(0, &phi) * tau;
        b2_so3.push(diff(
            &to_dyn3(&factored),
            &series_eval(&SeriesSpec::sandwich_tau(0, x.clone(), y, x, tau))?,
        ));

        let xi = s.tangent(GroupId::Se3);
        let eta = s.tangent(GroupId::Se3);
        let xc = curlywedge(&xi);
        let yc = curlywedge(&eta);
        let g1 = TangentVector::from_vector(GroupId::Se3, &(gamma_adjoint(1, &xi) * eta.to_vector()))?;
        let factored = curlywedge(&g1) * gamma_adjoint(0, &xi);
        b1_ad.push(diff(
            &factored,
            &series_eval(&SeriesSpec::sandwich(0, xc.clone(), yc.clone(), xc.clone()))?,
        ));
        let g2 = TangentVector::from_vector(
            GroupId::Se3,
            &((gamma_adjoint(1, &xi) - gamma_adjoint(2, &xi)) * eta.to_vector()),
        )?;
        let factored = curlywedge(&g2) * gamma_adjoint(0, &xi) * tau;
        b2_ad.push(diff(
            &factored,
            &series_eval(&SeriesSpec::sandwich_tau(0, xc.clone(), yc, xc, tau))?,
        ));
    }
    c.add("appendix/product-lemma", TOL_CLOSED, prod, None);
    c.add("appendix/product-lemma-jc", TOL_CLOSED, prod_jc, None);
    c.add(
        "appendix/binomial",
        TOL_CLOSED,
        binom,
        Some("scaled by the sum of term magnitudes".into()),
    );
    c.add("appendix/sandwich-factor-so3", TOL_CLOSED, b1_so3, None);
    c.add("appendix/sandwich-factor-adse3", TOL_CLOSED, b1_ad, None);
    c.add("appendix/tau-sandwich-factor-so3", TOL_CLOSED, b2_so3, None);
    c.add("appendix/tau-sandwich-factor-adse3", TOL_CLOSED, b2_ad, None);
    Ok(())
}

fn sim3_limits(n: usize, s: &mut Sampler, c: &mut Collector) {
    let mut m = Max::new();
    let mut scale = Max::new();
    for _ in 0..n {
        let phi = s.rotation();
        let rho = s.normal3();
        let mm = coeffs::m(phi.norm(), 1e-10);
        let p = skew3(&phi);
        let mrho = (Mat3::identity() * mm[0] + p * mm[1] + p * p * mm[2]) * rho;
        m.push((mrho - gamma_so3(1, &phi) * rho).norm() / rho.norm());
        let lambda = s.uniform(-2.0, 2.0);
        let j = jacobian_by_quadrature(&TangentVector::Sim3 {
            rho: Vec3::zeros(),
            phi: Vec3::zeros(),
            lambda,
        });
        let expected = if lambda == 0.0 { 1.0 } else { lambda.exp_m1() / lambda };
        scale.push(max_abs(&(j.view((0, 0), (3, 3)) - Mat3::identity() * expected)));
    }
    c.add("sim3/lambda-to-zero", TOL_FD, m, Some("relative to |rho|".into()));
    c.add("sim3/pure-scale-jacobian", 1e-11, scale, None);
    let mut zero = Max::new();
    let j = jacobian_by_quadrature(&TangentVector::zero(GroupId::Sim3).expect("base group"));
    zero.push(diff(&j, &MatN::identity(7, 7)));
    c.add("sim3/jacobian-at-zero", 1e-11, zero, None);
}

fn bch_order(n: usize, s: &mut Sampler, c: &mut Collector) -> Result<()> {
    let eps = 1e-2;
    let mut ratios = Vec::with_capacity(n);
    for _ in 0..n {
        let p1 = s.unit3();
        let p2 = s.unit3() * s.uniform(0.0, 1.0);
        let jinv = mat_inverse(&to_dyn3(&gamma_so3(1, &p2)))?;
        let err = |e: f64| {
            let lhs = gamma_so3(0, &(p1 * e)) * gamma_so3(0, &p2);
            let arg = &jinv * col(&(p1 * e)) + col(&p2);
            let rhs = gamma_so3(0, &Vec3::new(arg[0], arg[1], arg[2]));
            max_abs(&(lhs - rhs))
        };
        ratios.push(err(eps) / err(eps / 2.0));
    }
    ratios.sort_by(f64::total_cmp);
    let k = ratios.len();
    let median = if k % 2 == 1 {
        ratios[k / 2]
    } else {
        0.5 * (ratios[k / 2 - 1] + ratios[k / 2])
    };
    let mut m = Max::new();
    m.count = n;
    m.value = if median > 0.0 { 1.0 / median } else { f64::INFINITY };
    c.add(
        "bch/halving-ratio",
        1.0 / BCH_MIN_RATIO,
        m,
        Some(format!(
            "median reduction factor {median:.4}; residual is its reciprocal"
        )),
    );
    Ok(())
}

fn kernel_series(n: usize, s: &mut Sampler, c: &mut Collector) -> Result<()> {
    let mut g = [Max::new(); 3];
    let mut g3 = [Max::new(); 2];
    let mut gt = [Max::new(); 2];
    let mut g4 = [Max::new(); 2];
    let mut so2 = [Max::new(); 3];
    let mut sim = [Max::new(); 3];
    let (mut mono_t, mut mono_j, mut comm) = (Max::new(), Max::new(), Max::new());
    for _ in 0..n {
        let phi = s.rotation();
        let y = s.normal3();
        let tau = s.uniform(-2.0, 2.0);
        let x = to_dyn3(&skew3(&phi));
        let yh = to_dyn3(&skew3(&y));
        for (ell, m) in g.iter_mut().enumerate() {
            m.push(diff(
                &to_dyn3(&gamma_so3(ell, &phi)),
                &series_eval(&SeriesSpec::gamma(ell, x.clone()))?,
            ));
        }
        for ell in 0..2 {
            let sw = series_eval(&SeriesSpec::sandwich(ell, x.clone(), yh.clone(), x.clone()))?;
            g3[ell].push(diff(&to_dyn3(&gamma3_so3(ell, &phi, &y)), &sw));
            let st = series_eval(&SeriesSpec::tau(ell, x.clone(), tau))?;
            gt[ell].push(diff(&to_dyn3(&gamma_phi_tau(ell, &phi, tau)), &st));
            let s4 = series_eval(&SeriesSpec::sandwich_tau(ell, x.clone(), yh.clone(), x.clone(), tau))?;
            g4[ell].push(diff(&to_dyn3(&gamma4_so3(ell, &phi, &y, tau)), &s4));
        }
        let a = s.tangent(GroupId::So2);
        let TangentVector::So2 { phi: a } = a else {
            unreachable!("sampler returns the requested group")
        };
        let x2 = MatN::from_row_slice(2, 2, &[0.0, -a, a, 0.0]);
        for (ell, m) in so2.iter_mut().enumerate() {
            m.push(diff(
                &to_dyn2(&gamma_so2(ell, a)),
                &series_eval(&SeriesSpec::gamma(ell, x2.clone()))?,
            ));
        }
        let lambda = s.uniform(-2.0, 2.0);
        let z = MatN::from_element(1, 1, -lambda);
        for (ell, m) in sim.iter_mut().enumerate() {
            let k = sim3_translation_coeffs(ell, phi.norm(), lambda);
            let p = skew3(&phi);
            let v = (Mat3::identity() * k[0] + p * k[1] + p * p * k[2]) * y;
            let sw = series_eval(&SeriesSpec::sandwich(ell, x.clone(), col(&y), z.clone()))?;
            m.push(diff(&col(&v), &sw));
        }
        let xi = s.tangent(GroupId::Se3);
        let xc = curlywedge(&xi);
        mono_t.push(diff(
            &adjoint_se3_monomial(&xi)?,
            &series_eval(&SeriesSpec::gamma(0, xc.clone()))?,
        ));
        mono_j.push(diff(
            &jacobian_se3_monomial(&xi)?,
            &series_eval(&SeriesSpec::gamma(1, xc))?,
        ));

        let p = skew3(&phi);
        let v = skew3(&y);
        let pp = p * p;
        let scale = (phi.norm().powi(4) * y.norm()).max(1.0);
        comm.push(max_abs(&(pp * v * p - p * v * pp)) / scale);
        comm.push(max_abs(&(pp * v * pp + p * v * p * phi.norm_squared())) / scale);
    }
    for (ell, m) in g.into_iter().enumerate() {
        c.add(format!("kernel/gamma_so3/l{ell}"), TOL_CLOSED, m, None);
    }
    for (ell, m) in g3.into_iter().enumerate() {
        c.add(format!("kernel/gamma3_so3/l{ell}"), TOL_CLOSED, m, None);
    }
    for (ell, m) in gt.into_iter().enumerate() {
        c.add(format!("kernel/gamma_phi_tau/l{ell}"), TOL_CLOSED, m, None);
    }
    for (ell, m) in g4.into_iter().enumerate() {
        c.add(format!("kernel/gamma4_so3/l{ell}"), TOL_CLOSED, m, None);
    }
    for (ell, m) in so2.into_iter().enumerate() {
        c.add(format!("kernel/gamma_so2/l{ell}"), TOL_CLOSED, m, None);
    }
    for (ell, m) in sim.into_iter().enumerate() {
        c.add(format!("kernel/sim3-translation/l{ell}"), TOL_CLOSED, m, None);
    }
    c.add("kernel/se3-adjoint-monomial", TOL_CLOSED, mono_t, None);
    c.add("kernel/se3-jacobian-monomial", TOL_CLOSED, mono_j, None);
    c.add(
        "kernel/commutation",
        TOL_CLOSED,
        comm,
        Some("scaled by max(1, |phi|^4 |y|)".into()),
    );
    Ok(())
}

/// Quantities reported per group: the element, its adjoint and its left
/// Jacobian, plus the SE(3) monomial forms.
fn table1_quantities(g: GroupId) -> &'static [&'static str] {
    match g {
        GroupId::So2 | GroupId::So3 => &["C", "Ad", "J"],
        GroupId::Se3 => &["T", "Ad", "J", "Ad monomial", "J monomial"],
        _ => &["T", "Ad", "J"],
    }
}

fn table1_residual(quantity: &str, xi: &TangentVector) -> Result<(f64, f64)> {
    Ok(match quantity {
        "C" | "T" => (
            scaled_diff(&exp_group(xi).matrix, &expm_generic(&wedge(xi))),
            TOL_CLOSED,
        ),
        "Ad" => (
            scaled_diff(&adjoint_of(xi).matrix, &expm_generic(&curlywedge(xi))),
            TOL_CLOSED,
        ),
        "J" => {
            let series = series_eval(&SeriesSpec::gamma(1, curlywedge(xi)))?;
            match left_jacobian(xi) {
                Ok(j) => (diff(&j, &series), TOL_CLOSED),
                Err(Error::NotImplementedClosedForm { .. }) => {
                    (diff(&jacobian_by_quadrature(xi), &series), TOL_QUADRATURE)
                }
                Err(e) => return Err(e),
            }
        }
        "Ad monomial" => (
            scaled_diff(&adjoint_se3_monomial(xi)?, &expm_generic(&curlywedge(xi))),
            TOL_CLOSED,
        ),
        "J monomial" => (
            diff(
                &jacobian_se3_monomial(xi)?,
                &series_eval(&SeriesSpec::gamma(1, curlywedge(xi)))?,
            ),
            TOL_CLOSED,
        ),
        other => return Err(Error::InvalidArgument(format!("unknown table quantity `{other}`"))),
    })
}

fn row(g: GroupId, quantity: &str, m: Max, tol: f64, c: &Collector) -> Table1Row {
    let name = format!("table1/{g}/{quantity}");
    let tolerance = c.tolerance(&name, tol);
    Table1Row {
        group: g.to_string(),
        quantity: quantity.to_string(),
        max_abs_residual: m.value,
        tolerance,
        status: if m.value <= tolerance { "pass" } else { "fail" }.to_string(),
    }
}

fn table1_rows(n: usize, s: &mut Sampler, c: &Collector) -> Result<Vec<Table1Row>> {
    let mut rows = Vec::new();
    for g in GroupId::BASE {
        let qs = table1_quantities(g);
        let mut acc = vec![(Max::new(), 0.0); qs.len()];
        for _ in 0..n {
            let xi = s.tangent(g);
            for (k, q) in qs.iter().enumerate() {
                let (r, tol) = table1_residual(q, &xi)?;
                acc[k].0.push(r);
                acc[k].1 = tol;
            }
        }
        for (q, (m, tol)) in qs.iter().zip(acc) {
            rows.push(row(g, q, m, tol, c));
        }
    }
    Ok(rows)
}

/// Table rows for one caller-supplied tangent vector.
pub fn table1_for(xi: &TangentVector, overrides: &Overrides) -> Result<Vec<Table1Row>> {
    let c = Collector {
        overrides,
        checks: Vec::new(),
    };
    let g = xi.group();
    table1_quantities(g)
        .iter()
        .map(|q| {
            let (r, tol) = table1_residual(q, xi)?;
            let mut m = Max::new();
            m.push(r);
            Ok(row(g, q, m, tol, &c))
        })
        .collect()
}

/// Table rows over `samples` seeded tangent vectors per group.
pub fn table1(samples: usize, seed: u64, overrides: &Overrides) -> Result<Vec<Table1Row>> {
    let c = Collector {
        overrides,
        checks: Vec::new(),
    };
    table1_rows(samples.max(1), &mut Sampler::new(seed), &c)
}
