//! The `liegamma` command line.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::algebra::{GroupId, TangentVector};
use crate::checks::{self, CheckReport, Overrides, Suite, Table1Row};
use crate::error::Error;
use crate::groups::{adjoint_of, exp_group, gamma_adjoint, gamma_group, jacobian_by_quadrature, left_jacobian};
use crate::linalg::{MatN, Vec3};
use crate::oracle::BlockTemplate;
use crate::sampling::{DEFAULT_SEED, SEED_ENV};
use crate::so3::So3BlockRequest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "liegamma",
    version,
    about = "Evaluate and verify closed-form Lie group building blocks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Args)]
pub struct Point {
    /// Group name, e.g. so3, se3, se23, sgal3, sim3 (adjoint forms: adse3, ...)
    #[arg(long)]
    pub group: String,
    /// Comma-separated tangent coordinates in the group's layout
    #[arg(long, allow_hyphen_values = true)]
    pub xi: String,
    #[arg(long, value_enum, default_value = "pretty")]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Group element exp(xi^)
    Exp(Point),
    /// Adjoint matrix Ad(exp(xi^))
    Adjoint(Point),
    /// Left Jacobian (quadrature for groups without a closed form)
    Jacobian(Point),
    /// Building block Gamma_ell; an adjoint group name selects the adjoint representation
    Gamma {
        #[command(flatten)]
        point: Point,
        #[arg(long)]
        ell: usize,
        /// Rotation-level template (so3 only): gamma, vec, sandwich, tau, vec-tau, sandwich-tau
        #[arg(long)]
        template: Option<String>,
        /// Second vector argument for the vec and sandwich templates
        #[arg(long, allow_hyphen_values = true)]
        y: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        tau: Option<f64>,
    },
    /// Run a check suite (or `all`)
    Check {
        #[arg(long)]
        suite: String,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Per-group residuals of every tabulated quantity
    Table1 {
        /// Restrict to one group and evaluate at --xi instead of seeded samples
        #[arg(long)]
        group: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "group")]
        xi: Option<String>,
        #[command(flatten)]
        run: RunOpts,
    },
}

#[derive(Debug, Args)]
pub struct RunOpts {
    /// Samples per check; defaults to the suite's acceptance count
    #[arg(long)]
    pub samples: Option<usize>,
    /// Seed; falls back to LIEGAMMA_SEED, then 42
    #[arg(long)]
    pub seed: Option<u64>,
    /// Tolerance override, either VALUE for every check or CHECK=VALUE (repeatable)
    #[arg(long)]
    pub tol: Vec<String>,
    #[arg(long, value_enum, default_value = "pretty")]
    pub format: Format,
}

/// Sample counts used when `--samples` is not given.
pub fn default_samples(suite: Suite) -> usize {
    match suite {
        Suite::MinimalPoly => 1000,
        Suite::Table1 => 20,
        Suite::Derivatives | Suite::Sim3Limits => 100,
        Suite::BchOrder => 50,
        _ => 200,
    }
}

#[derive(Debug, Serialize)]
struct MatrixOut<'a> {
    group: String,
    quantity: &'a str,
    rows: Vec<Vec<f64>>,
}

enum Failure {
    Usage(String),
    Runtime(String),
    /// The reader closed stdout, as `liegamma ... | head` does.
    ClosedPipe,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownGroup(_)
            | Error::UnknownSuite(_)
            | Error::LayoutMismatch { .. }
            | Error::AdjointGroupNotSupported(_)
            | Error::InvalidArgument(_)
            | Error::IndexOutOfRange { .. } => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return Failure::ClosedPipe;
        }
        Failure::Runtime(e.to_string())
    }
}

fn parse_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| format!("`{t}` is not a number")))
        .collect()
}

fn parse_point(group: &str, xi: &str) -> std::result::Result<(GroupId, TangentVector), Failure> {
    let g: GroupId = group.parse()?;
    let base = g.base();
    let coords = parse_list(xi).map_err(|e| {
        Failure::Usage(format!(
            "{e}; {base} expects {} coordinates laid out as {}",
            base.tangent_dim(),
            base.layout()
        ))
    })?;
    Ok((g, TangentVector::new(base, &coords)?))
}

fn vec3(s: &str, what: &str) -> std::result::Result<Vec3, Failure> {
    let v = parse_list(s).map_err(Failure::Usage)?;
    if v.len() != 3 {
        return Err(Failure::Usage(format!(
            "--{what} expects 3 comma-separated values, got {}",
            v.len()
        )));
    }
    Ok(Vec3::new(v[0], v[1], v[2]))
}

fn overrides(tols: &[String]) -> std::result::Result<Overrides, Failure> {
    let mut o = Overrides::new();
    for t in tols {
        let (key, value) = match t.split_once('=') {
            Some((k, v)) => (k.trim().to_string(), v),
            None => ("*".to_string(), t.as_str()),
        };
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("--tol `{t}`: `{value}` is not a number")))?;
        if v.is_nan() || v < 0.0 {
            return Err(Failure::Usage(format!("--tol `{t}`: tolerance must be non-negative")));
        }
        o.insert(key, v);
    }
    Ok(o)
}

fn resolve_seed(flag: Option<u64>, env: Option<&str>) -> std::result::Result<u64, Failure> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match env {
        None => Ok(DEFAULT_SEED),
        Some(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{SEED_ENV}=`{v}` is not an unsigned integer"))),
    }
}

fn rows_of(m: &MatN) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn write_matrix(
    out: &mut dyn Write,
    format: Format,
    group: &str,
    quantity: &str,
    rows: Vec<Vec<f64>>,
) -> std::io::Result<()> {
    match format {
        Format::Json => {
            let doc = MatrixOut {
                group: group.to_string(),
                quantity,
                rows,
            };
            writeln!(out, "{}", serde_json::to_string(&doc).map_err(std::io::Error::other)?)
        }
        Format::Csv => {
            for r in rows {
                let line: Vec<String> = r.iter().map(|x| format!("{x:?}")).collect();
                writeln!(out, "{}", line.join(","))?;
            }
            Ok(())
        }
        Format::Pretty => {
            writeln!(out, "{group} {quantity}")?;
            for r in rows {
                let line: Vec<String> = r.iter().map(|x| format!("{x:>24.17e}")).collect();
                writeln!(out, "{}", line.join(" "))?;
            }
            Ok(())
        }
    }
}

fn write_report(out: &mut dyn Write, format: Format, r: &CheckReport) -> std::io::Result<()> {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(r).map_err(std::io::Error::other)?),
        Format::Csv => {
            writeln!(out, "suite,check,samples,max_residual,tolerance,status")?;
            for c in &r.checks {
                let status = if c.passed { "pass" } else { "fail" };
                writeln!(
                    out,
                    "{},{},{},{:e},{:e},{status}",
                    r.suite, c.name, c.samples, c.max_residual, c.tolerance
                )?;
            }
            Ok(())
        }
        Format::Pretty => {
            let status = if r.passed { "PASS" } else { "FAIL" };
            writeln!(
                out,
                "{status} {} (seed {}, {} samples, {:.2}s, max residual {:.3e})",
                r.suite, r.seed, r.samples, r.wall_time_s, r.max_residual
            )?;
            for c in &r.checks {
                let mark = if c.passed { "ok  " } else { "FAIL" };
                write!(
                    out,
                    "  {mark} {:<44} {:>10.3e} <= {:.0e}",
                    c.name, c.max_residual, c.tolerance
                )?;
                match &c.detail {
                    Some(d) => writeln!(out, "  ({d})")?,
                    None => writeln!(out)?,
                }
            }
            Ok(())
        }
    }
}

fn write_table(out: &mut dyn Write, format: Format, rows: &[Table1Row]) -> std::io::Result<()> {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(rows).map_err(std::io::Error::other)?),
        Format::Csv => {
            writeln!(out, "group,quantity,max_abs_residual,tolerance,status")?;
            for r in rows {
                writeln!(
                    out,
                    "{},{},{:e},{:e},{}",
                    r.group, r.quantity, r.max_abs_residual, r.tolerance, r.status
                )?;
            }
            Ok(())
        }
        Format::Pretty => {
            writeln!(
                out,
                "{:<8} {:<12} {:>12} {:>10}  status",
                "group", "quantity", "residual", "tolerance"
            )?;
            for r in rows {
                writeln!(
                    out,
                    "{:<8} {:<12} {:>12.3e} {:>10.0e}  {}",
                    r.group, r.quantity, r.max_abs_residual, r.tolerance, r.status
                )?;
            }
            Ok(())
        }
    }
}

fn gamma_command(
    point: &Point,
    ell: usize,
    template: Option<&str>,
    y: Option<&str>,
    tau: Option<f64>,
    out: &mut dyn Write,
) -> std::result::Result<i32, Failure> {
    let (g, xi) = parse_point(&point.group, &point.xi)?;
    let Some(template) = template else {
        if y.is_some() || tau.is_some() {
            return Err(Failure::Usage("--y and --tau require --template".into()));
        }
        let m = if g.is_adjoint() {
            gamma_adjoint(ell, &xi)
        } else {
            gamma_group(ell, &xi)
        };
        write_matrix(out, point.format, g.name(), &format!("Gamma_{ell}"), rows_of(&m))?;
        return Ok(EXIT_OK);
    };
    let template: BlockTemplate = template.parse()?;
    let TangentVector::So3 { phi } = xi else {
        return Err(Failure::Usage(format!("--template is only available for SO3, got {g}")));
    };
    let mut req = So3BlockRequest::new(template, ell, phi);
    if let Some(y) = y {
        req = req.with_y(vec3(y, "y")?);
    }
    if let Some(t) = tau {
        req = req.with_tau(t);
    }
    let value = req.evaluate()?;
    write_matrix(out, point.format, g.name(), &format!("{template}_{ell}"), value.rows())?;
    Ok(EXIT_OK)
}

fn execute(
    cli: Cli,
    env_seed: Option<&str>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::result::Result<i32, Failure> {
    match cli.command {
        Command::Exp(p) => {
            let (g, xi) = parse_point(&p.group, &p.xi)?;
            write_matrix(out, p.format, g.base().name(), "exp", rows_of(&exp_group(&xi).matrix))?;
        }
        Command::Adjoint(p) => {
            let (_, xi) = parse_point(&p.group, &p.xi)?;
            let ad = adjoint_of(&xi);
            write_matrix(out, p.format, ad.group.name(), "Ad", rows_of(&ad.matrix))?;
        }
        Command::Jacobian(p) => {
            let (g, xi) = parse_point(&p.group, &p.xi)?;
            let (m, q) = match left_jacobian(&xi) {
                Ok(m) => (m, "J"),
                Err(Error::NotImplementedClosedForm { .. }) => {
                    writeln!(err, "note: {} has no closed-form Jacobian; using quadrature", g.base())?;
                    (jacobian_by_quadrature(&xi), "J (quadrature)")
                }
                Err(e) => return Err(e.into()),
            };
            write_matrix(out, p.format, g.base().name(), q, rows_of(&m))?;
        }
        Command::Gamma {
            point,
            ell,
            template,
            y,
            tau,
        } => {
            return gamma_command(&point, ell, template.as_deref(), y.as_deref(), tau, out);
        }
        Command::Check { suite, run } => {
            let seed = resolve_seed(run.seed, env_seed)?;
            let tols = overrides(&run.tol)?;
            let suites: Vec<Suite> = if suite.eq_ignore_ascii_case("all") {
                Suite::ALL.to_vec()
            } else {
                vec![suite.parse()?]
            };
            if run.samples == Some(0) {
                return Err(Failure::Usage("--samples must be at least 1".into()));
            }
            let mut all_passed = true;
            for s in suites {
                let n = run.samples.unwrap_or_else(|| default_samples(s));
                let report = checks::run_suite(s.name(), n, seed, &tols)?;
                for f in report.failures() {
                    writeln!(
                        err,
                        "{}: {} residual {:e} exceeds {:e}",
                        report.suite, f.name, f.max_residual, f.tolerance
                    )?;
                }
                all_passed &= report.passed;
                write_report(out, run.format, &report)?;
            }
            return Ok(if all_passed { EXIT_OK } else { EXIT_FAIL });
        }
        Command::Table1 { group, xi, run } => {
            let tols = overrides(&run.tol)?;
            let rows = match (group, xi) {
                (Some(g), Some(x)) => checks::table1_for(&parse_point(&g, &x)?.1, &tols)?,
                (g, _) => {
                    let seed = resolve_seed(run.seed, env_seed)?;
                    let n = run.samples.unwrap_or_else(|| default_samples(Suite::Table1));
                    if n == 0 {
                        return Err(Failure::Usage("--samples must be at least 1".into()));
                    }
                    let rows = checks::table1(n, seed, &tols)?;
                    match g {
                        None => rows,
                        Some(g) => {
                            let g: GroupId = g.parse()?;
                            rows.into_iter().filter(|r| r.group == g.base().name()).collect()
                        }
                    }
                }
            };
            write_table(out, run.format, &rows)?;
            let passed = rows.iter().all(|r| r.status == "pass");
            return Ok(if passed { EXIT_OK } else { EXIT_FAIL });
        }
    }
    Ok(EXIT_OK)
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code. `env_seed` is the value of
/// `LIEGAMMA_SEED`, if set.
pub fn run<I, T>(args: I, env_seed: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(cli, env_seed, out, err) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Runtime(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAIL
        }
        Err(Failure::ClosedPipe) => EXIT_OK,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("liegamma").chain(args.iter().copied());
        let code = run(argv, None, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn seed_precedence() {
        assert!(matches!(resolve_seed(Some(3), Some("9")), Ok(3)));
        assert!(matches!(resolve_seed(None, Some("9")), Ok(9)));
        assert!(matches!(resolve_seed(None, None), Ok(DEFAULT_SEED)));
        assert!(matches!(resolve_seed(None, Some("x")), Err(Failure::Usage(_))));
    }

    #[test]
    fn tolerance_overrides() {
        let o = overrides(&["1e-3".into(), "oracle-exp/SO3=2e-12".into()]).ok().unwrap();
        assert_eq!(o["*"], 1e-3);
        assert_eq!(o["oracle-exp/SO3"], 2e-12);
        assert!(overrides(&["-1".into()]).is_err());
    }

    #[test]
    fn layout_error_names_layout() {
        let (code, _, err) = call(&["exp", "--group", "se3", "--xi", "1,2"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("rho(3),phi(3)"), "{err}");
    }

    #[test]
    fn negative_values_parse() {
        let (code, out, _) = call(&["exp", "--group", "so2", "--xi", "-0.5", "--format", "csv"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out.lines().count(), 2);
    }
}
