//! The ten acceptance criteria at their pinned sample counts and
//! tolerances. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any fails.

use std::process::ExitCode;
use std::time::Instant;

use liegamma::checks::{run_suite, CheckReport, CheckResult, Overrides};
use liegamma::cli;
use liegamma::sampling::DEFAULT_SEED;

struct Outcome {
    passed: bool,
    summary: String,
}

fn suite(name: &str, samples: usize) -> CheckReport {
    run_suite(name, samples, DEFAULT_SEED, &Overrides::new()).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn summarize(checks: &[&CheckResult]) -> Outcome {
    let worst = checks.iter().max_by(|a, b| {
        (a.max_residual / a.tolerance.max(f64::MIN_POSITIVE))
            .total_cmp(&(b.max_residual / b.tolerance.max(f64::MIN_POSITIVE)))
    });
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    let summary = match (worst, failed.is_empty()) {
        (None, _) => "no checks ran".to_string(),
        (Some(w), true) => format!(
            "{} checks; worst {} {:.2e} <= {:.0e}",
            checks.len(),
            w.name,
            w.max_residual,
            w.tolerance
        ),
        (Some(_), false) => format!("failing: {}", failed.join(", ")),
    };
    Outcome {
        passed: !checks.is_empty() && failed.is_empty(),
        summary,
    }
}

fn from_reports(reports: &[CheckReport], required: &[&str]) -> Outcome {
    let checks: Vec<&CheckResult> = reports.iter().flat_map(|r| r.checks.iter()).collect();
    let missing: Vec<&str> = required
        .iter()
        .copied()
        .filter(|n| !checks.iter().any(|c| c.name == *n))
        .collect();
    if !missing.is_empty() {
        return Outcome {
            passed: false,
            summary: format!("missing checks: {}", missing.join(", ")),
        };
    }
    summarize(&checks)
}

fn table1_via_cli() -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let args = [
        "liegamma",
        "table1",
        "--samples",
        "20",
        "--seed",
        "42",
        "--format",
        "csv",
    ];
    let code = cli::run(args, None, &mut out, &mut err);
    let text = String::from_utf8_lossy(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    let failing: Vec<&str> = rows.iter().copied().filter(|r| !r.ends_with(",pass")).collect();
    let passed = code == cli::EXIT_OK && !rows.is_empty() && failing.is_empty();
    let summary = if passed {
        format!("{} rows pass at 20 samples per group", rows.len())
    } else {
        format!(
            "exit {code}; failing rows: {failing:?}; stderr: {}",
            String::from_utf8_lossy(&err).trim()
        )
    };
    Outcome { passed, summary }
}

type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

fn main() -> ExitCode {
    let start = Instant::now();
    let criteria: Vec<Criterion> = vec![
        (
            "closed-form exp and Ad vs matrix exponential, 12 representations",
            Box::new(|| {
                from_reports(
                    &[suite("oracle-exp", 200), suite("oracle-adjoint", 200)],
                    &["oracle-exp/Sim3", "oracle-adjoint/AdSim3"],
                )
            }),
        ),
        (
            "closed-form kernels vs truncated series",
            Box::new(|| {
                from_reports(
                    &[suite("kernel-series", 200)],
                    &[
                        "kernel/gamma3_so3/l1",
                        "kernel/gamma4_so3/l1",
                        "kernel/se3-jacobian-monomial",
                        "kernel/sim3-translation/l0",
                    ],
                )
            }),
        ),
        (
            "quadrature lift reproduces the next kernel",
            Box::new(|| {
                from_reports(
                    &[suite("jacobian-recursion", 200)],
                    &["recursion/so3/l0", "recursion/jacobian/SGal3"],
                )
            }),
        ),
        (
            "minimal-polynomial residuals",
            Box::new(|| {
                from_reports(
                    &[suite("minimal-poly", 1000)],
                    &["minimal-poly/SO3", "minimal-poly/AdSE3"],
                )
            }),
        ),
        (
            "adjoint identity including the planar chain",
            Box::new(|| from_reports(&[suite("adjoint-identity", 200)], &["adjoint-identity/SE2-chain"])),
        ),
        (
            "derivatives vs finite differences and rotation identities",
            Box::new(|| {
                from_reports(
                    &[suite("derivatives", 100)],
                    &[
                        "derivatives/so3-jacobian-rate",
                        "derivatives/so3-translation-partial",
                        "derivatives/acceleration/SE3",
                    ],
                )
            }),
        ),
        (
            "exact beta integrals, product and binomial expansions",
            Box::new(|| {
                from_reports(
                    &[suite("appendix-lemmas", 200)],
                    &[
                        "appendix/beta-exact",
                        "appendix/double-beta-exact",
                        "appendix/double-beta-quadrature",
                        "appendix/binomial",
                    ],
                )
            }),
        ),
        (
            "Sim(3) small-scale limit and Jacobian at the origin",
            Box::new(|| {
                from_reports(
                    &[suite("sim3-limits", 100)],
                    &["sim3/lambda-to-zero", "sim3/jacobian-at-zero"],
                )
            }),
        ),
        (
            "first-order compounding error shrinks quadratically",
            Box::new(|| from_reports(&[suite("bch-order", 50)], &["bch/halving-ratio"])),
        ),
        ("table1 command reports pass for every row", Box::new(table1_via_cli)),
    ];

    let mut all = true;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let o = f();
        all &= o.passed;
        println!(
            "{} criterion {:>2}: {title} ({})",
            if o.passed { "PASS" } else { "FAIL" },
            i + 1,
            o.summary
        );
    }
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "acceptance: {} in {elapsed:.1}s",
        if all { "all criteria pass" } else { "FAILURES" }
    );
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
