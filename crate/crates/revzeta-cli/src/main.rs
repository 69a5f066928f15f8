//! Batch front end: read a profile spec, run one computation, emit a JSON
//! report.
//!
//! Profile specs are JSON documents of the form
//! `{"shape": "<tag>", "params": {...}, "a": <real>, "b": <real>}` with
//! shape tags `constant`, `linear`, `catenoid`, `polynomial` and
//! `cosine-bump`. All reports are UTF-8 JSON with floats rendered at 17
//! significant digits, so identical inputs give byte-identical output.
//!
//! Exit status: 0 on success (for `verify`: all checks passed), 2 for
//! malformed input, 3 for a numerical failure, 1 for failed verification.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use revzeta::heatkernel::{fit_coefficients, geometric_coefficients, heat_trace, log_spaced};
use revzeta::ode::OdeSpec;
use revzeta::profile::{geometric_invariants, Profile, ProfileSpec};
use revzeta::quad::QuadratureSpec;
use revzeta::report;
use revzeta::report::JsonObject;
use revzeta::sturm::{build_table, eigenvalues, ModeProblem};
use revzeta::verify::VerifySuite;
use revzeta::zeta::{determinant, full_special_values};
use revzeta::Error;

#[derive(Parser)]
#[command(name = "revzeta", version, about = "Spectral zeta functions of surfaces of revolution")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the profile spec JSON document.
    profile: PathBuf,
    /// Relative quadrature tolerance for the geometric integrals.
    #[arg(long, default_value_t = 1e-12)]
    rel_tol: f64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Geometric functionals of the profile.
    Invariants(CommonArgs),
    /// Residues and values of the zeta function, with the heat-kernel
    /// coefficient dictionary.
    SpecialValues(CommonArgs),
    /// Zeta-regularized determinant report.
    Determinant(CommonArgs),
    /// Eigenvalue table for modes k <= k_max, n <= n_max.
    Eigenvalues {
        #[command(flatten)]
        common: CommonArgs,
        /// Eigenvalues per mode.
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        /// Largest angular mode number.
        #[arg(long, default_value_t = 10)]
        k_max: u32,
    },
    /// Heat trace on a log-spaced grid with geometric and fitted expansion
    /// coefficients.
    Heat {
        #[command(flatten)]
        common: CommonArgs,
        /// Lower edge of the time window.
        #[arg(long, default_value_t = 0.05)]
        t_min: f64,
        /// Upper edge of the time window.
        #[arg(long, default_value_t = 0.5)]
        t_max: f64,
    },
    /// Run the full cross-validation suite.
    Verify(CommonArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, outcome) = match &cli.command {
        Command::Invariants(c) => (c, run_invariants(c)),
        Command::SpecialValues(c) => (c, run_special_values(c)),
        Command::Determinant(c) => (c, run_determinant(c)),
        Command::Eigenvalues { common, n_max, k_max } => {
            (common, run_eigenvalues(common, *n_max, *k_max))
        }
        Command::Heat { common, t_min, t_max } => (common, run_heat(common, *t_min, *t_max)),
        Command::Verify(c) => (c, run_verify(c)),
    };
    match outcome {
        Ok(CommandOutput { json, exit }) => {
            if let Err(e) = emit(&common.out, &json) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            exit
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

struct CommandOutput {
    json: String,
    exit: ExitCode,
}

impl CommandOutput {
    fn ok(json: String) -> Result<Self, Error> {
        Ok(Self { json, exit: ExitCode::SUCCESS })
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::InvalidSpec(_) | Error::Domain(_) | Error::ProfileNotPositive { .. } => 2,
        _ => 3,
    }
}

fn emit(out: &Option<PathBuf>, json: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, format!("{json}\n")),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

fn load_profile(path: &Path) -> Result<Profile, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidSpec(format!("cannot read {}: {e}", path.display())))?;
    ProfileSpec::parse(&text)?.build()
}

fn quad_spec(common: &CommonArgs) -> Result<QuadratureSpec, Error> {
    let spec = QuadratureSpec {
        rel_tol: common.rel_tol,
        abs_tol: common.rel_tol * 1e-2,
        ..QuadratureSpec::default()
    };
    spec.validate()?;
    Ok(spec)
}

fn run_invariants(common: &CommonArgs) -> Result<CommandOutput, Error> {
    let profile = load_profile(&common.profile)?;
    let inv = geometric_invariants(&profile, &quad_spec(common)?)?;
    CommandOutput::ok(report::invariants_json(&inv))
}

fn run_special_values(common: &CommonArgs) -> Result<CommandOutput, Error> {
    let profile = load_profile(&common.profile)?;
    let quad = quad_spec(common)?;
    let values = full_special_values(&profile, &quad)?;
    let coeffs = geometric_coefficients(&profile, &quad)?;
    CommandOutput::ok(report::special_values_json(&values, &coeffs))
}

fn run_determinant(common: &CommonArgs) -> Result<CommandOutput, Error> {
    let profile = load_profile(&common.profile)?;
    let rep = determinant(&profile, &quad_spec(common)?)?;
    CommandOutput::ok(report::determinant_json(&rep))
}

fn run_eigenvalues(common: &CommonArgs, n_max: usize, k_max: u32) -> Result<CommandOutput, Error> {
    let profile = load_profile(&common.profile)?;
    let ode = OdeSpec::default();
    let bisect_tol = 1e-10;
    let mut entries = Vec::new();
    for k in 0..=k_max {
        let mode = ModeProblem::new(&profile, k);
        for (i, lambda) in eigenvalues(&mode, n_max, bisect_tol, &ode)?.iter().enumerate() {
            entries.push(
                JsonObject::new()
                    .int("k", k as i64)
                    .int("n", (i + 1) as i64)
                    .num("lambda", *lambda)
                    .render(),
            );
        }
    }
    let json = JsonObject::new()
        .raw("entries", format!("[{}]", entries.join(",")))
        .num("tol", bisect_tol)
        .str("profile_hash", &profile.content_hash())
        .render();
    CommandOutput::ok(json)
}

fn run_heat(common: &CommonArgs, t_min: f64, t_max: f64) -> Result<CommandOutput, Error> {
    if !(t_min > 0.0 && t_max > t_min) {
        return Err(Error::Domain(format!("invalid t window [{t_min}, {t_max}]")));
    }
    let profile = load_profile(&common.profile)?;
    let quad = quad_spec(common)?;
    // Cutoff keeping the truncation bound below 1e-10 theta at t_min.
    let lambda_cut = 1.05 * (1e10f64).ln() / t_min;
    let table = build_table(&profile, lambda_cut, 1e-10, &OdeSpec::default())?;
    let area = geometric_invariants(&profile, &quad)?.area;
    let trace = heat_trace(&table, &log_spaced(t_min, t_max, 30), area)?;
    let geo = geometric_coefficients(&profile, &quad)?;
    let fit = fit_coefficients(&trace)?;
    let json = JsonObject::new()
        .num("lambda_cut", lambda_cut)
        .int("modes", table.weighted_count() as i64)
        .raw("trace", report::heat_trace_json(&trace))
        .raw("geometric", report::heat_coefficients_json(&geo))
        .raw("fitted", report::fitted_coefficients_json(&fit))
        .render();
    CommandOutput::ok(json)
}

fn run_verify(common: &CommonArgs) -> Result<CommandOutput, Error> {
    // The suite's references are fixed by the criteria themselves; the
    // profile argument is validated like any other command input.
    load_profile(&common.profile)?;
    let results = VerifySuite::new().run_all();
    for r in &results {
        eprintln!("{}", r.summary_line());
        for check in &r.checks {
            if !check.passed {
                eprintln!(
                    "    failed: {} (residual {:e}, tolerance {:e})",
                    check.label, check.residual, check.tolerance
                );
            }
        }
    }
    let all_passed = results.iter().all(|r| r.passed);
    Ok(CommandOutput {
        json: report::verify_json(&results),
        exit: if all_passed { ExitCode::SUCCESS } else { ExitCode::FAILURE },
    })
}
