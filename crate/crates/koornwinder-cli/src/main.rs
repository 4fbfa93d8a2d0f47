//! Batch front-end for the koornwinder verification library.
//!
//! Reads a parameter configuration, runs the requested computation or
//! verification suite over all partitions up to a weight bound, and emits a
//! deterministic machine-readable report (JSON or flat CSV) plus a short
//! human summary. Exit status: 0 all checks pass, 1 a verification check
//! failed, 2 configuration problem, 3 internal consistency failure.

use clap::{Parser, ValueEnum};
use koornwinder::diffops::{operator_matrix_on_basis, DiffOpError};
use koornwinder::params::{ParamError, ParameterSet, RawConfig};
use koornwinder::polys::{
    norm_ratio_closed, norm_ratio_via_recurrence, verify_diffeq, verify_duality, verify_recurrence,
    PolyError, PolynomialFamily,
};
use koornwinder::quadrature::{gram_schmidt_oracle, monic_norm_formula, QuadratureContext};
use koornwinder::report::{format_f64, CheckReport, RunReport, WitnessRow};
use koornwinder::scalar::{format_rat, rat_to_f64};
use koornwinder::symfunc::{partitions_with_weight_at_most, Partition};
use std::path::PathBuf;
use std::process::ExitCode;

const POINTS_PER_IDENTITY: usize = 3;
const REL_TOL_MASS: f64 = 1e-6;
const REL_TOL_NORM_ONE_VAR: f64 = 1e-8;
const REL_TOL_NORM: f64 = 1e-5;
const REL_TOL_ORTHOGONALITY: f64 = 1e-8;
const ABS_TOL_RECONSTRUCTION: f64 = 1e-7;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Command {
    Coeffs,
    VerifyDiffeq,
    VerifyDuality,
    VerifyRecurrence,
    VerifyNorms,
    VerifyCommute,
    QuadCheck,
    All,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Coeffs => "coeffs",
            Command::VerifyDiffeq => "verify-diffeq",
            Command::VerifyDuality => "verify-duality",
            Command::VerifyRecurrence => "verify-recurrence",
            Command::VerifyNorms => "verify-norms",
            Command::VerifyCommute => "verify-commute",
            Command::QuadCheck => "quad-check",
            Command::All => "all",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(
    name = "koornwinder",
    version,
    about = "Verification runs for multivariable Askey-Wilson polynomial families"
)]
struct Args {
    /// Parameter configuration file (JSON with keys n, sigma, tau, tau0..tau3)
    #[arg(long)]
    config: PathBuf,

    /// Which computation or verification suite to run
    #[arg(long)]
    command: Command,

    /// Partitions up to this weight are included
    #[arg(long, default_value_t = 2)]
    max_weight: u64,

    /// Quadrature grid points per dimension
    #[arg(long, default_value_t = 128)]
    grid_m: usize,

    /// Truncation depth for infinite q-products (default: chosen from q)
    #[arg(long)]
    trunc_n: Option<u32>,

    /// Seed for generic-point sampling and basis extraction
    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// Report file; when omitted the report goes to stdout
    #[arg(long)]
    out: Option<PathBuf>,

    /// Report format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

enum CliError {
    Config(String),
    Internal(String),
}

impl From<ParamError> for CliError {
    fn from(e: ParamError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<DiffOpError> for CliError {
    fn from(e: DiffOpError) -> Self {
        CliError::Internal(e.to_string())
    }
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::Param(p) => CliError::Config(p.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(report) => {
            let rendered = match args.format {
                Format::Json => {
                    let mut text = serde_json::to_string_pretty(&report)
                        .expect("report serialization cannot fail");
                    text.push('\n');
                    text
                }
                Format::Csv => report.to_csv(),
            };
            let summary = summarize(&report);
            match &args.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, rendered) {
                        eprintln!("configuration error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                    print!("{summary}");
                }
                None => {
                    print!("{rendered}");
                    eprint!("{summary}");
                }
            }
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Config(msg)) => {
            eprintln!("configuration error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal consistency error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn summarize(report: &RunReport) -> String {
    let mut out = String::new();
    for check in &report.checks {
        let verdict = if check.pass {
            "PASS"
        } else if check.warning_only {
            "WARN"
        } else {
            "FAIL"
        };
        out.push_str(&format!(
            "{}: {} ({} checks)\n",
            check.identity,
            verdict,
            check.witnesses.len()
        ));
    }
    out.push_str(&format!(
        "overall: {}\n",
        if report.pass { "PASS" } else { "FAIL" }
    ));
    out
}

fn run(args: &Args) -> Result<RunReport, CliError> {
    let raw = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", args.config.display())))?;
    let config: RawConfig = serde_json::from_str(&raw)
        .map_err(|e| CliError::Config(format!("invalid configuration JSON: {e}")))?;
    let params = ParameterSet::from_config(&config)?;
    let family = PolynomialFamily::new(params.clone(), args.seed);
    let parts = partitions_with_weight_at_most(params.n, args.max_weight);

    let mut checks = Vec::new();
    let run_coeffs = matches!(args.command, Command::Coeffs | Command::All);
    let run_diffeq = matches!(args.command, Command::VerifyDiffeq | Command::All);
    let run_commute = matches!(args.command, Command::VerifyCommute | Command::All);
    let run_duality = matches!(args.command, Command::VerifyDuality | Command::All);
    let run_recurrence = matches!(args.command, Command::VerifyRecurrence | Command::All);
    let run_norms = matches!(args.command, Command::VerifyNorms | Command::All);
    let run_quad = matches!(args.command, Command::QuadCheck | Command::All);

    if run_coeffs {
        checks.push(coefficient_table(&family, &parts)?);
    }
    if run_diffeq {
        checks.push(difference_equations(&family, &parts, args.seed)?);
    }
    if run_commute {
        checks.push(commutators(&params, &parts, args.seed)?);
    }
    if run_duality {
        checks.push(duality(&family, &parts, args.seed)?);
    }
    if run_recurrence {
        checks.push(recurrences(&family, &parts, args.seed)?);
    }
    if run_norms {
        checks.push(norm_ratios(&params, &parts)?);
        let (mass, norms) = numeric_norms(&params, &family, &parts, args)?;
        checks.push(mass);
        checks.push(norms);
    }
    if run_quad {
        let (ortho, reconstruction) = quadrature_checks(&params, &family, &parts, args)?;
        checks.push(ortho);
        checks.push(reconstruction);
    }

    Ok(RunReport::new(
        args.command.name(),
        args.seed,
        args.max_weight,
        &params,
        checks,
    ))
}

fn coefficient_table(
    family: &PolynomialFamily,
    parts: &[Partition],
) -> Result<CheckReport, CliError> {
    let mut rows = Vec::new();
    for lambda in parts {
        let poly = family.polynomial(lambda)?;
        for (mu, coeff) in poly.iter() {
            rows.push(WitnessRow::value(
                format!("lambda={lambda} mu={mu}"),
                format_rat(coeff),
            ));
        }
        rows.push(WitnessRow::value(
            format!("lambda={lambda} normalization"),
            format_rat(&family.normalization(lambda)?),
        ));
    }
    Ok(CheckReport::new("coefficient-table", rows))
}

fn difference_equations(
    family: &PolynomialFamily,
    parts: &[Partition],
    seed: u64,
) -> Result<CheckReport, CliError> {
    let n = family.params().n;
    let mut rows = Vec::new();
    for lambda in parts {
        for r in 1..=n {
            let witnesses = verify_diffeq(
                family,
                lambda,
                r,
                POINTS_PER_IDENTITY,
                seed.wrapping_add(0xd1),
            )?;
            for (i, w) in witnesses.iter().enumerate() {
                rows.push(WitnessRow::exact(
                    format!("lambda={lambda} r={r} point={i}"),
                    &w.lhs,
                    &w.rhs,
                ));
            }
        }
    }
    Ok(CheckReport::new("difference-equation", rows))
}

fn commutators(
    params: &ParameterSet,
    parts: &[Partition],
    seed: u64,
) -> Result<CheckReport, CliError> {
    let n = params.n;
    let matrices: Result<Vec<_>, _> = (1..=n)
        .map(|r| operator_matrix_on_basis(params, r, parts, seed.wrapping_add(0xc0)))
        .collect();
    let matrices = matrices?;
    let mut rows = Vec::new();
    for i in 0..matrices.len() {
        for j in (i + 1)..matrices.len() {
            let ok = matrices[i].commutes_with(&matrices[j]);
            rows.push(WitnessRow {
                label: format!("commutator r={} vs r={}", i + 1, j + 1),
                lhs: "0".into(),
                rhs: if ok { "0".into() } else { "nonzero".into() },
                discrepancy: String::new(),
                pass: ok,
            });
        }
    }
    let mut report = CheckReport::new("operator-commutativity", rows);
    if n == 1 {
        report = report.with_note("single operator, no pairs to compare");
    }
    Ok(report)
}

fn duality(
    family: &PolynomialFamily,
    parts: &[Partition],
    seed: u64,
) -> Result<CheckReport, CliError> {
    let params = family.params();
    let self_dual = params.is_self_dual();
    let dual_family = PolynomialFamily::new(params.dual()?, seed);
    let mut rows = Vec::new();
    for lambda in parts {
        for mu in parts {
            let w = verify_duality(family, &dual_family, lambda, mu)?;
            rows.push(WitnessRow::exact(
                format!("lambda={lambda} mu={mu}"),
                &w.lhs,
                &w.rhs,
            ));
        }
    }
    let mut report = CheckReport::new("duality", rows);
    if !self_dual {
        report = report
            .warning_only()
            .with_note("parameters are not self-dual; duality is reported, not required");
    }
    Ok(report)
}

fn recurrences(
    family: &PolynomialFamily,
    parts: &[Partition],
    seed: u64,
) -> Result<CheckReport, CliError> {
    let n = family.params().n;
    let mut rows = Vec::new();
    for lambda in parts {
        for r in 1..=n {
            let witnesses = verify_recurrence(
                family,
                lambda,
                r,
                POINTS_PER_IDENTITY,
                seed.wrapping_add(0xec),
            )?;
            for (i, w) in witnesses.iter().enumerate() {
                let mut row =
                    WitnessRow::exact(format!("lambda={lambda} r={r} point={i}"), &w.lhs, &w.rhs);
                row.pass &= w.boundary_ok;
                if !w.boundary_ok {
                    row.rhs = format!("{} (boundary coefficient nonzero)", row.rhs);
                }
                rows.push(row);
            }
        }
    }
    Ok(CheckReport::new("recurrence", rows))
}

fn norm_ratios(params: &ParameterSet, parts: &[Partition]) -> Result<CheckReport, CliError> {
    let mut rows = Vec::new();
    for lambda in parts {
        let closed = norm_ratio_closed(params, lambda)?;
        let chain = norm_ratio_via_recurrence(params, lambda)?;
        rows.push(WitnessRow::exact(
            format!("lambda={lambda} closed vs chain"),
            &closed,
            &chain,
        ));
    }
    Ok(CheckReport::new("norm-ratio-exact", rows))
}

fn numeric_norms(
    params: &ParameterSet,
    family: &PolynomialFamily,
    parts: &[Partition],
    args: &Args,
) -> Result<(CheckReport, CheckReport), CliError> {
    let ctx = QuadratureContext::new(params, args.grid_m, args.trunc_n);
    let rel_tol = if params.n == 1 {
        REL_TOL_NORM_ONE_VAR
    } else {
        REL_TOL_NORM
    };

    let mass = ctx.constant_inner();
    let mass_formula = monic_norm_formula(params, &Partition::zero(params.n), ctx.trunc)?;
    let mass_rows = vec![
        WitnessRow::value(
            "grid points per dimension".into(),
            format!("{}", ctx.m_per_dim),
        ),
        WitnessRow::value("product truncation".into(), format!("{}", ctx.trunc)),
        WitnessRow::numeric(
            "constant inner product vs closed formula".into(),
            mass,
            mass_formula,
            REL_TOL_MASS,
        ),
    ];

    let mut norm_rows = Vec::new();
    for lambda in parts {
        let poly = family.polynomial(lambda)?;
        let values = ctx.values_of(&poly);
        let quad = ctx.inner_values(&values, &values);
        let formula = monic_norm_formula(params, lambda, ctx.trunc)?;
        norm_rows.push(WitnessRow::numeric(
            format!("lambda={lambda} quadrature vs formula"),
            quad,
            formula,
            rel_tol,
        ));
    }
    Ok((
        CheckReport::new("quadrature-mass", mass_rows),
        CheckReport::new("norm-formula-numeric", norm_rows),
    ))
}

fn quadrature_checks(
    params: &ParameterSet,
    family: &PolynomialFamily,
    parts: &[Partition],
    args: &Args,
) -> Result<(CheckReport, CheckReport), CliError> {
    let ctx = QuadratureContext::new(params, args.grid_m, args.trunc_n);
    let values: Result<Vec<Vec<f64>>, CliError> = parts
        .iter()
        .map(|p| Ok(ctx.values_of(&family.polynomial(p)?)))
        .collect();
    let values = values?;
    let norms: Vec<f64> = values.iter().map(|v| ctx.inner_values(v, v)).collect();

    let mut ortho_rows = Vec::new();
    for i in 0..parts.len() {
        for j in (i + 1)..parts.len() {
            let cross = ctx.inner_values(&values[i], &values[j]);
            let scale = (norms[i] * norms[j]).sqrt();
            ortho_rows.push(WitnessRow::numeric_abs(
                format!("lambda={} vs mu={}", parts[i], parts[j]),
                cross,
                0.0,
                REL_TOL_ORTHOGONALITY * scale,
            ));
        }
    }

    let mut gs_rows = Vec::new();
    for lambda in parts {
        let exact = family.polynomial(lambda)?;
        let oracle = gram_schmidt_oracle(&ctx, lambda);
        for (mu, approx) in &oracle.coeffs {
            gs_rows.push(WitnessRow::numeric_abs(
                format!("lambda={lambda} coefficient of mu={mu}"),
                *approx,
                rat_to_f64(&exact.coeff(mu)),
                ABS_TOL_RECONSTRUCTION,
            ));
        }
        gs_rows.push(WitnessRow::value(
            format!("lambda={lambda} Gram condition estimate"),
            format_f64(oracle.condition),
        ));
    }
    Ok((
        CheckReport::new("quadrature-orthogonality", ortho_rows),
        CheckReport::new("measure-reconstruction", gs_rows),
    ))
}
