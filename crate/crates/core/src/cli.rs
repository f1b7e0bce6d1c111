//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification or computation failure, 2 invalid
//! arguments. Data goes to stdout or `--output`; diagnostics to stderr.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::analytic::BoundState;
use crate::format::{csv_table, fmt_num, fmt_opt, json_num, json_opt, json_text};
use crate::harness::{
    degeneracy_ladder, full_comparison, run_suite, ComparisonRow, FaultInjection, Suite,
    SweepConfig, Tolerances, DEFAULT_GRID,
};
use crate::model::{MassModel, Parity, QuantumNumbers};
use crate::oracle::check_sizes;
use crate::pct::PctMap;
use crate::{Error, Result};

pub const THREADS_ENV: &str = "PDM_SPECTRA_THREADS";

pub const SPECTRUM_HEADER: [&str; 12] = [
    "n_r",
    "ell",
    "d",
    "ell_d",
    "kappa",
    "lambda",
    "delta",
    "E_analytic",
    "E_numeric",
    "rel_err",
    "nodes",
    "pass",
];

const BOOLEAN_FLAGS: [&str; 1] = ["no-oracle"];

#[derive(Parser, Debug)]
#[command(
    name = "pdm-spectra",
    version,
    about = "Bound states of the position-dependent mass m(r) = 1/(1+zeta^2 r^2)^2 in d dimensions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analytic energies, optionally checked against the finite-difference oracle.
    #[command(args_override_self = true)]
    Spectrum(SpectrumArgs),
    /// Sample one eigenfunction in both coordinate pictures.
    #[command(args_override_self = true)]
    Wavefunction(WavefunctionArgs),
    /// Run verification suites; exit 1 if any check fails.
    #[command(args_override_self = true)]
    Verify(VerifyArgs),
    /// Energies along a (ell - k, d + 2k) ladder.
    #[command(args_override_self = true)]
    Degeneracy(DegeneracyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ParityArg {
    Even,
    Odd,
}

impl From<ParityArg> for Parity {
    fn from(p: ParityArg) -> Self {
        match p {
            ParityArg::Even => Parity::Even,
            ParityArg::Odd => Parity::Odd,
        }
    }
}

#[derive(Args, Debug)]
struct Common {
    /// Mass-profile parameter zeta > 0.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    zeta: f64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Write data here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// key=value file merged under explicit flags.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    tol: ToleranceArgs,
}

#[derive(Args, Debug)]
struct ToleranceArgs {
    /// Relative oracle-vs-analytic energy tolerance [default: 1e-5].
    #[arg(long, allow_hyphen_values = true)]
    tol_oracle: Option<f64>,
    /// Normalization tolerance [default: 1e-8].
    #[arg(long, allow_hyphen_values = true)]
    tol_norm: Option<f64>,
    /// Relative radial-equation residual tolerance [default: 1e-8].
    #[arg(long, allow_hyphen_values = true)]
    tol_residual: Option<f64>,
    /// Gram-matrix tolerance [default: 1e-8].
    #[arg(long, allow_hyphen_values = true)]
    tol_orthonormality: Option<f64>,
    /// Relative ladder spread counted as degenerate [default: 1e-9].
    #[arg(long, allow_hyphen_values = true)]
    tol_degeneracy: Option<f64>,
    /// Transform identity tolerance [default: 1e-10].
    #[arg(long, allow_hyphen_values = true)]
    tol_transform: Option<f64>,
}

impl ToleranceArgs {
    fn resolve(&self) -> Result<Tolerances> {
        let mut t = Tolerances::default();
        for (slot, value, name) in [
            (&mut t.oracle_rel, self.tol_oracle, "tol-oracle"),
            (&mut t.norm, self.tol_norm, "tol-norm"),
            (&mut t.residual_rel, self.tol_residual, "tol-residual"),
            (
                &mut t.orthonormality,
                self.tol_orthonormality,
                "tol-orthonormality",
            ),
            (&mut t.degeneracy_rel, self.tol_degeneracy, "tol-degeneracy"),
            (&mut t.transform_rel, self.tol_transform, "tol-transform"),
        ] {
            if let Some(v) = value {
                if !(v.is_finite() && v >= 0.0) {
                    return Err(Error::InvalidInput(format!(
                        "--{name} must be a non-negative number, got {v}"
                    )));
                }
                *slot = v;
            }
        }
        Ok(t)
    }
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[command(flatten)]
    common: Common,
    /// Comma-separated dimensions; empty for an empty sweep.
    #[arg(long = "d", default_value = "3")]
    dims: String,
    /// Largest angular momentum (d >= 2).
    #[arg(long, default_value_t = 2)]
    ell_max: u32,
    /// Largest radial quantum number.
    #[arg(long, default_value_t = 4)]
    n_max: u32,
    /// Restrict d = 1 rows to one parity.
    #[arg(long, value_enum)]
    parity: Option<ParityArg>,
    /// Oracle intervals on the finer grid.
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: usize,
    /// Skip the finite-difference oracle.
    #[arg(long)]
    no_oracle: bool,
    /// Test hook: shift one energy, `n_r:ell:d:delta`.
    #[arg(long, hide = true, allow_hyphen_values = true)]
    inject_fault: Option<String>,
}

#[derive(Args, Debug)]
struct WavefunctionArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 0)]
    n: u32,
    #[arg(long, default_value_t = 0)]
    ell: u32,
    #[arg(long, default_value_t = 3)]
    d: u32,
    /// Parity, required for d = 1.
    #[arg(long, value_enum)]
    parity: Option<ParityArg>,
    #[arg(long, default_value_t = 500)]
    points: usize,
    /// Upper end of the radial grid (default 10/zeta).
    #[arg(long, allow_hyphen_values = true)]
    r_max: Option<f64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// all, transform, spectrum, residual, structure, scaling, degeneracy, convergence
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: usize,
}

#[derive(Args, Debug)]
struct DegeneracyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 0)]
    n: u32,
    #[arg(long, default_value_t = 1)]
    ell: u32,
    #[arg(long, default_value_t = 3)]
    d_start: u32,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: usize,
    #[arg(long)]
    no_oracle: bool,
}

/// Rendered output and exit status of a successful parse.
struct Outcome {
    text: String,
    code: i32,
}

/// Runs the CLI on `argv` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let argv = match merge_config(argv) {
        Ok(a) => a,
        Err(e) => return usage_error(&e),
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let pool = match thread_pool() {
        Ok(p) => p,
        Err(e) => return usage_error(&e),
    };
    let prepared = match prepare(cli.command) {
        Ok(p) => p,
        Err(e) => return usage_error(&e),
    };
    let output = prepared.output.clone();
    let outcome = match pool {
        Some(pool) => pool.install(|| execute(prepared)),
        None => execute(prepared),
    };
    match outcome {
        Ok(outcome) => match emit(&outcome.text, output.as_ref()) {
            Ok(()) => outcome.code,
            Err(e) => {
                eprintln!("error: {e}");
                1
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn usage_error(e: &Error) -> i32 {
    eprintln!("error: {e}");
    eprintln!("run `pdm-spectra --help` for usage");
    2
}

fn emit(text: &str, path: Option<&PathBuf>) -> std::io::Result<()> {
    use std::io::Write;
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

fn thread_pool() -> Result<Option<rayon::ThreadPool>> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(None);
    };
    let threads: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Error::InvalidInput(format!(
            "{THREADS_ENV} must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map(Some)
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))
}

/// Splices `--key value` pairs from a `--config` file in front of the
/// explicit flags, so explicit flags override them.
fn merge_config(argv: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut path = None;
    for (i, arg) in argv.iter().enumerate().skip(1) {
        let Some(arg) = arg.to_str() else { continue };
        if let Some(p) = arg.strip_prefix("--config=") {
            path = Some(PathBuf::from(p));
        } else if arg == "--config" {
            path = argv.get(i + 1).map(PathBuf::from);
        }
    }
    let Some(path) = path else { return Ok(argv) };
    if argv.len() < 2 {
        return Ok(argv);
    }
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::InvalidInput(format!("cannot read config {}: {e}", path.display())))?;
    let mut spliced: Vec<OsString> = argv[..2].to_vec();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::InvalidInput(format!(
                "{}:{}: expected key=value",
                path.display(),
                lineno + 1
            ))
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key == "config" {
            continue;
        }
        if BOOLEAN_FLAGS.contains(&key) {
            match value {
                "true" => spliced.push(format!("--{key}").into()),
                "false" => {}
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "{}:{}: {key} must be true or false",
                        path.display(),
                        lineno + 1
                    )))
                }
            }
        } else {
            spliced.push(format!("--{key}={value}").into());
        }
    }
    spliced.extend(argv[2..].iter().cloned());
    Ok(spliced)
}

/// Fully validated request, built before any computation.
struct Prepared {
    output: Option<PathBuf>,
    format: OutputFormat,
    zeta: f64,
    tolerances: Tolerances,
    job: Job,
}

enum Job {
    Spectrum(SweepConfig),
    Wavefunction {
        qn: QuantumNumbers,
        radii: Vec<f64>,
    },
    Verify {
        suite: Suite,
        grid: usize,
    },
    Degeneracy {
        n: u32,
        ell: u32,
        d_start: u32,
        grid: Option<usize>,
    },
}

fn check_zeta(zeta: f64) -> Result<()> {
    MassModel::squared_lorentzian(zeta).map(|_| ())
}

fn parse_dims(raw: &str) -> Result<Vec<u32>> {
    if raw.trim().is_empty() {
        return Ok(Vec::new());
    }
    raw.split(',')
        .map(|s| {
            s.trim()
                .parse::<u32>()
                .ok()
                .filter(|&d| d >= 1)
                .ok_or_else(|| Error::InvalidInput(format!("invalid dimension {s:?}")))
        })
        .collect()
}

fn parse_fault(raw: &str, zeta: f64, parity: Option<Parity>) -> Result<FaultInjection> {
    let parts: Vec<&str> = raw.split(':').collect();
    let bad = || {
        Error::InvalidInput(format!(
            "--inject-fault expects n_r:ell:d:delta, got {raw:?}"
        ))
    };
    if parts.len() != 4 {
        return Err(bad());
    }
    let n: u32 = parts[0].parse().map_err(|_| bad())?;
    let ell: u32 = parts[1].parse().map_err(|_| bad())?;
    let d: u32 = parts[2].parse().map_err(|_| bad())?;
    let delta: f64 = parts[3].parse().map_err(|_| bad())?;
    let parity = if d == 1 { parity } else { None };
    Ok(FaultInjection {
        qn: QuantumNumbers::new(n, ell, d, parity)?,
        zeta,
        delta,
    })
}

fn prepare(command: Command) -> Result<Prepared> {
    let (common, job) = match command {
        Command::Spectrum(a) => {
            check_zeta(a.common.zeta)?;
            let parity = a.parity.map(Parity::from);
            if !a.no_oracle {
                check_sizes(a.n_max as usize + 1, a.grid)?;
            }
            let fault = a
                .inject_fault
                .as_deref()
                .map(|raw| parse_fault(raw, a.common.zeta, parity))
                .transpose()?;
            let config = SweepConfig {
                n_max: a.n_max,
                ell_max: a.ell_max,
                dims: parse_dims(&a.dims)?,
                zetas: vec![a.common.zeta],
                parity,
                grid_size: a.grid,
                run_oracle: !a.no_oracle,
                tolerances: a.common.tol.resolve()?,
                fault,
            };
            (a.common, Job::Spectrum(config))
        }
        Command::Wavefunction(a) => {
            check_zeta(a.common.zeta)?;
            let parity = a.parity.map(Parity::from);
            let qn = QuantumNumbers::new(a.n, a.ell, a.d, parity)?;
            if a.points < 2 {
                return Err(Error::InvalidInput("--points must be at least 2".into()));
            }
            let r_max = a.r_max.unwrap_or(10.0 / a.common.zeta);
            if !(r_max.is_finite() && r_max > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "--r-max must be positive, got {r_max}"
                )));
            }
            let radii = (0..a.points)
                .map(|i| r_max * i as f64 / (a.points - 1) as f64)
                .collect();
            (a.common, Job::Wavefunction { qn, radii })
        }
        Command::Verify(a) => {
            check_zeta(a.common.zeta)?;
            let suite: Suite = a.suite.parse()?;
            check_sizes(5, a.grid)?;
            (
                a.common,
                Job::Verify {
                    suite,
                    grid: a.grid,
                },
            )
        }
        Command::Degeneracy(a) => {
            check_zeta(a.common.zeta)?;
            let grid = (!a.no_oracle).then_some(a.grid);
            if let Some(g) = grid {
                check_sizes(a.n as usize + 1, g)?;
            }
            if a.ell == 0 || !(a.d_start == 2 || a.d_start == 3) {
                return Err(Error::InvalidInput(
                    "degeneracy needs --ell >= 1 and --d-start 2 or 3".into(),
                ));
            }
            (
                a.common,
                Job::Degeneracy {
                    n: a.n,
                    ell: a.ell,
                    d_start: a.d_start,
                    grid,
                },
            )
        }
    };
    Ok(Prepared {
        output: common.output,
        format: common.format,
        zeta: common.zeta,
        tolerances: common.tol.resolve()?,
        job,
    })
}

fn execute(p: Prepared) -> Result<Outcome> {
    match &p.job {
        Job::Spectrum(config) => spectrum(&p, config),
        Job::Wavefunction { qn, radii } => wavefunction(&p, *qn, radii),
        Job::Verify { suite, grid } => verify(&p, *suite, *grid),
        Job::Degeneracy {
            n,
            ell,
            d_start,
            grid,
        } => degeneracy(&p, *n, *ell, *d_start, *grid),
    }
}

fn tolerances_json(t: &Tolerances) -> Value {
    json!({
        "oracle_rel": json_num(t.oracle_rel),
        "norm": json_num(t.norm),
        "residual_rel": json_num(t.residual_rel),
        "orthonormality": json_num(t.orthonormality),
        "degeneracy_rel": json_num(t.degeneracy_rel),
        "transform_rel": json_num(t.transform_rel),
    })
}

fn spectrum(p: &Prepared, config: &SweepConfig) -> Result<Outcome> {
    let rows = full_comparison(config)?;
    for row in rows.iter().filter(|r| r.error.is_some()) {
        eprintln!(
            "row (n_r={}, ell={}, d={}) failed: {}",
            row.n_r,
            row.ell,
            row.d,
            row.error.as_deref().unwrap_or_default()
        );
    }
    let code = if rows.iter().all(|r| r.pass) { 0 } else { 1 };
    let text = match p.format {
        OutputFormat::Csv => {
            let body: Vec<Vec<String>> = rows.iter().map(spectrum_csv_row).collect();
            csv_table(&SPECTRUM_HEADER, &body)
        }
        OutputFormat::Json => json_text(&json!({
            "zeta": json_num(p.zeta),
            "tolerances": tolerances_json(&config.tolerances),
            "states": rows.iter().map(spectrum_json_row).collect::<Vec<_>>(),
        })),
    };
    Ok(Outcome { text, code })
}

fn spectrum_csv_row(r: &ComparisonRow) -> Vec<String> {
    vec![
        r.n_r.to_string(),
        r.ell.to_string(),
        r.d.to_string(),
        fmt_num(r.ell_d),
        fmt_num(r.kappa),
        fmt_num(r.lambda),
        fmt_num(r.delta),
        fmt_num(r.e_analytic),
        fmt_opt(r.e_numeric),
        fmt_opt(r.rel_err),
        r.nodes.to_string(),
        if r.pass { "PASS" } else { "FAIL" }.to_string(),
    ]
}

fn spectrum_json_row(r: &ComparisonRow) -> Value {
    json!({
        "n_r": r.n_r,
        "ell": r.ell,
        "d": r.d,
        "ell_d": json_num(r.ell_d),
        "kappa": json_num(r.kappa),
        "lambda": json_num(r.lambda),
        "delta": json_num(r.delta),
        "E_analytic": json_num(r.e_analytic),
        "E_numeric": json_opt(r.e_numeric),
        "rel_err": json_opt(r.rel_err),
        "nodes": r.nodes,
        "pass": r.pass,
    })
}

fn wavefunction(p: &Prepared, qn: QuantumNumbers, radii: &[f64]) -> Result<Outcome> {
    let state = BoundState::new(qn, p.zeta)?;
    let model = MassModel::squared_lorentzian(p.zeta)?;
    let map = PctMap::new(model.clone(), qn.d)?;
    let samples = radii
        .iter()
        .map(|&r| -> Result<[f64; 5]> {
            let q = map.q_of_r(r)?;
            Ok([r, q, model.mass(r)?, state.radial(r), state.phi(q)])
        })
        .collect::<Result<Vec<_>>>()?;
    let text = match p.format {
        OutputFormat::Csv => {
            let body: Vec<Vec<String>> = samples
                .iter()
                .map(|s| s.iter().map(|&x| fmt_num(x)).collect())
                .collect();
            csv_table(&["r", "q", "m", "R", "phi"], &body)
        }
        OutputFormat::Json => json_text(&json!({
            "zeta": json_num(p.zeta),
            "n_r": qn.n_r,
            "ell": qn.ell,
            "d": qn.d,
            "parity": qn.parity,
            "energy": json_num(state.energy()),
            "points": samples.iter().map(|s| json!({
                "r": json_num(s[0]),
                "q": json_num(s[1]),
                "m": json_num(s[2]),
                "R": json_num(s[3]),
                "phi": json_num(s[4]),
            })).collect::<Vec<_>>(),
        })),
    };
    Ok(Outcome { text, code: 0 })
}

fn verify(p: &Prepared, suite: Suite, grid: usize) -> Result<Outcome> {
    let checks = run_suite(suite, grid, &p.tolerances)?;
    let all_pass = checks.iter().all(|c| c.pass);
    for c in &checks {
        eprintln!(
            "{} {}: {} (threshold {})",
            if c.pass { "PASS" } else { "FAIL" },
            c.check,
            fmt_num(c.measured),
            fmt_num(c.threshold)
        );
    }
    let text = match p.format {
        OutputFormat::Csv => {
            let body: Vec<Vec<String>> = checks
                .iter()
                .map(|c| {
                    vec![
                        c.suite.to_string(),
                        c.check.clone(),
                        fmt_num(c.measured),
                        fmt_num(c.threshold),
                        if c.pass { "PASS" } else { "FAIL" }.to_string(),
                    ]
                })
                .collect();
            csv_table(&["suite", "check", "measured", "threshold", "pass"], &body)
        }
        OutputFormat::Json => json_text(&json!({
            "grid": grid,
            "tolerances": tolerances_json(&p.tolerances),
            "checks": checks.iter().map(|c| json!({
                "suite": c.suite,
                "check": c.check,
                "measured": json_num(c.measured),
                "threshold": json_num(c.threshold),
                "pass": c.pass,
            })).collect::<Vec<_>>(),
            "pass": all_pass,
        })),
    };
    Ok(Outcome {
        text,
        code: if all_pass { 0 } else { 1 },
    })
}

fn degeneracy(
    p: &Prepared,
    n: u32,
    ell: u32,
    d_start: u32,
    grid: Option<usize>,
) -> Result<Outcome> {
    let report = degeneracy_ladder(n, ell, d_start, p.zeta, grid, &p.tolerances)?;
    eprintln!(
        "max_pairwise_spread={} claim_satisfied={}",
        fmt_num(report.max_pairwise_spread),
        report.claim_satisfied
    );
    let code = if report.oracle_confirmed == Some(false) {
        1
    } else {
        0
    };
    let text = match p.format {
        OutputFormat::Csv => {
            let body: Vec<Vec<String>> = report
                .ladder
                .iter()
                .map(|r| {
                    vec![
                        r.n_r.to_string(),
                        r.ell.to_string(),
                        r.d.to_string(),
                        fmt_num(r.ell_d),
                        fmt_num(r.e_analytic),
                        fmt_opt(r.e_numeric),
                        fmt_opt(r.abs_err),
                    ]
                })
                .collect();
            csv_table(
                &[
                    "n_r",
                    "ell",
                    "d",
                    "ell_d",
                    "E_analytic",
                    "E_numeric",
                    "abs_err",
                ],
                &body,
            )
        }
        OutputFormat::Json => json_text(&json!({
            "zeta": json_num(p.zeta),
            "ladder": report.ladder.iter().map(|r| json!({
                "n_r": r.n_r,
                "ell": r.ell,
                "d": r.d,
                "ell_d": json_num(r.ell_d),
                "E_analytic": json_num(r.e_analytic),
                "E_numeric": json_opt(r.e_numeric),
                "abs_err": json_opt(r.abs_err),
            })).collect::<Vec<_>>(),
            "max_pairwise_spread": json_num(report.max_pairwise_spread),
            "claim_satisfied": report.claim_satisfied,
            "oracle_confirmed": report.oracle_confirmed,
        })),
    };
    Ok(Outcome { text, code })
}
