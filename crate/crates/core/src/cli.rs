//! Command-line front end: TOML job configuration, JSON/CSV output and the
//! mapping from engine errors to exit codes.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::hurwitz::{parity_forbids, weighted_hurwitz_direct, NuSign};
use crate::matrix::{
    tau_at_x_determinant, tau_at_x_series, tau_at_x_wronskian, theorem_check, z_andreiev, z_two_fold, DiagonalMatrix,
    MomentKernel,
};
use crate::meijer::{mellin_barnes_phi, series_converged, ContourSpec};
use crate::partition::{enumerate_partitions, Partition};
use crate::rational::{format_rational, parse_rational};
use crate::spectral::{check_identities, phi_series};
use crate::tau::{extract_weighted_hurwitz, schur_to_powersum, tau_schur};
use crate::verify::{run_suite, Criterion, SuiteOptions, SuiteReport};
use crate::weights::{WeightData, DEFAULT_GUARD_BOUND};

/// Exit status for a verification run with failing criteria.
pub const EXIT_VERIFY_FAILED: i32 = 1;

#[derive(Debug, Parser)]
#[command(name = "tauhurwitz", version, about = "Weighted Hurwitz numbers, tau-functions and their integral representations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML job configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads; also read from TAUHURWITZ_THREADS.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Overrides the numeric tolerance of the command.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Weighted Hurwitz numbers, direct and extracted from τ.
    Hurwitz,
    /// Schur and power-sum coefficients of τ as β-series.
    TauCoeffs,
    /// Coefficients of φ_k and the operator identities.
    Phi,
    /// φ̃_k by contour quadrature, compared with its series where it converges.
    Meijer,
    /// τ at a diagonal matrix and the matrix-integral identity.
    Matrix,
    /// The acceptance suite.
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightsConfig {
    #[serde(default)]
    c: Vec<String>,
    #[serde(default)]
    d: Vec<String>,
    beta: String,
    guard_bound: Option<usize>,
}

impl WeightsConfig {
    fn build(&self) -> Result<WeightData> {
        let parse = |v: &[String]| v.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>();
        WeightData::with_guard_bound(
            parse(&self.c)?,
            parse(&self.d)?,
            parse_rational(&self.beta)?,
            self.guard_bound.unwrap_or(DEFAULT_GUARD_BOUND),
        )
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct HurwitzConfig {
    n: usize,
    #[serde(default)]
    d_max: usize,
    mu: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TauCoeffsConfig {
    n_max: usize,
    beta_order: Option<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PhiConfig {
    k: i64,
    order: usize,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum XValue {
    Real(f64),
    Complex([f64; 2]),
}

impl XValue {
    fn value(&self) -> Complex64 {
        match *self {
            XValue::Real(x) => Complex64::new(x, 0.0),
            XValue::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeijerConfig {
    k: i64,
    x: Vec<XValue>,
    #[serde(default)]
    contour: ContourSpec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixConfig {
    eigenvalues: Vec<f64>,
    #[serde(default = "default_n_max")]
    n_max: usize,
    #[serde(default = "default_order")]
    order: usize,
    #[serde(default = "default_tail_tolerance")]
    tail_tolerance: f64,
    #[serde(default = "default_panels")]
    two_fold_panels: usize,
}

fn default_n_max() -> usize {
    12
}
fn default_order() -> usize {
    25
}
fn default_tail_tolerance() -> f64 {
    1e-6
}
fn default_panels() -> usize {
    8
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifyConfig {
    criteria: Option<Vec<String>>,
    mutation: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct JobConfig {
    weights: Option<WeightsConfig>,
    format: Option<Format>,
    seed: Option<u64>,
    threads: Option<usize>,
    hurwitz: Option<HurwitzConfig>,
    tau_coeffs: Option<TauCoeffsConfig>,
    phi: Option<PhiConfig>,
    meijer: Option<MeijerConfig>,
    matrix: Option<MatrixConfig>,
    verify: Option<VerifyConfig>,
}

/// A finished command: the JSON document and its flat rows for CSV.
pub struct Report {
    pub document: Value,
    pub rows: Vec<Value>,
    pub exit_code: i32,
}

fn load(path: &Path) -> Result<JobConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Argument(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Error::Argument(format!("invalid config {}: {}", path.display(), e.message())))
}

fn section<'a, T>(s: &'a Option<T>, name: &str) -> Result<&'a T> {
    s.as_ref()
        .ok_or_else(|| Error::Argument(format!("config has no [{name}] section")))
}

fn weights_of(cfg: &JobConfig) -> Result<WeightData> {
    section(&cfg.weights, "weights")?.build()
}

fn weights_json(w: &WeightData) -> Value {
    json!({
        "c": w.c().iter().map(format_rational).collect::<Vec<_>>(),
        "d": w.d().iter().map(format_rational).collect::<Vec<_>>(),
        "beta": format_rational(w.beta()),
        "guard_bound": w.guard_bound(),
    })
}

fn complex_json(z: Complex64) -> (Value, Value) {
    (json!(z.re), json!(z.im))
}

/// Runs one command against a parsed command line.
pub fn execute(cli: &Cli) -> Result<Report> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Error::Argument("--config PATH is required".into()))?;
    let cfg = load(path)?;
    configure_threads(cli.threads.or(cfg.threads))?;
    let seed = cli.seed.or(cfg.seed);
    match cli.command {
        Command::Hurwitz => cmd_hurwitz(&cfg),
        Command::TauCoeffs => cmd_tau_coeffs(&cfg),
        Command::Phi => cmd_phi(&cfg),
        Command::Meijer => cmd_meijer(&cfg, cli.tolerance),
        Command::Matrix => cmd_matrix(&cfg, cli.tolerance),
        Command::Verify => cmd_verify(&cfg, seed),
    }
}

fn configure_threads(threads: Option<usize>) -> Result<()> {
    let threads = match threads {
        Some(t) => Some(t),
        None => match std::env::var("TAUHURWITZ_THREADS") {
            Ok(v) => Some(
                v.parse()
                    .map_err(|_| Error::Argument(format!("TAUHURWITZ_THREADS={v:?} is not a count")))?,
            ),
            Err(_) => None,
        },
    };
    if let Some(n) = threads {
        if n == 0 {
            return Err(Error::Argument("thread count must be positive".into()));
        }
        // A pool may already exist when called twice in one process; keep it.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn cmd_hurwitz(cfg: &JobConfig) -> Result<Report> {
    let w = weights_of(cfg)?;
    let h = section(&cfg.hurwitz, "hurwitz")?;
    if h.n == 0 {
        return Err(Error::Argument("hurwitz.n must be positive".into()));
    }
    let mus = match &h.mu {
        Some(list) => {
            let parsed = list.iter().map(|s| Partition::parse(s)).collect::<Result<Vec<_>>>()?;
            if let Some(bad) = parsed.iter().find(|p| p.weight() != h.n) {
                return Err(Error::Argument(format!("mu = {bad} is not a partition of {}", h.n)));
            }
            parsed
        }
        None => enumerate_partitions(h.n)?,
    };
    let mut rows = Vec::new();
    for mu in &mus {
        for d in 0..=h.d_max {
            let direct = weighted_hurwitz_direct(&w, d, mu)?;
            let extracted = extract_weighted_hurwitz(&w, d, mu)?;
            rows.push(json!({
                "N": h.n,
                "d": d,
                "mu": mu.to_string(),
                "H_direct": format_rational(&direct),
                "H_extracted": format_rational(&extracted),
                "equal": direct == extracted,
                "parity_forbidden": parity_forbids(mu, d),
            }));
        }
    }
    Ok(Report {
        document: json!({
            "command": "hurwitz",
            "weights": weights_json(&w),
            "N": h.n,
            "d_max": h.d_max,
            "all_equal": rows.iter().all(|r| r["equal"] == true),
            "rows": rows,
        }),
        rows,
        exit_code: 0,
    })
}

fn cmd_tau_coeffs(cfg: &JobConfig) -> Result<Report> {
    let w = weights_of(cfg)?;
    let t = section(&cfg.tau_coeffs, "tau_coeffs")?;
    let beta_order = t.beta_order.unwrap_or(t.n_max as i64 + 3);
    let schur = tau_schur(&w, t.n_max, beta_order)?;
    let power = schur_to_powersum(&schur)?;
    let mut rows = Vec::new();
    for (basis, map) in [("schur", &schur.coeffs), ("power_sum", &power.series)] {
        for (lam, series) in map {
            for (e, c) in series.terms() {
                rows.push(json!({
                    "basis": basis,
                    "partition": lam.to_string(),
                    "exponent": e,
                    "coefficient": format_rational(c),
                }));
            }
        }
    }
    Ok(Report {
        document: json!({
            "command": "tau-coeffs",
            "weights": weights_json(&w),
            "n_max": t.n_max,
            "beta_order": beta_order,
            "rows": rows,
        }),
        rows,
        exit_code: 0,
    })
}

fn cmd_phi(cfg: &JobConfig) -> Result<Report> {
    let w = weights_of(cfg)?;
    let p = section(&cfg.phi, "phi")?;
    let phi = phi_series(&w, p.k, p.order)?;
    let identities = check_identities(&w, p.k, p.order)?;
    let rows: Vec<Value> = phi
        .coefficients
        .iter()
        .enumerate()
        .map(|(j, c)| json!({"exponent": phi.base_exponent + j as i64, "coefficient": format_rational(c)}))
        .collect();
    Ok(Report {
        document: json!({
            "command": "phi",
            "weights": weights_json(&w),
            "k": p.k,
            "T": p.order,
            "identities": identities,
            "rows": rows,
        }),
        rows,
        exit_code: 0,
    })
}

fn cmd_meijer(cfg: &JobConfig, tolerance: Option<f64>) -> Result<Report> {
    let w = weights_of(cfg)?;
    let m = section(&cfg.meijer, "meijer")?;
    let mut spec = m.contour.clone();
    if let Some(t) = tolerance {
        spec.tolerance = t;
    }
    let mut rows = Vec::new();
    for xv in &m.x {
        let x = xv.value();
        let v = mellin_barnes_phi(&w, m.k, x, &spec)?;
        let series = series_converged(&w, m.k, x).ok();
        let (x_re, x_im) = complex_json(x);
        let (v_re, v_im) = complex_json(v.value);
        rows.push(json!({
            "x_re": x_re,
            "x_im": x_im,
            "value_re": v_re,
            "value_im": v_im,
            "error_estimate": v.error_estimate,
            "contour": v.kind,
            "sigma": v.sigma,
            "extent": v.extent,
            "evaluations": v.evaluations,
            "series_re": series.map(|s| s.re),
            "series_im": series.map(|s| s.im),
            "series_rel_error": series.map(|s| (v.value - s).norm() / s.norm()),
        }));
    }
    Ok(Report {
        document: json!({
            "command": "meijer",
            "weights": weights_json(&w),
            "k": m.k,
            "contour": spec,
            "tolerance": spec.tolerance,
            "rows": rows,
        }),
        rows,
        exit_code: 0,
    })
}

fn cmd_matrix(cfg: &JobConfig, tolerance: Option<f64>) -> Result<Report> {
    let w = weights_of(cfg)?;
    let m = section(&cfg.matrix, "matrix")?;
    let tail_tolerance = tolerance.unwrap_or(m.tail_tolerance);
    let x = DiagonalMatrix::new(m.eigenvalues.clone())?;
    let n = x.n();
    let series = tau_at_x_series(&w, &x, m.n_max, tail_tolerance)?;
    let det = tau_at_x_determinant(&w, &x, m.order)?;
    let wr = tau_at_x_wronskian(&w, &x, m.order)?;
    let mut row = Map::new();
    row.insert("n".into(), json!(n));
    row.insert("eigenvalues".into(), json!(m.eigenvalues));
    row.insert("series".into(), json!(series.value));
    row.insert("series_tail_estimate".into(), json!(series.tail_estimate));
    row.insert("determinant".into(), json!(det));
    row.insert("wronskian".into(), json!(wr));
    row.insert("rel_det_vs_series".into(), json!((det - series.value).abs() / series.value.abs()));
    row.insert("rel_det_vs_wronskian".into(), json!((det - wr).abs() / wr.abs()));
    if n == 1 {
        let phi = phi_series(&w, 1, m.order)?;
        row.insert("phi_1".into(), json!(phi.evaluate_f64(m.eigenvalues[0])));
    }
    let integral_note = if m.eigenvalues.iter().all(|&v| v > 0.0) {
        let r = theorem_check(&w, &x, m.n_max, tail_tolerance)?;
        row.insert("z_re".into(), json!(r.z.re));
        row.insert("z_im".into(), json!(r.z.im));
        row.insert("prefactor".into(), json!(r.prefactor));
        row.insert("epsilon".into(), json!(r.epsilon));
        row.insert("rhs_re".into(), json!(r.rhs.re));
        row.insert("rhs_im".into(), json!(r.rhs.im));
        row.insert("theorem_discrepancy".into(), json!(r.relative_discrepancy));
        row.insert("literal_ratio_re".into(), json!(r.literal_ratio.re));
        row.insert("literal_ratio_im".into(), json!(r.literal_ratio.im));
        if n == 2 {
            let kernel = MomentKernel::new(w.clone(), 2);
            let a = z_andreiev(&kernel, &x)?;
            let b = z_two_fold(&kernel, &x, m.two_fold_panels)?;
            row.insert("z_two_fold_re".into(), json!(b.re));
            row.insert("z_two_fold_im".into(), json!(b.im));
            row.insert("rel_andreiev_vs_two_fold".into(), json!((a - b).norm() / a.norm()));
        }
        Value::Null
    } else {
        json!("matrix-integral side skipped: needs positive eigenvalues for ln x")
    };
    let row = Value::Object(row);
    Ok(Report {
        document: json!({
            "command": "matrix",
            "weights": weights_json(&w),
            "n_max": m.n_max,
            "order": m.order,
            "tail_tolerance": tail_tolerance,
            "note": integral_note,
            "rows": [row.clone()],
        }),
        rows: vec![row],
        exit_code: 0,
    })
}

fn cmd_verify(cfg: &JobConfig, seed: Option<u64>) -> Result<Report> {
    let v = section(&cfg.verify, "verify")?;
    let mut options = SuiteOptions::default();
    if let Some(s) = seed {
        options.seed = s;
    }
    if let Some(list) = &v.criteria {
        options.only = Some(
            list.iter()
                .map(|s| Criterion::parse(s).ok_or_else(|| Error::Argument(format!("unknown criterion {s:?}"))))
                .collect::<Result<_>>()?,
        );
    }
    options.nu_sign = match v.mutation.as_deref() {
        None | Some("none") => NuSign::Correct,
        Some("drop-length") => NuSign::DropLength,
        Some(other) => return Err(Error::Argument(format!("unknown mutation {other:?}"))),
    };
    let report = run_suite(&options);
    Ok(verify_report(report))
}

fn verify_report(report: SuiteReport) -> Report {
    let rows: Vec<Value> = report
        .criteria
        .iter()
        .flat_map(|c| {
            c.measurements.iter().map(move |m| {
                json!({
                    "id": c.id,
                    "measurement": m.name,
                    "value": m.value,
                    "tolerance": m.tolerance,
                    "passed": m.passed,
                    "seconds": c.seconds,
                })
            })
        })
        .collect();
    let exit_code = if report.passed { 0 } else { EXIT_VERIFY_FAILED };
    Report {
        document: json!({"command": "verify", "suite": report}),
        rows,
        exit_code,
    }
}

fn csv_field(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Writes the report in the requested format.
pub fn write_report(report: &Report, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &report.document)?;
            writeln!(out)
        }
        Format::Csv => {
            let mut header: Vec<String> = Vec::new();
            for row in &report.rows {
                if let Value::Object(map) = row {
                    for k in map.keys() {
                        if !header.contains(k) {
                            header.push(k.clone());
                        }
                    }
                }
            }
            let mut wtr = csv::Writer::from_writer(out);
            wtr.write_record(&header)?;
            for row in &report.rows {
                wtr.write_record(header.iter().map(|k| csv_field(&row[k.as_str()])))?;
            }
            wtr.flush()
        }
    }
}

/// The structured error object printed on failure.
pub fn error_json(e: &Error) -> Value {
    let mut obj = json!({
        "kind": e.kind(),
        "code": e.code() as i32,
        "message": e.to_string(),
    });
    if let Error::Accuracy { estimate, tolerance, .. } = e {
        obj["estimate"] = json!(estimate);
        obj["tolerance"] = json!(tolerance);
    }
    json!({ "error": obj })
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            let err = json!({"error": {"kind": "usage", "code": 2, "message": e.to_string().trim()}});
            eprintln!("{err}");
            return 2;
        }
    };
    let fail = |e: Error| {
        eprintln!("{}", error_json(&e));
        e.code() as i32
    };
    let format_from_config = |cli: &Cli| -> Option<Format> {
        let text = std::fs::read_to_string(cli.config.as_ref()?).ok()?;
        toml::from_str::<JobConfig>(&text).ok()?.format
    };
    match execute(&cli) {
        Ok(report) => {
            let format = cli.format.or_else(|| format_from_config(&cli)).unwrap_or(Format::Json);
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            match write_report(&report, format, &mut lock) {
                Ok(()) => {}
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                Err(e) => return fail(Error::Capacity(format!("cannot write output: {e}"))),
            }
            report.exit_code
        }
        Err(e) => fail(e),
    }
}
