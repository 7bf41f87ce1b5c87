//! Command-line front end.
//!
//! Every command writes one JSON document (or, for `sweep`, one CSV table) to
//! stdout or to `--out`. Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success, including a `decide` answer of "no" |
//! | 1 | internal error |
//! | 2 | refusal: no negative Ricci metric exists for the requested input |
//! | 3 | certificate failure |
//! | 4 | usage error (malformed flags or literals) |
//! | 5 | I/O failure |
//! | 6 | parameter out of range |

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use nalgebra::DMatrix;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::DerivationMatrix;
use crate::catalog::{lower_nilpotent_derivations, rank_one_torus, torus, Family, FiliformSpec, TorusParams};
use crate::construct::{certify, construct, construct_ln, MetricFile};
use crate::criterion::{critical_l, decide_ln, decide_qn, iota_ln, iota_qn, trace_t, Decision};
use crate::error::Error;
use crate::linalg::{format_rational, parse_rational, q, qf, QMatrix, Rational};
use crate::ricci::{
    matrix_rows, necessity_trace_bounds, nilpotent_scalar_curvature, ricci_blocks, ricci_nilpotent, sample_gram,
    sorted_eigenvalues, ExtensionMetric,
};

/// Environment variable naming the directory `construct` writes into.
pub const OUT_DIR_ENV: &str = "FILIFORM_OUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_REFUSED: i32 = 2;
pub const EXIT_CERTIFICATE: i32 = 3;
pub const EXIT_USAGE: i32 = 4;
pub const EXIT_IO: i32 = 5;
pub const EXIT_RANGE: i32 = 6;

#[derive(Debug, Parser)]
#[command(name = "filiform", version, about = "Negative Ricci curvature on solvable extensions of L_n and Q_n")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Write the result here instead of stdout (for `construct`: the metric file).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Structure constants and torus of L_n or Q_n.
    Catalog {
        #[command(flatten)]
        alg: AlgebraArgs,
        /// Also print the rank-one torus diag(1, 2+r, …, (n-1)+r, n+2r).
        #[arg(long)]
        r: Option<usize>,
    },
    /// Ricci operator of the nilradical, or block form of an extension when `--a/--d` are given.
    Ricci {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[command(flatten)]
        params: OptionalParams,
        /// Random flag-compatible metric from this seed; identity metric when absent.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Decide whether the extension by the torus element carries negative Ricci curvature.
    Decide {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[command(flatten)]
        params: Params,
    },
    /// Build and certify a negative Ricci metric.
    Construct {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[command(flatten)]
        params: Params,
        /// Add a random strictly lower derivation part drawn from this seed.
        #[arg(long)]
        lower_seed: Option<u64>,
    },
    /// Recompute the Ricci spectrum of a metric file.
    Certify {
        /// A metric file written by `construct` (or any file of that shape).
        #[arg(long)]
        metric: PathBuf,
    },
    /// Decide every point of an (a, d) grid, written as CSV.
    Sweep {
        #[command(flatten)]
        alg: AlgebraArgs,
        /// Range `lo..hi/step` (or `lo..hi:step`), endpoints included.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        /// Worker threads; 0 uses all cores.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Random-metric search for a counterexample at a "no" point of Q_n.
    NecessityTest {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        /// Keep the derivation diagonal instead of adding random lower parts.
        #[arg(long)]
        diagonal_only: bool,
    },
}

#[derive(Debug, Args)]
pub struct AlgebraArgs {
    /// `Ln` or `Qn`.
    #[arg(long, default_value = "Qn")]
    pub family: Family,
    #[arg(long)]
    pub n: usize,
}

/// Torus coordinates. For `Qn` the eigenvalues are `a, d, a+d, …`; for `Ln`
/// they are `α = a` and `β = d` in `αφ₁ + βφ₂`.
#[derive(Debug, Args)]
pub struct Params {
    #[arg(long, allow_hyphen_values = true, value_parser = rational)]
    pub a: Rational,
    #[arg(long, allow_hyphen_values = true, value_parser = rational)]
    pub d: Rational,
}

#[derive(Debug, Args)]
pub struct OptionalParams {
    #[arg(long, allow_hyphen_values = true, value_parser = rational, requires = "d")]
    pub a: Option<Rational>,
    #[arg(long, allow_hyphen_values = true, value_parser = rational, requires = "a")]
    pub d: Option<Rational>,
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Parses `lo..hi/step` or `lo..hi:step` into the exact grid `lo, lo+step, …` up to `hi`.
pub fn parse_grid(s: &str) -> Result<Vec<Rational>, String> {
    let bad = || format!("expected lo..hi/step, got {s:?}");
    let (lo, rest) = s.split_once("..").ok_or_else(bad)?;
    let (hi, step) = match rest.split_once(':') {
        Some(parts) => parts,
        None => match rest.matches('/').count() {
            1 => rest.split_once('/').ok_or_else(bad)?,
            _ => return Err(format!("{s:?}: use lo..hi:step when hi or step is a fraction")),
        },
    };
    let (lo, hi, step) = (rational(lo)?, rational(hi)?, rational(step)?);
    if !step.is_positive() {
        return Err(format!("{s:?}: step must be positive"));
    }
    if hi < lo {
        return Err(format!("{s:?}: empty range"));
    }
    let count = ((&hi - &lo) / &step).floor().to_integer();
    if count > 100_000u32.into() {
        return Err(format!("{s:?}: more than 100000 points"));
    }
    let mut out = Vec::new();
    let mut x = lo;
    while x <= hi {
        out.push(x.clone());
        x += &step;
    }
    Ok(out)
}

/// A failed run: exit code and message for stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Refused(_) | Error::NilpotentDerivation(_) => EXIT_REFUSED,
            Error::CertificateFailure(_)
            | Error::DegenerationExhausted { .. }
            | Error::NotConverged(_)
            | Error::NotInCone(_) => EXIT_CERTIFICATE,
            Error::Io(_) => EXIT_IO,
            Error::ParseRational(_) | Error::Format(_) => EXIT_USAGE,
            Error::InvalidParameter(_) | Error::Unsupported(_) | Error::DimensionMismatch { .. } => EXIT_RANGE,
            _ => EXIT_INTERNAL,
        };
        Failure { code, message: e.to_string() }
    }
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

/// What a successful command produced.
pub struct Output {
    pub text: String,
    /// Exit code to report after writing `text`.
    pub code: i32,
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(&config) {
        Ok(out) => out.code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

/// Runs a parsed command, writing its output to `--out` or stdout.
pub fn run(config: &RunConfig) -> Result<Output, Failure> {
    let out = execute(config)?;
    let target = match (&config.command, &config.out) {
        (Command::Construct { .. }, _) => None,
        (_, path) => path.clone(),
    };
    match target {
        Some(path) => write_file(&path, &out.text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(out.text.as_bytes()).map_err(|e| fail(EXIT_IO, e.to_string()))?;
        }
    }
    Ok(out)
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| fail(EXIT_IO, format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, text).map_err(|e| fail(EXIT_IO, format!("{}: {e}", path.display())))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn ok(v: Value) -> Result<Output, Failure> {
    Ok(Output { text: pretty(&v), code: EXIT_OK })
}

/// Computes a command's output without writing it anywhere (except the
/// metric file of `construct`).
pub fn execute(config: &RunConfig) -> Result<Output, Failure> {
    match &config.command {
        Command::Catalog { alg, r } => catalog(alg, *r),
        Command::Ricci { alg, params, seed } => ricci(alg, params, *seed),
        Command::Decide { alg, params } => ok(decision_json(alg, params)?),
        Command::Construct { alg, params, lower_seed } => {
            construct_cmd(alg, params, *lower_seed, config.out.as_deref())
        }
        Command::Certify { metric } => certify_cmd(metric),
        Command::Sweep { alg, a, d, jobs } => sweep(alg, a, d, *jobs),
        Command::NecessityTest { n, params, samples, seed, diagonal_only } => {
            necessity(*n, params, *samples, *seed, *diagonal_only)
        }
    }
}

fn spec_of(alg: &AlgebraArgs) -> Result<FiliformSpec, Failure> {
    Ok(FiliformSpec::new(alg.family, alg.n)?)
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn catalog(alg: &AlgebraArgs, r: Option<usize>) -> Result<Output, Failure> {
    let spec = spec_of(alg)?;
    let algebra = spec.algebra();
    let (phi1, phi2) = torus(&spec)?;
    let mut v = json!({
        "family": spec.family().to_string(),
        "n": spec.n(),
        "m": spec.m(),
        "isomorphic_to_L4": spec.is_isomorphic_to_l4(),
        "algebra": serde_json::to_value(algebra.to_file())?,
        "torus": {
            "phi1": strings(&phi1.matrix().diagonal()),
            "phi2": strings(&phi2.matrix().diagonal()),
        },
    });
    if let Some(r) = r {
        v["rank_one_torus"] = json!(strings(&rank_one_torus(spec.n(), r)?.diagonal()));
    }
    ok(v)
}

fn torus_element(spec: &FiliformSpec, a: &Rational, d: &Rational) -> Result<DerivationMatrix, Failure> {
    let n = spec.n();
    let params = match spec.family() {
        Family::Q => TorusParams::Q { n, a: a.clone(), d: d.clone() },
        Family::L => TorusParams::L { n, alpha: a.clone(), beta: d.clone() },
    };
    Ok(DerivationMatrix::new(&spec.algebra(), QMatrix::from_diagonal(&params.eigenvalues()))?)
}

fn ricci(alg: &AlgebraArgs, params: &OptionalParams, seed: Option<u64>) -> Result<Output, Failure> {
    let spec = spec_of(alg)?;
    let n = spec.n();
    let gram = match seed {
        Some(s) => sample_gram(n, &mut ChaCha8Rng::seed_from_u64(s)),
        None => DMatrix::identity(n, n),
    };
    let mut v = json!({ "family": spec.family().to_string(), "n": n, "seed": seed, "gram": matrix_rows(&gram) });
    match (&params.a, &params.d) {
        (Some(a), Some(d)) => {
            let ext = ExtensionMetric::new(spec.algebra(), torus_element(&spec, a, d)?, gram)?;
            let report = ricci_blocks(&ext)?;
            v["a"] = json!(format_rational(a));
            v["d"] = json!(format_rational(d));
            v["T"] = json!(format_rational(ext.trace()));
            v["report"] = serde_json::to_value(report.to_json())?;
        }
        _ => {
            let ric = ricci_nilpotent(&spec.algebra(), &gram)?;
            v["ricci"] = json!(matrix_rows(&ric));
            v["eigenvalues"] = json!(sorted_eigenvalues(&ric));
            v["scalar_curvature"] = json!(nilpotent_scalar_curvature(&spec.algebra(), &gram)?);
        }
    }
    ok(v)
}

fn decide(spec: &FiliformSpec, a: &Rational, d: &Rational) -> Result<Decision, Error> {
    match spec.family() {
        Family::Q => decide_qn(spec.n(), a, d),
        Family::L => decide_ln(spec.n(), a, d),
    }
}

/// `(k, ι_k)` for the tail indices the decision looks at.
fn iota_tail(spec: &FiliformSpec, a: &Rational, d: &Rational) -> Result<Vec<(usize, Rational)>, Error> {
    let n = spec.n();
    match spec.family() {
        Family::Q if n >= 6 => (n / 2 + 1..=n).map(|k| Ok((k, iota_qn(n, a, d, k)?))).collect(),
        // Q_4 is L_4 with α = d, β = a − 2d
        Family::Q => {
            let (i2, i4) = iota_ln(4, d, &(a - q(2) * d));
            Ok(vec![(2, i2), (4, i4)])
        }
        Family::L => {
            let (i2, i_n) = iota_ln(n, a, d);
            Ok(vec![(2, i2), (n, i_n)])
        }
    }
}

fn trace_of(spec: &FiliformSpec, a: &Rational, d: &Rational) -> Rational {
    let n = spec.n();
    match spec.family() {
        Family::Q => trace_t(n, a, d),
        Family::L => TorusParams::L { n, alpha: a.clone(), beta: d.clone() }.eigenvalues().iter().sum(),
    }
}

fn critical_index(spec: &FiliformSpec) -> Result<usize, Error> {
    match spec.family() {
        Family::Q if spec.n() >= 6 => Ok(critical_l(spec.n())?.l),
        _ => Ok(2),
    }
}

fn decision_json(alg: &AlgebraArgs, params: &Params) -> Result<Value, Failure> {
    let spec = spec_of(alg)?;
    let (a, d) = (&params.a, &params.d);
    let mut v = json!({
        "family": spec.family().to_string(),
        "n": spec.n(),
        "a": format_rational(a),
        "d": format_rational(d),
        "T": format_rational(&trace_of(&spec, a, d)),
        "l": critical_index(&spec)?,
        "iota": iota_tail(&spec, a, d)?
            .iter()
            .map(|(k, v)| (k.to_string(), json!(format_rational(v))))
            .collect::<serde_json::Map<_, _>>(),
    });
    if a.is_zero() && d.is_zero() {
        v["answer"] = json!("no");
        v["reason"] = json!("zero derivation: the extension is nilpotent");
        return Ok(v);
    }
    let decision = decide(&spec, a, d)?.to_json();
    for key in ["answer", "case", "sign_flipped", "witness", "reason"] {
        v[key] = decision[key].clone();
    }
    Ok(v)
}

fn random_lower(nil: &crate::algebra::LieAlgebra, rng: &mut ChaCha8Rng) -> QMatrix {
    let n = nil.dim();
    let mut m = QMatrix::zeros(n, n);
    for der in lower_nilpotent_derivations(nil) {
        m = m.add(&der.matrix().scale(&qf(rng.gen_range(-4..=4), 2))).expect("same shape");
    }
    m
}

fn construct_cmd(
    alg: &AlgebraArgs,
    params: &Params,
    lower_seed: Option<u64>,
    out: Option<&Path>,
) -> Result<Output, Failure> {
    let spec = spec_of(alg)?;
    let n = spec.n();
    let lower = lower_seed.map(|s| random_lower(&spec.algebra(), &mut ChaCha8Rng::seed_from_u64(s)));
    let (a, d) = (&params.a, &params.d);
    let built = match spec.family() {
        Family::Q if n >= 6 => construct(n, a, d, lower.as_ref())?,
        Family::Q => {
            if lower.is_some() {
                return Err(fail(EXIT_RANGE, "--lower-seed needs n >= 6 for Qn"));
            }
            construct_ln(4, d, &(a - q(2) * d), None)?
        }
        Family::L => construct_ln(n, a, d, lower.as_ref())?,
    };
    let file = built.to_file();
    let text = pretty(&serde_json::to_value(&file)?);
    // re-read what is about to be written and certify it from scratch
    let reread: MetricFile = serde_json::from_str(&text)?;
    let cert = certify(&reread.metric()?)?;
    if !built.certified || !cert.negative_definite {
        return Err(fail(
            EXIT_CERTIFICATE,
            format!("largest Ricci eigenvalue {:e} does not clear {:e}", cert.max_eigenvalue(), cert.tolerance),
        ));
    }
    let path = match out {
        Some(p) => p.to_path_buf(),
        None => std::env::var_os(OUT_DIR_ENV).map_or_else(|| PathBuf::from("."), PathBuf::from).join("metric.json"),
    };
    write_file(&path, &text)?;
    let summary = json!({
        "metric": path.display().to_string(),
        "family": file.family,
        "n": n,
        "a": file.a,
        "d": file.d,
        "sign_flipped": file.sign_flipped,
        "case": file.case,
        "s": file.s,
        "max_eigenvalue": cert.max_eigenvalue(),
        "tolerance": cert.tolerance,
        "certified": true,
    });
    Ok(Output { text: pretty(&summary), code: EXIT_OK })
}

fn certify_cmd(path: &Path) -> Result<Output, Failure> {
    let text = fs::read_to_string(path).map_err(|e| fail(EXIT_IO, format!("{}: {e}", path.display())))?;
    let file: MetricFile =
        serde_json::from_str(&text).map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", path.display())))?;
    let cert = certify(&file.metric()?)?;
    let v = json!({
        "eigenvalues": cert.eigenvalues,
        "max_eigenvalue": cert.max_eigenvalue(),
        "tolerance": cert.tolerance,
        "negative_definite": cert.negative_definite,
    });
    Ok(Output { text: pretty(&v), code: if cert.negative_definite { EXIT_OK } else { EXIT_CERTIFICATE } })
}

fn sweep(alg: &AlgebraArgs, a: &str, d: &str, jobs: usize) -> Result<Output, Failure> {
    let spec = spec_of(alg)?;
    let a_grid = parse_grid(a).map_err(|m| fail(EXIT_USAGE, m))?;
    let d_grid = parse_grid(d).map_err(|m| fail(EXIT_USAGE, m))?;
    let cells: Vec<(Rational, Rational)> =
        a_grid.iter().flat_map(|a| d_grid.iter().map(move |d| (a.clone(), d.clone()))).collect();
    let l = critical_index(&spec)?;
    let ks: Vec<usize> = iota_tail(&spec, &q(1), &q(0))?.into_iter().map(|(k, _)| k).collect();
    let pool =
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| fail(EXIT_INTERNAL, e.to_string()))?;
    let rows: Vec<Result<String, Error>> = pool.install(|| {
        cells
            .par_iter()
            .map(|(a, d)| {
                let iotas = iota_tail(&spec, a, d)?;
                let (answer, flipped) = if a.is_zero() && d.is_zero() {
                    (false, false)
                } else {
                    let dec = decide(&spec, a, d)?;
                    (dec.answer, dec.sign_flipped)
                };
                let mut fields = vec![format_rational(a), format_rational(d), format_rational(&trace_of(&spec, a, d))];
                fields.extend(iotas.iter().map(|(_, v)| format_rational(v)));
                fields.push(l.to_string());
                fields.push(if answer { "yes" } else { "no" }.to_string());
                fields.push(flipped.to_string());
                Ok(fields.join(","))
            })
            .collect()
    });
    let mut text = String::from("a,d,T");
    for k in &ks {
        text.push_str(&format!(",iota_{k}"));
    }
    text.push_str(",l,answer,sign_flipped\n");
    for row in rows {
        text.push_str(&row?);
        text.push('\n');
    }
    Ok(Output { text, code: EXIT_OK })
}

fn necessity(n: usize, params: &Params, samples: usize, seed: u64, diagonal_only: bool) -> Result<Output, Failure> {
    let spec = FiliformSpec::new(Family::Q, n)?;
    if n < 6 {
        return Err(fail(EXIT_RANGE, "necessity-test needs Q_n with n >= 6"));
    }
    let (a, d) = (&params.a, &params.d);
    let t = trace_t(n, a, d);
    if t.is_zero() {
        return Err(fail(EXIT_REFUSED, "T = 0: the extension is unimodular and the trace bound does not apply"));
    }
    let decision = decide_qn(n, a, d)?;
    if decision.answer {
        return Err(fail(EXIT_REFUSED, "the criterion holds here, so negative Ricci metrics exist"));
    }
    let sign = if t.is_negative() { q(-1) } else { q(1) };
    let nil = spec.algebra();
    let diag = TorusParams::Q { n, a: &sign * a, d: &sign * d }.derivation()?;
    let lower: Vec<QMatrix> = if diagonal_only {
        Vec::new()
    } else {
        lower_nilpotent_derivations(&nil).into_iter().map(|d| d.into_matrix()).collect()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut negative, mut bound_ok) = (0usize, 0usize);
    let mut worst_gap = f64::INFINITY;
    let mut least_max_eigenvalue = f64::INFINITY;
    for _ in 0..samples {
        let mut m = diag.matrix().clone();
        for der in &lower {
            m = m.add(&der.scale(&qf(rng.gen_range(-4..=4), 2)))?;
        }
        let ext = ExtensionMetric::new(nil.clone(), DerivationMatrix::new(&nil, m)?, sample_gram(n, &mut rng))?;
        let cert = certify(&ext.flattened())?;
        least_max_eigenvalue = least_max_eigenvalue.min(cert.max_eigenvalue());
        negative += cert.negative_definite as usize;
        let mut holds = true;
        for (_, lhs, rhs) in necessity_trace_bounds(&ext)? {
            let scale = lhs.abs().max(rhs.abs()).max(1.0);
            worst_gap = worst_gap.min((lhs - rhs) / scale);
            holds &= lhs >= rhs - 1e-9 * scale;
        }
        bound_ok += holds as usize;
    }
    let v = json!({
        "n": n,
        "a": format_rational(a),
        "d": format_rational(d),
        "T": format_rational(&t),
        "sign_flipped": t.is_negative(),
        "seed": seed,
        "samples": samples,
        "lower_parts": !diagonal_only,
        "negative_definite_hits": negative,
        "trace_bound_satisfied": bound_ok,
        "least_max_eigenvalue": least_max_eigenvalue,
        "worst_relative_gap": worst_gap,
        "decision_reason": decision.reason,
    });
    let code = if negative == 0 && bound_ok == samples { EXIT_OK } else { EXIT_CERTIFICATE };
    Ok(Output { text: pretty(&v), code })
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::from(Error::from(e))
    }
}
