//! Command-line front end. `qcut <command> …`; see `--help`.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::circuit::{gates_unitary, Circuit, Partition};
use crate::cutting::{
    gamma_independent, gamma_joint, lower_bound_gamma, reconstruction_error, rzz_layer_unitary, toffoli, CutPlan,
    Scheme,
};
use crate::error::{Error, Result};
use crate::estimator::{estimate_expectation, exact_value, Estimate};
use crate::observable::Observable;
use crate::qpd::DEFAULT_ALPHA;
use crate::tensor::ComplexMatrix;

pub const MAX_QUBITS_ENV: &str = "QCUT_MAX_QUBITS";
pub const DEFAULT_MAX_QUBITS: usize = 12;
pub const VERIFY_TOL: f64 = 1e-9;

#[derive(Parser, Debug)]
#[command(name = "qcut", version, about = "Cut two-qubit Z rotations and estimate expectation values")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Table of γ for independent, joint and lower-bound cuts.
    Gamma(GammaArgs),
    /// Check a decomposition of a circuit's cut gates against the exact channel.
    Verify(VerifyArgs),
    /// Estimate an observable by sampling the cut circuit.
    Estimate(EstimateArgs),
    /// Choi-state lower bound on γ for a circuit's unitary across its partition.
    Lowerbound(LowerboundArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Independent,
    Joint,
    Parallel,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Independent => Scheme::Independent,
            SchemeArg::Joint => Scheme::JointTeleport,
            SchemeArg::Parallel => Scheme::ParallelAncillaFree,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GammaArgs {
    /// Comma-separated angles of one gate layer, in radians.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with_all = ["theta", "n_min", "n_max"])]
    pub thetas: Option<Vec<f64>>,
    /// One angle repeated for every layer size in `n-min..=n-max`.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub n_min: usize,
    #[arg(long, default_value_t = 4)]
    pub n_max: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub circuit: PathBuf,
    #[arg(long, value_enum, default_value = "parallel")]
    pub scheme: SchemeArg,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    pub circuit: PathBuf,
    /// `parity`, `z i`, `zz i j` or a sum like `0.5 z0 z1 + -0.5 z2`.
    #[arg(long, default_value = "parity")]
    pub observable: String,
    #[arg(long, value_enum, default_value = "joint")]
    pub scheme: SchemeArg,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: usize,
    #[arg(long, default_value_t = 100_000)]
    pub shots: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    /// Three-qubit Toffoli cut after its first control.
    Toffoli,
}

#[derive(Args, Debug)]
pub struct LowerboundArgs {
    /// Measurement-free circuit; its partition defines the cut.
    #[arg(required_unless_present = "builtin")]
    pub circuit: Option<PathBuf>,
    #[arg(long, value_enum, conflicts_with = "circuit")]
    pub builtin: Option<Builtin>,
    #[command(flatten)]
    pub output: Output,
}

pub fn max_qubits() -> Result<usize> {
    match std::env::var(MAX_QUBITS_ENV) {
        Ok(v) => {
            v.trim().parse().map_err(|_| Error::InvalidArgument(format!("{MAX_QUBITS_ENV}='{v}' is not a number")))
        }
        Err(_) => Ok(DEFAULT_MAX_QUBITS),
    }
}

fn check_size(qubits: usize) -> Result<()> {
    let limit = max_qubits()?;
    if qubits > limit {
        return Err(Error::DimensionOverflow { qubits, limit });
    }
    Ok(())
}

fn check_alpha(alpha: usize) -> Result<()> {
    crate::qpd::phase_set(alpha).map(|_| ())
}

fn read_circuit(path: &PathBuf) -> Result<Circuit> {
    Circuit::from_json(&std::fs::read_to_string(path)?)
}

/// 17 significant digits.
fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

fn render_rows(format: Format, header: &[&str], rows: &[Vec<String>], json_rows: Value) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(&json_rows)? + "\n"),
        Format::Csv => {
            let mut s = header.join(",");
            s.push('\n');
            for r in rows {
                s.push_str(&r.join(","));
                s.push('\n');
            }
            Ok(s)
        }
    }
}

#[derive(Serialize)]
struct GammaRow {
    n: usize,
    thetas: Vec<f64>,
    gamma_independent: f64,
    gamma_joint: f64,
    gamma_lower: Option<f64>,
    ratio: f64,
}

fn gamma_row(thetas: &[f64], lower_limit: usize) -> Result<GammaRow> {
    let n = thetas.len();
    let gamma_lower = if 2 * n <= lower_limit {
        let d = 1 << n;
        Some(lower_bound_gamma(&rzz_layer_unitary(thetas), d, d)?)
    } else {
        None
    };
    let (gi, gj) = (gamma_independent(thetas), gamma_joint(thetas));
    Ok(GammaRow { n, thetas: thetas.to_vec(), gamma_independent: gi, gamma_joint: gj, gamma_lower, ratio: gj / gi })
}

pub fn cmd_gamma(a: &GammaArgs) -> Result<String> {
    let layers: Vec<Vec<f64>> = match (&a.thetas, a.theta) {
        (Some(t), _) if t.is_empty() => return Err(Error::InvalidArgument("empty --thetas".into())),
        (Some(t), _) => vec![t.clone()],
        (None, theta) => {
            if a.n_min == 0 || a.n_min > a.n_max {
                return Err(Error::InvalidArgument("need 1 <= n-min <= n-max".into()));
            }
            let theta = theta.unwrap_or(std::f64::consts::FRAC_PI_2);
            (a.n_min..=a.n_max).map(|n| vec![theta; n]).collect()
        }
    };
    if layers.iter().flatten().any(|t| !t.is_finite()) {
        return Err(Error::InvalidArgument("non-finite angle".into()));
    }
    let limit = max_qubits()?.min(8);
    let rows: Vec<GammaRow> = layers.iter().map(|t| gamma_row(t, limit)).collect::<Result<_>>()?;
    let csv: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.thetas.iter().map(|&t| num(t)).collect::<Vec<_>>().join(";"),
                num(r.gamma_independent),
                num(r.gamma_joint),
                r.gamma_lower.map(num).unwrap_or_default(),
                num(r.ratio),
            ]
        })
        .collect();
    render_rows(
        a.output.format,
        &["n", "thetas", "gamma_independent", "gamma_joint", "gamma_lower", "ratio"],
        &csv,
        serde_json::to_value(&rows)?,
    )
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<String> {
    check_alpha(a.alpha)?;
    let c = read_circuit(&a.circuit)?;
    let plan = CutPlan::new(&c, a.scheme.into(), a.alpha)?;
    let d = &plan.decomposition;
    check_size(d.layout.num_qubits())?;
    let error = reconstruction_error(d)?;
    let pass = error <= VERIFY_TOL && (d.kappa() - d.gamma).abs() <= 1e-12;
    let report = json!({
        "scheme": d.scheme.to_string(),
        "alpha": a.alpha,
        "cut_gates": d.thetas.len(),
        "thetas": d.thetas,
        "gamma": d.gamma,
        "kappa": d.kappa(),
        "terms": d.terms.len(),
        "ancillas_per_partition": d.ancillas_per_partition(),
        "reconstruction_error": error,
        "tolerance": VERIFY_TOL,
        "pass": pass,
    });
    let row = vec![
        d.scheme.to_string(),
        d.thetas.len().to_string(),
        num(d.gamma),
        num(d.kappa()),
        d.terms.len().to_string(),
        num(error),
        pass.to_string(),
    ];
    render_rows(a.output.format, &["scheme", "cut_gates", "gamma", "kappa", "terms", "error", "pass"], &[row], report)
}

#[derive(Serialize)]
pub struct EstimateReport {
    pub scheme: String,
    pub observable: String,
    #[serde(flatten)]
    pub estimate: Estimate,
    pub exact: Option<f64>,
    pub z_score: Option<f64>,
}

pub fn run_estimate(a: &EstimateArgs) -> Result<EstimateReport> {
    check_alpha(a.alpha)?;
    let c = read_circuit(&a.circuit)?;
    let obs = Observable::parse(&a.observable, c.num_qubits)?;
    let plan = CutPlan::new(&c, a.scheme.into(), a.alpha)?;
    let limit = max_qubits()?;
    let fragment_qubits = plan
        .partition()
        .iter()
        .filter(|&&p| p == Partition::A)
        .count()
        .max(plan.partition().iter().filter(|&&p| p == Partition::B).count());
    check_size(fragment_qubits)?;
    let f = |b: u64| obs.eval(b);
    let estimate = estimate_expectation(&plan, &f, a.shots, a.seed)?;
    let exact = if c.num_qubits <= limit { Some(exact_value(&plan, &f)?) } else { None };
    let z_score = exact.map(|e| if estimate.stderr > 0.0 { (estimate.mean - e).abs() / estimate.stderr } else { 0.0 });
    Ok(EstimateReport {
        scheme: plan.decomposition.scheme.to_string(),
        observable: obs.to_string(),
        estimate,
        exact,
        z_score,
    })
}

pub fn cmd_estimate(a: &EstimateArgs) -> Result<String> {
    let r = run_estimate(a)?;
    eprintln!("elapsed {:.3} s", r.estimate.elapsed.as_secs_f64());
    let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
    let row = vec![
        r.scheme.clone(),
        num(r.estimate.mean),
        num(r.estimate.stderr),
        num(r.estimate.kappa),
        r.estimate.shots.to_string(),
        r.estimate.seed.to_string(),
        opt(r.exact),
        opt(r.z_score),
    ];
    render_rows(
        a.output.format,
        &["scheme", "mean", "stderr", "kappa", "shots", "seed", "exact", "z_score"],
        &[row],
        serde_json::to_value(&r)?,
    )
}

/// `U` with qubits reordered so that `order[k]` becomes qubit `k`.
fn permute_unitary(u: &ComplexMatrix, order: &[usize]) -> ComplexMatrix {
    let n = order.len();
    let map = |idx: usize| -> usize {
        order.iter().enumerate().fold(0, |acc, (k, &q)| acc | (((idx >> (n - 1 - q)) & 1) << (n - 1 - k)))
    };
    let d = 1 << n;
    let mut out = ComplexMatrix::zeros(d, d);
    for r in 0..d {
        for c in 0..d {
            out[(map(r), map(c))] = u[(r, c)];
        }
    }
    out
}

pub fn cmd_lowerbound(a: &LowerboundArgs) -> Result<String> {
    let (name, u, qa, qb) = match (&a.circuit, a.builtin) {
        (_, Some(Builtin::Toffoli)) => ("toffoli".to_string(), toffoli(), 1, 2),
        (Some(path), None) => {
            let c = read_circuit(path)?;
            check_size(2 * c.num_qubits)?;
            c.validate()?;
            let u = gates_unitary(c.num_qubits, &c.gates).ok_or(Error::MeasurementPresent)?;
            let order: Vec<usize> = c.qubits_in(Partition::A).into_iter().chain(c.qubits_in(Partition::B)).collect();
            let qa = c.qubits_in(Partition::A).len();
            (path.display().to_string(), permute_unitary(&u, &order), qa, c.num_qubits - qa)
        }
        (None, None) => return Err(Error::InvalidArgument("need a circuit or --builtin".into())),
    };
    let bound = lower_bound_gamma(&u, 1 << qa, 1 << qb)?;
    let report = json!({ "input": name, "qubits_a": qa, "qubits_b": qb, "gamma_lower": bound });
    render_rows(
        a.output.format,
        &["input", "qubits_a", "qubits_b", "gamma_lower"],
        &[vec![name, qa.to_string(), qb.to_string(), num(bound)]],
        report,
    )
}

pub fn run(cli: &Cli) -> Result<()> {
    let (text, out) = match &cli.command {
        Command::Gamma(a) => (cmd_gamma(a)?, &a.output.out),
        Command::Verify(a) => (cmd_verify(a)?, &a.output.out),
        Command::Estimate(a) => (cmd_estimate(a)?, &a.output.out),
        Command::Lowerbound(a) => (cmd_lowerbound(a)?, &a.output.out),
    };
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Entry point for the binary: prints errors and maps them to exit code 1.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            let mut msg = String::new();
            let _ = write!(msg, "error: {e}");
            eprintln!("{msg}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("qcut").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn gamma_table_at_quarter_turn() {
        let Command::Gamma(a) = parse(&["gamma", "--n-max", "4"]).command else { panic!() };
        let v: Value = serde_json::from_str(&cmd_gamma(&a).unwrap()).unwrap();
        let joint: Vec<f64> = v.as_array().unwrap().iter().map(|r| r["gamma_joint"].as_f64().unwrap()).collect();
        assert_eq!(joint, vec![3.0, 7.0, 15.0, 31.0]);
    }

    #[test]
    fn gamma_csv_zero_row() {
        let Command::Gamma(a) = parse(&["gamma", "--thetas", "0,0", "--format", "csv"]).command else { panic!() };
        let out = cmd_gamma(&a).unwrap();
        let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
        for col in &row[2..5] {
            assert_eq!(col.parse::<f64>().unwrap(), 1.0);
        }
    }

    #[test]
    fn negative_angles_parse() {
        let Command::Gamma(a) = parse(&["gamma", "--thetas", "-0.5,0.25"]).command else { panic!() };
        assert_eq!(a.thetas.unwrap(), vec![-0.5, 0.25]);
    }

    #[test]
    fn permutation_moves_qubits() {
        let u = crate::circuit::gates_unitary(3, &[crate::circuit::Gate::X(2)]).unwrap();
        let p = permute_unitary(&u, &[2, 0, 1]);
        let v = crate::circuit::gates_unitary(3, &[crate::circuit::Gate::X(0)]).unwrap();
        assert_eq!(p, v);
    }
}
