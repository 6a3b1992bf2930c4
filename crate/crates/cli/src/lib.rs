//! Command-line front end: coefficient tables, identity verification,
//! factorial approximations, integral checks and error tables.
//!
//! Exit codes: 0 when every requested check passes, 1 when a check or
//! tolerance fails, 2 for invalid arguments.

use std::ffi::OsString;
use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use stirling_core::asympt_eval::{
    error_table, factorial_approx, factorial_float, reciprocal_factorial_approx, stirling_ratio,
};
use stirling_core::coeffs::{
    self, convolution_check, log_coefficient, log_series_coeffs, reciprocal_coeffs, CoeffTable, Expansion, Method,
};
use stirling_core::exactnum::int;
use stirling_core::io::{self as sio, QuadRow};
use stirling_core::quadrature::{bound_checks, f_integral, g_integral, t_for_n, BoundGrid};
use stirling_core::series::TruncSeries;
use stirling_core::{BigFloat, Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "stirling",
    version,
    about = "Exact Stirling series coefficients and numerical checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write the coefficients a_0..a_K
    Coeffs(CoeffsArgs),
    /// Check the structural identities and the integrand bounds
    Verify(VerifyArgs),
    /// Approximate n! by a truncated series
    Approx(ApproxArgs),
    /// Approximate 1/n! by a truncated series
    Reciprocal(ApproxArgs),
    /// Evaluate the integral representations against the exact ratio
    Quad(QuadArgs),
    /// Tabulate truncation errors of the series
    ErrorTable(ErrorTableArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Recurrence,
    Halfpower,
    Bernoulli,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    F,
    G,
    Both,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write here instead of standard output
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn prec_arg() -> clap::builder::RangedI64ValueParser<u32> {
    clap::value_parser!(u32).range(64..)
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

#[derive(Args, Debug)]
pub struct CoeffsArgs {
    #[arg(long = "max-k", default_value_t = 20)]
    pub max_k: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Recurrence)]
    pub method: MethodArg,
    /// Emit the 1/n! coefficients (-1)^k a_k
    #[arg(long)]
    pub reciprocal: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long = "max-k", default_value_t = 20)]
    pub max_k: usize,
    #[arg(long, default_value_t = 256, value_parser = prec_arg())]
    pub prec: u32,
    /// Verify a coefficient table read from this CSV file
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ApproxArgs {
    #[arg(long, value_delimiter = ',', required = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: Vec<u64>,
    /// Truncation orders N (last included index)
    #[arg(long, value_delimiter = ',', required = true)]
    pub terms: Vec<usize>,
    #[arg(long, default_value_t = 256, value_parser = prec_arg())]
    pub prec: u32,
    /// Fail when any relative error exceeds this
    #[arg(long = "max-rel-error", value_parser = positive_f64)]
    pub max_rel_error: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct QuadArgs {
    #[arg(long, value_enum, default_value_t = Which::Both)]
    pub which: Which,
    #[arg(long, value_delimiter = ',', required = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: Vec<u64>,
    #[arg(long, default_value_t = 1e-12, value_parser = positive_f64)]
    pub tol: f64,
    #[arg(long, default_value_t = 256, value_parser = prec_arg())]
    pub prec: u32,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ErrorTableArgs {
    #[arg(long, value_delimiter = ',', required = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: Vec<u64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub terms: Vec<usize>,
    #[arg(long, default_value_t = 256, value_parser = prec_arg())]
    pub prec: u32,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// What a command produced before it is written out.
struct Outcome {
    body: Vec<u8>,
    code: i32,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::QuadratureBudget { .. } => Failure::Failed(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn io_failure(e: impl std::fmt::Display) -> Failure {
    Failure::Failed(e.to_string())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let (result, output) = match &cli.command {
        Command::Coeffs(a) => (cmd_coeffs(a), &a.out),
        Command::Verify(a) => (cmd_verify(a), &a.out),
        Command::Approx(a) => (cmd_approx(a, Expansion::Factorial), &a.out),
        Command::Reciprocal(a) => (cmd_approx(a, Expansion::Reciprocal), &a.out),
        Command::Quad(a) => (cmd_quad(a), &a.out),
        Command::ErrorTable(a) => (cmd_error_table(a), &a.out),
    };
    match result {
        Ok(outcome) => {
            let written = match &output.output {
                Some(path) => std::fs::write(path, &outcome.body),
                None => out.write_all(&outcome.body),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return EXIT_FAILED;
            }
            outcome.code
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Failed(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILED
        }
    }
}

fn json_body(v: &Value) -> Vec<u8> {
    let mut body = serde_json::to_vec_pretty(v).expect("serializable");
    body.push(b'\n');
    body
}

fn cmd_coeffs(a: &CoeffsArgs) -> Result<Outcome, Failure> {
    let methods: Vec<Method> = match a.method {
        MethodArg::Recurrence => vec![Method::Recurrence],
        MethodArg::Halfpower => vec![Method::HalfPower],
        MethodArg::Bernoulli => vec![Method::Bernoulli],
        MethodArg::All => Method::ALL.to_vec(),
    };
    let tables: Vec<CoeffTable> = methods
        .iter()
        .map(|&m| {
            let t = coeffs::compute(m, a.max_k);
            if a.reciprocal {
                reciprocal_coeffs(&t)
            } else {
                t
            }
        })
        .collect();
    let cross_checked = methods.len() > 1;
    let agree = tables.windows(2).all(|w| w[0].values == w[1].values);
    let status = if agree { "OK" } else { "MISMATCH" };

    let mut body = Vec::new();
    match a.out.format {
        Format::Csv => {
            if agree {
                sio::write_coeff_csv(&mut body, &tables[0], &sio::methods_label(&methods))?;
            } else {
                for t in &tables {
                    sio::write_coeff_csv(&mut body, t, t.method.as_str())?;
                }
            }
            if cross_checked {
                writeln!(body, "# status={status}").map_err(io_failure)?;
            }
        }
        Format::Json => {
            let mut v = if agree {
                sio::coeff_json(&tables[0], &sio::methods_label(&methods))
            } else {
                json!({"tables": tables.iter().map(|t| sio::coeff_json(t, t.method.as_str())).collect::<Vec<_>>()})
            };
            if cross_checked {
                v["status"] = json!(status);
            }
            body = json_body(&v);
        }
    }
    Ok(Outcome {
        body,
        code: if agree { EXIT_OK } else { EXIT_FAILED },
    })
}

/// One line of the `verify` report.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub worst_margin: f64,
}

/// Runs the exact identities on `table` (convolution, odd-powers-only
/// logarithm, reciprocal involution). A `1/n!` table is checked through its
/// `n!` counterpart.
pub fn verify_table(table: &CoeffTable) -> Vec<CheckLine> {
    let table = match table.expansion {
        Expansion::Factorial => table.clone(),
        Expansion::Reciprocal => reciprocal_coeffs(table),
    };
    let k = table.max_k();
    let mut lines = Vec::new();

    let s = convolution_check(&table, k).expect("M = K");
    let worst = s[1..].iter().map(rational_abs_f64).fold(0.0, f64::max);
    let conv_ok = s[0] == int(1) && s[1..].iter().all(|v| *v == int(0));
    lines.push(CheckLine {
        name: format!("convolution m=1..{k}"),
        passed: conv_ok,
        worst_margin: worst,
    });

    let log = log_series_coeffs(&table, k).expect("a_0 = 1");
    let mut log_ok = true;
    let mut worst = 0.0f64;
    for (d, c) in log.iter().enumerate().skip(1) {
        let expected = if d % 2 == 0 {
            int(0)
        } else {
            log_coefficient(d.div_ceil(2) as u32)
        };
        if *c != expected {
            log_ok = false;
            worst = worst.max(rational_abs_f64(&(c - expected)));
        }
    }
    lines.push(CheckLine {
        name: format!("log_odd_powers x^1..x^{k}"),
        passed: log_ok,
        worst_margin: worst,
    });

    let flipped = reciprocal_coeffs(&table);
    let product = &table.as_series() * &flipped.as_series();
    let inv_ok = reciprocal_coeffs(&flipped) == table && product == TruncSeries::one(k);
    lines.push(CheckLine {
        name: "reciprocal_involution".into(),
        passed: inv_ok,
        worst_margin: 0.0,
    });
    lines
}

fn rational_abs_f64(r: &stirling_core::Rational) -> f64 {
    BigFloat::from_rational(r, 64).abs().to_f64()
}

fn cmd_verify(a: &VerifyArgs) -> Result<Outcome, Failure> {
    let table = match &a.input {
        Some(path) => {
            let file = File::open(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            sio::read_coeff_csv(file)?
        }
        None => coeffs::compute(Method::Recurrence, a.max_k),
    };
    let mut lines = verify_table(&table);
    let mut grid = BoundGrid::standard();
    // The fixed reflection tolerance is below the rounding floor at low precision.
    grid.reflection_tol = grid.reflection_tol.max((16.0 - f64::from(a.prec)).exp2());
    let report = bound_checks(&grid, a.prec)?;
    lines.extend(report.checks.iter().map(|c| CheckLine {
        name: format!("bound {}", c.name),
        passed: c.passed,
        worst_margin: c.worst_margin,
    }));
    let all = lines.iter().all(|l| l.passed);
    let status = |p: bool| if p { "PASS" } else { "FAIL" };
    let body = match a.out.format {
        Format::Csv => {
            let mut body = Vec::new();
            let mut w = csv_writer(&mut body);
            w.write_record(["check", "status", "worst_margin"])
                .map_err(io_failure)?;
            for l in &lines {
                w.write_record([l.name.clone(), status(l.passed).into(), format!("{:e}", l.worst_margin)])
                    .map_err(io_failure)?;
            }
            w.flush().map_err(io_failure)?;
            drop(w);
            writeln!(body, "# overall={}", status(all)).map_err(io_failure)?;
            body
        }
        Format::Json => json_body(&json!({
            "checks": lines.iter().map(|l| json!({
                "check": l.name, "status": status(l.passed), "worst_margin": l.worst_margin,
            })).collect::<Vec<_>>(),
            "overall": status(all),
        })),
    };
    Ok(Outcome {
        body,
        code: if all { EXIT_OK } else { EXIT_FAILED },
    })
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().flexible(false).from_writer(w)
}

fn cmd_approx(a: &ApproxArgs, expansion: Expansion) -> Result<Outcome, Failure> {
    let max_k = a.terms.iter().copied().max().unwrap_or(0);
    let table = coeffs::compute(Method::Recurrence, max_k);
    let header = ["n", "N", "approx", "exact", "rel_error"];
    let mut rows = Vec::new();
    let mut failed = false;
    for &n in &a.n {
        let exact = match expansion {
            Expansion::Factorial => factorial_float(n, a.prec),
            Expansion::Reciprocal => BigFloat::one(a.prec) / factorial_float(n, a.prec),
        };
        for &order in &a.terms {
            let approx = match expansion {
                Expansion::Factorial => factorial_approx(n, order, &table, a.prec)?,
                Expansion::Reciprocal => reciprocal_factorial_approx(n, order, &table, a.prec)?,
            };
            let rel = ((&approx - &exact) / exact.clone()).abs();
            if a.max_rel_error.is_some_and(|m| rel.to_f64() > m) {
                failed = true;
            }
            rows.push(vec![
                n.to_string(),
                order.to_string(),
                approx.to_string(),
                exact.to_string(),
                rel.to_string(),
            ]);
        }
    }
    let body = table_body(a.out.format, &header, rows)?;
    Ok(Outcome {
        body,
        code: if failed { EXIT_FAILED } else { EXIT_OK },
    })
}

fn table_body(format: Format, header: &[&str], rows: Vec<Vec<String>>) -> Result<Vec<u8>, Failure> {
    Ok(match format {
        Format::Csv => {
            let mut body = Vec::new();
            let mut w = csv_writer(&mut body);
            w.write_record(header).map_err(io_failure)?;
            for r in &rows {
                w.write_record(r).map_err(io_failure)?;
            }
            w.flush().map_err(io_failure)?;
            drop(w);
            body
        }
        Format::Json => {
            let objs: Vec<Value> = rows
                .into_iter()
                .map(|r| {
                    Value::Object(
                        header
                            .iter()
                            .zip(r)
                            .map(|(h, c)| (h.to_string(), Value::String(c)))
                            .collect(),
                    )
                })
                .collect();
            json_body(&Value::Array(objs))
        }
    })
}

fn cmd_quad(a: &QuadArgs) -> Result<Outcome, Failure> {
    let integrals: &[char] = match a.which {
        Which::F => &['f'],
        Which::G => &['g'],
        Which::Both => &['f', 'g'],
    };
    let mut failed = false;
    let mut blocks = Vec::new();
    for &which in integrals {
        let mut rows = Vec::new();
        for &n in &a.n {
            let t = t_for_n(n, a.prec);
            let ratio = stirling_ratio(n, a.prec)?;
            let (res, reference) = match which {
                'f' => (f_integral(&t, a.prec, a.tol)?, ratio),
                _ => (g_integral(&t, a.prec, a.tol)?, BigFloat::one(a.prec) / ratio),
            };
            let abs_diff = (&res.value - &reference).abs();
            if abs_diff.to_f64() > a.tol || res.imag.abs().to_f64() > a.tol {
                failed = true;
            }
            rows.push(QuadRow {
                t,
                n,
                value: res.value,
                err_estimate: res.err_estimate,
                reference,
                abs_diff,
            });
        }
        blocks.push((which, rows));
    }
    let body = match a.out.format {
        Format::Csv => {
            let mut body = Vec::new();
            for (which, rows) in &blocks {
                writeln!(body, "# integral={which}").map_err(io_failure)?;
                sio::write_quad_csv(&mut body, rows)?;
            }
            body
        }
        Format::Json => {
            let obj: serde_json::Map<String, Value> = blocks
                .iter()
                .map(|(w, rows)| (w.to_string(), sio::quad_json(rows)))
                .collect();
            json_body(&Value::Object(obj))
        }
    };
    Ok(Outcome {
        body,
        code: if failed { EXIT_FAILED } else { EXIT_OK },
    })
}

fn cmd_error_table(a: &ErrorTableArgs) -> Result<Outcome, Failure> {
    let max_k = a.terms.iter().copied().max().unwrap_or(0);
    let table = coeffs::compute(Method::Recurrence, max_k);
    let rows = error_table(&table, &a.n, &a.terms, a.prec)?;
    let body = match a.out.format {
        Format::Csv => {
            let mut body = Vec::new();
            sio::write_error_csv(&mut body, &rows)?;
            body
        }
        Format::Json => json_body(&sio::error_json(&rows)),
    };
    Ok(Outcome { body, code: EXIT_OK })
}
