//! CSV and JSON forms of coefficient tables, error tables and quadrature
//! checks.
//!
//! Rationals are written as `num/den` (or `num`), never as decimals.
//! Floating values use the shortest decimal that reads back to the same
//! value at the working precision. Metadata rides in `#` comment lines ahead
//! of the CSV header.

use std::io::{Read, Write};

use serde_json::{json, Value};

use crate::asympt_eval::ErrorRow;
use crate::bigfloat::BigFloat;
use crate::coeffs::{CoeffTable, Expansion, Method};
use crate::error::{Error, Result};
use crate::exactnum::Rational;

pub const COEFF_HEADER: [&str; 2] = ["k", "a_k"];
pub const ERROR_HEADER: [&str; 6] = ["n", "N", "ratio", "partial", "abs_error", "scaled_error"];
pub const QUAD_HEADER: [&str; 6] = ["t", "n", "value", "err_estimate", "reference", "abs_diff"];

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string())
}

fn write_rows<W: Write>(out: W, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header).map_err(io_err)?;
    for row in rows {
        w.write_record(&row).map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

/// Method label for the metadata line; several methods are joined with `+`.
pub fn methods_label(methods: &[Method]) -> String {
    methods.iter().map(|m| m.as_str()).collect::<Vec<_>>().join("+")
}

/// ```text
/// # method=recurrence expansion=factorial
/// k,a_k
/// 0,1
/// 1,1/12
/// ```
pub fn write_coeff_csv<W: Write>(mut out: W, table: &CoeffTable, method_label: &str) -> Result<()> {
    writeln!(out, "# method={method_label} expansion={}", table.expansion.as_str()).map_err(io_err)?;
    let rows = table
        .values
        .iter()
        .enumerate()
        .map(|(k, a)| vec![k.to_string(), a.to_string()]);
    write_rows(out, &COEFF_HEADER, rows)
}

/// Reads a table written by [`write_coeff_csv`]. A missing metadata line
/// means a recurrence-method `n!` table; for a combined label the first
/// method is kept.
pub fn read_coeff_csv<R: Read>(mut input: R) -> Result<CoeffTable> {
    let mut text = String::new();
    input.read_to_string(&mut text).map_err(io_err)?;
    let mut method = Method::Recurrence;
    let mut expansion = Expansion::Factorial;
    for line in text.lines().filter_map(|l| l.trim().strip_prefix('#')) {
        for field in line.split_whitespace() {
            match field.split_once('=') {
                Some(("method", v)) => {
                    method = v.split('+').next().unwrap_or(v).parse()?;
                }
                Some(("expansion", v)) => expansion = v.parse()?,
                _ => {}
            }
        }
    }
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(io_err)?.clone();
    if header.iter().collect::<Vec<_>>() != COEFF_HEADER {
        return Err(Error::Parse(format!(
            "expected header k,a_k, found {:?}",
            header.as_slice()
        )));
    }
    let mut values = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(io_err)?;
        let k: usize = record[0]
            .parse()
            .map_err(|_| Error::Parse(format!("bad index {:?}", &record[0])))?;
        if k != i {
            return Err(Error::Parse(format!("expected k = {i}, found {k}")));
        }
        let a: Rational = record[1]
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational {:?}", &record[1])))?;
        values.push(a);
    }
    CoeffTable::new(values, method, expansion)
}

/// `{"method", "expansion", "coefficients": [{"k", "num", "den"}]}` with the
/// integers as decimal strings.
pub fn coeff_json(table: &CoeffTable, method_label: &str) -> Value {
    let coefficients: Vec<Value> = table
        .values
        .iter()
        .enumerate()
        .map(|(k, a)| json!({"k": k, "num": a.numer().to_string(), "den": a.denom().to_string()}))
        .collect();
    json!({
        "method": method_label,
        "expansion": table.expansion.as_str(),
        "coefficients": coefficients,
    })
}

fn error_cells(r: &ErrorRow) -> Vec<String> {
    vec![
        r.n.to_string(),
        r.order.to_string(),
        r.ratio.to_string(),
        r.partial.to_string(),
        r.abs_error.to_string(),
        r.scaled_error.to_string(),
    ]
}

pub fn write_error_csv<W: Write>(out: W, rows: &[ErrorRow]) -> Result<()> {
    write_rows(out, &ERROR_HEADER, rows.iter().map(error_cells))
}

fn to_objects(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Value {
    Value::Array(
        rows.into_iter()
            .map(|cells| {
                let obj = header
                    .iter()
                    .zip(cells)
                    .map(|(h, c)| (h.to_string(), Value::String(c)))
                    .collect();
                Value::Object(obj)
            })
            .collect(),
    )
}

pub fn error_json(rows: &[ErrorRow]) -> Value {
    to_objects(&ERROR_HEADER, rows.iter().map(error_cells))
}

/// One quadrature value checked against its closed form.
#[derive(Clone, Debug)]
pub struct QuadRow {
    pub t: BigFloat,
    pub n: u64,
    pub value: BigFloat,
    pub err_estimate: BigFloat,
    pub reference: BigFloat,
    pub abs_diff: BigFloat,
}

fn quad_cells(r: &QuadRow) -> Vec<String> {
    vec![
        r.t.to_string(),
        r.n.to_string(),
        r.value.to_string(),
        r.err_estimate.to_string(),
        r.reference.to_string(),
        r.abs_diff.to_string(),
    ]
}

pub fn write_quad_csv<W: Write>(out: W, rows: &[QuadRow]) -> Result<()> {
    write_rows(out, &QUAD_HEADER, rows.iter().map(quad_cells))
}

pub fn quad_json(rows: &[QuadRow]) -> Value {
    to_objects(&QUAD_HEADER, rows.iter().map(quad_cells))
}
