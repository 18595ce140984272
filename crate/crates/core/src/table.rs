//! Rows of the `table` command and their CSV, JSON and markdown renderings.

use serde::Deserialize;
use serde_json::{Map, Value};

use crate::egf::GridShape;
use crate::error::{Error, Result};
use crate::report::{count_report, MethodPolicy, Quantity, Settings};

pub const DEFAULT_MAX_CELLS: usize = 15;

/// Column order shared by every format.
pub const COLUMNS: [Quantity; 6] = [
    Quantity::P,
    Quantity::H,
    Quantity::V,
    Quantity::R,
    Quantity::S,
    Quantity::W,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Markdown,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "markdown" => Ok(Format::Markdown),
            other => Err(format!(
                "unknown format `{other}` (expected csv, json or markdown)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputRow {
    pub m: usize,
    pub n: usize,
    /// Decimal strings in [`COLUMNS`] order.
    pub values: Vec<String>,
    /// How the row was obtained, e.g. `egf+sum+oracle` when two independent
    /// methods confirmed the generating-function values.
    pub method: String,
}

#[derive(Deserialize)]
struct CsvRecord {
    m: usize,
    n: usize,
    #[serde(rename = "P")]
    p: String,
    #[serde(rename = "H")]
    h: String,
    #[serde(rename = "V")]
    v: String,
    #[serde(rename = "R")]
    r: String,
    #[serde(rename = "S")]
    s: String,
    #[serde(rename = "W")]
    w: String,
}

/// Computes every row with `m != n` and `mn <= max_cells`. Values come from
/// the generating functions; sums and the oracle confirm them where they
/// reach. A failed confirmation is an error, not a footnote.
pub fn build(max_cells: usize, settings: &Settings<'_>) -> Result<Vec<OutputRow>> {
    let shapes: Vec<GridShape> = GridShape::all_up_to(max_cells)
        .into_iter()
        .filter(|s| !s.is_square())
        .collect();
    let rows: Vec<Result<OutputRow>> = std::thread::scope(|scope| {
        let handles: Vec<_> = shapes
            .iter()
            .map(|&shape| scope.spawn(move || row_for(shape, settings)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("table worker panicked"))
            .collect()
    });
    rows.into_iter().collect()
}

fn row_for(shape: GridShape, settings: &Settings<'_>) -> Result<OutputRow> {
    let report = count_report(shape, MethodPolicy::Auto, &COLUMNS, settings)?;
    if let Some(bad) = report.failures().next() {
        return Err(Error::Inconsistent(format!("{}: {}", bad.name, bad.detail)));
    }
    let values = COLUMNS
        .iter()
        .map(|&q| report.get(q).expect("requested column").to_string())
        .collect();
    let mut method = vec!["egf"];
    method.extend(report.check_methods());
    Ok(OutputRow {
        m: shape.rows(),
        n: shape.cols(),
        values,
        method: method.join("+"),
    })
}

pub fn render(rows: &[OutputRow], format: Format) -> String {
    match format {
        Format::Csv => render_csv(rows),
        Format::Json => render_json(rows),
        Format::Markdown => render_markdown(rows),
    }
}

pub fn render_csv(rows: &[OutputRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    // Written explicitly so an empty table still has its header.
    w.write_record(["m", "n", "P", "H", "V", "R", "S", "W"])
        .expect("writing to memory");
    for row in rows {
        let mut record = vec![row.m.to_string(), row.n.to_string()];
        record.extend(row.values.iter().cloned());
        w.write_record(&record).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flushing to memory")).expect("ascii output")
}

pub fn parse_csv(text: &str) -> Result<Vec<OutputRow>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Error::Inconsistent(format!("bad CSV header: {e}")))?;
    if header != vec!["m", "n", "P", "H", "V", "R", "S", "W"] {
        return Err(Error::Inconsistent(format!(
            "unexpected CSV header {header:?}"
        )));
    }
    reader
        .deserialize::<CsvRecord>()
        .map(|rec| {
            let rec = rec.map_err(|e| Error::Inconsistent(format!("bad CSV row: {e}")))?;
            Ok(OutputRow {
                m: rec.m,
                n: rec.n,
                values: vec![rec.p, rec.h, rec.v, rec.r, rec.s, rec.w],
                method: String::new(),
            })
        })
        .collect()
}

fn row_to_json(row: &OutputRow) -> Value {
    let mut obj = Map::new();
    obj.insert("m".into(), Value::from(row.m));
    obj.insert("n".into(), Value::from(row.n));
    for (q, v) in COLUMNS.iter().zip(&row.values) {
        obj.insert(q.name().into(), Value::String(v.clone()));
    }
    obj.insert("method".into(), Value::String(row.method.clone()));
    Value::Object(obj)
}

pub fn render_json(rows: &[OutputRow]) -> String {
    let array = Value::Array(rows.iter().map(row_to_json).collect());
    let mut text = serde_json::to_string_pretty(&array).expect("serializable");
    text.push('\n');
    text
}

pub fn parse_json(text: &str) -> Result<Vec<OutputRow>> {
    let bad = |what: &str| Error::Inconsistent(format!("bad JSON table: {what}"));
    let value: Value = serde_json::from_str(text).map_err(|e| bad(&e.to_string()))?;
    let array = value.as_array().ok_or_else(|| bad("expected an array"))?;
    array
        .iter()
        .map(|item| {
            let obj = item.as_object().ok_or_else(|| bad("expected objects"))?;
            let dim = |k: &str| {
                obj.get(k)
                    .and_then(Value::as_u64)
                    .map(|v| v as usize)
                    .ok_or_else(|| bad(&format!("missing `{k}`")))
            };
            let text_field = |k: &str| {
                obj.get(k)
                    .and_then(Value::as_str)
                    .map(str::to_string)
                    .ok_or_else(|| bad(&format!("missing string `{k}`")))
            };
            Ok(OutputRow {
                m: dim("m")?,
                n: dim("n")?,
                values: COLUMNS
                    .iter()
                    .map(|q| text_field(q.name()))
                    .collect::<Result<_>>()?,
                method: text_field("method")?,
            })
        })
        .collect()
}

pub fn render_markdown(rows: &[OutputRow]) -> String {
    let mut out = String::from("| m | n | P | H | V | R | S | W | method |\n");
    out.push_str("|---|---|---|---|---|---|---|---|---|\n");
    for row in rows {
        out.push_str(&format!(
            "| {} | {} | {} | {} |\n",
            row.m,
            row.n,
            row.values.join(" | "),
            row.method
        ));
    }
    out
}
