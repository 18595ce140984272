//! Command-line front end.
//!
//! Output is assembled in memory and written only when a command succeeds;
//! failures print a diagnostic to stderr and nothing to stdout.
//!
//! Exit statuses: 0 success, 1 a cross-check or verification mismatch,
//! 2 bad usage (flags, selectors, a method that cannot produce the value),
//! 3 W or C asked of a square shape, 4 the shape exceeds the oracle limit.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde_json::{Map, Value};

use crate::egf::{exponent_and_exp, render_rational, Exponent, GridShape};
use crate::error::Error;
use crate::exact::StirlingTable;
use crate::oracle::OracleLimit;
use crate::report::{count_report, Method, MethodPolicy, Quantity, Settings};
use crate::series::{Caps, TruncatedSeries};
use crate::table::{self, Format};
use crate::verify::{self, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SQUARE: i32 = 3;
pub const EXIT_ORACLE_LIMIT: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "wordrep",
    version,
    about = "Exact counts of circled-letter arrays and their symmetry classes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count arrays for one m x n shape.
    Count(CountArgs),
    /// Print the table of P, H, V, R, S, W over non-square shapes.
    Table(TableArgs),
    /// Run every cross-validation sweep and the normalization audits.
    Verify(VerifyArgs),
    /// Dump the coefficients of one exponent and of its exponential.
    Series(SeriesArgs),
}

#[derive(Debug, Args)]
struct CountArgs {
    m: usize,
    n: usize,
    /// Comma-separated subset of P,H,V,R,S,W,C.
    #[arg(long, value_delimiter = ',')]
    quantities: Option<Vec<Quantity>>,
    #[arg(long, default_value = "auto")]
    method: MethodArg,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct MethodArg(MethodPolicy);

impl std::str::FromStr for MethodArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let policy = match s {
            "auto" => MethodPolicy::Auto,
            "egf" => MethodPolicy::Only(Method::Egf),
            "sum" => MethodPolicy::Only(Method::ClosedSum),
            "oracle" => MethodPolicy::Only(Method::Oracle),
            other => {
                return Err(format!(
                    "unknown method `{other}` (expected auto, egf, sum or oracle)"
                ))
            }
        };
        Ok(MethodArg(policy))
    }
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long, default_value_t = table::DEFAULT_MAX_CELLS)]
    max_cells: usize,
    #[arg(long, default_value = "csv")]
    format: Format,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = verify::DEFAULT_MAX_CELLS)]
    max_cells: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct SeriesArgs {
    #[arg(long)]
    which: Exponent,
    /// Degree caps in x, y, z as `dx,dy,dz`.
    #[arg(long)]
    caps: CapsArg,
}

#[derive(Debug, Clone, Copy)]
struct CapsArg(Caps);

impl std::str::FromStr for CapsArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').collect();
        let [x, y, z] = parts.as_slice() else {
            return Err(format!("caps `{s}` must be three comma-separated integers"));
        };
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("caps `{s}` must be three comma-separated integers"))
        };
        Ok(CapsArg(Caps::new(parse(x)?, parse(y)?, parse(z)?)))
    }
}

/// A command failure: what to print on stderr and which status to return.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::SquareShape(_) => EXIT_SQUARE,
            Error::OracleLimit { .. } => EXIT_ORACLE_LIMIT,
            Error::Inconsistent(_) | Error::NonIntegral { .. } => EXIT_MISMATCH,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

/// Runs the tool with the standard Stirling table.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, StirlingTable::standard(), out, err)
}

/// Like [`run`] but with an explicit Stirling table, so tests can inject a
/// corrupted one.
pub fn run_with<I, T>(
    args: I,
    stirling: &StirlingTable,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, stirling) {
        Ok((code, text)) => {
            let _ = out.write_all(text.as_bytes());
            if code != EXIT_OK {
                let _ = writeln!(err, "wordrep: verification failed");
            }
            code
        }
        Err(f) => {
            let _ = writeln!(err, "wordrep: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, stirling: &StirlingTable) -> Result<(i32, String), Failure> {
    match command {
        Command::Count(a) => count(a, stirling).map(|t| (EXIT_OK, t)),
        Command::Table(a) => table_cmd(a, stirling).map(|t| (EXIT_OK, t)),
        Command::Verify(a) => verify_cmd(a, stirling),
        Command::Series(a) => series(a).map(|t| (EXIT_OK, t)),
    }
}

fn settings(stirling: &StirlingTable) -> Result<Settings<'_>, Failure> {
    let oracle_limit = OracleLimit::from_env().map_err(usage)?;
    Ok(Settings {
        oracle_limit,
        stirling,
    })
}

fn count(a: CountArgs, stirling: &StirlingTable) -> Result<String, Failure> {
    let shape = GridShape::new(a.m, a.n)?;
    let settings = settings(stirling)?;
    let requested: Vec<Quantity> = match a.quantities {
        Some(mut qs) => {
            qs.sort_unstable();
            qs.dedup();
            qs
        }
        None if shape.is_square() => Quantity::BASE.to_vec(),
        None => Quantity::ALL.to_vec(),
    };
    let report = count_report(shape, a.method.0, &requested, &settings)?;
    if let Some(bad) = report.failures().next() {
        return Err(Failure {
            code: EXIT_MISMATCH,
            message: format!("cross-check failed: {} ({})", bad.name, bad.detail),
        });
    }

    if a.json {
        let mut obj = Map::new();
        obj.insert("m".into(), Value::from(a.m));
        obj.insert("n".into(), Value::from(a.n));
        let mut methods = Map::new();
        for &q in &requested {
            let v = report.get(q).expect("requested quantity");
            obj.insert(q.name().into(), Value::String(v.to_string()));
            let method = report.method(q).expect("requested quantity");
            methods.insert(q.name().into(), Value::String(method.name().into()));
        }
        obj.insert("method".into(), Value::Object(methods));
        let checks: Vec<Value> = report
            .consistency
            .iter()
            .map(|c| serde_json::json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
            .collect();
        obj.insert("checks".into(), Value::Array(checks));
        let mut text = serde_json::to_string(&Value::Object(obj)).expect("serializable");
        text.push('\n');
        return Ok(text);
    }

    let mut line = format!("m={} n={}", a.m, a.n);
    for &q in &requested {
        line.push_str(&format!(
            " {}={}",
            q,
            report.get(q).expect("requested quantity")
        ));
    }
    let method = report.method(requested[0]).expect("requested quantity");
    let mut text = format!("{line}\nmethod: {method}");
    let checked = report.check_methods();
    if !checked.is_empty() {
        text.push_str(&format!(
            ", {} checks passed against {}",
            report.consistency.len(),
            checked.join(" and ")
        ));
    }
    text.push('\n');
    Ok(text)
}

fn table_cmd(a: TableArgs, stirling: &StirlingTable) -> Result<String, Failure> {
    let settings = settings(stirling)?;
    let rows = table::build(a.max_cells, &settings)?;
    Ok(table::render(&rows, a.format))
}

fn verify_cmd(a: VerifyArgs, stirling: &StirlingTable) -> Result<(i32, String), Failure> {
    let report = verify::run(
        VerifyOptions {
            max_cells: a.max_cells,
        },
        stirling,
    )?;
    let code = if report.passed() {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    };
    let text = if a.json {
        let value = serde_json::json!({"passed": report.passed(), "checks": report.checks});
        let mut t = serde_json::to_string_pretty(&value).expect("serializable");
        t.push('\n');
        t
    } else {
        let width = report
            .checks
            .iter()
            .map(|c| c.name.len())
            .max()
            .unwrap_or(0);
        let mut t = String::new();
        for c in &report.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            t.push_str(&format!(
                "{mark}  {:<width$}  [{} cases] {}\n",
                c.name, c.cases, c.detail
            ));
        }
        let passed = report.checks.iter().filter(|c| c.passed).count();
        t.push_str(&format!("{passed}/{} checks passed\n", report.checks.len()));
        t
    };
    Ok((code, text))
}

fn series(a: SeriesArgs) -> Result<String, Failure> {
    let (f, g) = exponent_and_exp(a.which, a.caps.0)?;
    let mut text = format!("# exponent {}\n", a.which.selector());
    dump(&f, &mut text);
    text.push_str("# exp\n");
    dump(&g, &mut text);
    Ok(text)
}

fn dump(s: &TruncatedSeries, text: &mut String) {
    for (d, c) in s.terms() {
        text.push_str(&format!("{},{},{},{}\n", d.x, d.y, d.z, render_rational(c)));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("wordrep").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn count_text_line() {
        let (code, out, _) = call(&["count", "3", "1"]);
        assert_eq!(code, 0);
        assert!(
            out.starts_with("m=3 n=1 P=30 H=8 V=30 R=8 S=8 W=19 C=0\n"),
            "{out}"
        );
    }

    #[test]
    fn caps_parsing() {
        assert!("1,2".parse::<CapsArg>().is_err());
        assert!("1,2,x".parse::<CapsArg>().is_err());
        let c = "0,1,2".parse::<CapsArg>().unwrap().0;
        assert_eq!((c.x, c.y, c.z), (0, 1, 2));
    }

    #[test]
    fn series_constant_only() {
        let (code, out, _) = call(&["series", "--which", "P", "--caps", "0,0,0"]);
        assert_eq!(code, 0);
        assert_eq!(out, "# exponent P\n0,0,0,0/1\n# exp\n0,0,0,1/1\n");
    }
}
