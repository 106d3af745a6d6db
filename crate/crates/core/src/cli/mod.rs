//! Command-line front end. Exit codes: 0 when a report or verdict was produced,
//! 1 when `verify-paper` finds a mismatch, 2 on input errors.

pub mod paper;
pub mod reports;

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::curvepoints::point_count_report;
use crate::curvering::CurveSpec;
use crate::error::{Error, Result};
use crate::finfield::{make_extension, prime_power, FqField};
use crate::hasse::hasse_principle;
use crate::schema::{from_json, CurveJson, FieldElemJson, FormFile, SearchFile, WitnessFile};

pub use paper::{verify_paper, PaperReport, PaperRow};
pub use reports::{budget_from_env, form_report, genus_report, search_report, FormReport, SearchReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "hasse-forms",
    version,
    about = "Unimodular forms over coordinate rings of curves over F_q"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// Curve JSON document: a path, or the document itself if it starts with '{'.
    #[arg(long, conflicts_with_all = ["q", "a", "b", "polyline"])]
    pub input: Option<String>,
    /// Field size, an odd prime power.
    #[arg(long)]
    pub q: Option<u64>,
    /// Coefficient a: an integer, or comma-separated coefficients over an extension.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// The affine line instead of a Weierstrass curve.
    #[arg(long, conflicts_with_all = ["a", "b"])]
    pub polyline: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Point count, singular points and Picard order of a curve.
    Curve(CurveArgs),
    /// Hasse principle verdict for unimodular forms of a given rank.
    Hasse {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        rank: usize,
    },
    /// Determinant and local discriminants of a Gram matrix.
    Form {
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = reports::DEFAULT_INSPECTION_DEGREE)]
        inspection_degree: usize,
    },
    /// Check a genus witness and its coverage of closed points.
    GenusVerify {
        #[arg(long)]
        input: String,
        /// Overrides the degree in the witness file.
        #[arg(long)]
        inspection_degree: Option<usize>,
    },
    /// Bounded search for an integral isometry with unit determinant.
    IsomSearch {
        #[arg(long)]
        input: String,
        /// Bound on the x-degree of each entry; overrides the file.
        #[arg(long)]
        degree_bound: Option<usize>,
        /// 0 or 1: whether entries may involve y.
        #[arg(long)]
        deg_y: Option<usize>,
    },
    /// Reproduce the worked examples and print a pass/fail table.
    VerifyPaper,
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn read_input(arg: &str) -> Result<String> {
    if arg.trim_start().starts_with('{') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(arg).map_err(|e| Error::InvalidInput(format!("cannot read {arg}: {e}")))
}

fn field_of_size(q: u64) -> Result<FqField> {
    let (p, k) = prime_power(q).ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
    make_extension(p, k)
}

fn coeff_arg(text: &str) -> Result<FieldElemJson> {
    let parts = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::InvalidInput(format!("bad coefficient {t:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(match parts.as_slice() {
        [v] => FieldElemJson::Int(*v),
        _ => FieldElemJson::Coeffs(parts),
    })
}

fn curve_from_args(args: &CurveArgs) -> Result<CurveSpec> {
    if let Some(input) = &args.input {
        return from_json::<CurveJson>(&read_input(input)?)?.to_curve();
    }
    let q = args
        .q
        .ok_or_else(|| Error::InvalidInput("give --input or --q".into()))?;
    let field = field_of_size(q)?;
    if args.polyline {
        return Ok(CurveSpec::polyline(&field));
    }
    let (Some(a), Some(b)) = (&args.a, &args.b) else {
        return Err(Error::InvalidInput(
            "a Weierstrass curve needs --a and --b (or pass --polyline)".into(),
        ));
    };
    CurveSpec::weierstrass(&coeff_arg(a)?.to_elem(&field)?, &coeff_arg(b)?.to_elem(&field)?)
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
            if a.is_empty() {
                out.push(format!("{prefix}: []"));
            }
        }
        Value::Array(a) => {
            let items: Vec<String> = a.iter().map(scalar).collect();
            out.push(format!("{prefix}: [{}]", items.join(", ")));
        }
        x => out.push(format!("{prefix}: {}", scalar(x))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Renders a report; text output lists every JSON field as a `path: value` line.
pub fn render<T: Serialize>(report: &T, format: Format) -> String {
    let v = serde_json::to_value(report).expect("reports serialize");
    match format {
        Format::Json => serde_json::to_string_pretty(&v).expect("reports serialize") + "\n",
        Format::Text => {
            let mut lines = Vec::new();
            flatten("", &v, &mut lines);
            lines.join("\n") + "\n"
        }
    }
}

fn render_paper(report: &PaperReport, format: Format) -> String {
    match format {
        Format::Json => render(report, format),
        Format::Text => {
            let mut s = String::new();
            for r in &report.rows {
                s += &format!(
                    "{}  {}  expected: {}  observed: {}\n",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.check,
                    r.expected,
                    r.observed
                );
            }
            s += &format!("schema: {}\nall_pass: {}\n", report.schema, report.all_pass);
            s
        }
    }
}

fn dispatch(cli: &Cli) -> Result<(i32, String)> {
    let fmt = cli.format;
    Ok(match &cli.command {
        Command::Curve(args) => (0, render(&point_count_report(&curve_from_args(args)?)?, fmt)),
        Command::Hasse { curve, rank } => (0, render(&hasse_principle(&curve_from_args(curve)?, *rank)?, fmt)),
        Command::Form {
            input,
            inspection_degree,
        } => {
            let file: FormFile = from_json(&read_input(input)?)?;
            (0, render(&form_report(&file, *inspection_degree)?, fmt))
        }
        Command::GenusVerify {
            input,
            inspection_degree,
        } => {
            let file: WitnessFile = from_json(&read_input(input)?)?;
            (0, render(&genus_report(&file, *inspection_degree)?, fmt))
        }
        Command::IsomSearch {
            input,
            degree_bound,
            deg_y,
        } => {
            let file: SearchFile = from_json(&read_input(input)?)?;
            let report = search_report(&file, *degree_bound, *deg_y, budget_from_env()?)?;
            (0, render(&report, fmt))
        }
        Command::VerifyPaper => {
            let report = verify_paper(budget_from_env()?)?;
            (if report.all_pass { 0 } else { 1 }, render_paper(&report, fmt))
        }
    })
}

/// Parses `args` (program name first) and runs the command.
pub fn run_from<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 {
                (text, String::new())
            } else {
                (String::new(), text)
            };
            return Outcome { code, stdout, stderr };
        }
    };
    match dispatch(&cli) {
        Ok((code, stdout)) => Outcome {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

/// Entry point of the binary.
pub fn run() -> i32 {
    let out = run_from(std::env::args_os());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    out.code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Outcome {
        run_from(std::iter::once("hasse-forms").chain(args.iter().copied()))
    }

    #[test]
    fn curve_and_hasse_flags() {
        let out = run(&["curve", "--q", "5", "--a", "2", "--b", "3"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["total"], 7);
        assert_eq!(v["smooth"], false);
        let out = run(&["hasse", "--polyline", "--q", "5", "--rank", "4"]);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["verdict"], "Holds");
        let out = run(&["hasse", "--q", "5", "--a", "-1", "--b", "0", "--rank", "3"]);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["verdict"], "Fails");
        assert_eq!(v["reason"]["pic_order"], 8);
    }

    #[test]
    fn input_errors_exit_two() {
        assert_eq!(run(&["curve", "--q", "6", "--a", "1", "--b", "1"]).code, 2);
        assert_eq!(run(&["curve", "--q", "5", "--a", "1"]).code, 2);
        assert_eq!(
            run(&["hasse", "--q", "5", "--a", "2", "--b", "3", "--rank", "3"]).code,
            2
        );
        assert_eq!(run(&["genus-verify", "--input", "{\"schema\":1}"]).code, 2);
        assert_eq!(run(&["bogus"]).code, 2);
        assert_eq!(run(&["--help"]).code, 0);
    }

    #[test]
    fn extension_coefficients() {
        let out = run(&["curve", "--q", "9", "--a", "0,1", "--b", "1"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let out = run(&[
            "curve",
            "--input",
            r#"{"field":{"p":3,"k":2},"kind":"weierstrass","a":[0,1],"b":1}"#,
        ]);
        assert_eq!(out.code, 0, "{}", out.stderr);
    }

    #[test]
    fn text_mirrors_json() {
        let out = run(&["--format", "text", "curve", "--q", "5", "--a", "2", "--b", "3"]);
        assert!(out.stdout.contains("total: 7\n"));
        assert!(out.stdout.contains("singular_points: [(4,0)]\n"));
        let out = run(&["hasse", "--format", "text", "--polyline", "--q", "3", "--rank", "2"]);
        assert!(out.stdout.contains("reason.ufd: true\n"), "{}", out.stdout);
    }
}
