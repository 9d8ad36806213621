//! The `casson` command line: argument parsing, command dispatch and output formatting.

use std::io::{self, Write};

use casson_core::formulas::{bb_census, decompose_lambda_zero, lambda_psl_small_seifert};
use casson_core::oracle::{verify_census, CheckStatus, DEFAULT_CAP};
use casson_core::report::{default_coefficients, sweep, SweepRow, SWEEP_HEADER};
use casson_core::{
    parse_manifold_expr, Error, InvariantReport, ManifoldExpr, ManifoldSpec, SeifertHSSpec, SmallSeifertSpec,
    TwistSurgerySpec,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;
pub const EXIT_CAP: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "casson", version, about = "Exact PSL(2,C) and SL(2,C) Casson invariants")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    pub format: Format,
    /// Largest p*q*r the character enumeration will attempt.
    #[arg(long, env = "CASSON_CAP", default_value_t = DEFAULT_CAP as u64, global = true)]
    pub cap: u64,
    /// Omit caveats from the output.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Seifert fibered homology sphere with the given multiplicities.
    Shs {
        #[arg(required = true, num_args = 2..)]
        multiplicities: Vec<i64>,
    },
    /// p/q surgery on the twist knot K_xi.
    Twist {
        #[arg(long)]
        xi: i64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_slope)]
        slope: (i64, i64),
    },
    /// Small Seifert fibered space over S^2(p,q,r).
    Ssf(SeifertArgs),
    /// Character census and the composition identity.
    Census(SeifertArgs),
    /// Connected sums, e.g. "SHS(2,3,5) # SSF(4,6,8;1,1,1)".
    Expr { expression: String },
    /// Check the closed forms against the character enumeration.
    Verify {
        #[command(flatten)]
        seifert: SeifertArgs,
        /// Treat findings in unproved parity classes as failures.
        #[arg(long)]
        strict: bool,
    },
    /// Every 2 <= p <= q <= r <= max with the first k valid (a,b,c).
    Sweep {
        #[arg(long)]
        max: i64,
        #[arg(long, default_value_t = 1)]
        abc_samples: usize,
        /// Treat findings in unproved parity classes as failures.
        #[arg(long)]
        strict: bool,
    },
}

#[derive(Debug, Args)]
pub struct SeifertArgs {
    #[arg(allow_negative_numbers = true)]
    p: i64,
    #[arg(allow_negative_numbers = true)]
    q: i64,
    #[arg(allow_negative_numbers = true)]
    r: i64,
    /// Seifert coefficients; defaults to the smallest valid positive triple.
    #[arg(long, num_args = 3, value_names = ["A", "B", "C"], allow_negative_numbers = true)]
    abc: Option<Vec<i64>>,
}

impl SeifertArgs {
    fn spec(&self) -> Result<SmallSeifertSpec, Error> {
        let (a, b, c) = match &self.abc {
            Some(v) => (v[0], v[1], v[2]),
            None => default_coefficients(self.p, self.q, self.r).unwrap_or((1, 1, 1)),
        };
        Ok(SmallSeifertSpec::new(self.p, self.q, self.r, a, b, c)?)
    }
}

fn parse_slope(s: &str) -> Result<(i64, i64), String> {
    let (p, q) = s.split_once('/').unwrap_or((s, "1"));
    let parse = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("bad slope {s:?}: {e}"));
    Ok((parse(p)?, parse(q)?))
}

/// Outcome of a command: text to print and the exit status.
struct Outcome {
    stdout: String,
    stderr: String,
    code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, stderr: String::new(), code: EXIT_OK }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let outcome = execute(&cli).unwrap_or_else(|e| Outcome {
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
        code: exit_code(&e),
    });
    let _ = out.write_all(outcome.stdout.as_bytes());
    let _ = err.write_all(outcome.stderr.as_bytes());
    outcome.code
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Validation(_) | Error::Parse(_) => EXIT_INVALID,
        Error::CapExceeded { .. } => EXIT_CAP,
        _ => EXIT_MISMATCH,
    }
}

fn execute(cli: &Cli) -> Result<Outcome, Error> {
    let cap = cli.cap as u128;
    match &cli.command {
        Command::Shs { multiplicities } => {
            let spec = ManifoldSpec::SeifertHS(SeifertHSSpec::new(multiplicities.clone())?);
            single(cli, ManifoldExpr::Leaf(spec), true)
        }
        Command::Twist { xi, slope } => {
            let spec = ManifoldSpec::TwistSurgery(TwistSurgerySpec::new(*xi, slope.0, slope.1)?);
            single(cli, ManifoldExpr::Leaf(spec), true)
        }
        Command::Ssf(args) => single(cli, ManifoldExpr::Leaf(ManifoldSpec::SmallSeifert(args.spec()?)), false),
        Command::Expr { expression } => single(cli, parse_manifold_expr(expression)?, false),
        Command::Census(args) => census(cli, &args.spec()?),
        Command::Verify { seifert, strict } => verify(cli, &seifert.spec()?, cap, *strict),
        Command::Sweep { max, abc_samples, strict } => {
            if *max < 2 {
                return Ok(Outcome {
                    stdout: String::new(),
                    stderr: format!("error: --max must be at least 2, got {max}\n"),
                    code: EXIT_INVALID,
                });
            }
            let mut rows = sweep(*max, *abc_samples, cap)?;
            if cli.quiet {
                rows.iter_mut().for_each(|r| r.caveats.clear());
            }
            let mut stdout = Vec::new();
            emit(&rows, cli.format, &mut stdout).expect("in-memory output");
            let failed: Vec<&SweepRow> = rows.iter().filter(|r| !r.passed()).collect();
            let findings: Vec<&SweepRow> =
                rows.iter().filter(|r| r.oracle_ok == casson_core::report::OracleStatus::Finding).collect();
            let mut stderr = format!(
                "{} rows, {} passed, {} failed, {} findings\n",
                rows.len(),
                rows.len() - failed.len(),
                failed.len(),
                findings.len()
            );
            for r in &failed {
                stderr += &format!("FAIL {} [{}]\n", r.manifold, r.failures.join(", "));
            }
            if !cli.quiet {
                for r in &findings {
                    stderr += &format!("FINDING {}\n", r.manifold);
                }
            }
            let bad = !failed.is_empty() || (*strict && !findings.is_empty());
            Ok(Outcome {
                stdout: String::from_utf8(stdout).expect("utf-8 output"),
                stderr,
                code: if bad { EXIT_MISMATCH } else { EXIT_OK },
            })
        }
    }
}

fn single(cli: &Cli, expr: ManifoldExpr, value_only: bool) -> Result<Outcome, Error> {
    let mut report = decompose_lambda_zero(&expr)?;
    if cli.quiet {
        report.caveats.clear();
    }
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("in-memory output") + "\n",
        Format::Csv => report_csv(&report),
        Format::Plain if value_only => format!("{}\n", report.lambda_psl),
        Format::Plain => report_plain(&report),
    };
    Ok(Outcome::ok(text))
}

fn opt(v: Option<impl ToString>) -> String {
    v.map_or(String::new(), |v| v.to_string())
}

fn caveat_list(report: &InvariantReport) -> String {
    report.caveats.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(";")
}

fn report_csv(report: &InvariantReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let write = |w: &mut csv::Writer<Vec<u8>>| -> csv::Result<()> {
        w.write_record(["manifold", "lambda_psl", "lambda_sl", "h1", "h1_z2_order", "lambda_zero", "residual", "caveats"])?;
        w.write_record([
            report.manifold.clone(),
            report.lambda_psl.to_string(),
            opt(report.lambda_sl),
            report.h1.to_string(),
            report.h1_z2_order.to_string(),
            opt(report.lambda_zero),
            opt(report.residual),
            caveat_list(report),
        ])
    };
    write(&mut w).expect("in-memory output");
    String::from_utf8(w.into_inner().expect("in-memory output")).expect("utf-8 output")
}

fn report_plain(report: &InvariantReport) -> String {
    let mut lines = vec![
        ("manifold", report.manifold.clone()),
        ("lambda_psl", report.lambda_psl.to_string()),
        ("lambda_sl", opt(report.lambda_sl)),
        ("h1", report.h1.to_string()),
        ("h1_z2_order", report.h1_z2_order.to_string()),
        ("lambda_zero", opt(report.lambda_zero)),
        ("residual (conjectural)", opt(report.residual)),
    ];
    if !report.caveats.is_empty() {
        lines.push(("caveats", caveat_list(report)));
    }
    key_values(&lines)
}

fn key_values(lines: &[(&str, String)]) -> String {
    let width = lines.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    lines.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
}

fn census(cli: &Cli, spec: &SmallSeifertSpec) -> Result<Outcome, Error> {
    let census = bb_census(spec)?;
    let lambda = lambda_psl_small_seifert(spec)?;
    let holds = census.lambda_psl_from_census == lambda;
    let text = match cli.format {
        Format::Json => {
            let value = serde_json::json!({
                "manifold": spec.to_string(),
                "census": census,
                "lambda_psl": lambda,
                "composition_identity": holds,
            });
            serde_json::to_string_pretty(&value).expect("in-memory output") + "\n"
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["manifold", "reducible", "dihedral", "klein", "total", "lambda_psl_from_census", "lambda_psl", "composition_identity"])
                .expect("in-memory output");
            w.write_record([
                spec.to_string(),
                census.reducible.to_string(),
                census.dihedral.to_string(),
                census.klein.to_string(),
                census.total.to_string(),
                census.lambda_psl_from_census.to_string(),
                lambda.to_string(),
                holds.to_string(),
            ])
            .expect("in-memory output");
            String::from_utf8(w.into_inner().expect("in-memory output")).expect("utf-8 output")
        }
        Format::Plain => key_values(&[
            ("manifold", spec.to_string()),
            ("reducible", census.reducible.to_string()),
            ("dihedral", census.dihedral.to_string()),
            ("klein", census.klein.to_string()),
            ("total", census.total.to_string()),
            ("lambda_psl_from_census", census.lambda_psl_from_census.to_string()),
            ("lambda_psl", lambda.to_string()),
            ("composition_identity", if holds { "holds" } else { "FAILS" }.to_string()),
        ]),
    };
    Ok(Outcome { stdout: text, stderr: String::new(), code: if holds { EXIT_OK } else { EXIT_MISMATCH } })
}

fn verify(cli: &Cli, spec: &SmallSeifertSpec, cap: u128, strict: bool) -> Result<Outcome, Error> {
    let mut report = verify_census(spec, cap)?;
    if cli.quiet {
        report.checks.iter_mut().for_each(|c| c.note = None);
    }
    let bad = !report.passed() || (strict && report.findings().next().is_some());
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("in-memory output") + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["manifold", "check", "expected", "actual", "status", "note"]).expect("in-memory output");
            for c in &report.checks {
                w.write_record([
                    report.manifold.as_str(),
                    c.name,
                    &c.expected,
                    &c.actual,
                    status_str(c.status),
                    c.note.as_deref().unwrap_or(""),
                ])
                .expect("in-memory output");
            }
            String::from_utf8(w.into_inner().expect("in-memory output")).expect("utf-8 output")
        }
        Format::Plain => {
            let mut s = format!(
                "{}: oracle counts {} (+I) + {} (-I)\n",
                report.manifold, report.oracle_plus, report.oracle_minus
            );
            for c in &report.checks {
                s += &format!("{:<9} {:<32} expected {:<8} actual {}", status_str(c.status), c.name, c.expected, c.actual);
                if let Some(n) = &c.note {
                    s += &format!("  ({n})");
                }
                s.push('\n');
            }
            s
        }
    };
    Ok(Outcome { stdout: text, stderr: String::new(), code: if bad { EXIT_MISMATCH } else { EXIT_OK } })
}

fn status_str(s: CheckStatus) -> &'static str {
    match s {
        CheckStatus::Pass => "pass",
        CheckStatus::Fail => "FAIL",
        CheckStatus::Finding => "finding",
        CheckStatus::NotApplicable => "n/a",
    }
}

/// Writes sweep rows as CSV (fixed header), a JSON array, or an aligned table.
pub fn emit(rows: &[SweepRow], format: Format, out: &mut dyn Write) -> io::Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(SWEEP_HEADER)?;
            for row in rows {
                w.write_record(row.fields())?;
            }
            w.flush()
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, rows)?;
            writeln!(out)
        }
        Format::Plain => {
            let table: Vec<[String; 13]> = rows.iter().map(SweepRow::fields).collect();
            let mut widths = SWEEP_HEADER.map(str::len);
            for fields in &table {
                for (w, f) in widths.iter_mut().zip(fields) {
                    *w = (*w).max(f.chars().count());
                }
            }
            let line = |cells: &[&str]| {
                let padded: Vec<String> =
                    cells.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
                padded.join("  ").trim_end().to_string() + "\n"
            };
            out.write_all(line(&SWEEP_HEADER).as_bytes())?;
            for fields in &table {
                let cells: Vec<&str> = fields.iter().map(String::as_str).collect();
                out.write_all(line(&cells).as_bytes())?;
            }
            Ok(())
        }
    }
}
