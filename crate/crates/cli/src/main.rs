use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use mzv_core::corpus::{
    builtin_corpus, eval_ast, parse_corpus, parse_expr, reduce_ast, report_json, report_tsv, run_suite, Bindings,
    Identity, Mode, SuiteConfig, Value,
};
use mzv_core::discovery::{Registry, SearchConfig, SpanFn};
use mzv_core::exact::{bernoulli, euler_number};
use mzv_core::mp::EvalContext;
use mzv_core::Error;

// Write errors (a closed pipe) are ignored rather than panicking.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

macro_rules! out_raw {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = write!(std::io::stdout().lock(), $($t)*);
    }};
}

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NOT_REDUCIBLE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "mzv", version, about = "Double zeta values: evaluation, reduction, identity checks and search")]
struct Cli {
    /// Working precision in decimal digits.
    #[arg(long, global = true, default_value_t = 40, value_parser = clap::value_parser!(u32).range(10..=2000))]
    prec: u32,
    /// Identity corpus; the built-in corpus when unset.
    #[arg(long, global = true, env = "MZV_CORPUS")]
    corpus: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Leave the timestamp and timings out of JSON output.
    #[arg(long, global = true)]
    no_timestamp: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Tsv,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evaluate an expression numerically.
    Eval {
        expr: String,
        /// Bind a variable, `name=value`.
        #[arg(long = "set", value_parser = parse_binding)]
        set: Vec<(String, i64)>,
    },
    /// Reduce an expression to a closed form.
    Reduce {
        expr: String,
        #[arg(long = "set", value_parser = parse_binding)]
        set: Vec<(String, i64)>,
    },
    /// Check corpus identities.
    Verify {
        /// Check every identity (the default when --ids is absent).
        #[arg(long)]
        all: bool,
        /// Comma-separated identity ids.
        #[arg(long, value_delimiter = ',', conflicts_with = "all")]
        ids: Option<Vec<String>>,
        /// Upper cap on every parameter.
        #[arg(long, default_value_t = 10)]
        max_param: i64,
        #[arg(long, value_enum, default_value_t = ModeArg::Both)]
        mode: ModeArg,
        /// Directory receiving verify.json and verify.tsv.
        #[arg(long, default_value = "mzv-reports")]
        report_dir: PathBuf,
    },
    /// Search for weighted sums with a closed form.
    Search {
        /// Ansatz family; repeat for several. All families when absent.
        #[arg(long = "family")]
        families: Vec<String>,
        /// Height bound for rational parameters.
        #[arg(long, default_value_t = 16)]
        height: u32,
        /// Degree bound for polynomial weights.
        #[arg(long, default_value_t = 2)]
        deg: u32,
        /// Comma-separated fitting span for f(s).
        #[arg(long, value_delimiter = ',')]
        span: Option<Vec<SpanFn>>,
        /// Also list redundant and rejected candidates.
        #[arg(long)]
        verbose: bool,
    },
    /// Bernoulli number B_n.
    Bernoulli { n: usize },
    /// Euler number E_n.
    Euler { n: usize },
    /// Inspect the corpus.
    Corpus {
        #[command(subcommand)]
        cmd: CorpusCmd,
    },
}

#[derive(Subcommand, Debug)]
enum CorpusCmd {
    /// One line per identity.
    List,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Numeric,
    Symbolic,
    Both,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Numeric => Mode::Numeric,
            ModeArg::Symbolic => Mode::Symbolic,
            ModeArg::Both => Mode::Both,
        }
    }
}

fn parse_binding(s: &str) -> Result<(String, i64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    let v = v.trim().parse::<i64>().map_err(|e| format!("bad value in `{s}`: {e}"))?;
    Ok((k.trim().to_string(), v))
}

/// An error and the exit code it maps to.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::NotReducible(_)) { EXIT_NOT_REDUCIBLE } else { EXIT_USAGE };
        Failure(code, e.to_string())
    }
}

fn load_corpus(path: &Option<PathBuf>) -> Result<Vec<Identity>, Failure> {
    match path {
        None => Ok(builtin_corpus()?),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Failure(EXIT_USAGE, format!("cannot read corpus {}: {e}", p.display())))?;
            Ok(parse_corpus(&text)?)
        }
    }
}

fn bindings(set: &[(String, i64)]) -> Bindings {
    set.iter().cloned().collect()
}

fn parse_with(expr: &str, set: &[(String, i64)]) -> Result<mzv_core::corpus::Expr, Failure> {
    let vars: Vec<&str> = set.iter().map(|(k, _)| k.as_str()).collect();
    Ok(parse_expr(expr, &vars)?)
}

fn timestamp() -> String {
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    format!("unix:{secs}")
}

fn print_json(v: &serde_json::Value) {
    out!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.cmd {
        Cmd::Eval { expr, set } => {
            let e = parse_with(&expr, &set)?;
            let ctx = EvalContext::new(cli.prec)?;
            let (v, _) = eval_ast(&e, &bindings(&set), &ctx)?;
            let (value, err, exact) = match &v {
                Value::Exact(r) => (r.to_string(), None, true),
                Value::Real(a) => (a.value.to_sci(cli.prec as usize), Some(a.err.log10()), false),
            };
            match cli.format {
                Format::Json => print_json(&json!({
                    "expr": expr, "digits": cli.prec, "value": value, "exact": exact, "error_log10": err,
                })),
                Format::Tsv => out!("{expr}\t{value}\t{}", err.map_or("exact".into(), |l| format!("1e{l:.1}"))),
                Format::Text => match err {
                    None => out!("{value}  (exact)"),
                    Some(l) => out!("{value}  +/- 1e{l:.1}"),
                },
            }
            Ok(0)
        }
        Cmd::Reduce { expr, set } => {
            let e = parse_with(&expr, &set)?;
            let r = reduce_ast(&e, &bindings(&set))?;
            match cli.format {
                Format::Json => print_json(&json!({ "expr": expr, "reduced": r.to_string() })),
                Format::Tsv => out!("{expr}\t{r}"),
                Format::Text => out!("{r}"),
            }
            Ok(0)
        }
        Cmd::Verify { all: _, ids, max_param, mode, report_dir } => {
            let corpus = load_corpus(&cli.corpus)?;
            let cfg = SuiteConfig { ids, max_param, digits: cli.prec, mode: mode.into() };
            let result = run_suite(&corpus, &cfg)?;
            let ts = (!cli.no_timestamp).then(timestamp);
            let js = report_json(&result, &cfg, ts.as_deref());
            let tsv = report_tsv(&result);
            std::fs::create_dir_all(&report_dir)
                .and_then(|_| std::fs::write(report_dir.join("verify.json"), &js))
                .and_then(|_| std::fs::write(report_dir.join("verify.tsv"), &tsv))
                .map_err(|e| Failure(EXIT_USAGE, format!("cannot write reports to {}: {e}", report_dir.display())))?;
            match cli.format {
                Format::Json => out!("{js}"),
                Format::Tsv => out_raw!("{tsv}"),
                Format::Text => {
                    for r in result.reports.iter().filter(|r| !r.pass) {
                        let tag = if r.must_pass { "FAIL" } else { "report" };
                        let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                        let detail = r
                            .cause
                            .clone()
                            .or_else(|| r.residual_log10.map(|l| format!("residual 1e{l}")))
                            .unwrap_or_default();
                        out!("{tag} {} [{}] {:?}: {detail}", r.id, params.join(","), r.mode);
                    }
                    let s = &result.summary;
                    out!(
                        "{} identities, {} checks: {} passed, {} failed, {} numeric-only, {} errors; {} blocking, {} reported",
                        s.identities, s.checks, s.passed, s.failed, s.numeric_only, s.errors, s.blocking, s.reported
                    );
                }
            }
            Ok(if result.success() { 0 } else { EXIT_FAIL })
        }
        Cmd::Search { families, height, deg, span, verbose } => {
            let reg = Registry::standard();
            let mut cfg = SearchConfig { height, deg, digits: cli.prec, ..SearchConfig::default() };
            if !families.is_empty() {
                cfg.families = families;
            }
            if let Some(s) = span {
                cfg.span = s;
            }
            let out = reg.search(&cfg)?;
            match cli.format {
                Format::Json => print_json(&json!({
                    "schema": 1,
                    "config": {
                        "families": cfg.families, "height": cfg.height, "deg": cfg.deg,
                        "span": cfg.span.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                        "digits": cfg.digits, "screen_log10": cfg.screen_log10,
                    },
                    "outcome": out,
                })),
                Format::Tsv => {
                    out!("id\tfamily\tlabel\tstatus\tf");
                    for c in &out.emitted {
                        let status = serde_json::to_value(&c.status).unwrap()["status"].as_str().unwrap().to_string();
                        out!(
                            "{}\t{}\t{}\t{status}\t{}",
                            c.id.as_deref().unwrap_or(""),
                            c.family,
                            c.label,
                            c.fit.as_deref().unwrap_or("")
                        );
                    }
                }
                Format::Text => {
                    for c in &out.emitted {
                        let status = serde_json::to_value(&c.status).unwrap()["status"].as_str().unwrap().to_string();
                        out!("{} [{status}] {} {}", c.id.as_deref().unwrap_or(""), c.family, c.label);
                        out!("    {}", c.dsl.as_deref().unwrap_or(""));
                    }
                    if verbose {
                        for c in &out.redundant {
                            out!("redundant {} {}  f = {}", c.family, c.label, c.fit.as_deref().unwrap_or(""));
                        }
                        for c in &out.rejected {
                            if let mzv_core::discovery::CertStatus::Rejected(why) = &c.status {
                                out!("rejected {} {}: {why}", c.family, c.label);
                            }
                        }
                    }
                    out!(
                        "{} emitted, {} redundant, {} rejected",
                        out.emitted.len(),
                        out.redundant.len(),
                        out.rejected.len()
                    );
                }
            }
            Ok(0)
        }
        Cmd::Bernoulli { n } => {
            let b = bernoulli(n);
            match cli.format {
                Format::Json => print_json(&json!({ "n": n, "bernoulli": b.to_string() })),
                _ => out!("{b}"),
            }
            Ok(0)
        }
        Cmd::Euler { n } => {
            let e = euler_number(n);
            match cli.format {
                Format::Json => print_json(&json!({ "n": n, "euler": e.to_string() })),
                _ => out!("{e}"),
            }
            Ok(0)
        }
        Cmd::Corpus { cmd: CorpusCmd::List } => {
            let corpus = load_corpus(&cli.corpus)?;
            match cli.format {
                Format::Json => {
                    let rows: Vec<_> = corpus
                        .iter()
                        .map(|i| {
                            json!({
                                "id": i.id, "title": i.title, "expect_report": i.expect_report,
                                "params": i.params.iter().map(|p| p.name.clone()).collect::<Vec<_>>(),
                                "equations": i.equations.len(),
                            })
                        })
                        .collect();
                    print_json(&json!(rows));
                }
                _ => {
                    for i in &corpus {
                        let params: Vec<String> = i.params.iter().map(|p| p.name.clone()).collect();
                        out!(
                            "{}\t{}\t{}\t{}",
                            i.id,
                            params.join(","),
                            if i.expect_report { "report" } else { "must-pass" },
                            i.title.as_deref().unwrap_or("")
                        );
                    }
                }
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
