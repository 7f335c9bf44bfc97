use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use holobrace::brace::{brace_from_subgroup, verify_brace, verify_lambda, ybe_solution};
use holobrace::counts::{best_census, conjecture_check, family_report, table1, Column, CountReport};
use holobrace::endo::enumerate_aut;
use holobrace::enumerate::{census, census_on, find_regular, Census};
use holobrace::holomorph::{order_spectrum, Holomorph};
use holobrace::reduce::reduce_counts;
use holobrace::{structured, Config, Error, GroupSpec, TargetKind};

#[derive(Parser)]
#[command(name = "holobrace", version, about = "Regular quaternion and dihedral subgroups of holomorphs")]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Pair {
    /// Additive group, e.g. c2xc8.
    #[arg(long = "N", value_name = "SPEC")]
    n: GroupSpec,
    /// Multiplicative group, e.g. q16 or d12.
    #[arg(long = "G", value_name = "KIND")]
    g: TargetKind,
}

#[derive(Subcommand)]
enum Command {
    /// (c, r, h) for one pair, as JSON.
    Census {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, conflicts_with_all = ["via_reduction", "cross_check"])]
        structured: bool,
        #[arg(long, conflicts_with = "cross_check")]
        via_reduction: bool,
        /// Also run direct enumeration and compare.
        #[arg(long)]
        cross_check: bool,
        /// Print Aut(N) as a second JSON line.
        #[arg(long)]
        dump_aut: bool,
    },
    /// Element order census of Hol(N).
    Spectrum {
        #[arg(long = "N", value_name = "SPEC")]
        n: GroupSpec,
    },
    /// Count tables.
    Tables {
        #[arg(long, value_parser = ["1", "3", "4"])]
        which: String,
        #[arg(long, default_value_t = 5)]
        n_max: u32,
        #[arg(long, default_value_t = 1)]
        s: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Compare the output with this file.
        #[arg(long)]
        golden: Option<PathBuf>,
    },
    /// Closed forms for q(4m), d(4m) against computed totals.
    VerifyConjecture {
        #[arg(long, default_value_t = 12)]
        m_max: u64,
    },
    /// The brace of one conjugacy class, as JSON.
    BraceExport {
        #[command(flatten)]
        pair: Pair,
        /// Class number, in the order of the census.
        #[arg(long, default_value_t = 0)]
        class: usize,
    },
    /// Brace axioms and the Yang–Baxter checks for every regular subgroup.
    YbeCheck {
        #[command(flatten)]
        pair: Pair,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

enum Failure {
    Usage(String),
    Mismatch(String),
    Capacity(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Capacity { .. } => Failure::Capacity(e.to_string()),
            Error::InvalidInput(_) | Error::Parse { .. } | Error::OutOfRange(_) | Error::Delegate(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Other(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let cfg = Config::from_env();
    match run(cli.command, &cfg) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            let (code, msg) = match f {
                Failure::Usage(m) => (1, m),
                Failure::Mismatch(m) => (2, m),
                Failure::Capacity(m) => (3, m),
                Failure::Other(m) => (1, m),
            };
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn json_line<T: serde::Serialize>(v: &T) -> String {
    format!("{}\n", serde_json::to_string(v).expect("serializable"))
}

fn run(command: Command, cfg: &Config) -> Result<String, Failure> {
    match command {
        Command::Census { pair, structured: st, via_reduction, cross_check, dump_aut } => {
            let Pair { n, g } = pair;
            let result = if st {
                structured::solve(&n, g)?.census()?
            } else if via_reduction {
                reduce_counts(&n, g, cfg)?
            } else if cross_check {
                let fast = best_census(&n, g, cfg)?;
                let direct = census(&n, g, cfg)?;
                if !same_counts(&fast, &direct) {
                    return Err(Failure::Mismatch(format!(
                        "{:?} gives (c, r, h) = ({}, {}, {}), direct enumeration gives ({}, {}, {})",
                        fast.method, fast.c, fast.r, fast.h, direct.c, direct.r, direct.h
                    )));
                }
                fast
            } else {
                census(&n, g, cfg)?
            };
            let mut out = json_line(&result);
            if dump_aut {
                let aut = enumerate_aut(&n, cfg)?;
                out.push_str(&json_line(&json!({ "schema": "v1", "N": n, "aut": aut.elements() })));
            }
            Ok(out)
        }
        Command::Spectrum { n } => {
            let spectrum = order_spectrum(&n, cfg)?;
            let max = spectrum.keys().max().copied();
            let counts: serde_json::Map<String, serde_json::Value> =
                spectrum.iter().map(|(o, c)| (o.to_string(), json!(c))).collect();
            Ok(json_line(&json!({ "schema": "v1", "N": n, "max_order": max, "spectrum": counts })))
        }
        Command::Tables { which, n_max, s, format, golden } => {
            let (report, columns) = match which.as_str() {
                "1" => (table1(cfg)?, vec![Column::C, Column::R, Column::H]),
                "3" => (family_report(n_max, s, cfg)?, vec![Column::C]),
                _ => (family_report(n_max, s, cfg)?, vec![Column::H]),
            };
            let out = render(&report, &columns, format, which != "1");
            if let Some(path) = golden {
                let expected = fs::read_to_string(&path)
                    .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
                if expected != out {
                    return Err(Failure::Mismatch(golden_diff(&expected, &out)));
                }
            }
            Ok(out)
        }
        Command::VerifyConjecture { m_max } => {
            let rows = conjecture_check(m_max, cfg)?;
            let mut out = String::new();
            let mut bad = Vec::new();
            for row in &rows {
                out.push_str(&json_line(row));
                if row.agrees == Some(false) {
                    bad.push(format!("m = {} ({})", row.m, row.kind));
                }
            }
            if !bad.is_empty() {
                print!("{out}");
                return Err(Failure::Mismatch(format!("closed form disagrees at {}", bad.join(", "))));
            }
            Ok(out)
        }
        Command::BraceExport { pair, class } => {
            let hol = Holomorph::new(&pair.n, cfg)?;
            let (_, classes) = census_on(&hol, pair.g, cfg)?;
            let chosen = classes.get(class).ok_or_else(|| {
                Failure::Usage(format!("class {class} requested, {} classes exist", classes.len()))
            })?;
            let bt = brace_from_subgroup(hol.table(), chosen.representative.key())?;
            Ok(json_line(&bt.export()))
        }
        Command::YbeCheck { pair } => {
            let hol = Holomorph::new(&pair.n, cfg)?;
            let (subs, _) = find_regular(&hol, pair.g, cfg)?;
            let mut nondegenerate = true;
            for s in &subs {
                let bt = brace_from_subgroup(hol.table(), s.key())?;
                if let Err(v) = verify_brace(&bt).and_then(|_| verify_lambda(&bt)) {
                    return Err(Failure::Other(format!("not a brace: {v}")));
                }
                nondegenerate &= ybe_solution(&bt)?.nondegenerate;
            }
            Ok(json_line(&json!({
                "schema": "v1",
                "N": pair.n,
                "G": pair.g,
                "braces": subs.len(),
                "involutive": true,
                "braid": true,
                "nondegenerate": nondegenerate,
            })))
        }
    }
}

fn same_counts(a: &Census, b: &Census) -> bool {
    (a.c, a.r, a.h) == (b.c, b.r, b.h)
}

fn render(report: &CountReport, columns: &[Column], format: Format, totals: bool) -> String {
    match format {
        Format::Text => {
            let mut out = report.to_text(columns);
            if totals {
                out.push('\n');
                out.push_str(&report.aggregates_text());
            }
            out
        }
        Format::Csv => report.to_csv(),
        Format::Json => format!("{}\n", serde_json::to_string_pretty(report).expect("serializable")),
    }
}

fn golden_diff(expected: &str, actual: &str) -> String {
    let mut lines = Vec::new();
    let (e, a): (Vec<_>, Vec<_>) = (expected.lines().collect(), actual.lines().collect());
    for i in 0..e.len().max(a.len()) {
        let (x, y) = (e.get(i).copied().unwrap_or(""), a.get(i).copied().unwrap_or(""));
        if x != y {
            lines.push(format!("line {}:\n  expected: {x}\n  actual:   {y}", i + 1));
        }
    }
    format!("output differs from golden file\n{}", lines.join("\n"))
}
