//! Command-line front end: compute single counts, emit tables, dump
//! generating series, and run the verification suite.
//!
//! Exit codes are a stable contract for CI: 0 success / all checks pass,
//! 1 verification counterexample or computation failure, 2 usage error.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pathpairs::closedform::{self, DiagQuery, PairQuery};
use pathpairs::series::{self, SeriesId};
use pathpairs::verify::{default_specs, run_suite, Mutation, SuiteEnv, SuiteOptions};
use pathpairs::Integer;

#[derive(Parser)]
#[command(
    name = "pathpairs",
    version,
    about = "Exact lattice-path pair counts by intersections: values, tables, series, verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one exact value. Kinds: M, NK, NE, NO, ROWSUM, NKROWSUM, LAGRANGE.
    Compute {
        /// What to compute (case-insensitive).
        kind: String,
        #[arg(long)]
        n: Option<i64>,
        #[arg(long)]
        k: Option<i64>,
        #[arg(long)]
        r: Option<i64>,
        #[arg(long)]
        s: Option<i64>,
        #[arg(long)]
        p: Option<i64>,
        #[arg(long)]
        a: Option<i64>,
        #[arg(long)]
        b: Option<i64>,
        #[arg(long)]
        c: Option<i64>,
        #[arg(long)]
        l: Option<i64>,
        #[arg(long)]
        m: Option<i64>,
    },
    /// Emit the full table of one family for a given n.
    Table {
        /// Family: M (k,r,s), NK (k,r), NE or NO (k,p).
        what: String,
        #[arg(long)]
        n: i64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write to a file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dump a generating series up to a total-degree cap.
    Gf {
        /// One of: f, u0pow, mdiag, ne, no, squarebinom, squarebinomshifted.
        series: String,
        #[arg(long, default_value_t = 12)]
        cap: usize,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        j: Option<u32>,
    },
    /// Run the identity suite; exit 0 when every check passes.
    Verify {
        /// Deepest n for closed-form identity grids.
        #[arg(long, default_value_t = 25)]
        max_n: i64,
        /// Deepest n enumerated by the brute-force oracle (0 disables it).
        #[arg(long, default_value_t = 8)]
        max_n_oracle: i64,
        /// Total-degree cap for the series grids.
        #[arg(long, default_value_t = 12)]
        cap: usize,
        /// Directory of oracle cache documents, read and refreshed per n.
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Write the JSON report here in addition to the text summary.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Corrupt one route entry (route:params) to demonstrate detection.
        #[arg(long)]
        mutate: Option<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

fn usage_error(message: &str) -> ! {
    eprintln!("error: {message}");
    std::process::exit(2);
}

fn computation_error(err: &pathpairs::Error) -> ! {
    eprintln!("error: {err}");
    std::process::exit(1);
}

fn require(value: Option<i64>, flag: &str, kind: &str) -> i64 {
    value.unwrap_or_else(|| usage_error(&format!("--{flag} is required for {kind}")))
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Compute {
            kind,
            n,
            k,
            r,
            s,
            p,
            a,
            b,
            c,
            l,
            m,
        } => {
            let value = compute(&kind.to_uppercase(), n, k, r, s, p, a, b, c, l, m);
            println!("{value}");
            ExitCode::SUCCESS
        }
        Command::Table {
            what,
            n,
            format,
            out,
        } => {
            if n < 0 {
                usage_error("--n must be nonnegative");
            }
            let table = build_table(&what.to_uppercase(), n);
            let text = render_table(&table, format);
            emit(out.as_deref(), &text);
            ExitCode::SUCCESS
        }
        Command::Gf { series, cap, k, j } => {
            let id = series_id(&series.to_lowercase(), k, j);
            print!("{}", series::build(id, cap).dump());
            ExitCode::SUCCESS
        }
        Command::Verify {
            max_n,
            max_n_oracle,
            cap,
            cache,
            out,
            mutate,
        } => run_verify(max_n, max_n_oracle, cap, cache, out, mutate),
    }
}

#[allow(clippy::too_many_arguments)]
fn compute(
    kind: &str,
    n: Option<i64>,
    k: Option<i64>,
    r: Option<i64>,
    s: Option<i64>,
    p: Option<i64>,
    a: Option<i64>,
    b: Option<i64>,
    c: Option<i64>,
    l: Option<i64>,
    m: Option<i64>,
) -> Integer {
    let result = match kind {
        "M" => closedform::m_value(PairQuery::new(
            require(n, "n", kind),
            require(k, "k", kind),
            require(r, "r", kind),
            require(s, "s", kind),
        )),
        "NK" => closedform::nk_value(
            require(n, "n", kind),
            require(k, "k", kind),
            require(r, "r", kind),
        ),
        "NE" => closedform::ne_value(DiagQuery::new(
            require(n, "n", kind),
            require(k, "k", kind),
            require(p, "p", kind),
        )),
        "NO" => closedform::no_value(DiagQuery::new(
            require(n, "n", kind),
            require(k, "k", kind),
            require(p, "p", kind),
        )),
        "ROWSUM" => Ok(closedform::row_sum(
            require(n, "n", kind),
            require(k, "k", kind),
        )),
        "NKROWSUM" => closedform::nk_row_sum(require(n, "n", kind), require(k, "k", kind)),
        "LAGRANGE" => {
            let (a, b, c) = (
                require(a, "a", kind),
                require(b, "b", kind),
                require(c, "c", kind),
            );
            if a < 0 || b < 0 || c < 0 {
                usage_error("--a, --b, --c must be nonnegative");
            }
            Ok(closedform::lagrange_coeff(
                a,
                b,
                c,
                require(l, "l", kind),
                require(m, "m", kind),
            ))
        }
        other => usage_error(&format!(
            "unknown kind {other:?}; expected M, NK, NE, NO, ROWSUM, NKROWSUM, or LAGRANGE"
        )),
    };
    result.unwrap_or_else(|e| computation_error(&e))
}

struct Table {
    columns: &'static [&'static str],
    rows: Vec<Vec<String>>,
}

fn build_table(what: &str, n: i64) -> Table {
    let mut rows = Vec::new();
    match what {
        "M" => {
            for k in 0..=n - 1 {
                for r in 0..=n {
                    for s in 0..=n {
                        let v = closedform::m_value(PairQuery::new(n, k, r, s))
                            .unwrap_or_else(|e| computation_error(&e));
                        rows.push(vec![
                            k.to_string(),
                            r.to_string(),
                            s.to_string(),
                            v.to_string(),
                        ]);
                    }
                }
            }
            Table {
                columns: &["k", "r", "s", "value"],
                rows,
            }
        }
        "NK" => {
            for k in 0..=n - 1 {
                for r in 0..=n {
                    let v = closedform::nk_value(n, k, r)
                        .unwrap_or_else(|e| computation_error(&e));
                    rows.push(vec![k.to_string(), r.to_string(), v.to_string()]);
                }
            }
            Table {
                columns: &["k", "r", "value"],
                rows,
            }
        }
        "NE" | "NO" => {
            let odd = what == "NO";
            let max_p = if odd { n - 1 } else { n };
            for k in 0..=n - 1 {
                for p in 0..=max_p {
                    let q = DiagQuery::new(n, k, p);
                    let v = if odd {
                        closedform::no_value(q)
                    } else {
                        closedform::ne_value(q)
                    }
                    .unwrap_or_else(|e| computation_error(&e));
                    rows.push(vec![k.to_string(), p.to_string(), v.to_string()]);
                }
            }
            Table {
                columns: &["k", "p", "value"],
                rows,
            }
        }
        other => usage_error(&format!(
            "unknown table {other:?}; expected M, NK, NE, or NO"
        )),
    }
}

fn render_table(table: &Table, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = table.columns.join(",");
            out.push('\n');
            for row in &table.rows {
                out.push_str(&row.join(","));
                out.push('\n');
            }
            out
        }
        Format::Text => {
            let mut out = table.columns.join(" ");
            out.push('\n');
            for row in &table.rows {
                out.push_str(&row.join(" "));
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = table
                .rows
                .iter()
                .map(|row| {
                    let mut obj = serde_json::Map::new();
                    for (name, cell) in table.columns.iter().zip(row) {
                        obj.insert((*name).to_string(), serde_json::Value::String(cell.clone()));
                    }
                    serde_json::Value::Object(obj)
                })
                .collect();
            let mut doc = serde_json::Map::new();
            doc.insert(
                "columns".to_string(),
                serde_json::json!(table.columns),
            );
            doc.insert("rows".to_string(), serde_json::Value::Array(rows));
            let mut text = serde_json::to_string_pretty(&serde_json::Value::Object(doc)).unwrap();
            text.push('\n');
            text
        }
    }
}

fn series_id(name: &str, k: Option<u32>, j: Option<u32>) -> SeriesId {
    let need_k = |k: Option<u32>| {
        k.unwrap_or_else(|| usage_error(&format!("--k is required for series {name:?}")))
    };
    match name {
        "f" => SeriesId::F,
        "u0pow" => SeriesId::U0Pow(need_k(k)),
        "mdiag" => SeriesId::MDiag {
            k: need_k(k),
            j: j.unwrap_or_else(|| usage_error("--j is required for series \"mdiag\"")),
        },
        "ne" => SeriesId::Ne(need_k(k)),
        "no" => SeriesId::No(need_k(k)),
        "squarebinom" => SeriesId::SquareBinom,
        "squarebinomshifted" => SeriesId::SquareBinomShifted,
        other => usage_error(&format!(
            "unknown series {other:?}; expected f, u0pow, mdiag, ne, no, squarebinom, or squarebinomshifted"
        )),
    }
}

fn emit(out: Option<&std::path::Path>, text: &str) {
    match out {
        Some(path) => std::fs::write(path, text).unwrap_or_else(|e| {
            eprintln!("error: writing {}: {e}", path.display());
            std::process::exit(1);
        }),
        None => print!("{text}"),
    }
}

fn run_verify(
    max_n: i64,
    max_n_oracle: i64,
    cap: usize,
    cache: Option<PathBuf>,
    out: Option<PathBuf>,
    mutate: Option<String>,
) -> ExitCode {
    if max_n < 0 || max_n_oracle < 0 {
        usage_error("--max-n and --max-n-oracle must be nonnegative");
    }
    let mutation = mutate.map(|spec| {
        spec.parse::<Mutation>()
            .unwrap_or_else(|e| usage_error(&format!("--mutate {spec:?}: {e}")))
    });
    let opts = SuiteOptions {
        max_n,
        max_n_def: max_n.min(12),
        max_n_oracle,
        cap,
    };
    let env = SuiteEnv {
        // The oracle flag doubles as the ceiling override past the default.
        oracle_ceiling: (max_n_oracle.max(0) as u32).max(pathpairs::oracle::DEFAULT_CEILING),
        cache_dir: cache,
        mutation,
    };
    let report = run_suite(&default_specs(&opts), &env);
    for warning in &report.warnings {
        eprintln!("warning: {warning}");
    }
    let mut summary = String::new();
    writeln!(
        summary,
        "identity suite: max-n {max_n}, oracle n <= {max_n_oracle}, series cap {cap}"
    )
    .unwrap();
    write!(summary, "{report}").unwrap();
    println!("{summary}");
    if let Some(path) = &out {
        let mut json = report.to_json();
        json.push('\n');
        emit(Some(path), &json);
    }
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
