use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use schrijver::closed_form::{witness_dist3, witness_dist3_certificate, witness_lower4};
use schrijver::lift::{best_certificate, bound_path_m_plus_3_traced, lift_regime};
use schrijver::report::{compute_table, scan_csv, scan_from_rows, table_csv, table_json, table_plain};
use schrijver::suites::{run_suite, Suite, DEFAULT_SEED};
use schrijver::verify::{verify_between, verify_certificate, CertificateFile, VerifyError};
use schrijver::{decompose, diameter_formula, CycleParams, Distance, Error, SchrijverGraph, StableSet};

const EXIT_USAGE: u8 = 1;
const EXIT_INVARIANT: u8 = 2;
const EXIT_PARAMS: u8 = 3;

#[derive(Parser)]
#[command(name = "sgdiam", version, about = "Distances and diameters of Schrijver graphs SG(n,k)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WitnessKind {
    /// Pair at distance at least 4 (2 <= n-2k <= k-3).
    Lower4,
    /// Pair at distance exactly 3 (2k+2 <= n <= 4k-3), with a path.
    Dist3,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Blocks,
    Paths,
    Lift,
    Model,
    Witnesses,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// List the vertices of SG(n,k) in lexicographic order.
    Enumerate {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// BFS distance between two vertices.
    Distance {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// Also print the decomposition of the pair and a path certificate.
        #[arg(long)]
        explain: bool,
        /// Print the lift trace (only for n = 3k-2-m, 1 <= m <= k-4).
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Exact diameter by BFS, next to the closed form.
    Diameter {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        no_orbit_reduction: bool,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Closed form against BFS for every 2 <= k <= k-max, 2k+1 <= n <= 4k-2.
    Table {
        #[arg(long)]
        k_max: u32,
        #[arg(long)]
        no_orbit_reduction: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Explicit far-apart vertex pairs.
    Witness {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value = "dist3")]
        kind: WitnessKind,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Check a JSON path certificate.
    VerifyPath {
        /// Certificate file; reads stdin when omitted.
        file: Option<PathBuf>,
        /// Required first vertex.
        #[arg(long, requires = "b")]
        a: Option<String>,
        /// Required last vertex.
        #[arg(long, requires = "a")]
        b: Option<String>,
    },
    /// Run the invariant suites (exhaustive for k <= 5, sampled above).
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, default_value_t = 5)]
        k_max: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// BFS diameters across n for each k, with monotonicity and gap summaries.
    Scan {
        #[arg(long)]
        k_max: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

/// Failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Invariant(_) | Error::Disconnected => EXIT_INVARIANT,
            _ => EXIT_PARAMS,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        let code = match e {
            VerifyError::Json(_) => EXIT_PARAMS,
            _ => EXIT_INVARIANT,
        };
        Failure { code, message: format!("certificate rejected: {e}") }
    }
}

fn io_failure(e: std::io::Error, what: &str) -> Failure {
    Failure { code: EXIT_USAGE, message: format!("{what}: {e}") }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

type CmdResult = Result<String, Failure>;

fn params(n: u32, k: u32) -> Result<CycleParams, Failure> {
    Ok(CycleParams::new(n, k)?)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

fn enumerate(n: u32, k: u32, format: Format) -> CmdResult {
    let p = params(n, k)?;
    let sets: Vec<String> = schrijver::enumerate_stable_sets(p).iter().map(StableSet::to_string).collect();
    Ok(match format {
        Format::Json => pretty(&json!(sets)),
        _ => sets.iter().map(|s| format!("{s}\n")).collect(),
    })
}

fn distance(n: u32, k: u32, a: &str, b: &str, explain: bool, trace: bool, format: Format) -> CmdResult {
    let p = params(n, k)?;
    let (a, b) = (StableSet::parse(p, a)?, StableSet::parse(p, b)?);
    if p.n() < 2 * p.k() + 1 {
        return Err(Error::Params(format!("SG({n},{k}) needs n >= 2k+1")).into());
    }
    let g = SchrijverGraph::new(p);
    let bfs = g.bfs_distance(&a, &b)?.distance;
    let shown = match bfs {
        Distance::Finite(d) => d.to_string(),
        Distance::Unreachable => "unreachable".to_string(),
    };
    let mut doc = json!({ "n": n, "k": k, "a": a.to_string(), "b": b.to_string(), "distance": bfs.finite() });
    let mut text = format!("{shown}\n");
    if explain {
        if a != b && !a.is_disjoint(&b) {
            let report = decompose(&a, &b)?.to_report();
            let value = serde_json::to_value(&report).expect("report serializes");
            let _ = write!(text, "decomposition:\n{}", pretty(&value));
            doc["decomposition"] = value;
        }
        let cert = best_certificate(&a, &b)?;
        if let Distance::Finite(d) = bfs {
            if cert.len() < u32::from(d) {
                return Err(Failure {
                    code: EXIT_INVARIANT,
                    message: format!("certificate of length {} is shorter than the BFS distance {d}", cert.len()),
                });
            }
        }
        let file = cert.to_file();
        verify_between(&file, &a.to_string(), &b.to_string())?;
        let value = serde_json::to_value(&file).expect("certificate serializes");
        let _ = write!(text, "certificate:\n{}", pretty(&value));
        doc["certificate"] = value;
    }
    if trace {
        if lift_regime(p).is_none() {
            return Err(Error::Params(format!("--trace needs n = 3k-2-m with 1 <= m <= k-4, got n={n}, k={k}")).into());
        }
        let (_, lift) = bound_path_m_plus_3_traced(&a, &b)?;
        let value: Value = serde_json::from_str(&lift.to_json()).expect("trace is valid json");
        let _ = write!(text, "trace:\n{}", pretty(&value));
        doc["trace"] = value;
    }
    Ok(match format {
        Format::Json => pretty(&doc),
        _ => text,
    })
}

fn diameter(n: u32, k: u32, no_orbit_reduction: bool, format: Format) -> CmdResult {
    let p = params(n, k)?;
    let formula = diameter_formula(n, k)?;
    let bfs = SchrijverGraph::new(p).diameter_bruteforce(!no_orbit_reduction)?;
    let (wa, wb) = bfs.witness.expect("BFS diameter carries a witness");
    let agree = formula.value.contains(bfs.value.lo());
    Ok(match format {
        Format::Json => pretty(&json!({
            "n": n,
            "k": k,
            "bfs": bfs.value.lo(),
            "formula_lo": formula.value.lo(),
            "formula_hi": formula.value.hi(),
            "agree": agree,
            "witness": [wa.to_string(), wb.to_string()],
        })),
        _ => format!("{}\nformula {}\nwitness {} {}\nagree {}\n", bfs.value, formula.value, wa, wb, agree),
    })
}

fn table(k_max: u32, no_orbit_reduction: bool, format: Format) -> CmdResult {
    let rows = compute_table(k_max, !no_orbit_reduction)?;
    for r in rows.iter().filter(|r| !r.agree) {
        eprintln!("note: SG({},{}) BFS diameter {} lies outside the closed form {}", r.n, r.k, r.bfs, r.formula());
    }
    Ok(match format {
        Format::Csv => table_csv(&rows),
        Format::Json => table_json(&rows) + "\n",
        Format::Plain => table_plain(&rows),
    })
}

fn witness(n: u32, k: u32, kind: WitnessKind, format: Format) -> CmdResult {
    params(n, k)?;
    let (a, b, cert) = match kind {
        WitnessKind::Lower4 => {
            let (a, b) = witness_lower4(n, k)?;
            (a, b, None)
        }
        WitnessKind::Dist3 => {
            let (a, b) = witness_dist3(n, k)?;
            (a, b, Some(witness_dist3_certificate(n, k)?.to_file()))
        }
    };
    Ok(match format {
        Format::Json => pretty(&json!({ "n": n, "k": k, "a": a.to_string(), "b": b.to_string(), "certificate": cert })),
        _ => {
            let mut s = format!("{a}\n{b}\n");
            if let Some(c) = cert {
                let _ = write!(s, "certificate:\n{}\n", c.to_json());
            }
            s
        }
    })
}

fn verify_path(file: Option<PathBuf>, a: Option<String>, b: Option<String>) -> CmdResult {
    let text = match &file {
        Some(path) => std::fs::read_to_string(path).map_err(|e| io_failure(e, &path.display().to_string()))?,
        None => std::io::read_to_string(std::io::stdin()).map_err(|e| io_failure(e, "stdin"))?,
    };
    let cert = CertificateFile::from_json(&text)?;
    let verified = match (a, b) {
        (Some(a), Some(b)) => verify_between(&cert, &a, &b)?,
        _ => verify_certificate(&cert)?,
    };
    Ok(format!(
        "valid: {} edges in SG({},{}), claimed bound {}\n",
        verified.length, verified.n, verified.k, verified.claimed_bound
    ))
}

fn verify(suite: SuiteArg, k_max: u32, seed: u64) -> CmdResult {
    if k_max < 2 {
        return Err(usage("--k-max must be at least 2"));
    }
    let suites: Vec<Suite> = match suite {
        SuiteArg::All => Suite::ALL.to_vec(),
        SuiteArg::Blocks => vec![Suite::Blocks],
        SuiteArg::Paths => vec![Suite::Paths],
        SuiteArg::Lift => vec![Suite::Lift],
        SuiteArg::Model => vec![Suite::Model],
        SuiteArg::Witnesses => vec![Suite::Witnesses],
    };
    let mut out = String::new();
    for s in suites {
        match run_suite(s, k_max, seed) {
            Ok(report) => {
                let _ = writeln!(out, "{report}");
            }
            Err(e) => {
                return Err(Failure {
                    code: EXIT_INVARIANT,
                    message: format!("{out}{}: FAIL\ncounterexample: {e}", s.name()),
                })
            }
        }
    }
    Ok(out)
}

fn scan(k_max: u32, format: Format) -> CmdResult {
    let rows = compute_table(k_max, true)?;
    let scan = scan_from_rows(&rows);
    Ok(match format {
        Format::Json => pretty(&json!({
            "note": "empirical evidence from BFS on the listed range, not a proof",
            "scan": serde_json::to_value(&scan).expect("scan serializes"),
        })),
        _ => scan_csv(&scan),
    })
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Enumerate { n, k, format } => enumerate(n, k, format),
        Command::Distance { n, k, a, b, explain, trace, format } => distance(n, k, &a, &b, explain, trace, format),
        Command::Diameter { n, k, no_orbit_reduction, format } => diameter(n, k, no_orbit_reduction, format),
        Command::Table { k_max, no_orbit_reduction, format } => table(k_max, no_orbit_reduction, format),
        Command::Witness { n, k, kind, format } => witness(n, k, kind, format),
        Command::VerifyPath { file, a, b } => verify_path(file, a, b),
        Command::Verify { suite, k_max, seed } => verify(suite, k_max, seed),
        Command::Scan { k_max, format } => scan(k_max, format),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let out = cli.out.clone();
    match run(cli) {
        Ok(text) => {
            if let Some(path) = out {
                if let Err(e) = std::fs::write(&path, text) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(EXIT_USAGE);
                }
            } else {
                print!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
