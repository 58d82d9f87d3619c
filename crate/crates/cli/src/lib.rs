//! The `singlat` command line: argument parsing, report dispatch and the
//! mapping from errors to exit statuses.

pub mod encode;
pub mod report;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use singlat_core::abel::{self, AbelQuery, H1Provider};
use singlat_core::cycle::{parse_cycle, parse_estar_coeffs};
use singlat_core::graph::{self, ResolutionGraph};
use singlat_core::search::{self, Region};
use singlat_core::tau;
use singlat_core::{ChernClass, Error, ErrorClass, IntegralCycle, Lattice, RationalCycle, Result, SearchConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_REGION_TOO_LARGE: i32 = 3;
pub const EXIT_HYPOTHESIS: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "singlat", version, about = "Combinatorial invariants of plumbed surface singularities")]
pub struct Cli {
    /// Resolution graph file (JSON).
    #[arg(long, global = true)]
    graph: Option<std::path::PathBuf>,
    /// Point budget per enumeration; overrides SINGLAT_ENUM_LIMIT.
    #[arg(long, global = true)]
    enum_limit: Option<u64>,
    /// Worker threads for the parallel searches.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Run every search on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    /// JSON output (always on).
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RegionArg {
    Ge0,
    Gt0,
    All,
    Box,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TauModeArg {
    Generic,
    Bound,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the tree, edge and definiteness conditions.
    Validate,
    /// Determinant, canonical cycle and dual basis.
    Lattice,
    /// The minimal nonzero cycle of the Lipman cone.
    Zmin,
    /// Minimize χ(−l′ + l) over a region.
    Minchi {
        #[arg(long)]
        chern: Option<String>,
        #[arg(long, value_enum, default_value = "gt0")]
        region: RegionArg,
        #[arg(long)]
        lower: Option<String>,
        #[arg(long)]
        upper: Option<String>,
    },
    /// The full invariant report.
    Invariants {
        #[arg(long)]
        cycle: Option<String>,
        #[arg(long)]
        chern: Option<String>,
        /// l′ in E-coordinates for h¹(O_Z(−l′)); needs --cycle.
        #[arg(long)]
        natural: Option<String>,
    },
    /// Abel map numerics for (Z, l′).
    Abel {
        #[arg(long)]
        cycle: String,
        #[arg(long)]
        chern: String,
        /// h¹ values for the relative criterion, keyed by cycle spec.
        #[arg(long)]
        h1_table: Option<std::path::PathBuf>,
        /// Z₁ for the relative criterion (defaults to 0).
        #[arg(long)]
        z1: Option<String>,
    },
    /// The binomial τ product.
    Tau {
        #[arg(long)]
        cycle: String,
        #[arg(long)]
        chern: String,
        #[arg(long, value_enum, default_value = "generic")]
        mode: TauModeArg,
        #[arg(long)]
        mu: Option<u64>,
    },
    /// Run formula/oracle comparisons.
    Verify {
        /// One of zmin, minchi, d_z, tau, dominance (all when absent).
        #[arg(long)]
        check: Option<String>,
    },
}

/// Outcome of one invocation: exit status, JSON for stdout, message for stderr.
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: Option<String>,
}

pub fn exit_code(e: &Error) -> i32 {
    match e.class() {
        ErrorClass::Input => EXIT_INPUT,
        ErrorClass::Validation => EXIT_VALIDATION,
        ErrorClass::RegionTooLarge => EXIT_REGION_TOO_LARGE,
        ErrorClass::Hypothesis => EXIT_HYPOTHESIS,
        ErrorClass::Internal => EXIT_INTERNAL,
    }
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn failure(e: &Error) -> Output {
    Output {
        code: exit_code(e),
        stdout: render(&encode::error(e)),
        stderr: Some(format!("singlat: {e}")),
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Output { code: EXIT_OK, stdout: e.to_string(), stderr: None };
            }
            let err = Error::Parse { line: 1, column: 1, message: e.to_string() };
            return Output {
                code: EXIT_INPUT,
                stdout: render(&encode::error(&err)),
                stderr: Some(e.to_string()),
            };
        }
    };
    let result = match cli.threads {
        Some(t) => with_threads(t, || execute(&cli)),
        None => execute(&cli),
    };
    match result {
        Ok((code, v)) => Output { code, stdout: render(&v), stderr: None },
        Err(e) => failure(&e),
    }
}

#[cfg(feature = "parallel")]
fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> Result<R> + Send) -> Result<R> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    pool.install(f)
}

#[cfg(not(feature = "parallel"))]
fn with_threads<R: Send>(_threads: usize, f: impl FnOnce() -> Result<R> + Send) -> Result<R> {
    f()
}

fn config(cli: &Cli) -> Result<SearchConfig> {
    let mut cfg = SearchConfig::from_env()?;
    if let Some(limit) = cli.enum_limit {
        cfg = cfg.with_limit(limit);
    }
    if cli.sequential {
        cfg = cfg.sequential();
    }
    Ok(cfg)
}

fn load_graph(cli: &Cli) -> Result<ResolutionGraph> {
    let path = cli.graph.as_ref().ok_or_else(|| Error::Parse {
        line: 1,
        column: 1,
        message: "--graph PATH is required".into(),
    })?;
    let text = std::fs::read_to_string(path)?;
    graph::parse_graph(&text)
}

fn chern(lat: &Lattice, spec: &str) -> Result<ChernClass> {
    lat.chern_from_estar(&parse_estar_coeffs(lat.graph(), spec)?)
}

fn header(command: &str, lat: &Lattice) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("command".into(), json!(command));
    m.insert("graph_digest".into(), json!(encode::graph_digest(lat.graph())));
    m
}

fn execute(cli: &Cli) -> Result<(i32, Value)> {
    let cfg = config(cli)?;
    let g = load_graph(cli)?;
    if let Command::Validate = cli.command {
        let report = graph::validate(&g);
        let v = json!({
            "command": "validate",
            "graph_digest": encode::graph_digest(&g),
            "ok": report.ok,
            "failures": report.failure_codes(),
        });
        if !report.ok {
            return Err(Error::InvalidGraph(report));
        }
        return Ok((EXIT_OK, v));
    }
    let lat = Lattice::new(&g)?;
    let mut out = header(command_name(&cli.command), &lat);
    match &cli.command {
        Command::Validate => unreachable!("handled above"),
        Command::Lattice => {
            out.insert("lattice".into(), report::lattice_section(&lat));
        }
        Command::Zmin => {
            let (z, tag) = report::zmin_with_provenance(&lat, &cfg)?;
            out.insert("zmin".into(), encode::cycle(&lat, &z));
            out.insert("provenance".into(), json!({ "zmin": tag }));
        }
        Command::Minchi { chern: c, region, lower, upper } => {
            let offset = match c {
                Some(spec) => chern(&lat, spec)?.as_rational().clone(),
                None => RationalCycle::zero(lat.n()),
            };
            let r = match region {
                RegionArg::Box => {
                    let (lo, hi) = match (lower, upper) {
                        (Some(lo), Some(hi)) => (parse_cycle(&g, lo)?, parse_cycle(&g, hi)?),
                        _ => {
                            return Err(Error::Parse {
                                line: 1,
                                column: 1,
                                message: "--region box needs --lower and --upper".into(),
                            })
                        }
                    };
                    search::min_chi_box(&lat, &offset, &lo, &hi, &cfg)?
                }
                RegionArg::Ge0 => search::min_chi_global(&lat, &offset, Region::LGe0, &cfg)?,
                RegionArg::Gt0 => search::min_chi_global(&lat, &offset, Region::LGt0, &cfg)?,
                RegionArg::All => search::min_chi_global(&lat, &offset, Region::LAll, &cfg)?,
            };
            out.insert("offset".into(), encode::rational_cycle(&g, &offset));
            out.insert("result".into(), report::minimization(&lat, &r));
        }
        Command::Invariants { cycle, chern: c, natural } => {
            let inputs = report::InvariantInputs {
                cycle: cycle.as_deref().map(|s| parse_cycle(&g, s)).transpose()?,
                chern: c.as_deref().map(|s| chern(&lat, s)).transpose()?,
                natural: natural
                    .as_deref()
                    .map(|s| parse_cycle(&g, s).map(|l| l.to_rational()))
                    .transpose()?,
            };
            if inputs.natural.is_some() && inputs.cycle.is_none() {
                return Err(Error::Parse { line: 1, column: 1, message: "--natural needs --cycle".into() });
            }
            return Ok((EXIT_OK, report::invariants(&lat, &inputs, &cfg)?));
        }
        Command::Abel { cycle, chern: c, h1_table, z1 } => {
            let q = AbelQuery::new(&lat, parse_cycle(&g, cycle)?, chern(&lat, c)?)?;
            let table = match h1_table {
                Some(path) => Some(abel::TableProvider::from_json(&lat, &std::fs::read_to_string(path)?)?),
                None => None,
            };
            let z1 = match z1 {
                Some(s) => Some(parse_cycle(&g, s)?),
                None => table.as_ref().map(|_| IntegralCycle::zero(lat.n())),
            };
            let relative = match (&z1, &table) {
                (Some(z1), Some(t)) => Some(report::Relative { z1: z1.clone(), provider: t as &dyn H1Provider }),
                (Some(z1), None) => Some(report::Relative { z1: z1.clone(), provider: &abel::GenericProvider }),
                _ => None,
            };
            out.insert("cycle".into(), encode::cycle(&lat, q.z()));
            out.insert("chern".into(), encode::chern(&lat, q.chern()));
            out.insert("abel".into(), report::abel_section(&lat, &q, relative.as_ref(), &cfg)?);
        }
        Command::Tau { cycle, chern: c, mode, mu } => {
            let q = AbelQuery::new(&lat, parse_cycle(&g, cycle)?, chern(&lat, c)?)?;
            let r = match mode {
                TauModeArg::Generic => tau::tau_generic(&lat, &q, &cfg)?,
                TauModeArg::Bound => tau::tau_upper_bound(&lat, &q)?,
            };
            out.insert("cycle".into(), encode::cycle(&lat, q.z()));
            out.insert("chern".into(), encode::chern(&lat, q.chern()));
            out.insert("tau".into(), report::tau_section(&lat, &r, *mu));
        }
        Command::Verify { check } => {
            let (outcomes, v) = report::verify(&lat, check.as_deref(), &cfg)?;
            use report::CheckStatus;
            let code = if outcomes
                .iter()
                .any(|o| matches!(o.status, CheckStatus::Disagree(_) | CheckStatus::Error(_)))
            {
                EXIT_INTERNAL
            } else if outcomes.iter().any(|o| o.status == CheckStatus::RegionTooLarge) {
                EXIT_REGION_TOO_LARGE
            } else {
                EXIT_OK
            };
            return Ok((code, v));
        }
    }
    Ok((EXIT_OK, Value::Object(out)))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate => "validate",
        Command::Lattice => "lattice",
        Command::Zmin => "zmin",
        Command::Minchi { .. } => "minchi",
        Command::Invariants { .. } => "invariants",
        Command::Abel { .. } => "abel",
        Command::Tau { .. } => "tau",
        Command::Verify { .. } => "verify",
    }
}
