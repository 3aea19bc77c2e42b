//! Command-line front end. [`main`] returns the process exit status: 0 on
//! success, 1 on a domain failure (with a JSON error document on stdout),
//! 2 on a usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::{BackendKind, FiniteGroupTable, GroupBackend, Word, DEFAULT_BALL_BUDGET};
use crate::oracle::{exact_cover_search_with_budget, independent_partition_check, monotile_extend_finite_with_budget};
use crate::swinger::{
    certify_swinger_tree, check_swinger_bounded, find_swinger, SearchStrategy, Verdict, EMPIRICAL_M_MAX,
};
use crate::tiler::{
    build_tiling, export_dot, export_graphml, load_region, verify_tiling, BuildOptions, Provenance, SwingerParams,
    DEFAULT_TILE_SEARCH_BUDGET,
};

pub const DEFAULT_CLI_SEARCH_BUDGET: u64 = 10_000;

#[derive(Parser, Debug)]
#[command(name = "monotile", version, about = "Build and check monotile tilings of groups")]
struct Cli {
    #[command(subcommand)]
    command: CommandArgs,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Debug, Clone)]
struct CommonArgs {
    /// Group: free:<rank>, integers, fpc:<o1>,<o2>,…, finite:<Zn|Dn|S3|S4|@table.json>
    #[arg(long, global = true, default_value = "free:2")]
    group: String,
    /// Seed for randomized search; enumeration is used when absent.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Search budget (candidates for swinger search, nodes for exact cover).
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Write the output document here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker thread cap. Recorded in provenance; the computation is sequential.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Dot,
    Graphml,
}

#[derive(Subcommand, Debug)]
enum CommandArgs {
    /// Enumerate a ball of the Cayley graph.
    Ball {
        #[arg(long = "core-radius", visible_alias = "radius")]
        core_radius: usize,
    },
    /// Search for or check swinger elements.
    #[command(subcommand)]
    Swinger(SwingerArgs),
    /// Build and verify a tiling region for the tile F ∪ {z}.
    Tile {
        #[arg(long)]
        set: String,
        #[arg(long = "core-radius")]
        core_radius: usize,
        #[arg(long = "work-radius")]
        work_radius: Option<usize>,
        /// Must equal 4·max|f| + 1 when given.
        #[arg(short = 'r')]
        r: Option<usize>,
        /// Use this swinger instead of searching.
        #[arg(long)]
        z: Option<String>,
    },
    /// Re-verify a tiling document.
    Verify { file: PathBuf },
    /// Exact searches on finite groups.
    #[command(subcommand)]
    Oracle(OracleArgs),
    /// Draw the core ball of a tiling document.
    Export {
        #[arg(value_enum)]
        kind: ExportKind,
        file: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum SwingerArgs {
    Find {
        #[arg(short = 'r')]
        r: usize,
        #[arg(long = "min-length", default_value_t = 1)]
        min_length: usize,
    },
    Check {
        #[arg(short = 'r')]
        r: usize,
        #[arg(long)]
        z: String,
        /// Check margins up to this m instead of certifying exactly.
        #[arg(long = "m-max")]
        m_max: Option<u64>,
    },
}

#[derive(Subcommand, Debug)]
enum OracleArgs {
    /// Tile the group by left translates of the given set.
    Cover {
        #[arg(long)]
        set: String,
    },
    /// Smallest tile containing the given set.
    Extend {
        #[arg(long)]
        set: String,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ExportKind {
    Dot,
    Graphml,
}

/// A validated invocation.
#[derive(Debug)]
pub struct RunConfig {
    pub backend: GroupBackend,
    pub command: Command,
    pub seed: Option<u64>,
    pub budget: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub threads: usize,
}

#[derive(Debug)]
pub enum Command {
    Ball { radius: usize },
    SwingerFind { r: usize, min_length: usize },
    SwingerCheck { r: usize, z: Word, m_max: Option<u64> },
    Tile { set: Vec<Word>, core_radius: usize, work_radius: Option<usize>, r: Option<usize>, z: Option<Word> },
    Verify { file: PathBuf },
    OracleCover { set: Vec<u32> },
    OracleExtend { set: Vec<u32> },
    Export { dot: bool, file: PathBuf },
}

/// Why an invocation was rejected before running.
#[derive(Debug)]
pub enum UsageError {
    /// `--help` or `--version`: print and exit 0.
    Info(String),
    Invalid(String),
}

fn parse_backend(spec: &str) -> Result<GroupBackend> {
    match spec.strip_prefix("finite:@") {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let table: FiniteGroupTable = serde_json::from_str(&text)?;
            GroupBackend::finite(table, None)
        }
        None => GroupBackend::from_spec(spec),
    }
}

fn parse_set(backend: &GroupBackend, s: &str) -> Result<Vec<Word>> {
    s.split(',').map(|w| backend.parse_word(w)).collect()
}

fn parse_indices(backend: &GroupBackend, s: &str) -> Result<Vec<u32>> {
    if !backend.is_finite() {
        return Err(Error::UnsupportedBackend("oracle commands need a finite group".into()));
    }
    s.split(',')
        .map(|x| x.trim().parse::<u32>().map_err(|_| Error::MalformedInput(format!("bad element index {x:?}"))))
        .collect()
}

pub fn parse_invocation<I, T>(argv: I) -> std::result::Result<RunConfig, UsageError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = std::iter::once(OsString::from("monotile")).chain(argv.into_iter().map(Into::into));
    let cli = Cli::try_parse_from(args).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp
        | clap::error::ErrorKind::DisplayVersion
        | clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => UsageError::Info(e.to_string()),
        _ => UsageError::Invalid(e.to_string()),
    })?;
    let invalid = |e: Error| UsageError::Invalid(format!("error: {e}\n"));
    let backend = parse_backend(&cli.common.group).map_err(invalid)?;
    let command = match cli.command {
        CommandArgs::Ball { core_radius } => Command::Ball { radius: core_radius },
        CommandArgs::Swinger(SwingerArgs::Find { r, min_length }) => Command::SwingerFind { r, min_length },
        CommandArgs::Swinger(SwingerArgs::Check { r, z, m_max }) => Command::SwingerCheck {
            r,
            z: backend.parse_word(&z).map_err(invalid)?,
            m_max,
        },
        CommandArgs::Tile { set, core_radius, work_radius, r, z } => Command::Tile {
            set: parse_set(&backend, &set).map_err(invalid)?,
            core_radius,
            work_radius,
            r,
            z: z.map(|z| backend.parse_word(&z)).transpose().map_err(invalid)?,
        },
        CommandArgs::Verify { file } => Command::Verify { file },
        CommandArgs::Oracle(OracleArgs::Cover { set }) => Command::OracleCover {
            set: parse_indices(&backend, &set).map_err(invalid)?,
        },
        CommandArgs::Oracle(OracleArgs::Extend { set }) => Command::OracleExtend {
            set: parse_indices(&backend, &set).map_err(invalid)?,
        },
        CommandArgs::Export { kind, file } => Command::Export { dot: kind == ExportKind::Dot, file },
    };
    Ok(RunConfig {
        backend,
        command,
        seed: cli.common.seed,
        budget: cli.common.budget,
        out: cli.common.out,
        format: cli.common.format,
        threads: cli.common.threads,
    })
}

/// What a successful or failed command produced.
enum Outcome {
    Document(String),
    /// Exit 1 with this error document.
    Failure(Value),
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn error_document(e: &Error) -> Value {
    json!({ "error_kind": e.kind(), "message": e.to_string() })
}

impl RunConfig {
    fn strategy(&self) -> SearchStrategy {
        match self.seed {
            Some(seed) => SearchStrategy::Random { seed },
            None => SearchStrategy::Enumerate,
        }
    }

    fn provenance(&self, search_budget: u64) -> Provenance {
        Provenance {
            strategy: match self.seed {
                Some(_) => "random".into(),
                None => "enumerate".into(),
            },
            seed: self.seed,
            search_budget,
            ball_budget: DEFAULT_BALL_BUDGET,
            threads: self.threads,
        }
    }

    fn finite_table(&self) -> Result<&FiniteGroupTable> {
        match self.backend.kind() {
            BackendKind::Finite { table, .. } => Ok(table),
            _ => Err(Error::UnsupportedBackend("oracle commands need a finite group".into())),
        }
    }

    fn execute(&self) -> Result<Outcome> {
        let g = &self.backend;
        let fmt = |w: &Word| g.format_word(w);
        match &self.command {
            Command::Ball { radius } => {
                let ball = g.enumerate_ball(*radius)?;
                let spheres: Vec<usize> = (0..=*radius)
                    .map(|k| ball.elements().iter().filter(|x| g.word_length(x) == k).count())
                    .collect();
                let doc = json!({
                    "backend": g.descriptor(),
                    "radius": radius,
                    "size": ball.len(),
                    "spheres": spheres,
                    "elements": ball.elements().iter().map(fmt).collect::<Vec<_>>(),
                    "provenance": self.provenance(0),
                });
                Ok(Outcome::Document(to_json(&doc)?))
            }
            Command::SwingerFind { r, min_length } => {
                let budget = self.budget.unwrap_or(DEFAULT_CLI_SEARCH_BUDGET);
                let provenance = self.provenance(budget);
                match find_swinger(*r, *min_length, self.strategy(), budget, g)? {
                    Some((_, cert)) => {
                        let doc = json!({ "certificate": cert.to_document(g), "provenance": provenance });
                        Ok(Outcome::Document(to_json(&doc)?))
                    }
                    None => Ok(Outcome::Failure(json!({
                        "error_kind": "search_budget",
                        "message": format!("no {r}-swinger of length at least {min_length} among {budget} candidates"),
                        "provenance": provenance,
                    }))),
                }
            }
            Command::SwingerCheck { r, z, m_max } => {
                let cert = match m_max {
                    None if g.is_tree() => certify_swinger_tree(z, *r, g)?,
                    _ => check_swinger_bounded(z, *r, m_max.unwrap_or(EMPIRICAL_M_MAX), g)?,
                };
                let doc = json!({ "certificate": cert.to_document(g), "provenance": self.provenance(0) });
                match cert.verdict {
                    Verdict::Certified | Verdict::InconclusivePositive => Ok(Outcome::Document(to_json(&doc)?)),
                    Verdict::Refuted | Verdict::Inconclusive => {
                        let mut doc = doc;
                        doc["error_kind"] = json!(match cert.verdict {
                            Verdict::Refuted => "refuted",
                            _ => "inconclusive",
                        });
                        Ok(Outcome::Failure(doc))
                    }
                }
            }
            Command::Tile { set, core_radius, work_radius, r, z } => {
                let budget = self.budget.unwrap_or(DEFAULT_TILE_SEARCH_BUDGET);
                if let Some(r) = r {
                    let m = set.iter().map(|x| g.word_length(x)).max().unwrap_or(0);
                    if *r != 4 * m + 1 {
                        return Err(Error::Precondition(format!("r must be 4·max|f| + 1 = {}", 4 * m + 1)));
                    }
                }
                let options = BuildOptions {
                    swinger: SwingerParams { strategy: self.strategy(), budget, z: z.clone(), allow_empirical: false },
                    work_radius: *work_radius,
                    raw: false,
                };
                let region = build_tiling(set, *core_radius, &options, g)?;
                let text = match self.format {
                    Format::Json => region.to_document(Some(self.provenance(budget))).to_json()? + "\n",
                    Format::Dot => export_dot(&region)?,
                    Format::Graphml => export_graphml(&region)?,
                };
                Ok(Outcome::Document(text))
            }
            Command::Verify { file } => {
                let region = load_region(&std::fs::read_to_string(file)?)?;
                let report = verify_tiling(&region)?;
                let partition = independent_partition_check(&region)?;
                let passed = report.all_passed() && partition.partition;
                let mut doc = json!({ "passed": passed, "report": report, "partition": partition });
                if passed {
                    Ok(Outcome::Document(to_json(&doc)?))
                } else {
                    doc["error_kind"] = json!("verification_failed");
                    doc["witness"] = json!(report.counterexample.clone().or(partition.witness.clone()));
                    Ok(Outcome::Failure(doc))
                }
            }
            Command::OracleCover { set } => {
                let table = self.finite_table()?;
                let budget = self.budget.unwrap_or(crate::oracle::DEFAULT_NODE_BUDGET);
                let provenance = self.provenance(budget);
                match exact_cover_search_with_budget(table, set, budget)? {
                    Some(solution) => Ok(Outcome::Document(to_json(&json!({
                        "order": table.order(),
                        "tile": set,
                        "translates": solution.translates,
                        "provenance": provenance,
                    }))?)),
                    None => Ok(Outcome::Failure(json!({
                        "error_kind": "no_tiling",
                        "message": "no tiling",
                        "order": table.order(),
                        "tile": set,
                        "provenance": provenance,
                    }))),
                }
            }
            Command::OracleExtend { set } => {
                let table = self.finite_table()?;
                let budget = self.budget.unwrap_or(crate::oracle::DEFAULT_NODE_BUDGET);
                let tile = monotile_extend_finite_with_budget(table, set, budget)?;
                let translates = exact_cover_search_with_budget(table, &tile, budget)?.map(|s| s.translates);
                Ok(Outcome::Document(to_json(&json!({
                    "order": table.order(),
                    "set": set,
                    "tile": tile,
                    "translates": translates,
                    "provenance": self.provenance(budget),
                }))?))
            }
            Command::Export { dot, file } => {
                let region = load_region(&std::fs::read_to_string(file)?)?;
                Ok(Outcome::Document(if *dot { export_dot(&region)? } else { export_graphml(&region)? }))
            }
        }
    }

    /// Runs the command, writing documents to `out` (or the `--out` file).
    pub fn run(&self, out: &mut dyn Write) -> i32 {
        let (text, status) = match self.execute() {
            Ok(Outcome::Document(text)) => (text, 0),
            Ok(Outcome::Failure(doc)) => (to_json(&doc).unwrap_or_default(), 1),
            Err(e) => (to_json(&error_document(&e)).unwrap_or_default(), 1),
        };
        let written = match (&self.out, status) {
            (Some(path), 0) => std::fs::write(path, text.as_bytes()),
            _ => out.write_all(text.as_bytes()),
        };
        if let Err(e) = written {
            let doc = error_document(&Error::from(e));
            let _ = out.write_all(to_json(&doc).unwrap_or_default().as_bytes());
            return 1;
        }
        status
    }
}

/// Parses `argv` (without the program name) and runs it.
pub fn main_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match parse_invocation(argv) {
        Ok(config) => config.run(out),
        Err(UsageError::Info(text)) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(UsageError::Invalid(text)) => {
            let _ = err.write_all(text.as_bytes());
            2
        }
    }
}

pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    main_with(std::env::args_os().skip(1), &mut stdout.lock(), &mut stderr.lock())
}
