//! Command-line interface: a thin adapter from flags to library calls.
//!
//! Subcommands: `gen` (sample a graph), `gamma` (domination report),
//! `bondage` (exact value, classical bounds, or a certified lower bound),
//! `damage` (per-pair damage table as CSV), `formulas` (closed-form
//! quantities), and `exp` (seeded replicated experiments).
//!
//! Conventions shared by every subcommand:
//!
//! * data goes to stdout (or the `--out` path), diagnostics to stderr;
//! * the resolved base seed is printed to stderr on every run — the `--seed`
//!   flag wins, then the `BONDLAB_SEED` environment variable, then 0;
//! * exit codes: 0 success, 1 domain or usage error, 2 capacity limit,
//!   3 I/O error.
//!
//! No numeric logic lives here; every computation is a library call.

use std::ffi::OsString;
use std::io::Write as _;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bondage::{self, DamageTable};
use crate::domination;
use crate::error::{Error, Result};
use crate::experiment::{
    self, ExperimentKind, ExperimentSpec, OutputFormat, ResultMetadata, ResultRecord,
};
use crate::formula::{self, FormulaContext};
use crate::graph::{self, GraphFormat, RandomSource};

#[derive(Debug, Parser)]
#[command(
    name = "bondlab",
    version,
    about = "Domination numbers, bondage numbers, and damage calculus on random graphs",
    term_width = 100,
    arg_required_else_help = true
)]
pub struct Cli {
    /// Base RNG seed; falls back to BONDLAB_SEED, then 0.
    #[arg(long, global = true, value_name = "SEED")]
    pub seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a random graph and write it as JSON or an edge list.
    Gen(GenArgs),
    /// Domination number and dominating-set counts of a graph file.
    Gamma(GammaArgs),
    /// Bondage number: exact search, degree bounds, or a certified lower bound.
    Bondage(BondageArgs),
    /// Exact per-pair damage table as CSV.
    Damage(DamageArgs),
    /// Closed-form quantities for (n, p, epsilon): crossing index, heavy
    /// threshold, expected counts and damage (log scale).
    Formulas(FormulasArgs),
    /// Seeded replicated experiments emitting per-replicate rows.
    Exp(ExpArgs),
}

#[derive(Debug, Args)]
struct GenArgs {
    /// Vertex count.
    #[arg(long, value_name = "N")]
    n: usize,
    /// Edge probability: sample G(n, p). Exactly one of --p / --m.
    #[arg(long, value_name = "P", conflicts_with = "m", required_unless_present = "m")]
    p: Option<f64>,
    /// Exact edge count: sample G(n, m) uniformly.
    #[arg(long, value_name = "M")]
    m: Option<u64>,
    /// Output path (stdout when omitted).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Graph file format.
    #[arg(long, value_enum, default_value_t = GraphFormatArg::Json)]
    format: GraphFormatArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GraphFormatArg {
    /// {"n": .., "edges": [[u, v], ..]}
    Json,
    /// "n <n>" header, then one "u v" line per edge.
    Edges,
}

#[derive(Debug, Args)]
struct GammaArgs {
    /// Graph file, JSON or edge list (auto-detected).
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Also report the dominating-set count X_k for this size (repeatable).
    #[arg(long = "count", value_name = "K")]
    counts: Vec<usize>,
    /// After the report line, stream minimum dominating sets as hex
    /// bitmasks, one per line.
    #[arg(long)]
    enumerate: bool,
    /// Cap on the number of enumerated sets.
    #[arg(long, value_name = "N", default_value_t = 1_000_000)]
    cap: u64,
}

#[derive(Debug, Args)]
struct BondageArgs {
    /// Graph file, JSON or edge list (auto-detected).
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// What to compute.
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// Exact mode: stop after ruling out removals of up to this many edges
    /// (reports "b > limit" instead of the exact value when exhausted).
    #[arg(long, value_name = "A")]
    limit: Option<u64>,
    /// Certify mode: cap on enumerated minimum dominating sets.
    #[arg(long, value_name = "N", default_value_t = 1_000_000)]
    cap: u64,
    /// Exact mode: disable the damage-sum pruning of candidate removals.
    #[arg(long)]
    no_prune: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    /// Exact bondage number by deepening search over edge subsets.
    Exact,
    /// Degree-based upper bounds and the minimum-set-count bound only.
    Bounds,
    /// Certified lower bound from per-edge damages.
    Certify,
}

#[derive(Debug, Args)]
struct DamageArgs {
    /// Graph file, JSON or edge list (auto-detected).
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Dominating-set size for the damage sums (default: the domination
    /// number of the input graph).
    #[arg(long, value_name = "R")]
    r: Option<usize>,
    /// Heavy/light split point: overlaps j <= threshold count as heavy.
    #[arg(long, value_name = "L", default_value_t = 1)]
    threshold: usize,
    /// Tabulate all vertex pairs instead of only the existing edges.
    #[arg(long)]
    all_pairs: bool,
    /// Output path (stdout when omitted).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FormulasArgs {
    /// Vertex count (requires p*n > e for the closed-form crossing index).
    #[arg(long, value_name = "N")]
    n: u64,
    /// Edge probability, strictly between 0 and 1.
    #[arg(long, value_name = "P")]
    p: f64,
    /// Density parameter of the heavy/light split.
    #[arg(long, value_name = "EPS", default_value_t = 0.1)]
    epsilon: f64,
}

#[derive(Debug, Args)]
struct ExpArgs {
    /// Experiment kind.
    #[arg(value_name = "KIND")]
    kind: String,
    /// Vertex count.
    #[arg(long, value_name = "N")]
    n: usize,
    /// Edge probability (concentration, moments, damage_mean, profile).
    #[arg(long, value_name = "P")]
    p: Option<f64>,
    /// Process kind: stop after this many edges.
    #[arg(long, value_name = "M")]
    m: Option<u64>,
    /// Dominating-set size (moments, profile).
    #[arg(long, value_name = "K")]
    k: Option<usize>,
    /// Number of replicates; replicate i draws from stream i of the seed.
    #[arg(long, value_name = "S", default_value_t = 100)]
    samples: u64,
    /// Density parameter of the heavy/light split.
    #[arg(long, value_name = "EPS", default_value_t = 0.1)]
    epsilon: f64,
    /// Cap on enumerated dominating sets per replicate scan.
    #[arg(long, value_name = "N", default_value_t = 1_000_000)]
    cap: u64,
    /// Process kind: also compute the exact bondage number at plateau ends,
    /// searching removals of up to this many edges.
    #[arg(long, value_name = "A")]
    limit: Option<u64>,
    /// Write per-replicate rows to this path.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Row format for --out.
    #[arg(long, value_enum, default_value_t = RowFormatArg::Csv)]
    format: RowFormatArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RowFormatArg {
    Csv,
    Jsonl,
}

/// Parse `argv` and run; returns the process exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes; everything else is a
            // usage error in the domain/contract class.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    let seed = resolve_seed(cli.seed)?;
    eprintln!("seed: {seed}");
    match &cli.command {
        Command::Gen(args) => run_gen(args, seed),
        Command::Gamma(args) => run_gamma(args),
        Command::Bondage(args) => run_bondage(args),
        Command::Damage(args) => run_damage(args),
        Command::Formulas(args) => run_formulas(args),
        Command::Exp(args) => run_exp(args, seed),
    }
}

/// `--seed` wins, then `BONDLAB_SEED`, then 0. A set-but-unparsable
/// environment variable is an error rather than a silent fallback.
fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("BONDLAB_SEED") {
        Ok(text) => text.trim().parse::<u64>().map_err(|_| {
            Error::domain(format!(
                "BONDLAB_SEED must be a nonnegative integer, got {text:?}"
            ))
        }),
        Err(std::env::VarError::NotPresent) => Ok(0),
        Err(e) => Err(Error::domain(format!("BONDLAB_SEED is unreadable: {e}"))),
    }
}

fn run_gen(args: &GenArgs, seed: u64) -> Result<()> {
    if args.n < 1 {
        return Err(Error::domain("gen requires n >= 1".to_string()));
    }
    let src = RandomSource::new(seed);
    let g = match (args.p, args.m) {
        (Some(p), None) => {
            if !p.is_finite() || !(0.0..=1.0).contains(&p) {
                return Err(Error::domain(format!("p = {p} outside [0, 1]")));
            }
            graph::sample_gnp(args.n, p, src)
        }
        (None, Some(m)) => graph::sample_gnm(args.n, m, src)?,
        _ => unreachable!("clap enforces exactly one of --p / --m"),
    };
    let format = match args.format {
        GraphFormatArg::Json => GraphFormat::Json,
        GraphFormatArg::Edges => GraphFormat::EdgeList,
    };
    match &args.out {
        Some(path) => graph::write_graph(path, &g, format),
        None => {
            match format {
                GraphFormat::Json => println!("{}", graph::to_json_string(&g)),
                GraphFormat::EdgeList => print!("{}", graph::to_edge_list_string(&g)),
            }
            Ok(())
        }
    }
}

/// Fixed field set of the `gamma` report line.
#[derive(Serialize)]
struct GammaOutput {
    gamma: usize,
    #[serde(rename = "X_gamma")]
    x_gamma: u64,
    #[serde(rename = "X_k", skip_serializing_if = "Option::is_none")]
    x_k: Option<std::collections::BTreeMap<usize, u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    truncated: Option<bool>,
}

fn run_gamma(args: &GammaArgs) -> Result<()> {
    let g = graph::read_graph(&args.input)?;
    let report =
        domination::domination_report(&g, &args.counts, args.enumerate.then_some(args.cap));
    let out = GammaOutput {
        gamma: report.gamma,
        x_gamma: report.x_gamma,
        x_k: (!report.counts.is_empty()).then(|| report.counts.clone()),
        truncated: report.min_sets.as_ref().map(|m| m.truncated),
    };
    let json = serde_json::to_string(&out)
        .map_err(|e| Error::format(format!("result serialization failed: {e}")))?;
    println!("{json}");
    if let Some(min_sets) = &report.min_sets {
        let stdout = std::io::stdout();
        let mut lock = stdout.lock();
        for set in &min_sets.sets {
            writeln!(lock, "{}", set.to_hex()).map_err(|e| Error::io("stdout", e))?;
        }
    }
    Ok(())
}

fn run_bondage(args: &BondageArgs) -> Result<()> {
    let g = graph::read_graph(&args.input)?;
    let result = match args.mode {
        ModeArg::Exact => bondage::bondage_exact(&g, args.limit, !args.no_prune),
        ModeArg::Bounds => bondage::bondage_bounds(&g),
        ModeArg::Certify => bondage::certified_lower_bound(&g, args.cap)?,
    };
    let json = serde_json::to_string(&result)
        .map_err(|e| Error::format(format!("result serialization failed: {e}")))?;
    println!("{json}");
    Ok(())
}

fn run_damage(args: &DamageArgs) -> Result<()> {
    let g = graph::read_graph(&args.input)?;
    let table = bondage::damage_table(&g, args.r, args.threshold, args.all_pairs)?;
    let csv_text = damage_csv(&table)?;
    match &args.out {
        Some(path) => {
            std::fs::write(path, csv_text).map_err(|e| Error::io(path, e))?;
            Ok(())
        }
        None => {
            print!("{csv_text}");
            Ok(())
        }
    }
}

/// Render a damage table with one row per direction:
/// `u,v,direction,Z_num,Z_den,Z_light_num,Z_light_den,Z_heavy_num,Z_heavy_den,j_breakdown`.
fn damage_csv(table: &DamageTable) -> Result<String> {
    let mut wtr = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    wtr.write_record([
        "u",
        "v",
        "direction",
        "Z_num",
        "Z_den",
        "Z_light_num",
        "Z_light_den",
        "Z_heavy_num",
        "Z_heavy_den",
        "j_breakdown",
    ])
    .map_err(|e| Error::format(format!("csv header write failed: {e}")))?;
    for entry in &table.entries {
        for (direction, d) in [("uv", &entry.forward), ("vu", &entry.backward)] {
            let (light, heavy) = d.split(table.threshold);
            let breakdown = d
                .counts
                .iter()
                .enumerate()
                .filter(|&(_, &c)| c > 0)
                .map(|(j, c)| format!("{j}:{c}"))
                .collect::<Vec<_>>()
                .join(";");
            wtr.write_record([
                entry.u.to_string(),
                entry.v.to_string(),
                direction.to_string(),
                d.z.numer().to_string(),
                d.z.denom().to_string(),
                light.numer().to_string(),
                light.denom().to_string(),
                heavy.numer().to_string(),
                heavy.denom().to_string(),
                breakdown,
            ])
            .map_err(|e| Error::format(format!("csv row write failed: {e}")))?;
        }
    }
    let body = wtr
        .into_inner()
        .map_err(|e| Error::format(format!("csv flush failed: {e}")))?;
    String::from_utf8(body).map_err(|e| Error::format(format!("csv output not utf-8: {e}")))
}

/// Fixed field set of the `formulas` subcommand; names and order are part
/// of the interface.
#[derive(Serialize)]
struct FormulasOutput {
    n: u64,
    p: f64,
    epsilon: f64,
    p_hat: f64,
    r: u64,
    r_closed_form: u64,
    #[serde(rename = "L")]
    heavy_threshold: u64,
    log_f_at_r: f64,
    log_one_over_pn: f64,
    expected_damage_log: f64,
}

fn run_formulas(args: &FormulasArgs) -> Result<()> {
    let ctx = FormulaContext::new(args.n, args.p, args.epsilon)?;
    let out = FormulasOutput {
        n: ctx.n,
        p: ctx.p,
        epsilon: ctx.epsilon,
        p_hat: ctx.p_hat,
        r: ctx.r,
        r_closed_form: formula::r_closed_form(args.n, args.p)?,
        heavy_threshold: ctx.heavy_threshold,
        log_f_at_r: formula::log_f(ctx.n, ctx.r, ctx.p)?.ln(),
        log_one_over_pn: -(ctx.p * ctx.n as f64).ln(),
        expected_damage_log: formula::expected_damage(&ctx).ln(),
    };
    let json = serde_json::to_string(&out)
        .map_err(|e| Error::format(format!("result serialization failed: {e}")))?;
    println!("{json}");
    Ok(())
}

fn run_exp(args: &ExpArgs, seed: u64) -> Result<()> {
    let kind = ExperimentKind::parse(&args.kind)?;
    let format = match args.format {
        RowFormatArg::Csv => OutputFormat::Csv,
        RowFormatArg::Jsonl => OutputFormat::Jsonl,
    };
    let spec = ExperimentSpec {
        kind,
        n: args.n,
        p: args.p,
        m: args.m,
        k: args.k,
        samples: args.samples,
        seed,
        epsilon: args.epsilon,
        cap: args.cap,
        limit: args.limit,
    };
    match kind {
        ExperimentKind::Concentration => {
            let (records, summary) = experiment::run_concentration(&spec)?;
            emit_experiment(args, format, &spec, &records, &summary)
        }
        ExperimentKind::Process => {
            let (records, summary) = experiment::run_process(&spec)?;
            emit_experiment(args, format, &spec, &records, &summary)
        }
        ExperimentKind::Moments => {
            let (records, summary) = experiment::run_moments(&spec)?;
            emit_experiment(args, format, &spec, &records, &summary)
        }
        ExperimentKind::DamageMean => {
            let (records, summary) = experiment::run_damage_mean(&spec)?;
            emit_experiment(args, format, &spec, &records, &summary)
        }
        ExperimentKind::Profile => {
            let (records, summary) = experiment::run_profile(&spec)?;
            emit_experiment(args, format, &spec, &records, &summary)
        }
    }
}

/// Write rows (when `--out` was given), print the summary, and fail with a
/// domain error unless every embedded exact identity held.
fn emit_experiment<R: ResultRecord, S: Serialize>(
    args: &ExpArgs,
    format: OutputFormat,
    spec: &ExperimentSpec,
    records: &[R],
    summary: &S,
) -> Result<()> {
    let metadata = ResultMetadata::new(spec);
    if let Some(path) = &args.out {
        experiment::write_results(path, records, format, &metadata)?;
    }
    let value = serde_json::to_value(summary)
        .map_err(|e| Error::format(format!("summary serialization failed: {e}")))?;
    println!("{value}");
    if value.get("identities_ok").and_then(serde_json::Value::as_bool) == Some(false) {
        return Err(Error::domain(
            "embedded exact identity checks failed; see the summary".to_string(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> std::result::Result<Cli, clap::Error> {
        Cli::try_parse_from(args)
    }

    #[test]
    fn model_flags_are_mutually_exclusive() {
        let err = parse(&["bondlab", "gen", "--n", "10", "--p", "0.5", "--m", "3"]).unwrap_err();
        assert_eq!(err.kind(), ErrorKind::ArgumentConflict);
        // One of them is required.
        let err = parse(&["bondlab", "gen", "--n", "10"]).unwrap_err();
        assert_eq!(err.kind(), ErrorKind::MissingRequiredArgument);
    }

    #[test]
    fn unknown_flags_are_rejected() {
        let err = parse(&["bondlab", "gamma", "--in", "g.json", "--bogus"]).unwrap_err();
        assert_eq!(err.kind(), ErrorKind::UnknownArgument);
    }

    #[test]
    fn seed_flag_is_global() {
        let cli = parse(&["bondlab", "gen", "--n", "4", "--p", "0.5", "--seed", "9"]).unwrap();
        assert_eq!(cli.seed, Some(9));
        let cli = parse(&["bondlab", "--seed", "9", "gen", "--n", "4", "--p", "0.5"]).unwrap();
        assert_eq!(cli.seed, Some(9));
    }

    #[test]
    fn seed_flag_takes_precedence() {
        // Environment interaction is covered by the binary-level tests;
        // here only the pure flag path.
        assert_eq!(resolve_seed(Some(42)).unwrap(), 42);
    }

    #[test]
    fn exp_defaults() {
        let cli = parse(&["bondlab", "exp", "moments", "--n", "10", "--p", "0.4", "--k", "3"])
            .unwrap();
        match cli.command {
            Command::Exp(args) => {
                assert_eq!(args.kind, "moments");
                assert_eq!(args.samples, 100);
                assert_eq!(args.epsilon, 0.1);
                assert_eq!(args.cap, 1_000_000);
                assert_eq!(args.format, RowFormatArg::Csv);
            }
            _ => panic!("expected exp"),
        }
    }

    #[test]
    fn formulas_output_key_order_is_fixed() {
        let out = FormulasOutput {
            n: 100,
            p: 0.5,
            epsilon: 0.1,
            p_hat: 0.69,
            r: 3,
            r_closed_form: 3,
            heavy_threshold: 0,
            log_f_at_r: 1.0,
            log_one_over_pn: -3.9,
            expected_damage_log: -2.0,
        };
        let json = serde_json::to_string(&out).unwrap();
        let keys: Vec<&str> = json.split('"').skip(1).step_by(2).collect();
        assert_eq!(
            keys,
            [
                "n",
                "p",
                "epsilon",
                "p_hat",
                "r",
                "r_closed_form",
                "L",
                "log_f_at_r",
                "log_one_over_pn",
                "expected_damage_log"
            ]
        );
    }

    #[test]
    fn damage_csv_shape() {
        // Triangle at r = 1: each direction destroys the one other-vertex
        // dominating set with overlap 1.
        let g = crate::graph::Graph::from_edges(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        let table = bondage::damage_table(&g, Some(1), 1, false).unwrap();
        let text = damage_csv(&table).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "u,v,direction,Z_num,Z_den,Z_light_num,Z_light_den,Z_heavy_num,Z_heavy_den,j_breakdown"
        );
        let first = lines.next().unwrap();
        assert_eq!(first, "0,1,uv,1,1,0,1,1,1,1:1");
        // Two directions per edge, three edges.
        assert_eq!(text.lines().count(), 1 + 6);
    }
}
