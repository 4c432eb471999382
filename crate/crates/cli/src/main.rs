//! `fivecard`: command-line front end for the biased-cut analyses.
//!
//! Exit codes: 0 success, 2 usage error, 3 domain error, 4 failed internal
//! check, 1 I/O failure.

mod render;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use fivecard_core::bounds::{self, BoundQuery, MinimalT, Parity, Threshold};
use fivecard_core::engine::{EngineRegistry, MonteCarlo, Scenario};
use fivecard_core::leakage::PosteriorTable;
use fivecard_core::shuffle_model::chain_distribution_closed;
use fivecard_core::sweep::{chain_sweep, epsilon_sweep, CountRange, RealRange, Sweep};
use fivecard_core::{
    encode_initial, simulate, Arrangement, BiasSpec, Bit, CutChain, CutIndex, PriorSpec,
    ShuffleSpec, SimConfig,
};

use render::{key_values, num, opt, Table};

/// Largest closed-vs-oracle difference tolerated by `posterior`.
const POSTERIOR_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(
    name = "fivecard",
    version,
    about = "Leakage of the Five Card Trick under biased cuts"
)]
struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, env = "FIVECARD_FORMAT", value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Posterior table from two engines side by side.
    Posterior(PosteriorArgs),
    /// Case 1 posterior curve over ε or over the number of cuts (CSV by default).
    Sweep(SweepArgs),
    /// Number of repeated cuts needed for a confidentiality level.
    Bound(BoundArgs),
    /// Seeded sampling compared against exact enumeration.
    Simulate(SimulateArgs),
    /// Trace one run of the protocol.
    Protocol(ProtocolArgs),
    /// List the registered posterior engines.
    Engines,
}

/// A single biased cut (`--epsilon`, `--s-star`) or a chain (`--a`, `--T`).
#[derive(Debug, Args)]
struct ShuffleArgs {
    /// Bias of a single cut, in [-0.8, 0.2].
    #[arg(long, allow_negative_numbers = true, conflicts_with = "a")]
    epsilon: Option<f64>,

    /// Favoured (or avoided) cut index of the single cut.
    #[arg(long, conflicts_with = "a")]
    s_star: Option<u64>,

    /// Probability that one step of the chain leaves the deck in place.
    #[arg(long, allow_negative_numbers = true, requires = "cuts")]
    a: Option<f64>,

    /// Number of cuts in the chain.
    #[arg(long = "T", value_name = "T", requires = "a")]
    cuts: Option<u32>,
}

impl ShuffleArgs {
    fn given(&self) -> bool {
        self.epsilon.is_some() || self.a.is_some()
    }

    fn spec(&self) -> fivecard_core::Result<ShuffleSpec> {
        match (self.a, self.cuts) {
            (Some(a), Some(cuts)) => Ok(CutChain::new(a, cuts)?.into()),
            _ => {
                let s_star = CutIndex::new(self.s_star.unwrap_or(0))?;
                Ok(BiasSpec::new(self.epsilon.unwrap_or(0.0), s_star)?.into())
            }
        }
    }
}

#[derive(Debug, Args)]
struct PosteriorArgs {
    #[command(flatten)]
    shuffle: ShuffleArgs,

    /// Engine in the left column.
    #[arg(long, default_value = "closed")]
    reference: String,

    /// Engine in the right column.
    #[arg(long, default_value = "exact")]
    candidate: String,

    /// Samples for the montecarlo engine.
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,

    /// Seed for the montecarlo engine.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Fail when the columns differ by this much. Defaults to 1e-10 unless
    /// the montecarlo engine is involved.
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Grid `start:stop:step` over ε.
    #[arg(
        long,
        allow_hyphen_values = true,
        conflicts_with = "a",
        required_unless_present = "a"
    )]
    epsilon: Option<RealRange>,

    #[arg(long, default_value_t = 0, conflicts_with = "a")]
    s_star: u64,

    /// Diagonal probability of the chain.
    #[arg(long, allow_negative_numbers = true, requires = "cuts")]
    a: Option<f64>,

    /// Range `start:stop` of the number of cuts.
    #[arg(long = "T", value_name = "START:STOP", requires = "a")]
    cuts: Option<CountRange>,
}

#[derive(Debug, Args)]
struct BoundArgs {
    #[arg(long, allow_negative_numbers = true)]
    a: f64,

    /// Largest tolerated deviation of any posterior from 1/2.
    #[arg(long = "C", value_name = "C", allow_negative_numbers = true)]
    level: f64,

    #[arg(long, value_enum, default_value_t = ParityArg::Any)]
    parity: ParityArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ParityArg {
    Any,
    Even,
    Odd,
}

impl From<ParityArg> for Parity {
    fn from(p: ParityArg) -> Self {
        match p {
            ParityArg::Any => Parity::Any,
            ParityArg::Even => Parity::Even,
            ParityArg::Odd => Parity::Odd,
        }
    }
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Without shuffle flags an unbiased single cut is simulated.
    #[command(flatten)]
    shuffle: ShuffleArgs,

    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,

    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct ProtocolArgs {
    /// Alice's bit.
    #[arg(long)]
    a: u64,

    /// Bob's bit.
    #[arg(long)]
    b: u64,

    /// Comma-separated cut indices applied in order.
    #[arg(
        long,
        value_delimiter = ',',
        conflicts_with = "seed",
        required_unless_present = "seed"
    )]
    cuts: Vec<u64>,

    /// Draw uniform cut indices from this seed instead.
    #[arg(long)]
    seed: Option<u64>,

    /// Number of cuts drawn with `--seed`.
    #[arg(long, default_value_t = 1, requires = "seed")]
    rounds: u32,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Domain(#[from] fivecard_core::Error),
    #[error("check failed: {0}")]
    Assertion(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 3,
            CliError::Assertion(_) => 4,
            CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => 1,
        }
    }

    /// Output cut short by a closed pipe, e.g. `fivecard ... | head`.
    fn is_broken_pipe(&self) -> bool {
        let mut source: Option<&(dyn std::error::Error + 'static)> = Some(self);
        while let Some(e) = source {
            if let Some(io) = e.downcast_ref::<io::Error>() {
                return io.kind() == io::ErrorKind::BrokenPipe;
            }
            source = e.source();
        }
        false
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = run(cli, &mut out).and_then(|()| Ok(out.flush()?));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is_broken_pipe() => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn usage_error(subcommand: &str, message: &str) -> ! {
    let mut command = Cli::command();
    command.build();
    let sub = command
        .find_subcommand_mut(subcommand)
        .expect("known subcommand");
    sub.error(ErrorKind::MissingRequiredArgument, message)
        .exit()
}

fn run(cli: Cli, out: &mut impl Write) -> CliResult {
    let format = cli.format;
    match cli.command {
        Command::Posterior(args) => posterior(args, format.unwrap_or(Format::Table), out),
        Command::Sweep(args) => sweep(args, format.unwrap_or(Format::Csv), out),
        Command::Bound(args) => bound(args, format.unwrap_or(Format::Table), out),
        Command::Simulate(args) => simulate_cmd(args, format.unwrap_or(Format::Table), out),
        Command::Protocol(args) => protocol(args, format.unwrap_or(Format::Table), out),
        Command::Engines => engines(format.unwrap_or(Format::Table), out),
    }
}

fn write_json(out: &mut impl Write, value: &impl Serialize) -> CliResult {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn describe(shuffle: &ShuffleSpec) -> String {
    match shuffle {
        ShuffleSpec::Single(bias) => {
            format!(
                "single cut, epsilon = {}, s* = {}",
                num(*bias.epsilon()),
                bias.s_star().get()
            )
        }
        ShuffleSpec::Chain(chain) => {
            format!(
                "{} cuts, a = {}, b = {}",
                chain.cuts(),
                num(chain.a()),
                num(chain.b())
            )
        }
    }
}

#[derive(Debug, Serialize)]
struct PosteriorEntry {
    initial: Arrangement,
    #[serde(rename = "final")]
    final_arrangement: Arrangement,
    case: &'static str,
    reference: f64,
    candidate: f64,
    abs_difference: f64,
}

#[derive(Debug, Serialize)]
struct PosteriorReport {
    shuffle: ShuffleSpec,
    reference: String,
    candidate: String,
    entries: Vec<PosteriorEntry>,
    max_abs_difference: f64,
    tolerance: Option<f64>,
}

fn side_by_side(reference: &PosteriorTable, candidate: &PosteriorTable) -> Vec<PosteriorEntry> {
    reference
        .reachable()
        .flat_map(|row| {
            row.posteriors.iter().map(move |(initial, p)| {
                let q = *candidate
                    .get(initial, &row.final_arrangement)
                    .unwrap_or(&f64::NAN);
                PosteriorEntry {
                    initial: *initial,
                    final_arrangement: row.final_arrangement,
                    case: row.case.as_str(),
                    reference: *p,
                    candidate: q,
                    abs_difference: (p - q).abs(),
                }
            })
        })
        .collect()
}

fn posterior(args: PosteriorArgs, format: Format, out: &mut impl Write) -> CliResult {
    if !args.shuffle.given() {
        usage_error("posterior", "needs --epsilon or both --a and --T");
    }
    let shuffle = args.shuffle.spec()?;
    let mut registry = EngineRegistry::with_defaults();
    registry.register(Box::new(MonteCarlo {
        n_samples: args.samples,
        seed: args.seed,
    }));
    let comparison = registry.compare(
        &args.reference,
        &args.candidate,
        &Scenario::new(shuffle.clone()),
    )?;
    let sampled = [&args.reference, &args.candidate]
        .iter()
        .any(|e| *e == "montecarlo");
    let tolerance = args.tolerance.or((!sampled).then_some(POSTERIOR_TOLERANCE));

    let report = PosteriorReport {
        entries: side_by_side(&comparison.reference, &comparison.candidate),
        shuffle,
        reference: args.reference,
        candidate: args.candidate,
        max_abs_difference: comparison.max_abs_difference,
        tolerance,
    };

    match format {
        Format::Json => write_json(out, &report)?,
        Format::Csv | Format::Table => {
            let mut table = Table::new([
                "initial",
                "final",
                "case",
                report.reference.as_str(),
                report.candidate.as_str(),
                "abs_difference",
            ]);
            for e in &report.entries {
                table.push(vec![
                    e.initial.to_string(),
                    e.final_arrangement.to_string(),
                    e.case.to_string(),
                    num(e.reference),
                    num(e.candidate),
                    num(e.abs_difference),
                ]);
            }
            if format == Format::Csv {
                table.write_csv(&mut *out)?;
            } else {
                writeln!(out, "{}\n", describe(&report.shuffle))?;
                write!(out, "{table}")?;
                writeln!(
                    out,
                    "\nmax |{} - {}| = {}",
                    report.reference,
                    report.candidate,
                    num(report.max_abs_difference)
                )?;
            }
        }
    }

    match tolerance {
        Some(tol) if report.max_abs_difference >= tol || report.max_abs_difference.is_nan() => {
            Err(CliError::Assertion(format!(
                "engines {} and {} differ by {} (tolerance {})",
                report.reference,
                report.candidate,
                num(report.max_abs_difference),
                num(tol)
            )))
        }
        _ => Ok(()),
    }
}

#[derive(Debug, Serialize)]
struct SweepReport<'a> {
    #[serde(flatten)]
    sweep: &'a Sweep,
    #[serde(skip_serializing_if = "Option::is_none")]
    s_star: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<f64>,
}

fn sweep(args: SweepArgs, format: Format, out: &mut impl Write) -> CliResult {
    let (sweep, s_star) = match (args.epsilon, args.a, args.cuts) {
        (Some(range), _, _) => (
            epsilon_sweep(&range, CutIndex::new(args.s_star)?)?,
            Some(args.s_star),
        ),
        (None, Some(a), Some(cuts)) => (chain_sweep(a, &cuts)?, None),
        _ => usage_error("sweep", "needs --epsilon or both --a and --T"),
    };
    match format {
        Format::Json => write_json(
            out,
            &SweepReport {
                sweep: &sweep,
                s_star,
                a: args.a,
            },
        )?,
        Format::Csv => sweep.write_csv(&mut *out)?,
        Format::Table => {
            let mut buffer = Vec::new();
            sweep.write_csv(&mut buffer)?;
            let mut reader = csv::Reader::from_reader(buffer.as_slice());
            let mut table = Table::new(reader.headers()?.iter());
            for record in reader.records() {
                table.push(record?.iter().map(str::to_string).collect());
            }
            write!(out, "{table}")?;
        }
    }
    Ok(())
}

fn threshold(t: Threshold) -> String {
    match t {
        Threshold::Value(x) => num(x),
        Threshold::Any => "any".into(),
        Threshold::Unreachable => "unreachable".into(),
    }
}

fn bound(args: BoundArgs, format: Format, out: &mut impl Write) -> CliResult {
    let query = BoundQuery::new(args.a, args.level, args.parity.into())?;
    let result = bounds::solve(&query)?;
    let parity = serde_json::to_value(result.parity)?
        .as_str()
        .unwrap_or_default()
        .to_string();
    let minimal_t = match result.minimal_t {
        MinimalT::Finite(t) => t.to_string(),
        MinimalT::Unreachable => "unreachable".into(),
    };
    match format {
        Format::Json => write_json(out, &result)?,
        Format::Csv => {
            let mut table = Table::new([
                "a",
                "C",
                "parity",
                "analytic_T_cond1",
                "analytic_T_cond2",
                "minimal_T",
                "achieved_deviation",
            ]);
            table.push(vec![
                num(result.a),
                num(result.level),
                parity,
                threshold(result.analytic_t_cond1),
                threshold(result.analytic_t_cond2),
                minimal_t,
                opt(result.achieved_deviation),
            ]);
            table.write_csv(&mut *out)?;
        }
        Format::Table => write!(
            out,
            "{}",
            key_values(&[
                ("a", num(result.a)),
                ("C", num(result.level)),
                ("parity", parity),
                ("analytic_T_cond1", threshold(result.analytic_t_cond1)),
                ("analytic_T_cond2", threshold(result.analytic_t_cond2)),
                ("minimal_T", minimal_t),
                ("achieved_deviation", opt(result.achieved_deviation)),
            ])
        )?,
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct SimEntry {
    initial: Arrangement,
    #[serde(rename = "final")]
    final_arrangement: Arrangement,
    case: &'static str,
    count: u64,
    final_count: u64,
    empirical: Option<f64>,
    exact: f64,
    abs_difference: Option<f64>,
    std_error: Option<f64>,
    sigma: Option<f64>,
}

#[derive(Debug, Serialize)]
struct ShiftEntry {
    k: usize,
    count: u64,
    empirical: f64,
    expected: f64,
}

#[derive(Debug, Serialize)]
struct SimReport {
    shuffle: ShuffleSpec,
    n_samples: u64,
    seed: u64,
    rng_algorithm: String,
    empirical_and_rate: f64,
    std_error_bound: f64,
    max_abs_difference: f64,
    max_sigma_multiple: Option<f64>,
    entries: Vec<SimEntry>,
    shift_histogram: Vec<ShiftEntry>,
}

fn simulate_cmd(args: SimulateArgs, format: Format, out: &mut impl Write) -> CliResult {
    let shuffle = args.shuffle.spec()?;
    let config = SimConfig::new(PriorSpec::default(), shuffle.clone(), args.n, args.seed)?;
    let result = simulate(&config);
    let exact = EngineRegistry::with_defaults()
        .get("exact")?
        .posterior(&Scenario::new(shuffle.clone()))?;
    let max_abs_difference = result.empirical_posterior.max_abs_difference(&exact)?;

    let entries: Vec<SimEntry> = exact
        .entries()
        .map(|(initial, final_arrangement, q)| {
            let empirical = result
                .empirical_posterior
                .get(initial, final_arrangement)
                .copied();
            let std_error = result.conditional_std_error(final_arrangement);
            let abs_difference = empirical.map(|p| (p - q).abs());
            SimEntry {
                initial: *initial,
                final_arrangement: *final_arrangement,
                case: exact.case_of(final_arrangement).as_str(),
                count: result.count(initial, final_arrangement),
                final_count: result.final_count(final_arrangement),
                empirical,
                exact: *q,
                abs_difference,
                std_error,
                sigma: abs_difference.zip(std_error).map(|(d, se)| d / se),
            }
        })
        .collect();

    let expected = match &shuffle {
        ShuffleSpec::Single(bias) => bias.distribution(),
        ShuffleSpec::Chain(chain) => chain_distribution_closed(chain),
    };
    let empirical = result.empirical_shift_distribution();
    let shift_histogram = CutIndex::all()
        .map(|k| ShiftEntry {
            k: k.get(),
            count: result.shift_counts[k.get()],
            empirical: *empirical.prob(k),
            expected: *expected.prob(k),
        })
        .collect();

    let report = SimReport {
        max_sigma_multiple: result.max_sigma_multiple(&exact),
        shuffle,
        n_samples: result.n_samples,
        seed: result.seed,
        rng_algorithm: result.rng_algorithm.clone(),
        empirical_and_rate: result.empirical_and_rate,
        std_error_bound: result.std_error_bound,
        max_abs_difference,
        entries,
        shift_histogram,
    };

    let mut posterior = Table::new([
        "initial",
        "final",
        "case",
        "count",
        "final_count",
        "empirical",
        "exact",
        "abs_difference",
        "std_error",
        "sigma",
    ]);
    for e in &report.entries {
        posterior.push(vec![
            e.initial.to_string(),
            e.final_arrangement.to_string(),
            e.case.to_string(),
            e.count.to_string(),
            e.final_count.to_string(),
            opt(e.empirical),
            num(e.exact),
            opt(e.abs_difference),
            opt(e.std_error),
            opt(e.sigma),
        ]);
    }

    match format {
        Format::Json => write_json(out, &report)?,
        Format::Csv => posterior.write_csv(&mut *out)?,
        Format::Table => {
            write!(
                out,
                "{}",
                key_values(&[
                    ("shuffle", describe(&report.shuffle)),
                    ("n_samples", report.n_samples.to_string()),
                    ("seed", report.seed.to_string()),
                    ("rng_algorithm", report.rng_algorithm.clone()),
                    ("empirical_and_rate", num(report.empirical_and_rate)),
                    ("std_error_bound", num(report.std_error_bound)),
                    ("max_abs_difference", num(report.max_abs_difference)),
                    ("max_sigma_multiple", opt(report.max_sigma_multiple)),
                ])
            )?;
            writeln!(
                out,
                "\nposteriors (sigma uses the per-final standard error)"
            )?;
            write!(out, "{posterior}")?;
            let mut shifts = Table::new(["k", "count", "empirical", "expected"]);
            for s in &report.shift_histogram {
                shifts.push(vec![
                    s.k.to_string(),
                    s.count.to_string(),
                    num(s.empirical),
                    num(s.expected),
                ]);
            }
            writeln!(out, "\ntotal cut index")?;
            write!(out, "{shifts}")?;
        }
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct ProtocolStep {
    cut: usize,
    /// Deck before the cut with `|` where it is split; the right part moves
    /// to the top.
    split: String,
    arrangement: Arrangement,
}

#[derive(Debug, Serialize)]
struct ProtocolTrace {
    a: u8,
    b: u8,
    initial: Arrangement,
    steps: Vec<ProtocolStep>,
    total_cut: usize,
    #[serde(rename = "final")]
    final_arrangement: Arrangement,
    and: u8,
    expected: u8,
}

fn split(deck: &Arrangement, k: CutIndex) -> String {
    let text = deck.to_string();
    let at = text.len() - k.get();
    format!("{}|{}", &text[..at], &text[at..])
}

fn protocol(args: ProtocolArgs, format: Format, out: &mut impl Write) -> CliResult {
    let (a, b) = (Bit::new(args.a)?, Bit::new(args.b)?);
    let cuts: Vec<CutIndex> = match args.seed {
        Some(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..args.rounds)
                .map(|_| CutIndex::wrapping(rng.random_range(0..5)))
                .collect()
        }
        None => args
            .cuts
            .iter()
            .map(|k| CutIndex::new(*k))
            .collect::<Result<_, _>>()?,
    };

    let initial = encode_initial(a, b);
    let mut deck = initial;
    let mut steps = Vec::with_capacity(cuts.len());
    for k in &cuts {
        let before = deck;
        deck = deck.rotate(*k);
        steps.push(ProtocolStep {
            cut: k.get(),
            split: split(&before, *k),
            arrangement: deck,
        });
    }
    let total = cuts.iter().fold(CutIndex::ZERO, |acc, k| acc.then(*k));
    let trace = ProtocolTrace {
        a: a.value(),
        b: b.value(),
        initial,
        steps,
        total_cut: total.get(),
        final_arrangement: deck,
        and: deck.evaluate_and().value(),
        expected: a.and(b).value(),
    };

    match format {
        Format::Json => write_json(out, &trace)?,
        Format::Csv | Format::Table => {
            let mut table = Table::new(["step", "cut", "split", "arrangement"]);
            table.push(vec![
                "0".into(),
                "-".into(),
                "-".into(),
                initial.to_string(),
            ]);
            for (i, s) in trace.steps.iter().enumerate() {
                table.push(vec![
                    (i + 1).to_string(),
                    s.cut.to_string(),
                    s.split.clone(),
                    s.arrangement.to_string(),
                ]);
            }
            if format == Format::Csv {
                table.write_csv(&mut *out)?;
            } else {
                writeln!(out, "a = {}, b = {}\n", trace.a, trace.b)?;
                write!(out, "{table}")?;
                writeln!(
                    out,
                    "\nfinal {} (total cut {}), AND = {}",
                    trace.final_arrangement, trace.total_cut, trace.and
                )?;
            }
        }
    }

    if trace.and != trace.expected {
        return Err(CliError::Assertion(format!(
            "decoded AND {} differs from a AND b = {}",
            trace.and, trace.expected
        )));
    }
    if deck != initial.rotate(total) {
        return Err(CliError::Assertion(
            "cuts do not compose to their sum".into(),
        ));
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct EngineInfo {
    name: &'static str,
    description: &'static str,
}

fn engines(format: Format, out: &mut impl Write) -> CliResult {
    let registry = EngineRegistry::with_defaults();
    let list: Vec<EngineInfo> = registry
        .iter()
        .map(|e| EngineInfo {
            name: e.name(),
            description: e.description(),
        })
        .collect();
    match format {
        Format::Json => write_json(out, &list)?,
        Format::Csv | Format::Table => {
            let mut table = Table::new(["name", "description"]);
            for e in &list {
                table.push(vec![e.name.to_string(), e.description.to_string()]);
            }
            if format == Format::Csv {
                table.write_csv(&mut *out)?;
            } else {
                write!(out, "{table}")?;
            }
        }
    }
    Ok(())
}
