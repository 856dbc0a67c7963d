//! Argument definitions and command drivers. Each command returns the text to
//! print and the exit code, so tests can run them without a process.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;

use toric_gauss::configuration::{self, DedupPolicy, PointConfiguration, Validated};
use toric_gauss::constructions::{self, Construction};
use toric_gauss::criteria;
use toric_gauss::gaussmap::{EnumerationMode, EnumerationOptions};
use toric_gauss::{Characteristic, IntegerMatrix};

use crate::error::{exit, CliError, CliResult};
use crate::input::{parse_input, parse_matrix_str, read_source, RawInput};
use crate::parallel;
use crate::report::*;
use crate::sweep::{self, CorpusShape};

#[derive(Debug, Parser)]
#[command(name = "toric-gauss", version, about = "Gauss maps of projective toric varieties")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the Gauss map structure of a point configuration.
    Analyze(AnalyzeArgs),
    /// Test whether the fibers of a projection form a developable family.
    Developable(DevelopableArgs),
    /// Split a separable configuration into a Cayley sum and report the join structure.
    Decompose(DecomposeArgs),
    /// Build a configuration with prescribed Gauss map and check it.
    Construct(ConstructArgs),
    /// Cross-check the combinatorics against direct evaluation on random inputs.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Input file, or `-` for stdin.
    #[arg(default_value = "-")]
    pub input: String,
    /// Read INPUT as the document itself instead of a path.
    #[arg(long)]
    pub inline: bool,
    /// Base field characteristic, 0 or a prime. Overrides the input file.
    #[arg(long = "char", value_name = "P")]
    pub characteristic: Option<u64>,
    /// Drop repeated points with a warning instead of failing.
    #[arg(long)]
    pub lenient: bool,
}

#[derive(Debug, Clone, Copy, Default, Args)]
pub struct FormatArgs {
    /// Human-readable output.
    #[arg(long, conflicts_with = "json")]
    pub text: bool,
    /// JSON output (the default).
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Full,
    Fast,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value_t = Mode::Full)]
    pub mode: Mode,
    /// Largest number of elements of B listed in the report.
    #[arg(long, default_value_t = 1000)]
    pub max_sums: usize,
    #[command(flatten)]
    pub format: FormatArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DevelopableArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Projection Z^n -> Z^l as a JSON array of n rows of length l.
    #[arg(long = "proj", value_name = "MATRIX")]
    pub projection: String,
    #[command(flatten)]
    pub format: FormatArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub format: FormatArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstructionKind {
    /// Fiber and image configurations with c components.
    #[value(name = "fiber-image")]
    FiberImage,
    /// Fiber configuration, rank r and c components.
    #[value(name = "fiber-rank")]
    FiberRank,
    /// The hypersurface {0, e_1, ..., e_n, a}.
    Hypersurface,
    /// The codimension-2 family {0, e_i, e_1 + e_2, e_2 + ... + e_n}.
    Codim2,
}

#[derive(Debug, Clone, Args)]
pub struct ConstructArgs {
    #[arg(value_enum)]
    pub kind: ConstructionKind,
    /// Fiber configuration as a JSON point list.
    #[arg(long)]
    pub fiber: Option<String>,
    /// Image configuration as a JSON point list.
    #[arg(long)]
    pub image: Option<String>,
    /// Number of components of a general fiber.
    #[arg(long, default_value = "1")]
    pub components: BigInt,
    #[arg(long = "char", value_name = "P", default_value_t = 0)]
    pub characteristic: u64,
    /// Rank of the Gauss map.
    #[arg(long)]
    pub rank: Option<usize>,
    /// Ambient dimension n.
    #[arg(long)]
    pub dim: Option<usize>,
    /// N, one less than the number of points. Defaults to the smallest admissible value.
    #[arg(long)]
    pub size: Option<usize>,
    /// Exponent vector of the extra hypersurface point, as JSON or comma separated.
    #[arg(long)]
    pub exponents: Option<String>,
    #[arg(long, default_value_t = 1000)]
    pub max_sums: usize,
    #[command(flatten)]
    pub format: FormatArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Random points per configuration.
    #[arg(long, default_value_t = 5)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Characteristics to sweep.
    #[arg(long = "char", value_delimiter = ',', default_values_t = vec![0u64, 2, 3, 5])]
    pub characteristics: Vec<u64>,
    /// Random configurations per characteristic.
    #[arg(long, default_value_t = 100)]
    pub configs: usize,
    /// Random lattices for the fiber-count check.
    #[arg(long, default_value_t = 30)]
    pub lattices: usize,
    /// Check this configuration only, instead of a random corpus.
    pub input: Option<String>,
    /// Read INPUT as the document itself instead of a path.
    #[arg(long)]
    pub inline: bool,
    #[command(flatten)]
    pub format: FormatArgs,
}

/// What a command prints and how it exits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: u8,
}

fn emit<T: Serialize>(report: &T, text: impl FnOnce() -> String, format: FormatArgs, code: u8) -> Outcome {
    let stdout = if format.text {
        text()
    } else {
        let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
        s.push('\n');
        s
    };
    Outcome { stdout, code }
}

pub fn error_outcome(e: CliError) -> Outcome {
    let code = e.code;
    let mut stdout = serde_json::to_string_pretty(&ErrorOut { error: e }).expect("errors serialize");
    stdout.push('\n');
    Outcome { stdout, code }
}

pub fn run(cli: Cli) -> Outcome {
    let result = match cli.command {
        Command::Analyze(a) => analyze(&a),
        Command::Developable(a) => developable(&a),
        Command::Decompose(a) => decompose(&a),
        Command::Construct(a) => construct(&a),
        Command::Verify(a) => verify(&a),
    };
    result.unwrap_or_else(error_outcome)
}

fn load_raw(input: &str, inline: bool) -> CliResult<RawInput> {
    let text = if inline { input.to_string() } else { read_source(input)? };
    parse_input(&text)
}

fn load(args: &InputArgs) -> CliResult<Validated> {
    let raw = load_raw(&args.input, args.inline)?;
    let p = args.characteristic.or(raw.characteristic).unwrap_or(0);
    let policy = if args.lenient { DedupPolicy::Lenient } else { DedupPolicy::Strict };
    Ok(configuration::validate(raw.points, p, policy)?)
}

pub fn analyze(args: &AnalyzeArgs) -> CliResult<Outcome> {
    let v = load(&args.input)?;
    let mode = match args.mode {
        Mode::Full => EnumerationMode::Full,
        Mode::Fast => EnumerationMode::InvariantsOnly,
    };
    let s = parallel::analyze(&v.configuration, EnumerationOptions::with_mode(mode))?;
    let report = AnalysisReport::new(&s, &v.warnings, args.max_sums);
    Ok(emit(&report, || report.to_text(), args.format, exit::OK))
}

pub fn developable(args: &DevelopableArgs) -> CliResult<Outcome> {
    let v = load(&args.input)?;
    let config = &v.configuration;
    let rows = parse_matrix_str(&args.projection)?;
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(CliError::input("projection rows have different lengths"));
    }
    let projection = IntegerMatrix::from_rows(cols, rows);
    if !config.spans_ambient_lattice() {
        return Err(toric_gauss::Error::NotSpanning.into());
    }
    let s = parallel::analyze(config, EnumerationOptions::with_mode(EnumerationMode::InvariantsOnly))?;
    let r = criteria::developable(config, &projection, Some(&s))?;
    let report = DevelopabilityOut::new(config.characteristic().to_string(), &r);
    let code = if r.developable { exit::OK } else { exit::FALSE };
    Ok(emit(&report, || report.to_text(), args.format, code))
}

pub fn decompose(args: &DecomposeArgs) -> CliResult<Outcome> {
    let v = load(&args.input)?;
    let s = parallel::analyze(&v.configuration, EnumerationOptions::with_mode(EnumerationMode::InvariantsOnly))?;
    let d = criteria::cayley_decompose(&s)?;
    let j = criteria::join_report(&d);
    let report = DecompositionOut::new(&s, &d, &j);
    let code = if s.characteristic().is_zero() && !j.is_join { exit::FALSE } else { exit::OK };
    Ok(emit(&report, || report.to_text(), args.format, code))
}

fn require<T>(value: Option<T>, flag: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::input(format!("--{} is required for this construction", flag)))
}

fn configuration_arg(text: &str, p: Characteristic) -> CliResult<PointConfiguration> {
    let points = parse_matrix_str(text)?;
    let n = points.first().map_or(0, Vec::len);
    Ok(PointConfiguration::new(n, points, p)?)
}

fn exponents_arg(text: &str) -> CliResult<Vec<BigInt>> {
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        let rows = parse_matrix_str(&format!("[{}]", trimmed))?;
        Ok(rows.into_iter().next().unwrap_or_default())
    } else {
        trimmed
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| CliError::input(format!("cannot parse exponent {:?}", t))))
            .collect()
    }
}

pub fn build_construction(args: &ConstructArgs) -> CliResult<Construction> {
    let p = Characteristic::new(args.characteristic)?;
    let c = &args.components;
    let built = match args.kind {
        ConstructionKind::FiberImage => {
            let fiber = configuration_arg(require(args.fiber.as_deref(), "fiber")?, p)?;
            let image = configuration_arg(require(args.image.as_deref(), "image")?, p)?;
            constructions::with_fiber_and_image(&fiber, &image, c, p)
        }
        ConstructionKind::FiberRank => {
            let fiber = configuration_arg(require(args.fiber.as_deref(), "fiber")?, p)?;
            let r = require(args.rank, "rank")?;
            let n = require(args.dim, "dim")?;
            let fiber_rank = configuration::normalize(&fiber).dimension();
            let big_n = args.size.unwrap_or_else(|| constructions::minimal_size(n, fiber_rank, r, p));
            constructions::with_fiber_rank_components(&fiber, r, c, p, n, big_n)
        }
        ConstructionKind::Hypersurface => {
            let a = exponents_arg(require(args.exponents.as_deref(), "exponents")?)?;
            constructions::birational_hypersurface(&a, p)
        }
        ConstructionKind::Codim2 => constructions::birational_codim2(require(args.dim, "dim")?, p),
    };
    Ok(built?)
}

pub fn construct(args: &ConstructArgs) -> CliResult<Outcome> {
    let c = build_construction(args)?;
    let v = c.verify()?;
    let report = ConstructionOut::new(&c, &v, args.max_sums);
    let code = if report.verified { exit::OK } else { exit::FALSE };
    Ok(emit(&report, || report.to_text(), args.format, code))
}

pub fn verify(args: &VerifyArgs) -> CliResult<Outcome> {
    let target = match &args.input {
        Some(input) => Some(load_raw(input, args.inline)?),
        None => None,
    };
    let mut plucker = Vec::new();
    let mut passed = true;
    for &p in &args.characteristics {
        let ch = Characteristic::new(p)?;
        let configs = match &target {
            Some(raw) => vec![configuration::validate(raw.points.clone(), p, DedupPolicy::Strict)?.configuration],
            None => sweep::corpus(args.seed, args.configs, ch, CorpusShape::default()),
        };
        let s = sweep::plucker_sweep(&configs, args.samples, args.seed)?;
        passed &= s.outcome.passed();
        plucker.push(SweepLine {
            characteristic: p.to_string(),
            field_order: s.field_order.to_string(),
            configurations: count(s.configurations),
            samples: count(s.outcome.samples),
            disagreements: count(s.outcome.disagreements),
            support_mismatches: count(s.outcome.support_mismatches),
        });
    }
    let primes: Vec<u64> = args.characteristics.iter().copied().filter(|&p| p > 0).collect();
    let mut fiber_counts = Vec::new();
    if target.is_none() && args.lattices > 0 && !primes.is_empty() {
        let cases = sweep::fiber_count_sweep(args.seed, args.lattices, &primes)?;
        for &p in &primes {
            let mine: Vec<_> = cases.iter().filter(|c| c.characteristic == p).collect();
            let mismatches = mine.iter().filter(|c| !c.holds()).count();
            passed &= mismatches == 0;
            fiber_counts.push(FiberCountLine {
                characteristic: p.to_string(),
                lattices: count(mine.len()),
                mismatches: count(mismatches),
            });
        }
    }
    let report = VerifyOut {
        seed: args.seed.to_string(),
        samples_per_configuration: count(args.samples),
        plucker,
        fiber_counts,
        passed,
    };
    let code = if passed { exit::OK } else { exit::FALSE };
    Ok(emit(&report, || report.to_text(), args.format, code))
}
