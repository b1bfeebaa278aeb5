use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use emomap_core::FormatDescriptor;

/// Convert emotion lexicons between representation formats with kNN regression.
#[derive(Debug, Parser)]
#[command(name = "emomap", version, propagate_version = true)]
#[command(after_help = "Relative input paths that do not exist are looked up under $EMOMAP_DATA_DIR.")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Linearly rescale a lexicon onto a new interval
    Rescale(RescaleArgs),
    /// Join two single-format lexicons into a gold lexicon over their shared words
    Intersect(IntersectArgs),
    /// Fit a kNN mapping model on one or more gold lexicons
    Train(TrainArgs),
    /// Predict ratings in the model's target format for every word of a lexicon
    Map(MapArgs),
    /// Cross-validate the mapping within each gold lexicon
    EvalMono(EvalMonoArgs),
    /// Train on one gold lexicon, test on another
    EvalCross(EvalCrossArgs),
    /// Score every bag of gold lexicons against held-out targets
    EvalBag(EvalBagArgs),
    /// Inter-study reliability: per-dimension r between two lexicons of one format
    Isr(IsrArgs),
    /// Construct a new lexicon and its manifest from a source lexicon and a model
    Build(BuildArgs),
    /// Per-dimension summary statistics of a lexicon
    ReportStats(ReportStatsArgs),
    /// Highest-rated words per dimension
    ReportTopk(ReportTopkArgs),
    /// Correlation matrix across the dimensions of two lexicons
    ReportCorr(ReportCorrArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Dedup {
    /// Reject repeated words
    Error,
    /// Average repeated words into their first occurrence
    Mean,
}

#[derive(Debug, Args)]
pub struct ParseFlags {
    /// Clamp out-of-range ratings to the scale bounds instead of failing
    #[arg(long)]
    pub clamp: bool,
    /// Policy for words that occur more than once
    #[arg(long, value_enum, default_value_t = Dedup::Error)]
    pub dedup: Dedup,
}

#[derive(Debug, Args)]
pub struct MatchFlags {
    /// Match words case-insensitively (spelling is taken from the first lexicon)
    #[arg(long)]
    pub fold_case: bool,
}

#[derive(Debug, Args)]
pub struct OutputFlags {
    /// Output file (standard output if omitted)
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Decimal places written per rating
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u8).range(0..=17))]
    pub precision: u8,
}

#[derive(Debug, Args)]
pub struct ReportFlags {
    /// Text report file (standard output if omitted)
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Also write the machine-readable report as JSON to this file
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RescaleArgs {
    /// Input lexicon
    #[arg(long, short)]
    pub input: PathBuf,
    /// Format of the input: a preset (vad, va, be5), PRESET:MIN:MAX or NAME:DIM,DIM:MIN:MAX
    #[arg(long)]
    pub format: FormatDescriptor,
    /// Target interval as MIN:MAX
    #[arg(long, value_parser = parse_interval)]
    pub to: (f64, f64),
    #[command(flatten)]
    pub parse: ParseFlags,
    #[command(flatten)]
    pub output: OutputFlags,
}

#[derive(Debug, Args)]
pub struct IntersectArgs {
    /// First lexicon; its spelling and word order are kept
    pub first: PathBuf,
    /// Second lexicon
    pub second: PathBuf,
    /// Format of the first lexicon
    #[arg(long, default_value = "vad")]
    pub format_a: FormatDescriptor,
    /// Format of the second lexicon
    #[arg(long, default_value = "be5")]
    pub format_b: FormatDescriptor,
    #[command(flatten)]
    pub matching: MatchFlags,
    #[command(flatten)]
    pub parse: ParseFlags,
    #[command(flatten)]
    pub output: OutputFlags,
}

#[derive(Debug, Args)]
pub struct GoldFlags {
    /// Formats of a gold lexicon as FIRST,SECOND
    #[arg(long, default_value = "vad,be5", value_parser = parse_formats)]
    pub formats: (FormatDescriptor, FormatDescriptor),
    #[command(flatten)]
    pub parse: ParseFlags,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Gold lexicon; repeat to pool several into one training set
    #[arg(long, required = true)]
    pub gold: Vec<PathBuf>,
    /// Mapping direction as SOURCE2TARGET, e.g. vad2be5 or be52vad
    #[arg(long)]
    pub direction: String,
    /// Number of neighbours
    #[arg(long, short, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub k: u64,
    /// Model file to write
    #[arg(long, short)]
    pub out: PathBuf,
    #[command(flatten)]
    pub gold_flags: GoldFlags,
}

#[derive(Debug, Args)]
pub struct MapArgs {
    /// Model file written by `train`
    #[arg(long, short)]
    pub model: PathBuf,
    /// Lexicon in the model's source format
    #[arg(long, short)]
    pub input: PathBuf,
    #[command(flatten)]
    pub parse: ParseFlags,
    #[command(flatten)]
    pub output: OutputFlags,
}

#[derive(Debug, Args)]
pub struct EvalFlags {
    /// Number of neighbours
    #[arg(long, short, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub k: u64,
    /// Seed for fold assignment
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Directions to evaluate: both, or SOURCE2TARGET such as vad2be5
    #[arg(long, default_value = "both")]
    pub direction: String,
    /// Derive comparison floors from ISR JSON files written by `isr --json` instead of the built-in reference floors
    #[arg(long)]
    pub isr: Vec<PathBuf>,
    /// Exit 0 even when some correlation is undefined
    #[arg(long)]
    pub allow_degenerate: bool,
    #[command(flatten)]
    pub gold_flags: GoldFlags,
    #[command(flatten)]
    pub report: ReportFlags,
}

#[derive(Debug, Args)]
pub struct EvalMonoArgs {
    /// Gold lexicon as [NAME=]PATH; repeat for one table row per language
    #[arg(long, required = true)]
    pub gold: Vec<String>,
    /// Number of cross-validation folds
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(2..))]
    pub folds: u64,
    #[command(flatten)]
    pub eval: EvalFlags,
}

#[derive(Debug, Args)]
pub struct EvalCrossArgs {
    /// Training gold lexicon as [NAME=]PATH
    #[arg(long)]
    pub train: String,
    /// Test gold lexicon as [NAME=]PATH
    #[arg(long)]
    pub test: String,
    #[command(flatten)]
    pub eval: EvalFlags,
}

#[derive(Debug, Args)]
pub struct EvalBagArgs {
    /// Gold lexicon as [NAME=]PATH; give at least two
    #[arg(long, required = true, num_args = 1)]
    pub gold: Vec<String>,
    /// Names of the gold lexicons to test on (all if omitted)
    #[arg(long)]
    pub target: Vec<String>,
    /// Smallest bag size
    #[arg(long, default_value_t = 2)]
    pub min_size: usize,
    /// Largest bag size (number of gold lexicons if omitted)
    #[arg(long)]
    pub max_size: Option<usize>,
    #[command(flatten)]
    pub eval: EvalFlags,
}

#[derive(Debug, Args)]
pub struct IsrArgs {
    /// First study
    pub first: PathBuf,
    /// Second study
    pub second: PathBuf,
    /// Format of both studies
    #[arg(long, default_value = "vad")]
    pub format: FormatDescriptor,
    /// Format of the second study, if it differs
    #[arg(long)]
    pub format_b: Option<FormatDescriptor>,
    /// Label for this pair in reports
    #[arg(long)]
    pub label: Option<String>,
    #[command(flatten)]
    pub matching: MatchFlags,
    #[command(flatten)]
    pub parse: ParseFlags,
    #[command(flatten)]
    pub report: ReportFlags,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// Source lexicon in the model's source format
    #[arg(long, short)]
    pub input: PathBuf,
    /// Model file written by `train`
    #[arg(long, short)]
    pub model: PathBuf,
    /// Output lexicon; the manifest is written beside it as OUT.manifest.json
    #[arg(long, short)]
    pub out: PathBuf,
    /// Lexicon whose words (first column) do not count as new; usually the training gold
    #[arg(long)]
    pub exclude: Vec<PathBuf>,
    /// Decimal places written per rating
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u8).range(0..=17))]
    pub precision: u8,
    #[command(flatten)]
    pub parse: ParseFlags,
}

#[derive(Debug, Args)]
pub struct ReportStatsArgs {
    /// Lexicon to summarize
    #[arg(long, short)]
    pub input: PathBuf,
    /// Format of the lexicon
    #[arg(long)]
    pub format: FormatDescriptor,
    #[command(flatten)]
    pub parse: ParseFlags,
    #[command(flatten)]
    pub report: ReportFlags,
}

#[derive(Debug, Args)]
pub struct ReportTopkArgs {
    /// Lexicon to rank
    #[arg(long, short)]
    pub input: PathBuf,
    /// Format of the lexicon
    #[arg(long)]
    pub format: FormatDescriptor,
    /// Words listed per dimension
    #[arg(long, short, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub k: u64,
    /// Comma-separated dimensions to rank (all if omitted)
    #[arg(long, value_delimiter = ',')]
    pub dims: Vec<String>,
    #[command(flatten)]
    pub parse: ParseFlags,
    #[command(flatten)]
    pub report: ReportFlags,
}

#[derive(Debug, Args)]
pub struct ReportCorrArgs {
    /// First lexicon
    pub first: PathBuf,
    /// Second lexicon
    pub second: PathBuf,
    /// Format of the first lexicon
    #[arg(long, default_value = "vad")]
    pub format_a: FormatDescriptor,
    /// Format of the second lexicon
    #[arg(long, default_value = "be5")]
    pub format_b: FormatDescriptor,
    #[command(flatten)]
    pub matching: MatchFlags,
    #[command(flatten)]
    pub parse: ParseFlags,
    #[command(flatten)]
    pub report: ReportFlags,
}

fn parse_interval(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected MIN:MAX, got `{s}`"))?;
    let lo: f64 = lo.trim().parse().map_err(|_| format!("bad lower bound `{lo}`"))?;
    let hi: f64 = hi.trim().parse().map_err(|_| format!("bad upper bound `{hi}`"))?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(format!("need finite MIN < MAX, got {lo}:{hi}"));
    }
    Ok((lo, hi))
}

/// Splits at the first comma that leaves two valid format specs, since custom
/// specs contain commas themselves.
fn parse_formats(s: &str) -> Result<(FormatDescriptor, FormatDescriptor), String> {
    let mut last = None;
    for (i, _) in s.match_indices(',') {
        match (s[..i].parse::<FormatDescriptor>(), s[i + 1..].parse::<FormatDescriptor>()) {
            (Ok(a), Ok(b)) => return Ok((a, b)),
            (Err(e), _) | (_, Err(e)) => last = Some(e.to_string()),
        }
    }
    Err(last.unwrap_or_else(|| format!("expected FIRST,SECOND, got `{s}`")))
}
