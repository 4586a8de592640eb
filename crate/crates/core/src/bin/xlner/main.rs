//! `xlner`: command-line front end for alignment, projection and evaluation.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use xlner::projection::{CollisionPolicy, GapStrategy, UnalignedPolicy};
use xlner::select::SelectionMetric;

/// Exit code for invalid invocations.
const EXIT_USAGE: u8 = 1;
/// Exit code for unreadable or inconsistent data.
const EXIT_DATA: u8 = 2;

#[derive(Parser)]
#[command(
    name = "xlner",
    version,
    about = "Cross-lingual NER data tools: word alignment, annotation projection and evaluation"
)]
struct Cli {
    /// More log output (repeat for debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train the statistical aligner on a parallel corpus.
    AlignTrain(AlignTrainArgs),
    /// Align a parallel corpus with a trained model (Pharaoh output).
    Align(AlignArgs),
    /// Project source-side labels onto translations.
    Project(ProjectArgs),
    /// Map predictions on translations back onto the original sentences.
    Backproject(ProjectArgs),
    /// Write one `source<TAB>target` line per alignment link.
    ExtractPairs(ExtractPairsArgs),
    /// Entity-level precision, recall and F1.
    EvalNer(EvalNerArgs),
    /// Alignment error rate against gold sure/possible links.
    EvalAer(EvalAerArgs),
    /// Corpus BLEU.
    EvalBleu(EvalBleuArgs),
    /// Sentence, entity and per-label counts of a corpus.
    Stats(StatsArgs),
    /// Rank candidate translation or alignment systems on dev data.
    Select(SelectArgs),
}

#[derive(Args)]
struct JsonFlag {
    /// Print a machine-readable JSON report instead of a table.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Default, clap::ValueEnum)]
enum CorpusFormat {
    /// `.jsonl` files are JSONL, everything else CoNLL.
    #[default]
    Auto,
    Conll,
    Jsonl,
}

#[derive(Args)]
struct AlignTrainArgs {
    #[arg(long)]
    src: PathBuf,
    #[arg(long)]
    tgt: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 5)]
    iters: usize,
    #[arg(long, default_value_t = 4.0)]
    tension: f64,
    #[arg(long, default_value_t = 0.08)]
    p0: f64,
    #[arg(long, default_value_t = 0.01)]
    smoothing: f64,
    #[arg(long)]
    optimize_tension: bool,
    #[command(flatten)]
    json: JsonFlag,
}

#[derive(Args)]
struct AlignArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    src: PathBuf,
    #[arg(long)]
    tgt: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    json: JsonFlag,
}

#[derive(Args)]
struct ProjectArgs {
    /// Labeled corpus whose tokens match the --src side.
    #[arg(long)]
    conll: PathBuf,
    #[arg(long)]
    src: PathBuf,
    #[arg(long)]
    tgt: PathBuf,
    /// Pharaoh links from --src positions to --tgt positions.
    #[arg(long)]
    align: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = GapStrategy::KeepSplit)]
    gap_strategy: GapStrategy,
    #[arg(long, default_value_t = CollisionPolicy::MostLinks)]
    collision: CollisionPolicy,
    #[arg(long, default_value_t = UnalignedPolicy::Drop)]
    unaligned: UnalignedPolicy,
    /// Also write the projection report as JSON.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    format: CorpusFormat,
    #[command(flatten)]
    json: JsonFlag,
}

#[derive(Args)]
struct ExtractPairsArgs {
    #[arg(long)]
    src: PathBuf,
    #[arg(long)]
    tgt: PathBuf,
    #[arg(long)]
    align: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    json: JsonFlag,
}

#[derive(Args)]
struct EvalNerArgs {
    #[arg(long)]
    gold: PathBuf,
    #[arg(long)]
    pred: PathBuf,
    /// Include one row per label.
    #[arg(long)]
    per_label: bool,
    #[arg(long, value_enum, default_value_t)]
    format: CorpusFormat,
    #[command(flatten)]
    json: JsonFlag,
}

#[derive(Args)]
struct EvalAerArgs {
    #[arg(long)]
    pred: PathBuf,
    /// Gold links: `i-j` sure, `i?j` possible.
    #[arg(long)]
    gold: PathBuf,
    #[command(flatten)]
    json: JsonFlag,
}

#[derive(Args)]
struct EvalBleuArgs {
    #[arg(long)]
    hyp: PathBuf,
    #[arg(long = "ref")]
    reference: PathBuf,
    #[arg(long, default_value_t = 4)]
    max_n: usize,
    /// Add-one smoothing for n-gram orders above 1.
    #[arg(long)]
    smooth: bool,
    #[command(flatten)]
    json: JsonFlag,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long)]
    conll: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    format: CorpusFormat,
    #[command(flatten)]
    json: JsonFlag,
}

#[derive(Args)]
struct SelectArgs {
    #[arg(long)]
    metric: SelectionMetric,
    /// Candidate as NAME=FILE: hypotheses for bleu, Pharaoh links for aer.
    #[arg(long = "candidate", required = true)]
    candidates: Vec<String>,
    /// Reference translations (bleu).
    #[arg(long = "ref")]
    reference: Option<PathBuf>,
    /// Gold alignments (aer).
    #[arg(long)]
    gold: Option<PathBuf>,
    #[arg(long, default_value_t = 4)]
    max_n: usize,
    #[arg(long)]
    smooth: bool,
    /// Also write the selection report as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    json: JsonFlag,
}

/// Marks errors caused by the invocation rather than by the data.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };

    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .parse_default_env()
        .init();

    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::from(EXIT_DATA)
            }
        }
    }
}
