mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::io::UsageError;

/// Coreference scoring, agreement, adjudication, conversion and a baseline
/// resolver.
#[derive(Debug, Parser)]
#[command(name = "corefkit", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score a response against a key with MUC, B³, CEAF, BLANC and LEA.
    Score(ScoreArgs),
    /// Krippendorff's α between annotators of the same mentions.
    Iaa(IaaArgs),
    /// Merge annotations into a gold standard by exact optimization.
    Adjudicate(AdjudicateArgs),
    /// Convert between CoNLL and coreference XML.
    Convert(ConvertArgs),
    /// Run the rule-based mention detector on a document.
    DetectMentions(DetectArgs),
    /// Train, apply or cross-validate the linear baseline.
    #[command(subcommand)]
    Baseline(BaselineCommand),
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Key file (CoNLL or coreference XML).
    #[arg(long)]
    pub key: PathBuf,
    /// Response file, same format as the key.
    #[arg(long)]
    pub response: PathBuf,
    /// Input format; by default taken from the key's extension.
    #[arg(long)]
    pub format: Option<String>,
    /// Comma-separated metrics: muc, bcub, ceafm, ceafe, blanc, lea or all.
    #[arg(long, default_value = "all")]
    pub metrics: String,
    /// Score singleton chains instead of removing them first.
    #[arg(long)]
    pub keep_singletons: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct IaaArgs {
    /// Coreference XML declaring the mentions (its chains are ignored).
    #[arg(long, requires = "annotations", conflicts_with = "corpus")]
    pub mentions: Option<PathBuf>,
    /// One coreference XML file per annotator.
    #[arg(long, num_args = 1..)]
    pub annotations: Vec<PathBuf>,
    /// Directory with one subdirectory per document, each holding
    /// mentions.xml and the annotators' XML files.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct AdjudicateArgs {
    /// Coreference XML declaring the mentions.
    #[arg(long)]
    pub mentions: PathBuf,
    /// One coreference XML file per annotator.
    #[arg(long, num_args = 1.., required = true)]
    pub annotations: Vec<PathBuf>,
    /// Cost of omitting and of committing a link, as OMIT,COMMIT.
    #[arg(long, default_value = "2,1")]
    pub weights: String,
    /// File of `must A B` / `cannot A B` lines over declared mention ids.
    #[arg(long)]
    pub force: Option<PathBuf>,
    /// Document XML; mentions are then ordered and their text filled in.
    #[arg(long)]
    pub doc: Option<PathBuf>,
    /// Output file; standard output by default.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[arg(long)]
    pub from: String,
    #[arg(long)]
    pub to: String,
    /// Input file.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Document XML files referenced by the input.
    #[arg(long, num_args = 1..)]
    pub doc: Vec<PathBuf>,
    /// Output file, or a directory when the input holds several documents.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    /// Document XML with lemma, POS and dependency attributes.
    #[arg(long)]
    pub doc: PathBuf,
    /// Pronoun lemma list, one per line.
    #[arg(long)]
    pub pronouns: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
pub struct TrainFlags {
    /// svc (merge chains) or svr (best link).
    #[arg(long, default_value = "svc")]
    pub method: String,
    /// gm (gold mentions) or pm (predicted mentions).
    #[arg(long, default_value = "gm")]
    pub setup: String,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub epochs: usize,
    #[arg(long, default_value_t = 0.1)]
    pub learning_rate: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub l2: f64,
    /// Maximum mention distance (exclusive) for negatives and candidates.
    #[arg(long, default_value_t = 100)]
    pub neg_window: usize,
    /// Best-Link score threshold.
    #[arg(long, default_value_t = 0.1)]
    pub threshold: f64,
    /// Disable class-balanced example weights.
    #[arg(long)]
    pub no_balancing: bool,
    /// Pronoun lemma list, one per line.
    #[arg(long)]
    pub pronouns: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum BaselineCommand {
    /// Train on a corpus directory of <stem>.doc.xml / <stem>.gold.xml pairs.
    Train {
        #[arg(long)]
        corpus: PathBuf,
        #[command(flatten)]
        flags: TrainFlags,
        #[arg(long)]
        out: PathBuf,
    },
    /// Predict chains for one document.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        doc: PathBuf,
        /// Coreference XML with the mentions to link; detected if absent.
        #[arg(long)]
        mentions: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        neg_window: usize,
        #[arg(long, default_value_t = 0.1)]
        threshold: f64,
        #[arg(long)]
        pronouns: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Leave-one-out evaluation on a corpus directory.
    Crossval {
        #[arg(long)]
        corpus: PathBuf,
        #[command(flatten)]
        flags: TrainFlags,
        #[arg(long)]
        json: bool,
    },
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Score(a) => commands::score(a),
        Command::Iaa(a) => commands::iaa(a),
        Command::Adjudicate(a) => commands::adjudicate(a),
        Command::Convert(a) => commands::convert(a),
        Command::DetectMentions(a) => commands::detect(a),
        Command::Baseline(c) => commands::baseline(c),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
