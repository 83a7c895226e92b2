//! `phonlat`: build decoding graphs, train language models, decode CTC
//! posteriors and score the results.
//!
//! Exit status is 0 on success, 1 for usage errors and 2 for bad input data.
//! Flags override `PHONLAT_*` environment variables, which override defaults.

mod commands;
mod fail;
mod files;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use fail::EXIT_USAGE;

#[derive(Debug, Parser)]
#[command(name = "phonlat", version, propagate_version = true, about = "CTC phoneme-lattice decoding pipelines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compile a pronunciation lexicon into an L transducer.
    BuildLexicon(BuildLexicon),
    /// Train a Katz backoff language model and write it as ARPA.
    TrainLm(TrainLm),
    /// Compile an ARPA model or a word-frequency list into a G acceptor.
    BuildGrammar(BuildGrammar),
    /// Compose T, L and G into a decoding graph.
    CompileTlg(CompileTlg),
    /// Beam-search posterior files against a decoding graph.
    Decode(Decode),
    /// Pooled error rate of hypotheses against references.
    Score(Score),
    /// Show the strings a positionwise model of homophones generates.
    DemoHomophone(DemoHomophone),
    /// Generate synthetic posteriors for phoneme strings.
    Simulate(Simulate),
}

#[derive(Debug, Args)]
struct BuildLexicon {
    /// `word<TAB>phoneme phoneme ...` per line.
    #[arg(long)]
    lexicon: PathBuf,
    /// One phoneme per line; defaults to the built-in inventory.
    #[arg(long, env = "PHONLAT_ALPHABET")]
    alphabet: Option<PathBuf>,
    /// Allow optional silence between words.
    #[arg(long)]
    silence: bool,
    /// Output machine; symbol tables go to `.isym` / `.osym` siblings.
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct TrainLm {
    /// One sentence per line, whitespace-tokenized.
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, env = "PHONLAT_ORDER", default_value_t = 3)]
    order: usize,
    /// Counts up to this value are discounted.
    #[arg(long = "discount-threshold", short = 'k', env = "PHONLAT_DISCOUNT_THRESHOLD", default_value_t = phonlat_core::lm::DEFAULT_DISCOUNT_THRESHOLD)]
    k: u64,
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["arpa", "freq"])))]
struct BuildGrammar {
    #[arg(long)]
    arpa: Option<PathBuf>,
    /// `word count` lines; requires `--unigram`.
    #[arg(long, requires = "unigram")]
    freq: Option<PathBuf>,
    /// Build a smoothed unigram acceptor from `--freq`.
    #[arg(long, requires = "freq")]
    unigram: bool,
    /// Additive smoothing for `--unigram`.
    #[arg(long, env = "PHONLAT_ALPHA", default_value_t = 1.0, requires = "unigram")]
    alpha: f64,
    /// Word symbol table, normally the lexicon machine's `.osym` file.
    #[arg(long)]
    words: PathBuf,
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct CompileTlg {
    #[arg(long, env = "PHONLAT_ALPHABET")]
    alphabet: Option<PathBuf>,
    /// L machine from `build-lexicon`.
    #[arg(long = "lexicon-fst")]
    lexicon_fst: PathBuf,
    /// G machine from `build-grammar`.
    #[arg(long)]
    grammar: PathBuf,
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct Decode {
    /// Decoding graph from `compile-tlg`.
    #[arg(long)]
    graph: PathBuf,
    /// Posterior files; each file stem is its utterance id.
    #[arg(required = true)]
    posteriors: Vec<PathBuf>,
    #[arg(long, env = "PHONLAT_BEAM", default_value_t = 64)]
    beam: usize,
    #[arg(long = "acoustic-scale", env = "PHONLAT_ACOUSTIC_SCALE", default_value_t = 1.0)]
    acoustic_scale: f64,
    /// Cost added per emitted word.
    #[arg(long, env = "PHONLAT_WIP", default_value_t = 0.0, allow_negative_numbers = true)]
    wip: f64,
    #[arg(long, env = "PHONLAT_NBEST", default_value_t = 1)]
    nbest: usize,
    /// Worker threads; output does not depend on it.
    #[arg(long, env = "PHONLAT_PARALLEL")]
    parallel: Option<usize>,
    /// Hypothesis file; standard output when absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum UnitArg {
    Word,
    Char,
    Phoneme,
}

#[derive(Debug, Args)]
struct Score {
    /// `utt_id<TAB>tokens` per line.
    #[arg(long = "ref")]
    reference: PathBuf,
    /// `utt_id<TAB>tokens`, or the output of `decode`.
    #[arg(long = "hyp")]
    hypothesis: PathBuf,
    #[arg(long, value_enum, env = "PHONLAT_UNIT", default_value = "word")]
    unit: UnitArg,
    /// Bootstrap resamples for the standard error; 0 disables it.
    #[arg(long, env = "PHONLAT_BOOTSTRAP", default_value_t = phonlat_core::metrics::DEFAULT_RESAMPLES)]
    bootstrap: usize,
    #[arg(long, env = "PHONLAT_SEED", default_value_t = 0)]
    seed: u64,
    /// Confusion matrix CSV.
    #[arg(long)]
    confusion: Option<PathBuf>,
    /// Per-token insertion/deletion CSV.
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Report file; standard output when absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DemoHomophone {
    /// Equal-length spellings sharing one pronunciation.
    #[arg(required = true)]
    words: Vec<String>,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("input").required(true).args(["phonemes", "transcripts"])))]
struct Simulate {
    #[arg(long, env = "PHONLAT_ALPHABET")]
    alphabet: Option<PathBuf>,
    /// Space-separated phonemes of one utterance; written to `--out`.
    #[arg(long, allow_hyphen_values = true, requires = "out")]
    phonemes: Option<String>,
    /// `utt_id<TAB>word word ...` per line; spelled with `--lexicon` and
    /// written to `--out-dir`.
    #[arg(long, requires_all = ["lexicon", "out_dir"])]
    transcripts: Option<PathBuf>,
    #[arg(long)]
    lexicon: Option<PathBuf>,
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long = "out-dir")]
    out_dir: Option<PathBuf>,
    #[arg(long = "frames-per-token", default_value_t = 2)]
    frames_per_token: usize,
    #[arg(long = "blank-fraction", default_value_t = 0.3)]
    blank_fraction: f64,
    /// Noise temperature; 0 gives one-hot rows.
    #[arg(long, default_value_t = 0.0)]
    temperature: f64,
    /// Utterance `i` of a transcript file uses `seed + i`.
    #[arg(long, env = "PHONLAT_SEED", default_value_t = 0)]
    seed: u64,
    /// Write the little-endian binary format instead of text.
    #[arg(long)]
    binary: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let result = match cli.command {
        Command::BuildLexicon(a) => commands::build_lexicon(a),
        Command::TrainLm(a) => commands::train_lm(a),
        Command::BuildGrammar(a) => commands::build_grammar(a),
        Command::CompileTlg(a) => commands::compile_tlg(a),
        Command::Decode(a) => commands::decode(a),
        Command::Score(a) => commands::score(a),
        Command::DemoHomophone(a) => commands::demo_homophone(a),
        Command::Simulate(a) => commands::simulate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("phonlat: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
