use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use turkic_translit::{LanguageId, UnknownPolicy};

mod commands;

/// Transliterate Turkic text into the Kazakh alphabet and prepare it for speech synthesis.
///
/// Every option can also be set through a `TURKIC_` environment variable
/// (for example `TURKIC_LANG=tr`).
#[derive(Parser, Debug)]
#[command(name = "turkic", version)]
struct Cli {
    /// Directory with replacement ipa_inventory.tsv, mappings.tsv, fallbacks.tsv
    /// and optionally confusables.tsv.
    #[arg(long, global = true, env = "TURKIC_DATA_DIR")]
    data_dir: Option<PathBuf>,

    /// Leave Latin/Cyrillic lookalike characters as they are.
    #[arg(long, global = true)]
    no_homoglyph_folding: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct TextArgs {
    /// Source language: short code (tr, kk, sah...) or English name.
    #[arg(long, short, env = "TURKIC_LANG")]
    lang: LanguageId,

    /// Handling of characters with no Kazakh rendering.
    #[arg(long, default_value = "drop", env = "TURKIC_POLICY")]
    policy: UnknownPolicy,

    /// Input file; standard input when absent.
    #[arg(long, short)]
    input: Option<PathBuf>,

    /// Output file; standard output when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,

    /// Write a TSV audit of dropped characters and fallbacks, to the given
    /// file or to standard error.
    #[arg(long, num_args = 0..=1, default_missing_value = "-", value_name = "PATH")]
    report: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Transliterate each input line into Kazakh letters.
    Translit(TextArgs),
    /// Print each input line as space-separated IPA symbols (`|` marks word breaks).
    Ipa(TextArgs),
    /// Check the mapping data and print per-language grapheme counts.
    Validate {
        #[arg(long)]
        json: bool,
    },
    /// Print the table of IPA symbols shared between each pair of languages.
    Overlap {
        #[arg(long, conflicts_with = "summary")]
        json: bool,
        /// Human-readable per-language summary instead of the matrix.
        #[arg(long)]
        summary: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Transliterate, split into sentences and synthesize WAV files.
    Speak(SpeakArgs),
}

#[derive(Args, Debug)]
struct SpeakArgs {
    #[arg(long, short, env = "TURKIC_LANG")]
    lang: LanguageId,

    #[arg(long, default_value = "drop", env = "TURKIC_POLICY")]
    policy: UnknownPolicy,

    #[arg(long, short)]
    input: Option<PathBuf>,

    /// Path stem of the WAV files, written as `<stem>_<index>.wav`.
    #[arg(long, short, default_value = "out")]
    output: PathBuf,

    /// Speech backend base URL, or `mock` for the built-in silent backend.
    #[arg(long, env = "TURKIC_BACKEND_URL")]
    backend_url: String,

    /// Per-request timeout in seconds.
    #[arg(long, default_value_t = 60, env = "TURKIC_TIMEOUT")]
    timeout: u64,

    /// Requests in flight at once.
    #[arg(long, default_value_t = turkic_translit::tts::DEFAULT_PARALLELISM, env = "TURKIC_PARALLELISM")]
    parallelism: usize,

    /// Longest sentence sent to the backend, in characters.
    #[arg(long, default_value_t = turkic_translit::tts::DEFAULT_MAX_CHARS, env = "TURKIC_MAX_LEN")]
    max_len: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("turkic: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
