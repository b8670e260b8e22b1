use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Serialize;
use turkic_translit::analysis::OverlapMatrix;
use turkic_translit::registry::EXPECTED_GRAPHEME_COUNTS;
use turkic_translit::tts::{self, Backend, HttpBackend, MockBackend, SentenceSplitter, SplitError};
use turkic_translit::{DataError, DataSource, LanguageId, Registry, Toolkit, TransliterationResult, UnknownPolicy};

use crate::{Cli, Command, SpeakArgs, TextArgs};

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Data(DataError),
    Invalid(String),
    Strict(String),
    Backend(String),
    Empty,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) | CliError::Data(_) | CliError::Empty => 1,
            CliError::Invalid(_) | CliError::Strict(_) => 2,
            CliError::Backend(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(m) | CliError::Invalid(m) | CliError::Strict(m) | CliError::Backend(m) => f.write_str(m),
            CliError::Data(e) => write!(f, "{e}"),
            CliError::Empty => f.write_str("no text to synthesize"),
        }
    }
}

fn io_err(path: Option<&Path>, e: io::Error) -> CliError {
    match path {
        Some(p) => CliError::Io(format!("{}: {e}", p.display())),
        None => CliError::Io(e.to_string()),
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let source = match &cli.data_dir {
        Some(dir) => DataSource::Dir(dir.clone()),
        None => DataSource::Embedded,
    };
    if let Command::Validate { json } = cli.command {
        return validate(&source, json);
    }
    let toolkit = Toolkit::load(&source)
        .map_err(CliError::Data)?
        .with_homoglyph_folding(!cli.no_homoglyph_folding);
    match cli.command {
        Command::Translit(args) => convert(&toolkit, &args, Mode::Kazakh),
        Command::Ipa(args) => convert(&toolkit, &args, Mode::Ipa),
        Command::Overlap { json, summary, output } => overlap(toolkit.registry(), json, summary, output.as_deref()),
        Command::Speak(args) => speak(&toolkit, &args),
        Command::Validate { .. } => unreachable!(),
    }
}

/// Reads the whole input as UTF-8 without a byte-order mark.
fn read_input(path: Option<&Path>) -> Result<String, CliError> {
    let mut bytes = Vec::new();
    match path {
        Some(p) => bytes = fs::read(p).map_err(|e| io_err(Some(p), e))?,
        None => {
            io::stdin().read_to_end(&mut bytes).map_err(|e| io_err(None, e))?;
        }
    }
    let text = String::from_utf8(bytes).map_err(|e| CliError::Io(format!("input is not UTF-8: {e}")))?;
    Ok(match text.strip_prefix('\u{feff}') {
        Some(rest) => rest.to_string(),
        None => text,
    })
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) if p != Path::new("-") => {
            Box::new(io::BufWriter::new(fs::File::create(p).map_err(|e| io_err(Some(p), e))?))
        }
        _ => Box::new(io::BufWriter::new(io::stdout().lock())),
    })
}

fn open_report(path: &Path) -> Result<Box<dyn Write>, CliError> {
    if path == Path::new("-") {
        Ok(Box::new(io::stderr()))
    } else {
        Ok(Box::new(io::BufWriter::new(
            fs::File::create(path).map_err(|e| io_err(Some(path), e))?,
        )))
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Kazakh,
    Ipa,
}

fn audit_rows(registry: &Registry, line: usize, result: &TransliterationResult) -> String {
    let mut out = String::new();
    for d in &result.dropped {
        let _ = writeln!(out, "{line}\tdropped\t{}\t{}\t{}", d.position, d.text, d.reason);
    }
    for f in &result.used_fallbacks {
        let _ = writeln!(
            out,
            "{line}\tfallback\t{}\t{}\t{}",
            f.position,
            registry.symbol(f.symbol).ipa,
            registry.render(f.symbol).text
        );
    }
    out
}

fn convert(toolkit: &Toolkit, args: &TextArgs, mode: Mode) -> Result<(), CliError> {
    let input = read_input(args.input.as_deref())?;
    let mut out = open_output(args.output.as_deref())?;
    let mut report = match &args.report {
        Some(p) => {
            let mut w = open_report(p)?;
            writeln!(w, "line\tkind\tposition\ttext\tdetail").map_err(|e| io_err(Some(p), e))?;
            Some(w)
        }
        None => None,
    };
    let registry = toolkit.registry();

    for (i, line) in input.lines().enumerate() {
        let line_no = i + 1;
        let strict = |e: turkic_translit::TranslitError| CliError::Strict(format!("line {line_no}: {e}"));
        let ipa = toolkit.ipa(args.lang, line);
        let rendered = match mode {
            Mode::Kazakh => {
                let result = toolkit.ipa_to_kazakh(&ipa, args.policy).map_err(strict)?;
                if let Some(w) = report.as_mut() {
                    w.write_all(audit_rows(registry, line_no, &result).as_bytes())
                        .map_err(|e| io_err(None, e))?;
                }
                result.output
            }
            Mode::Ipa => {
                let s = turkic_translit::translit::ipa_string(registry, &ipa, args.policy).map_err(strict)?;
                if let Some(w) = report.as_mut() {
                    let result = toolkit.ipa_to_kazakh(&ipa, UnknownPolicy::Drop).map_err(strict)?;
                    w.write_all(audit_rows(registry, line_no, &result).as_bytes())
                        .map_err(|e| io_err(None, e))?;
                }
                s
            }
        };
        writeln!(out, "{rendered}").map_err(|e| io_err(args.output.as_deref(), e))?;
    }
    out.flush().map_err(|e| io_err(args.output.as_deref(), e))?;
    if let Some(mut w) = report {
        w.flush().map_err(|e| io_err(None, e))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ValidateReport<'a> {
    ok: bool,
    symbols: usize,
    kazakh_symbols: usize,
    graphemes: BTreeMap<LanguageId, usize>,
    checks: &'a [turkic_translit::registry::InvariantCheck],
}

fn validate(source: &DataSource, json: bool) -> Result<(), CliError> {
    let registry = Registry::load(source).map_err(|e| CliError::Invalid(format!("invalid data: {e}")))?;
    let checks = registry.check_invariants();
    let ok = checks.iter().all(|c| c.passed);
    let report = ValidateReport {
        ok,
        symbols: registry.symbols().len(),
        kazakh_symbols: registry.symbols().iter().filter(|s| s.in_kazakh).count(),
        graphemes: EXPECTED_GRAPHEME_COUNTS
            .iter()
            .map(|(l, _)| (*l, registry.table(*l).len()))
            .collect(),
        checks: &checks,
    };
    let mut out = io::stdout().lock();
    let text = if json {
        serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
    } else {
        let mut s = format!("ipa {}\nkazakh {}\n", report.symbols, report.kazakh_symbols);
        for (l, _) in EXPECTED_GRAPHEME_COUNTS {
            let _ = writeln!(s, "{l} {}", report.graphemes[&l]);
        }
        let _ = writeln!(s, "fallbacks {}", registry.fallback_symbols().count());
        for c in &checks {
            let _ = writeln!(s, "{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail);
        }
        s
    };
    out.write_all(text.as_bytes()).map_err(|e| io_err(None, e))?;
    if ok {
        Ok(())
    } else {
        Err(CliError::Invalid("data failed validation".into()))
    }
}

fn overlap(registry: &Registry, json: bool, summary: bool, output: Option<&Path>) -> Result<(), CliError> {
    let matrix = OverlapMatrix::compute(registry);
    let text = if json {
        serde_json::to_string_pretty(&matrix).expect("matrix serializes") + "\n"
    } else if summary {
        matrix.summary(registry)
    } else {
        matrix.to_tsv()
    };
    let mut out = open_output(output)?;
    out.write_all(text.as_bytes()).map_err(|e| io_err(output, e))?;
    out.flush().map_err(|e| io_err(output, e))
}

fn make_backend(args: &SpeakArgs) -> Box<dyn Backend> {
    let url = args.backend_url.trim();
    if url == "mock" || url.starts_with("mock:") {
        Box::new(MockBackend)
    } else {
        Box::new(HttpBackend::new(url, Duration::from_secs(args.timeout.max(1))))
    }
}

fn wav_path(stem: &Path, index: usize) -> PathBuf {
    let mut name = stem
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_else(|| "out".into());
    name.push(format!("_{index}.wav"));
    stem.with_file_name(name)
}

fn speak(toolkit: &Toolkit, args: &SpeakArgs) -> Result<(), CliError> {
    let input = read_input(args.input.as_deref())?;
    let splitter = SentenceSplitter::new(toolkit.registry()).with_max_chars(args.max_len);

    // Each input line is its own sentence boundary.
    let mut requests = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let result = toolkit
            .transliterate(args.lang, line, args.policy)
            .map_err(|e| CliError::Strict(format!("line {}: {e}", i + 1)))?;
        match splitter.split(&result.output) {
            Ok(mut r) => requests.append(&mut r),
            Err(SplitError::EmptyInput) => {}
            Err(e) => return Err(CliError::Invalid(format!("line {}: {e}", i + 1))),
        }
    }
    if requests.is_empty() {
        return Err(CliError::Empty);
    }

    let backend = make_backend(args);
    backend.health().map_err(|e| CliError::Backend(e.to_string()))?;
    let audio =
        tts::synthesize(&requests, backend.as_ref(), args.parallelism).map_err(|e| CliError::Backend(e.to_string()))?;

    let mut out = io::stdout().lock();
    for (i, (req, a)) in requests.iter().zip(&audio).enumerate() {
        let path = wav_path(&args.output, i);
        tts::write_wav(a, &path).map_err(|e| io_err(Some(&path), e))?;
        writeln!(out, "{} → {}", req.text, path.display()).map_err(|e| io_err(None, e))?;
    }
    Ok(())
}
