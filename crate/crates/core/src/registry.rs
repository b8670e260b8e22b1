//! IPA inventory and per-language grapheme tables.
//!
//! The registry is built from three tab-separated files, embedded in the
//! binary and overridable from a directory:
//!
//! * `ipa_inventory.tsv`: `id`, `unicode_ipa`, `in_kazakh` (`yes`/`no`)
//! * `mappings.tsv`: `ipa_id`, `language`, `grapheme`
//! * `fallbacks.tsv`: `ipa_id`, `kazakh` (only for symbols without a Kazakh letter)
//!
//! Symbols are joined on their ASCII id; the Unicode rendering is for display.
//! Every invariant is checked at load time and a registry that exists is
//! known to be consistent.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use serde::Serialize;
use unicode_normalization::UnicodeNormalization;

use crate::lang::{LanguageId, SOURCE_LANGUAGE};

pub const INVENTORY_FILE: &str = "ipa_inventory.tsv";
pub const MAPPINGS_FILE: &str = "mappings.tsv";
pub const FALLBACKS_FILE: &str = "fallbacks.tsv";

const EMBEDDED_INVENTORY: &str = include_str!("../data/ipa_inventory.tsv");
const EMBEDDED_MAPPINGS: &str = include_str!("../data/mappings.tsv");
const EMBEDDED_FALLBACKS: &str = include_str!("../data/fallbacks.tsv");

/// Size of the IPA inventory.
pub const SYMBOL_COUNT: usize = 47;
/// Symbols that have a letter in the Kazakh alphabet.
pub const KAZAKH_SYMBOL_COUNT: usize = 42;

/// Grapheme count of every language column.
pub const EXPECTED_GRAPHEME_COUNTS: [(LanguageId, usize); 10] = [
    (LanguageId::Az, 32),
    (LanguageId::Ba, 42),
    (LanguageId::Kk, 42),
    (LanguageId::Ky, 36),
    (LanguageId::Sah, 40),
    (LanguageId::Tt, 39),
    (LanguageId::Tr, 29),
    (LanguageId::Tk, 30),
    (LanguageId::Ug, 32),
    (LanguageId::Uz, 30),
];

/// Index of a symbol in the registry inventory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SymbolId(pub(crate) u16);

impl SymbolId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IpaSymbol {
    /// Stable ASCII identifier, e.g. `tsh` or `theta`.
    pub id: String,
    /// Unicode IPA rendering, display only.
    pub ipa: String,
    pub in_kazakh: bool,
}

/// A language letter or digraph, lowercase NFC.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Grapheme(String);

impl Grapheme {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn char_len(&self) -> usize {
        self.0.chars().count()
    }
}

impl std::borrow::Borrow<str> for Grapheme {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// Grapheme to IPA table for one language.
#[derive(Clone, Debug)]
pub struct MappingTable {
    language: LanguageId,
    to_ipa: BTreeMap<Grapheme, SymbolId>,
    max_grapheme_chars: usize,
}

impl MappingTable {
    pub fn language(&self) -> LanguageId {
        self.language
    }

    pub fn len(&self) -> usize {
        self.to_ipa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.to_ipa.is_empty()
    }

    pub fn lookup(&self, grapheme: &str) -> Option<SymbolId> {
        self.to_ipa.get(grapheme).copied()
    }

    pub fn graphemes(&self) -> impl Iterator<Item = &Grapheme> + '_ {
        self.to_ipa.keys()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Grapheme, SymbolId)> + '_ {
        self.to_ipa.iter().map(|(g, s)| (g, *s))
    }

    /// Length in chars of the longest grapheme.
    pub fn max_grapheme_chars(&self) -> usize {
        self.max_grapheme_chars
    }
}

/// How a symbol is written in Kazakh.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rendering<'a> {
    pub text: &'a str,
    pub fallback: bool,
}

/// Where registry data is read from.
#[derive(Clone, Debug, Default)]
pub enum DataSource {
    #[default]
    Embedded,
    Dir(PathBuf),
}

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed data in {file}{}: {message}", line.map(|l| format!(" line {l}")).unwrap_or_default())]
    Malformed {
        file: String,
        line: Option<usize>,
        message: String,
    },
}

impl DataError {
    fn row(file: &str, line: usize, message: impl Into<String>) -> Self {
        DataError::Malformed {
            file: file.to_string(),
            line: Some(line),
            message: message.into(),
        }
    }
}

/// Outcome of one registry invariant.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct Registry {
    symbols: Vec<IpaSymbol>,
    by_id: HashMap<String, SymbolId>,
    tables: BTreeMap<LanguageId, MappingTable>,
    kk_render: HashMap<SymbolId, String>,
    fallback: HashMap<SymbolId, String>,
}

/// Iterates `(line_number, fields)` over the data lines of a TSV file.
pub(crate) fn tsv_rows(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.strip_suffix('\r').unwrap_or(line);
        let line = if i == 0 {
            line.trim_start_matches('\u{feff}')
        } else {
            line
        };
        if line.trim().is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line.split('\t').collect()))
        }
    })
}

fn expect_columns(file: &str, line: usize, fields: &[&str], n: usize) -> Result<(), DataError> {
    if fields.len() != n {
        return Err(DataError::row(
            file,
            line,
            format!("expected {n} tab-separated columns, found {}", fields.len()),
        ));
    }
    Ok(())
}

pub(crate) fn read_data_file(dir: &Path, name: &str) -> Result<String, DataError> {
    let path = dir.join(name);
    fs::read_to_string(&path).map_err(|source| DataError::Io { path, source })
}

impl Registry {
    /// The registry built from the embedded data, loaded once per process.
    pub fn embedded() -> &'static Registry {
        static EMBEDDED: OnceLock<Registry> = OnceLock::new();
        EMBEDDED.get_or_init(|| {
            Registry::from_tsv(EMBEDDED_INVENTORY, EMBEDDED_MAPPINGS, EMBEDDED_FALLBACKS)
                .expect("embedded registry data is valid")
        })
    }

    pub fn load(source: &DataSource) -> Result<Registry, DataError> {
        match source {
            DataSource::Embedded => Ok(Registry::embedded().clone()),
            DataSource::Dir(dir) => Registry::from_tsv(
                &read_data_file(dir, INVENTORY_FILE)?,
                &read_data_file(dir, MAPPINGS_FILE)?,
                &read_data_file(dir, FALLBACKS_FILE)?,
            ),
        }
    }

    /// The embedded file contents, in `(file name, contents)` pairs.
    pub fn embedded_files() -> [(&'static str, &'static str); 3] {
        [
            (INVENTORY_FILE, EMBEDDED_INVENTORY),
            (MAPPINGS_FILE, EMBEDDED_MAPPINGS),
            (FALLBACKS_FILE, EMBEDDED_FALLBACKS),
        ]
    }

    pub fn from_tsv(inventory: &str, mappings: &str, fallbacks: &str) -> Result<Registry, DataError> {
        let mut symbols = Vec::new();
        let mut by_id = HashMap::new();
        for (line, fields) in tsv_rows(inventory) {
            expect_columns(INVENTORY_FILE, line, &fields, 3)?;
            let id = fields[0].trim();
            let ipa = fields[1].trim();
            if id.is_empty() || !id.is_ascii() {
                return Err(DataError::row(
                    INVENTORY_FILE,
                    line,
                    format!("invalid symbol id `{id}`"),
                ));
            }
            if ipa.is_empty() {
                return Err(DataError::row(
                    INVENTORY_FILE,
                    line,
                    format!("empty IPA rendering for `{id}`"),
                ));
            }
            let in_kazakh = match fields[2].trim() {
                "yes" | "true" | "1" => true,
                "no" | "false" | "0" => false,
                other => {
                    return Err(DataError::row(
                        INVENTORY_FILE,
                        line,
                        format!("in_kazakh must be yes/no, got `{other}`"),
                    ))
                }
            };
            let sid = SymbolId(symbols.len() as u16);
            if by_id.insert(id.to_string(), sid).is_some() {
                return Err(DataError::row(
                    INVENTORY_FILE,
                    line,
                    format!("duplicate symbol id `{id}`"),
                ));
            }
            symbols.push(IpaSymbol {
                id: id.to_string(),
                ipa: ipa.to_string(),
                in_kazakh,
            });
        }

        let mut tables: BTreeMap<LanguageId, MappingTable> = LanguageId::ALL
            .into_iter()
            .map(|language| {
                (
                    language,
                    MappingTable {
                        language,
                        to_ipa: BTreeMap::new(),
                        max_grapheme_chars: 0,
                    },
                )
            })
            .collect();
        for (line, fields) in tsv_rows(mappings) {
            expect_columns(MAPPINGS_FILE, line, &fields, 3)?;
            let sid = *by_id
                .get(fields[0].trim())
                .ok_or_else(|| DataError::row(MAPPINGS_FILE, line, format!("unknown IPA id `{}`", fields[0])))?;
            let language: LanguageId = fields[1]
                .parse()
                .map_err(|e| DataError::row(MAPPINGS_FILE, line, format!("{e}")))?;
            let text = fields[2].trim();
            let chars = text.chars().count();
            if !(1..=2).contains(&chars) {
                return Err(DataError::row(
                    MAPPINGS_FILE,
                    line,
                    format!("grapheme `{text}` must be 1-2 code points"),
                ));
            }
            if text.nfc().collect::<String>() != text {
                return Err(DataError::row(
                    MAPPINGS_FILE,
                    line,
                    format!("grapheme `{text}` is not NFC"),
                ));
            }
            if text.to_lowercase() != text {
                return Err(DataError::row(
                    MAPPINGS_FILE,
                    line,
                    format!("grapheme `{text}` is not lowercase"),
                ));
            }
            let table = tables.get_mut(&language).expect("all languages present");
            if let Some(prev) = table.to_ipa.insert(Grapheme(text.to_string()), sid) {
                return Err(DataError::row(
                    MAPPINGS_FILE,
                    line,
                    format!(
                        "duplicate grapheme `{text}` for {language} (already mapped to `{}`)",
                        symbols[prev.index()].id
                    ),
                ));
            }
            table.max_grapheme_chars = table.max_grapheme_chars.max(chars);
        }

        let mut fallback = HashMap::new();
        for (line, fields) in tsv_rows(fallbacks) {
            expect_columns(FALLBACKS_FILE, line, &fields, 2)?;
            let sid = *by_id
                .get(fields[0].trim())
                .ok_or_else(|| DataError::row(FALLBACKS_FILE, line, format!("unknown IPA id `{}`", fields[0])))?;
            let text = fields[1].trim();
            if !(1..=2).contains(&text.chars().count()) {
                return Err(DataError::row(
                    FALLBACKS_FILE,
                    line,
                    format!("fallback `{text}` must be 1-2 code points"),
                ));
            }
            if symbols[sid.index()].in_kazakh {
                return Err(DataError::row(
                    FALLBACKS_FILE,
                    line,
                    format!("`{}` has a Kazakh letter and takes no fallback", fields[0].trim()),
                ));
            }
            if fallback.insert(sid, text.to_string()).is_some() {
                return Err(DataError::row(
                    FALLBACKS_FILE,
                    line,
                    format!("duplicate fallback for `{}`", fields[0].trim()),
                ));
            }
        }

        let kk_render = tables[&SOURCE_LANGUAGE]
            .entries()
            .map(|(g, s)| (s, g.as_str().to_string()))
            .collect();

        let registry = Registry {
            symbols,
            by_id,
            tables,
            kk_render,
            fallback,
        };
        if let Some(failed) = registry.check_invariants().into_iter().find(|c| !c.passed) {
            return Err(DataError::Malformed {
                file: "registry".to_string(),
                line: None,
                message: format!("{}: {}", failed.name, failed.detail),
            });
        }
        Ok(registry)
    }

    /// Evaluates every registry invariant against the loaded tables.
    pub fn check_invariants(&self) -> Vec<InvariantCheck> {
        let mut checks = Vec::new();
        let mut check = |name: &str, passed: bool, detail: String| {
            checks.push(InvariantCheck {
                name: name.to_string(),
                passed,
                detail,
            })
        };

        check(
            "symbol-count",
            self.symbols.len() == SYMBOL_COUNT,
            format!("{} symbols, expected {SYMBOL_COUNT}", self.symbols.len()),
        );
        let in_kk = self.symbols.iter().filter(|s| s.in_kazakh).count();
        check(
            "kazakh-symbol-count",
            in_kk == KAZAKH_SYMBOL_COUNT,
            format!("{in_kk} symbols with a Kazakh letter, expected {KAZAKH_SYMBOL_COUNT}"),
        );

        for (lang, expected) in EXPECTED_GRAPHEME_COUNTS {
            let n = self.tables[&lang].len();
            check(
                &format!("grapheme-count-{lang}"),
                n == expected,
                format!("{lang} has {n} graphemes, expected {expected}"),
            );
        }

        let kk = &self.tables[&SOURCE_LANGUAGE];
        let bad_kk: Vec<String> = kk
            .entries()
            .filter(|(g, s)| !self.symbols[s.index()].in_kazakh || g.char_len() != 1)
            .map(|(g, s)| format!("{}->{}", g.as_str(), self.symbols[s.index()].id))
            .collect();
        let kk_images: BTreeSet<SymbolId> = kk.entries().map(|(_, s)| s).collect();
        let missing_kk: Vec<&str> = self
            .symbols
            .iter()
            .enumerate()
            .filter(|(i, s)| s.in_kazakh && !kk_images.contains(&SymbolId(*i as u16)))
            .map(|(_, s)| s.id.as_str())
            .collect();
        check(
            "kazakh-bijection",
            bad_kk.is_empty() && missing_kk.is_empty() && kk_images.len() == kk.len(),
            if bad_kk.is_empty() && missing_kk.is_empty() {
                format!("{} Kazakh letters map one-to-one onto Kazakh symbols", kk.len())
            } else {
                format!("invalid Kazakh rows {bad_kk:?}; symbols without a Kazakh letter {missing_kk:?}")
            },
        );

        let letters = self.kazakh_letters();
        let missing_fallback: Vec<&str> = self
            .symbols
            .iter()
            .enumerate()
            .filter(|(i, s)| !s.in_kazakh && !self.fallback.contains_key(&SymbolId(*i as u16)))
            .map(|(_, s)| s.id.as_str())
            .collect();
        let foreign_fallback: Vec<&str> = self
            .fallback
            .values()
            .filter(|t| t.chars().any(|c| !letters.contains(&c)))
            .map(String::as_str)
            .collect();
        check(
            "fallback-coverage",
            missing_fallback.is_empty() && foreign_fallback.is_empty(),
            if missing_fallback.is_empty() && foreign_fallback.is_empty() {
                format!("{} symbols rendered by fallback", self.fallback.len())
            } else {
                format!("no fallback for {missing_fallback:?}; non-Kazakh fallbacks {foreign_fallback:?}")
            },
        );

        checks
    }

    pub fn symbols(&self) -> &[IpaSymbol] {
        &self.symbols
    }

    pub fn symbol(&self, id: SymbolId) -> &IpaSymbol {
        &self.symbols[id.index()]
    }

    pub fn symbol_ids(&self) -> impl Iterator<Item = SymbolId> {
        (0..self.symbols.len() as u16).map(SymbolId)
    }

    /// Finds a symbol by its ASCII id.
    pub fn symbol_by_id(&self, id: &str) -> Option<SymbolId> {
        self.by_id.get(id).copied()
    }

    pub fn table(&self, lang: LanguageId) -> &MappingTable {
        &self.tables[&lang]
    }

    pub fn graphemes(&self, lang: LanguageId) -> BTreeSet<&str> {
        self.table(lang).graphemes().map(Grapheme::as_str).collect()
    }

    pub fn lookup_ipa(&self, lang: LanguageId, grapheme: &str) -> Option<SymbolId> {
        self.table(lang).lookup(grapheme)
    }

    /// Kazakh spelling of a symbol, through the fallback map when the symbol
    /// has no Kazakh letter.
    pub fn render(&self, id: SymbolId) -> Rendering<'_> {
        match self.kk_render.get(&id) {
            Some(letter) => Rendering {
                text: letter,
                fallback: false,
            },
            None => Rendering {
                text: &self.fallback[&id],
                fallback: true,
            },
        }
    }

    /// The 42 letters of the Kazakh alphabet.
    pub fn kazakh_letters(&self) -> BTreeSet<char> {
        self.kk_render.values().flat_map(|s| s.chars()).collect()
    }

    pub fn fallback_symbols(&self) -> impl Iterator<Item = (SymbolId, &str)> + '_ {
        let mut v: Vec<_> = self.fallback.iter().map(|(s, t)| (*s, t.as_str())).collect();
        v.sort();
        v.into_iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reg() -> &'static Registry {
        Registry::embedded()
    }

    fn sym(id: &str) -> SymbolId {
        reg().symbol_by_id(id).unwrap()
    }

    #[test]
    fn embedded_registry_sizes() {
        assert_eq!(reg().symbols().len(), 47);
        assert_eq!(reg().table(LanguageId::Kk).len(), 42);
        for (lang, n) in EXPECTED_GRAPHEME_COUNTS {
            assert_eq!(reg().graphemes(lang).len(), n, "{lang}");
        }
        assert!(reg().check_invariants().iter().all(|c| c.passed));
    }

    #[test]
    fn graphemes_per_language() {
        let tr = reg().graphemes(LanguageId::Tr);
        assert_eq!(tr.len(), 29);
        for g in ["ç", "ş", "ı"] {
            assert!(tr.contains(g), "{g}");
        }
        let ug = reg().graphemes(LanguageId::Ug);
        for g in ["gh", "ng", "ch", "sh", "zh"] {
            assert!(ug.contains(g), "{g}");
        }
        let sah = reg().graphemes(LanguageId::Sah);
        assert!(sah.contains("дь") && sah.contains("нь"));
    }

    #[test]
    fn lookups() {
        assert_eq!(reg().lookup_ipa(LanguageId::Az, "q"), Some(sym("g")));
        assert_eq!(reg().lookup_ipa(LanguageId::Tk, "s"), Some(sym("theta")));
        assert_eq!(reg().lookup_ipa(LanguageId::Tr, "x"), None);
        assert_eq!(reg().lookup_ipa(LanguageId::Kk, "у"), Some(sym("uw")));
        assert_eq!(reg().lookup_ipa(LanguageId::Kk, "ұ"), Some(sym("u_near")));
        assert_eq!(reg().symbol(sym("tsh")).ipa, "t\u{361}\u{283}");
    }

    #[test]
    fn kazakh_round_trip_through_ipa() {
        let r = reg();
        for g in r.graphemes(LanguageId::Kk) {
            let s = r.lookup_ipa(LanguageId::Kk, g).unwrap();
            assert_eq!(
                r.render(s),
                Rendering {
                    text: g,
                    fallback: false
                }
            );
        }
        assert_eq!(r.kazakh_letters().len(), 42);
    }

    #[test]
    fn five_fallbacks() {
        let r = reg();
        let missing: Vec<&str> = r
            .symbols()
            .iter()
            .filter(|s| !s.in_kazakh)
            .map(|s| s.id.as_str())
            .collect();
        assert_eq!(missing, ["dzh", "gj", "theta", "edh", "nj"]);
        let rendered: Vec<&str> = missing.iter().map(|id| r.render(sym(id)).text).collect();
        assert_eq!(rendered, ["ж", "г", "с", "з", "нь"]);
    }

    fn embedded(name: &str) -> String {
        Registry::embedded_files()
            .iter()
            .find(|(n, _)| *n == name)
            .unwrap()
            .1
            .to_string()
    }

    fn load_with_mappings(mappings: &str) -> Result<Registry, DataError> {
        Registry::from_tsv(&embedded(INVENTORY_FILE), mappings, &embedded(FALLBACKS_FILE))
    }

    #[test]
    fn deleted_kazakh_row_is_malformed() {
        let mappings: String = embedded(MAPPINGS_FILE)
            .lines()
            .filter(|l| *l != "q\tkk\tқ")
            .map(|l| format!("{l}\n"))
            .collect();
        let err = load_with_mappings(&mappings).unwrap_err();
        assert!(matches!(err, DataError::Malformed { .. }));
        assert!(err.to_string().contains("kk has 41"), "{err}");
    }

    #[test]
    fn unknown_ipa_id_and_duplicates_are_malformed() {
        let unknown = format!("{}bogus\ttr\tw\n", embedded(MAPPINGS_FILE));
        let err = load_with_mappings(&unknown).unwrap_err();
        assert!(err.to_string().contains("unknown IPA id `bogus`"), "{err}");

        let dup = format!("{}x\ttr\tç\n", embedded(MAPPINGS_FILE));
        let err = load_with_mappings(&dup).unwrap_err();
        assert!(err.to_string().contains("duplicate grapheme `ç`"), "{err}");
        assert!(matches!(err, DataError::Malformed { line: Some(_), .. }));
    }

    #[test]
    fn missing_fallback_is_malformed() {
        let fallbacks: String = embedded(FALLBACKS_FILE)
            .lines()
            .filter(|l| !l.starts_with("nj"))
            .map(|l| format!("{l}\n"))
            .collect();
        let err = Registry::from_tsv(&embedded(INVENTORY_FILE), &embedded(MAPPINGS_FILE), &fallbacks).unwrap_err();
        assert!(err.to_string().contains("fallback-coverage"), "{err}");
    }

    #[test]
    fn loads_from_directory() {
        let dir = tempfile::tempdir().unwrap();
        for (name, body) in Registry::embedded_files() {
            fs::write(dir.path().join(name), body.replace('\n', "\r\n")).unwrap();
        }
        let r = Registry::load(&DataSource::Dir(dir.path().to_path_buf())).unwrap();
        assert_eq!(r.table(LanguageId::Uz).len(), 30);

        fs::remove_file(dir.path().join(MAPPINGS_FILE)).unwrap();
        let err = Registry::load(&DataSource::Dir(dir.path().to_path_buf())).unwrap_err();
        assert!(matches!(err, DataError::Io { .. }));
    }
}
