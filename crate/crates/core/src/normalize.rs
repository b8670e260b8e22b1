//! Per-language text canonicalization ahead of tokenization.
//!
//! Input is brought to NFC, lowercased (with the dotted/dotless I rule for
//! Turkish and Azerbaijani), stripped of Latin/Cyrillic lookalikes foreign to
//! the language's script, and has its apostrophe variants unified for Uzbek
//! and Uyghur. Every change is reported against the code point it replaced.

use std::collections::HashMap;
use std::path::Path;
use std::sync::OnceLock;

use serde::Serialize;
use unicode_normalization::char::canonical_combining_class;
use unicode_normalization::UnicodeNormalization;

use crate::lang::{LanguageId, Script};
use crate::registry::{read_data_file, tsv_rows, DataError, DataSource};

pub const CONFUSABLES_FILE: &str = "confusables.tsv";
const EMBEDDED_CONFUSABLES: &str = include_str!("../data/confusables.tsv");

/// Apostrophe-like code points treated as one character in Uzbek and Uyghur.
pub const APOSTROPHES: [char; 5] = ['\u{27}', '\u{2018}', '\u{2019}', '\u{2BC}', '\u{2BB}'];
/// Uzbek turned comma, part of the `oʻ` and `gʻ` letters.
pub const UZ_TURNED_COMMA: char = '\u{2BB}';
/// Uzbek glottal stop letter.
pub const UZ_GLOTTAL: char = '\u{2BC}';
/// Uyghur syllable separator.
pub const UG_SEPARATOR: char = '\'';

/// Bidirectional Latin/Cyrillic lookalike table.
#[derive(Clone, Debug)]
pub struct Confusables {
    to_cyrillic: HashMap<char, char>,
    to_latin: HashMap<char, char>,
}

fn parse_code_point(field: &str) -> Option<char> {
    let field = field.trim();
    if let Some(hex) = field.strip_prefix("U+").or_else(|| field.strip_prefix("u+")) {
        return u32::from_str_radix(hex, 16).ok().and_then(char::from_u32);
    }
    let mut chars = field.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Some(c),
        _ => None,
    }
}

impl Confusables {
    pub fn embedded() -> &'static Confusables {
        static EMBEDDED: OnceLock<Confusables> = OnceLock::new();
        EMBEDDED.get_or_init(|| Confusables::from_tsv(EMBEDDED_CONFUSABLES).expect("embedded confusables are valid"))
    }

    /// Reads `confusables.tsv` from a data directory, or the embedded table
    /// when the directory does not provide one.
    pub fn load(source: &DataSource) -> Result<Confusables, DataError> {
        match source {
            DataSource::Dir(dir) if dir.join(CONFUSABLES_FILE).exists() => {
                Confusables::from_tsv(&read_data_file(Path::new(dir), CONFUSABLES_FILE)?)
            }
            _ => Ok(Confusables::embedded().clone()),
        }
    }

    /// Rows are `source`, `target`, `scripts` where scripts is `Latn-Cyrl`
    /// (source Latin) or `Cyrl-Latn` (source Cyrillic). Code points are
    /// written `U+XXXX` or as the literal character.
    pub fn from_tsv(text: &str) -> Result<Confusables, DataError> {
        let bad = |line: usize, message: String| DataError::Malformed {
            file: CONFUSABLES_FILE.to_string(),
            line: Some(line),
            message,
        };
        let mut to_cyrillic = HashMap::new();
        let mut to_latin = HashMap::new();
        for (line, fields) in tsv_rows(text) {
            if fields.len() != 3 {
                return Err(bad(line, format!("expected 3 columns, found {}", fields.len())));
            }
            let a = parse_code_point(fields[0]).ok_or_else(|| bad(line, format!("bad code point `{}`", fields[0])))?;
            let b = parse_code_point(fields[1]).ok_or_else(|| bad(line, format!("bad code point `{}`", fields[1])))?;
            let (latin, cyrillic) = match fields[2].trim() {
                "Latn-Cyrl" => (a, b),
                "Cyrl-Latn" => (b, a),
                other => return Err(bad(line, format!("unknown script pair `{other}`"))),
            };
            if to_cyrillic.insert(latin, cyrillic).is_some() || to_latin.insert(cyrillic, latin).is_some() {
                return Err(bad(line, format!("duplicate pair for `{latin}`/`{cyrillic}`")));
            }
        }
        Ok(Confusables { to_cyrillic, to_latin })
    }

    /// The lookalike of `c` in `script`, if `c` is a foreign-script lookalike.
    pub fn fold(&self, c: char, script: Script) -> Option<char> {
        match script {
            Script::Cyrillic => self.to_cyrillic.get(&c).copied(),
            Script::Latin => self.to_latin.get(&c).copied(),
        }
    }

    /// Characters that the table folds away when targeting `script`.
    pub fn foreign_to(&self, script: Script) -> impl Iterator<Item = char> + '_ {
        match script {
            Script::Cyrillic => self.to_cyrillic.keys(),
            Script::Latin => self.to_latin.keys(),
        }
        .copied()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReplacementReason {
    Case,
    Homoglyph,
    Apostrophe,
    Nfc,
}

/// One input code point and what the output holds in its place.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Replacement {
    /// Char index into the raw input.
    pub position: usize,
    pub original: char,
    /// May be empty when NFC composed the code point into its predecessor.
    pub replacement: String,
    pub reason: ReplacementReason,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalizationReport {
    pub output: String,
    pub replacements: Vec<Replacement>,
}

impl NormalizationReport {
    /// Rebuilds the output by substituting the reported replacements into `input`.
    pub fn apply(&self, input: &str) -> String {
        let by_pos: HashMap<usize, &Replacement> = self.replacements.iter().map(|r| (r.position, r)).collect();
        input
            .chars()
            .enumerate()
            .map(|(i, c)| match by_pos.get(&i) {
                Some(r) => r.replacement.clone(),
                None => c.to_string(),
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Normalizer<'a> {
    confusables: &'a Confusables,
    fold_homoglyphs: bool,
}

impl Default for Normalizer<'static> {
    fn default() -> Self {
        Normalizer::new(Confusables::embedded())
    }
}

/// Normalizes with the embedded confusable table and homoglyph folding on.
pub fn normalize(lang: LanguageId, raw: &str) -> NormalizationReport {
    Normalizer::default().normalize(lang, raw)
}

impl<'a> Normalizer<'a> {
    pub fn new(confusables: &'a Confusables) -> Self {
        Normalizer {
            confusables,
            fold_homoglyphs: true,
        }
    }

    pub fn with_homoglyph_folding(mut self, on: bool) -> Self {
        self.fold_homoglyphs = on;
        self
    }

    pub fn normalize(&self, lang: LanguageId, raw: &str) -> NormalizationReport {
        let chars: Vec<char> = raw.chars().collect();
        let mut output = String::with_capacity(raw.len());
        let mut replacements = Vec::new();

        for range in nfc_chunks(&chars) {
            let chunk = &chars[range.clone()];
            let original: String = chunk.iter().collect();
            let composed: String = original.nfc().collect();
            let nfc_changed = composed != original;

            let mut folded = Vec::with_capacity(chunk.len());
            let mut prev = output.chars().last();
            for c in composed.chars() {
                let (text, reason) = self.fold_char(lang, c, prev);
                prev = text.chars().last().or(prev);
                folded.push((c, text, reason));
            }
            let joined: String = folded.iter().map(|(_, t, _)| t.as_str()).collect();
            let out: String = joined.nfc().collect();

            if !nfc_changed && out == joined {
                for (offset, (c, text, reason)) in folded.into_iter().enumerate() {
                    if let Some(reason) = reason {
                        replacements.push(Replacement {
                            position: range.start + offset,
                            original: c,
                            replacement: text,
                            reason,
                        });
                    }
                }
            } else if out != original {
                for (offset, &c) in chunk.iter().enumerate() {
                    replacements.push(Replacement {
                        position: range.start + offset,
                        original: c,
                        replacement: if offset == 0 { out.clone() } else { String::new() },
                        reason: ReplacementReason::Nfc,
                    });
                }
            }
            output.push_str(&out);
        }

        NormalizationReport { output, replacements }
    }

    fn fold_char(&self, lang: LanguageId, c: char, prev: Option<char>) -> (String, Option<ReplacementReason>) {
        let mut reason = None;
        let mut ch = c;

        if APOSTROPHES.contains(&ch) {
            let unified = match lang {
                LanguageId::Uz if matches!(prev, Some('o') | Some('g')) => Some(UZ_TURNED_COMMA),
                LanguageId::Uz => Some(UZ_GLOTTAL),
                LanguageId::Ug => Some(UG_SEPARATOR),
                _ => None,
            };
            if let Some(u) = unified.filter(|u| *u != ch) {
                ch = u;
                reason = Some(ReplacementReason::Apostrophe);
            }
        } else if self.fold_homoglyphs {
            if let Some(f) = self.confusables.fold(ch, lang.script()) {
                ch = f;
                reason = Some(ReplacementReason::Homoglyph);
            }
        }

        let lowered = lowercase(lang, ch);
        if reason.is_none() && lowered.chars().ne(std::iter::once(ch)) {
            reason = Some(ReplacementReason::Case);
        }
        if !self.fold_homoglyphs {
            return (lowered, reason);
        }
        // Lowercasing can surface a lookalike, e.g. `İ` becoming Latin `i`.
        let refolded: String = lowered
            .chars()
            .map(|l| match self.confusables.fold(l, lang.script()) {
                Some(f) => {
                    reason = Some(ReplacementReason::Homoglyph);
                    f
                }
                None => l,
            })
            .collect();
        (refolded, reason)
    }
}

fn lowercase(lang: LanguageId, c: char) -> String {
    match c {
        'I' if lang.has_dotless_i_casing() => "ı".to_string(),
        // Default lowercasing keeps a combining dot above; drop it everywhere.
        'İ' => "i".to_string(),
        _ => c.to_lowercase().collect(),
    }
}

/// Splits text into spans that NFC treats independently: a starter with its
/// combining marks, merged with neighbours whenever composition crosses the
/// boundary.
fn nfc_chunks(chars: &[char]) -> Vec<std::ops::Range<usize>> {
    let mut base: Vec<std::ops::Range<usize>> = Vec::new();
    for (i, &c) in chars.iter().enumerate() {
        match base.last_mut() {
            Some(last) if canonical_combining_class(c) != 0 => last.end = i + 1,
            _ => base.push(i..i + 1),
        }
    }

    let nfc = |r: &std::ops::Range<usize>| chars[r.clone()].iter().copied().nfc().collect::<String>();
    let mut merged: Vec<std::ops::Range<usize>> = Vec::with_capacity(base.len());
    for next in base {
        if let Some(cur) = merged.last_mut() {
            let joined = cur.start..next.end;
            if nfc(&joined) != nfc(cur) + &nfc(&next) {
                *cur = joined;
                continue;
            }
        }
        merged.push(next);
    }
    merged
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn folds_latin_a_in_kazakh_word() {
        let r = normalize(LanguageId::Kk, "с\u{61}лем");
        assert_eq!(r.output, "салем");
        assert_eq!(r.output.chars().nth(1), Some('\u{430}'));
        assert_eq!(
            r.replacements,
            vec![Replacement {
                position: 1,
                original: 'a',
                replacement: "\u{430}".into(),
                reason: ReplacementReason::Homoglyph
            }]
        );
    }

    #[test]
    fn turkish_dotted_and_dotless_i() {
        assert_eq!(normalize(LanguageId::Tr, "İstanbul").output, "istanbul");
        assert_eq!(normalize(LanguageId::Tr, "ILIK").output, "ılık");
        assert_eq!(normalize(LanguageId::Az, "QIZ").output, "qız");
        assert_eq!(normalize(LanguageId::Uz, "ILM").output, "ilm");
    }

    #[test]
    fn uzbek_apostrophes() {
        let r = normalize(LanguageId::Uz, "o'zbek");
        assert_eq!(r.output, "o\u{2BB}zbek");
        assert_eq!(r.replacements.len(), 1);
        assert_eq!(r.replacements[0].reason, ReplacementReason::Apostrophe);

        assert_eq!(normalize(LanguageId::Uz, "G\u{2019}ALLA").output, "g\u{2BB}alla");
        assert_eq!(normalize(LanguageId::Uz, "ma'no").output, "ma\u{2BC}no");
        assert_eq!(normalize(LanguageId::Uz, "ma\u{2BB}no").output, "ma\u{2BC}no");
        assert_eq!(normalize(LanguageId::Ug, "n\u{2019}g").output, "n'g");
        // Apostrophes are left alone elsewhere.
        assert_eq!(normalize(LanguageId::Tr, "o'zbek").output, "o'zbek");
    }

    #[test]
    fn nfc_composition_is_reported() {
        let r = normalize(LanguageId::Tr, "c\u{327}ay");
        assert_eq!(r.output, "çay");
        assert_eq!(r.replacements.len(), 2);
        assert!(r.replacements.iter().all(|x| x.reason == ReplacementReason::Nfc));
        assert_eq!(r.apply("c\u{327}ay"), "çay");
    }

    #[test]
    fn homoglyph_folding_can_be_disabled() {
        let n = Normalizer::default().with_homoglyph_folding(false);
        assert_eq!(n.normalize(LanguageId::Kk, "сaлем").output, "сaлем");
    }

    #[test]
    fn punctuation_digits_and_spaces_pass_through() {
        let s = "сәлем,  2024 - жыл? иә!\t;";
        assert_eq!(normalize(LanguageId::Kk, s).output, s);
    }

    #[test]
    fn confusable_rows_parse_both_directions() {
        let c = Confusables::from_tsv("U+0061\tU+0430\tLatn-Cyrl\nр\tp\tCyrl-Latn\n").unwrap();
        assert_eq!(c.fold('a', Script::Cyrillic), Some('а'));
        assert_eq!(c.fold('р', Script::Latin), Some('p'));
        assert!(Confusables::from_tsv("a\tb\n").is_err());
        assert!(Confusables::from_tsv("a\tа\tLatn-Grek\n").is_err());
    }

    fn text_strategy() -> impl Strategy<Value = String> {
        let pool: Vec<char> = "aAeEoOpPcCxXyYiIkKhHİıgGsSnN аАеЕоОрРсСхХуУіІкКһҺңәөүұ'\u{2018}\u{2019}\u{2BC}\u{2BB}.,-?!;1 \t\u{301}\u{308}\u{327}\u{307}"
            .chars()
            .collect();
        proptest::collection::vec(proptest::sample::select(pool), 0..40).prop_map(|v| v.into_iter().collect())
    }

    proptest! {
        #[test]
        fn idempotent_and_replayable(s in text_strategy(), li in 0usize..10) {
            let lang = LanguageId::ALL[li];
            let first = normalize(lang, &s);
            let second = normalize(lang, &first.output);
            prop_assert_eq!(&second.output, &first.output);
            prop_assert_eq!(first.apply(&s), first.output.clone());
            prop_assert_eq!(first.output.nfc().collect::<String>(), first.output.clone());
        }

        #[test]
        fn script_purity(s in text_strategy(), li in 0usize..10) {
            let lang = LanguageId::ALL[li];
            let out = normalize(lang, &s).output;
            let foreign: Vec<char> = Confusables::embedded().foreign_to(lang.script()).collect();
            prop_assert!(out.chars().all(|c| !foreign.contains(&c)), "{:?}", out);
        }
    }
}
