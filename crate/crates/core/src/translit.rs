//! Two-stage conversion: graphemes to IPA, then IPA to Kazakh letters.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use unicode_normalization::char::canonical_combining_class;

use crate::lang::LanguageId;
use crate::normalize::{Confusables, NormalizationReport, Normalizer};
use crate::registry::{DataError, DataSource, Registry, SymbolId};
use crate::tokenize::{tokenize_with, TokenKind, TokenStream};

/// What to do with characters the Kazakh alphabet cannot express.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnknownPolicy {
    /// Fail on the first one.
    #[default]
    Strict,
    /// Remove it and record it.
    Drop,
    /// Replace it with a space and record it.
    KeepSpace,
}

impl FromStr for UnknownPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "strict" => Ok(UnknownPolicy::Strict),
            "drop" => Ok(UnknownPolicy::Drop),
            "keep-space" | "keep_space" => Ok(UnknownPolicy::KeepSpace),
            other => Err(format!(
                "unknown policy `{other}` (expected strict, drop or keep-space)"
            )),
        }
    }
}

impl fmt::Display for UnknownPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnknownPolicy::Strict => "strict",
            UnknownPolicy::Drop => "drop",
            UnknownPolicy::KeepSpace => "keep-space",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum IpaItem {
    Symbol(SymbolId),
    Punct(char),
    /// A whitespace run, as written.
    Space(String),
    Unknown(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IpaTranscription {
    pub language: LanguageId,
    pub items: Vec<IpaItem>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DropReason {
    UnknownChar,
    DisallowedPunct,
}

impl fmt::Display for DropReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DropReason::UnknownChar => "unknown_char",
            DropReason::DisallowedPunct => "disallowed_punct",
        })
    }
}

/// A symbol written through the fallback map. `position` indexes the IPA items.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FallbackUse {
    pub position: usize,
    pub symbol: SymbolId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dropped {
    /// Index into the IPA items.
    pub position: usize,
    pub text: String,
    pub reason: DropReason,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransliterationResult {
    pub output: String,
    pub used_fallbacks: Vec<FallbackUse>,
    pub dropped: Vec<Dropped>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TranslitError {
    #[error("cannot transliterate `{text}` at position {position} ({reason})")]
    UnknownCharacter {
        position: usize,
        text: String,
        reason: DropReason,
    },
}

fn classify(text: &str) -> DropReason {
    let c = text.chars().next().unwrap_or(' ');
    if c.is_alphanumeric() || canonical_combining_class(c) != 0 {
        DropReason::UnknownChar
    } else {
        DropReason::DisallowedPunct
    }
}

/// Replaces graphemes by their IPA symbols. Separators vanish; everything
/// else is carried through.
pub fn to_ipa(stream: &TokenStream<'_>) -> IpaTranscription {
    let items = stream
        .tokens
        .iter()
        .filter_map(|t| match t.kind {
            TokenKind::Grapheme => Some(IpaItem::Symbol(t.ipa.expect("grapheme tokens carry a symbol"))),
            TokenKind::Punct => t.text.chars().next().map(IpaItem::Punct),
            TokenKind::Space => Some(IpaItem::Space(t.text.to_string())),
            TokenKind::Unknown => Some(IpaItem::Unknown(t.text.to_string())),
            TokenKind::Separator => None,
        })
        .collect();
    IpaTranscription {
        language: stream.language,
        items,
    }
}

/// Renders an IPA transcription in Kazakh letters with the embedded registry.
pub fn ipa_to_kazakh(ipa: &IpaTranscription, policy: UnknownPolicy) -> Result<TransliterationResult, TranslitError> {
    ipa_to_kazakh_with(Registry::embedded(), ipa, policy)
}

pub fn ipa_to_kazakh_with(
    registry: &Registry,
    ipa: &IpaTranscription,
    policy: UnknownPolicy,
) -> Result<TransliterationResult, TranslitError> {
    let mut output = String::new();
    let mut used_fallbacks = Vec::new();
    let mut dropped = Vec::new();

    for (position, item) in ipa.items.iter().enumerate() {
        match item {
            IpaItem::Symbol(s) => {
                let r = registry.render(*s);
                if r.fallback {
                    used_fallbacks.push(FallbackUse { position, symbol: *s });
                }
                output.push_str(r.text);
            }
            IpaItem::Punct(c) => output.push(*c),
            // Every whitespace char becomes one plain space.
            IpaItem::Space(run) => output.extend(run.chars().map(|_| ' ')),
            IpaItem::Unknown(text) => {
                let reason = classify(text);
                match policy {
                    UnknownPolicy::Strict => {
                        return Err(TranslitError::UnknownCharacter {
                            position,
                            text: text.clone(),
                            reason,
                        })
                    }
                    UnknownPolicy::Drop => {}
                    UnknownPolicy::KeepSpace => output.push(' '),
                }
                dropped.push(Dropped {
                    position,
                    text: text.clone(),
                    reason,
                });
            }
        }
    }

    Ok(TransliterationResult {
        output,
        used_fallbacks,
        dropped,
    })
}

/// Space-separated IPA rendering. Word breaks show as `|`; unknown
/// characters follow `policy`, with `keep-space` also giving `|`.
pub fn ipa_string(registry: &Registry, ipa: &IpaTranscription, policy: UnknownPolicy) -> Result<String, TranslitError> {
    let mut parts: Vec<String> = Vec::with_capacity(ipa.items.len());
    for (position, item) in ipa.items.iter().enumerate() {
        match item {
            IpaItem::Symbol(s) => parts.push(registry.symbol(*s).ipa.clone()),
            IpaItem::Punct(c) => parts.push(c.to_string()),
            IpaItem::Space(_) => parts.push("|".to_string()),
            IpaItem::Unknown(text) => match policy {
                UnknownPolicy::Strict => {
                    return Err(TranslitError::UnknownCharacter {
                        position,
                        text: text.clone(),
                        reason: classify(text),
                    })
                }
                UnknownPolicy::Drop => {}
                UnknownPolicy::KeepSpace => parts.push("|".to_string()),
            },
        }
    }
    Ok(parts.join(" "))
}

/// Full pipeline with the embedded data and homoglyph folding on.
pub fn transliterate(
    lang: LanguageId,
    raw: &str,
    policy: UnknownPolicy,
) -> Result<TransliterationResult, TranslitError> {
    let registry = Registry::embedded();
    let normalized = Normalizer::new(Confusables::embedded()).normalize(lang, raw);
    let tokens = tokenize_with(registry, lang, &normalized.output);
    ipa_to_kazakh_with(registry, &to_ipa(&tokens), policy)
}

/// Registry and confusable table bundled for the whole pipeline.
#[derive(Clone, Debug)]
pub struct Toolkit {
    registry: Registry,
    confusables: Confusables,
    fold_homoglyphs: bool,
}

impl Default for Toolkit {
    fn default() -> Self {
        Toolkit::new(Registry::embedded().clone(), Confusables::embedded().clone())
    }
}

impl Toolkit {
    pub fn new(registry: Registry, confusables: Confusables) -> Self {
        Toolkit {
            registry,
            confusables,
            fold_homoglyphs: true,
        }
    }

    pub fn load(source: &DataSource) -> Result<Self, DataError> {
        Ok(Toolkit::new(Registry::load(source)?, Confusables::load(source)?))
    }

    pub fn with_homoglyph_folding(mut self, on: bool) -> Self {
        self.fold_homoglyphs = on;
        self
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    pub fn normalize(&self, lang: LanguageId, raw: &str) -> NormalizationReport {
        Normalizer::new(&self.confusables)
            .with_homoglyph_folding(self.fold_homoglyphs)
            .normalize(lang, raw)
    }

    pub fn tokenize<'a>(&self, lang: LanguageId, normalized: &'a str) -> TokenStream<'a> {
        tokenize_with(&self.registry, lang, normalized)
    }

    pub fn ipa(&self, lang: LanguageId, raw: &str) -> IpaTranscription {
        let normalized = self.normalize(lang, raw);
        to_ipa(&self.tokenize(lang, &normalized.output))
    }

    pub fn ipa_string(&self, lang: LanguageId, raw: &str, policy: UnknownPolicy) -> Result<String, TranslitError> {
        ipa_string(&self.registry, &self.ipa(lang, raw), policy)
    }

    pub fn ipa_to_kazakh(
        &self,
        ipa: &IpaTranscription,
        policy: UnknownPolicy,
    ) -> Result<TransliterationResult, TranslitError> {
        ipa_to_kazakh_with(&self.registry, ipa, policy)
    }

    pub fn transliterate(
        &self,
        lang: LanguageId,
        raw: &str,
        policy: UnknownPolicy,
    ) -> Result<TransliterationResult, TranslitError> {
        self.ipa_to_kazakh(&self.ipa(lang, raw), policy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tokenize::{tokenize, PUNCTUATION};
    use proptest::prelude::*;

    fn reg() -> &'static Registry {
        Registry::embedded()
    }

    fn sym(id: &str) -> SymbolId {
        reg().symbol_by_id(id).unwrap()
    }

    fn ipa_ids(lang: LanguageId, text: &str) -> Vec<&'static str> {
        to_ipa(&tokenize(lang, text))
            .items
            .iter()
            .map(|i| match i {
                IpaItem::Symbol(s) => reg().symbol(*s).id.as_str(),
                _ => "?",
            })
            .collect()
    }

    fn strict(lang: LanguageId, text: &str) -> String {
        transliterate(lang, text, UnknownPolicy::Strict).unwrap().output
    }

    #[test]
    fn first_stage() {
        assert_eq!(ipa_ids(LanguageId::Tr, "ç"), ["tsh"]);
        assert_eq!(ipa_ids(LanguageId::Tk, "sag"), ["theta", "a_open", "g"]);
        let kk: String = "аәбвгғдеёжзийкқлмнңоөпрстуұүфхһцчшщъыіьэюя".chars().collect();
        let ids = ipa_ids(LanguageId::Kk, &kk);
        let expected: Vec<&str> = reg()
            .symbols()
            .iter()
            .filter(|s| s.in_kazakh)
            .map(|s| s.id.as_str())
            .collect();
        let mut sorted_ids = ids.clone();
        sorted_ids.sort();
        let mut sorted_expected = expected.clone();
        sorted_expected.sort();
        assert_eq!(ids.len(), 42);
        assert_eq!(sorted_ids, sorted_expected);
    }

    #[test]
    fn second_stage() {
        let ipa = IpaTranscription {
            language: LanguageId::Tr,
            items: vec![IpaItem::Symbol(sym("tsh"))],
        };
        assert_eq!(ipa_to_kazakh(&ipa, UnknownPolicy::Strict).unwrap().output, "ч");

        let r = transliterate(LanguageId::Sah, "дьон", UnknownPolicy::Strict).unwrap();
        assert_eq!(r.output, "жон");
        assert_eq!(
            r.used_fallbacks,
            vec![FallbackUse {
                position: 0,
                symbol: sym("dzh")
            }]
        );
    }

    #[test]
    fn policies() {
        let r = transliterate(LanguageId::Kk, "ия; иә", UnknownPolicy::Drop).unwrap();
        assert_eq!(r.output, "ия иә");
        assert_eq!(
            r.dropped,
            vec![Dropped {
                position: 2,
                text: ";".into(),
                reason: DropReason::DisallowedPunct
            }]
        );
        let r = transliterate(LanguageId::Kk, "ия;иә", UnknownPolicy::KeepSpace).unwrap();
        assert_eq!(r.output, "ия иә");
        assert_eq!(r.dropped.len(), 1);

        let err = transliterate(LanguageId::Tr, "42", UnknownPolicy::Strict).unwrap_err();
        assert_eq!(
            err,
            TranslitError::UnknownCharacter {
                position: 0,
                text: "4".into(),
                reason: DropReason::UnknownChar
            }
        );
    }

    #[test]
    fn worked_examples() {
        assert_eq!(strict(LanguageId::Tr, "merhaba"), "мэрһаба");
        assert_eq!(strict(LanguageId::Uz, "o'zbek"), "өзбэк");
        assert_eq!(strict(LanguageId::Kk, "сәлем, әлем!"), "сәлем, әлем!");
        assert_eq!(strict(LanguageId::Az, "qız"), "гыз");
        assert_eq!(strict(LanguageId::Tk, "Türkmenistan"), "түркмэнистан");
        assert_eq!(strict(LanguageId::Sah, "саха тыла"), "саха тыла");
        assert_eq!(strict(LanguageId::Ug, "uyghur"), "уйғур");
    }

    #[test]
    fn two_letter_fallback() {
        let r = transliterate(LanguageId::Sah, "нь", UnknownPolicy::Strict).unwrap();
        assert_eq!(r.output, "нь");
        assert_eq!(r.used_fallbacks.len(), 1);
    }

    #[test]
    fn uyghur_separator_produces_nothing() {
        let r = transliterate(LanguageId::Ug, "san'gha", UnknownPolicy::Strict).unwrap();
        assert_eq!(r.output, "санға");
        assert!(r.dropped.is_empty());
    }

    #[test]
    fn ipa_rendering() {
        let tk = Toolkit::default();
        assert_eq!(
            tk.ipa_string(LanguageId::Tr, "çay", UnknownPolicy::Strict).unwrap(),
            "t\u{361}\u{283} ɑ j"
        );
        assert_eq!(tk.ipa_string(LanguageId::Kk, "ә", UnknownPolicy::Strict).unwrap(), "æ");
        assert_eq!(tk.ipa_string(LanguageId::Tk, "s", UnknownPolicy::Strict).unwrap(), "θ");
        assert_eq!(
            tk.ipa_string(LanguageId::Tr, "ev 1!", UnknownPolicy::Drop).unwrap(),
            "e v | !"
        );
    }

    fn any_lang() -> impl Strategy<Value = LanguageId> {
        (0usize..10).prop_map(|i| LanguageId::ALL[i])
    }

    fn noisy_text(lang: LanguageId) -> impl Strategy<Value = String> {
        let mut pool: Vec<String> = reg().graphemes(lang).into_iter().map(String::from).collect();
        pool.extend(pool.clone().into_iter().map(|g| g.to_uppercase()));
        pool.extend(
            [
                "1", ";", "'", "\u{2019}", "q", "w", "x", "é", " ", "\t", ".", ",", "-", "?", "!", "a", "а",
            ]
            .map(String::from),
        );
        proptest::collection::vec(proptest::sample::select(pool), 0..25).prop_map(|v| v.concat())
    }

    fn lang_text() -> impl Strategy<Value = (LanguageId, String)> {
        any_lang().prop_flat_map(|l| (Just(l), noisy_text(l)))
    }

    proptest! {
        #[test]
        fn output_closure((lang, text) in lang_text()) {
            let letters = reg().kazakh_letters();
            let out = transliterate(lang, &text, UnknownPolicy::Drop).unwrap().output;
            prop_assert!(out.chars().all(|c| letters.contains(&c) || PUNCTUATION.contains(&c) || c == ' '), "{:?}", out);
        }

        #[test]
        fn output_is_a_kazakh_fixed_point((lang, text) in lang_text()) {
            let once = transliterate(lang, &text, UnknownPolicy::Drop).unwrap().output;
            let twice = transliterate(LanguageId::Kk, &once, UnknownPolicy::Strict).unwrap().output;
            prop_assert_eq!(twice, once);
        }

        #[test]
        fn fallbacks_counted_per_occurrence((lang, text) in lang_text()) {
            let r = transliterate(lang, &text, UnknownPolicy::Drop).unwrap();
            let normalized = crate::normalize::normalize(lang, &text).output;
            let expected = tokenize(lang, &normalized)
                .tokens
                .iter()
                .filter(|t| t.ipa.is_some_and(|s| !reg().symbol(s).in_kazakh))
                .count();
            prop_assert_eq!(r.used_fallbacks.len(), expected);
        }

        #[test]
        fn pipeline_is_the_stage_composition((lang, text) in lang_text(), p in 0usize..3) {
            let policy = [UnknownPolicy::Strict, UnknownPolicy::Drop, UnknownPolicy::KeepSpace][p];
            let normalized = crate::normalize::normalize(lang, &text);
            let stream = tokenize(lang, &normalized.output);
            let staged = ipa_to_kazakh(&to_ipa(&stream), policy);
            prop_assert_eq!(transliterate(lang, &text, policy), staged.clone());
            prop_assert_eq!(Toolkit::default().transliterate(lang, &text, policy), staged);
        }
    }
}
