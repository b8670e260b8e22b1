//! Longest-match segmentation of normalized text into graphemes.

use serde::Serialize;

use crate::lang::LanguageId;
use crate::normalize::UG_SEPARATOR;
use crate::registry::{Registry, SymbolId};

/// Punctuation the speech model reads.
pub const PUNCTUATION: [char; 5] = ['.', ',', '-', '?', '!'];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TokenKind {
    Grapheme,
    Punct,
    /// A run of whitespace.
    Space,
    /// A character that is neither a grapheme, whitelisted punctuation nor space.
    Unknown,
    /// Uyghur apostrophe that splits a would-be digraph. Produces no output.
    Separator,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Token<'a> {
    pub kind: TokenKind,
    pub text: &'a str,
    /// Byte offset into the tokenized text.
    pub start: usize,
    /// Set iff `kind` is `Grapheme`.
    pub ipa: Option<SymbolId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TokenStream<'a> {
    pub language: LanguageId,
    pub tokens: Vec<Token<'a>>,
}

impl<'a> TokenStream<'a> {
    pub fn graphemes(&self) -> impl Iterator<Item = &'a str> + '_ {
        self.tokens
            .iter()
            .filter(|t| t.kind == TokenKind::Grapheme)
            .map(|t| t.text)
    }

    /// Concatenated token texts; always equal to the tokenized input.
    pub fn text(&self) -> String {
        self.tokens.iter().map(|t| t.text).collect()
    }
}

fn is_separator(lang: LanguageId, c: char) -> bool {
    lang == LanguageId::Ug && c == UG_SEPARATOR
}

/// Tokenizes with the embedded registry.
pub fn tokenize(lang: LanguageId, normalized: &str) -> TokenStream<'_> {
    tokenize_with(Registry::embedded(), lang, normalized)
}

pub fn tokenize_with<'a>(registry: &Registry, lang: LanguageId, text: &'a str) -> TokenStream<'a> {
    let table = registry.table(lang);
    // Byte offsets of every char boundary, including the end.
    let bounds: Vec<usize> = text.char_indices().map(|(i, _)| i).chain([text.len()]).collect();
    let n = bounds.len() - 1;
    let mut tokens = Vec::new();
    let mut i = 0;

    while i < n {
        let start = bounds[i];
        let c = text[start..].chars().next().expect("in bounds");

        if c.is_whitespace() {
            let mut j = i + 1;
            while j < n && text[bounds[j]..].starts_with(char::is_whitespace) {
                j += 1;
            }
            tokens.push(Token {
                kind: TokenKind::Space,
                text: &text[start..bounds[j]],
                start,
                ipa: None,
            });
            i = j;
            continue;
        }

        if is_separator(lang, c) {
            tokens.push(Token {
                kind: TokenKind::Separator,
                text: &text[start..bounds[i + 1]],
                start,
                ipa: None,
            });
            i += 1;
            continue;
        }

        let longest = table.max_grapheme_chars().min(n - i);
        let matched = (1..=longest)
            .rev()
            .find_map(|k| table.lookup(&text[start..bounds[i + k]]).map(|s| (k, s)));
        let (len, kind, ipa) = match matched {
            Some((k, s)) => (k, TokenKind::Grapheme, Some(s)),
            None if PUNCTUATION.contains(&c) => (1, TokenKind::Punct, None),
            None => (1, TokenKind::Unknown, None),
        };
        tokens.push(Token {
            kind,
            text: &text[start..bounds[i + len]],
            start,
            ipa,
        });
        i += len;
    }

    TokenStream { language: lang, tokens }
}

/// Reference segmentation used to check [`tokenize_with`].
///
/// Solves the segmentation backwards over every suffix: each position
/// considers every inventory grapheme that is a prefix there and keeps the
/// parse whose token lengths are lexicographically largest, i.e. the longest
/// feasible grapheme at each position.
pub fn segment_oracle<'a>(registry: &Registry, lang: LanguageId, text: &'a str) -> TokenStream<'a> {
    let table = registry.table(lang);
    let inventory: Vec<(&str, SymbolId)> = table.entries().map(|(g, s)| (g.as_str(), s)).collect();

    let n = text.len();
    // best[b]: the preferred parse of text[b..], as (token byte lengths, tokens).
    let mut best: Vec<Option<(Vec<usize>, Vec<Token<'a>>)>> = vec![None; n + 1];
    best[n] = Some((Vec::new(), Vec::new()));

    let boundaries: Vec<usize> = text.char_indices().map(|(i, _)| i).collect();
    for &b in boundaries.iter().rev() {
        let rest = &text[b..];
        let c = rest.chars().next().expect("boundary");
        let mut candidates: Vec<(usize, TokenKind, Option<SymbolId>)> = Vec::new();

        if c.is_whitespace() {
            // A whitespace run is one token; only its first char starts it.
            let run: usize = rest.chars().take_while(|c| c.is_whitespace()).map(char::len_utf8).sum();
            candidates.push((run, TokenKind::Space, None));
        } else if is_separator(lang, c) {
            candidates.push((c.len_utf8(), TokenKind::Separator, None));
        } else {
            for (g, s) in &inventory {
                if rest.starts_with(g) {
                    candidates.push((g.len(), TokenKind::Grapheme, Some(*s)));
                }
            }
            if candidates.is_empty() {
                let kind = if PUNCTUATION.contains(&c) {
                    TokenKind::Punct
                } else {
                    TokenKind::Unknown
                };
                candidates.push((c.len_utf8(), kind, None));
            }
        }

        let mut chosen: Option<(Vec<usize>, Vec<Token<'a>>)> = None;
        for (len, kind, ipa) in candidates {
            let Some((tail_lens, tail_tokens)) = &best[b + len] else {
                continue;
            };
            let mut lens = Vec::with_capacity(tail_lens.len() + 1);
            lens.push(text[b..b + len].chars().count());
            lens.extend(tail_lens);
            if chosen.as_ref().is_none_or(|(l, _)| lens > *l) {
                let mut tokens = Vec::with_capacity(tail_tokens.len() + 1);
                tokens.push(Token {
                    kind,
                    text: &text[b..b + len],
                    start: b,
                    ipa,
                });
                tokens.extend(tail_tokens.iter().copied());
                chosen = Some((lens, tokens));
            }
        }
        best[b] = chosen;
    }

    // Whitespace suffix positions inside a run are never reached from the
    // start, so only best[0] matters.
    let (_, tokens) = best[0].take().unwrap_or_default();
    TokenStream { language: lang, tokens }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn kinds_and_texts<'a>(s: &TokenStream<'a>) -> Vec<(TokenKind, &'a str)> {
        s.tokens.iter().map(|t| (t.kind, t.text)).collect()
    }

    /// Every way to split `text` into inventory graphemes, as chunk lists.
    fn all_segmentations<'a>(inventory: &[&str], text: &'a str) -> Vec<Vec<&'a str>> {
        if text.is_empty() {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for g in inventory {
            if let Some(rest) = text.strip_prefix(g) {
                for mut tail in all_segmentations(inventory, rest) {
                    tail.insert(0, &text[..g.len()]);
                    out.push(tail);
                }
            }
        }
        out
    }

    #[test]
    fn uyghur_digraphs_by_brute_force() {
        let reg = Registry::embedded();
        let inv: Vec<&str> = reg.graphemes(LanguageId::Ug).into_iter().collect();
        let all = all_segmentations(&inv, "shing");
        // s-h-i-n-g, sh-i-n-g, s-h-i-ng, sh-i-ng
        assert_eq!(all.len(), 4);
        let key = |seg: &Vec<&str>| seg.iter().map(|g| g.chars().count()).collect::<Vec<_>>();
        let maximal = all.iter().max_by_key(|s| key(s)).unwrap();
        assert_eq!(maximal, &vec!["sh", "i", "ng"]);

        let got: Vec<&str> = tokenize(LanguageId::Ug, "shing").graphemes().collect();
        assert_eq!(&got, maximal);
        assert_eq!(
            segment_oracle(reg, LanguageId::Ug, "shing"),
            tokenize(LanguageId::Ug, "shing")
        );
    }

    #[test]
    fn sakha_palatal_digraph() {
        let got: Vec<&str> = tokenize(LanguageId::Sah, "дьон").graphemes().collect();
        assert_eq!(got, ["дь", "о", "н"]);
    }

    #[test]
    fn kazakh_letters_and_punct() {
        let s = tokenize(LanguageId::Kk, "сәлем!");
        assert_eq!(
            kinds_and_texts(&s),
            vec![
                (TokenKind::Grapheme, "с"),
                (TokenKind::Grapheme, "ә"),
                (TokenKind::Grapheme, "л"),
                (TokenKind::Grapheme, "е"),
                (TokenKind::Grapheme, "м"),
                (TokenKind::Punct, "!"),
            ]
        );
    }

    #[test]
    fn turkish_unknowns_from_oracle() {
        let s = segment_oracle(Registry::embedded(), LanguageId::Tr, "qw");
        assert_eq!(
            kinds_and_texts(&s),
            vec![(TokenKind::Unknown, "q"), (TokenKind::Unknown, "w")]
        );
    }

    #[test]
    fn whitespace_runs_and_disallowed_punct() {
        let s = tokenize(LanguageId::Kk, "а \t б;");
        assert_eq!(
            kinds_and_texts(&s),
            vec![
                (TokenKind::Grapheme, "а"),
                (TokenKind::Space, " \t "),
                (TokenKind::Grapheme, "б"),
                (TokenKind::Unknown, ";"),
            ]
        );
    }

    #[test]
    fn uyghur_separator_blocks_digraph() {
        let s = tokenize(LanguageId::Ug, "san'gha");
        assert_eq!(
            kinds_and_texts(&s),
            vec![
                (TokenKind::Grapheme, "s"),
                (TokenKind::Grapheme, "a"),
                (TokenKind::Grapheme, "n"),
                (TokenKind::Separator, "'"),
                (TokenKind::Grapheme, "gh"),
                (TokenKind::Grapheme, "a"),
            ]
        );
        // Not a separator outside Uyghur.
        assert_eq!(tokenize(LanguageId::Tr, "'").tokens[0].kind, TokenKind::Unknown);
    }

    #[test]
    fn soft_sign_alone_and_in_digraph() {
        let got: Vec<&str> = tokenize(LanguageId::Sah, "ньь").graphemes().collect();
        assert_eq!(got, ["нь", "ь"]);
        let got: Vec<&str> = tokenize(LanguageId::Kk, "нь").graphemes().collect();
        assert_eq!(got, ["н", "ь"]);
    }

    fn mixed_text(lang: LanguageId) -> impl Strategy<Value = String> {
        let graphemes: Vec<String> = Registry::embedded()
            .graphemes(lang)
            .into_iter()
            .map(String::from)
            .collect();
        let noise: Vec<String> = [" ", "  ", "\t", ".", ",", "-", "?", "!", ";", "1", "'", "q", "w", "ь"]
            .into_iter()
            .map(String::from)
            .collect();
        let piece = prop_oneof![
            4 => proptest::sample::select(graphemes),
            1 => proptest::sample::select(noise),
        ];
        proptest::collection::vec(piece, 0..30).prop_map(|v| v.concat())
    }

    fn lang_and_text() -> impl Strategy<Value = (LanguageId, String)> {
        (0usize..10).prop_flat_map(|i| {
            let lang = LanguageId::ALL[i];
            (Just(lang), mixed_text(lang))
        })
    }

    proptest! {
        #[test]
        fn reconstructs_and_matches_oracle((lang, text) in lang_and_text()) {
            let greedy = tokenize(lang, &text);
            prop_assert_eq!(greedy.text(), text.clone());
            prop_assert_eq!(&greedy, &segment_oracle(Registry::embedded(), lang, &text));
            prop_assert_eq!(&greedy, &tokenize(lang, &text));
        }

        #[test]
        fn no_grapheme_could_be_extended(text in "[a-zçşğıöüñäžýňşʻʼ'шнгсдьиаоён ]{0,30}", li in 0usize..10) {
            let lang = LanguageId::ALL[li];
            let reg = Registry::embedded();
            let s = tokenize(lang, &text);
            prop_assert_eq!(s.text(), text.clone());
            for t in s.tokens.iter().filter(|t| t.kind == TokenKind::Grapheme) {
                let rest = &text[t.start..];
                for g in reg.graphemes(lang) {
                    prop_assert!(!(rest.starts_with(g) && g.len() > t.text.len()), "{} could extend {}", g, t.text);
                }
            }
        }
    }
}
