//! Phoneme inventory overlap between the languages.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::lang::{LanguageId, SOURCE_LANGUAGE};
use crate::registry::{Grapheme, Registry, SymbolId};

/// IPA symbols reachable from a language's graphemes.
pub fn inventory(registry: &Registry, lang: LanguageId) -> BTreeSet<SymbolId> {
    registry.table(lang).entries().map(|(_, s)| s).collect()
}

pub fn overlap(registry: &Registry, a: LanguageId, b: LanguageId) -> usize {
    inventory(registry, a).intersection(&inventory(registry, b)).count()
}

/// Graphemes of `lang` whose symbol has no Kazakh letter.
pub fn fallback_exposure(registry: &Registry, lang: LanguageId) -> Vec<(SymbolId, &Grapheme)> {
    let mut v: Vec<_> = registry
        .table(lang)
        .entries()
        .filter(|(_, s)| !registry.symbol(*s).in_kazakh)
        .map(|(g, s)| (s, g))
        .collect();
    v.sort();
    v
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OverlapMatrix {
    pub languages: Vec<LanguageId>,
    /// Row-major shared-symbol counts.
    pub counts: Vec<Vec<usize>>,
}

impl OverlapMatrix {
    pub fn compute(registry: &Registry) -> Self {
        let languages = LanguageId::ALL.to_vec();
        let inventories: Vec<_> = languages.iter().map(|l| inventory(registry, *l)).collect();
        let counts = inventories
            .iter()
            .map(|a| inventories.iter().map(|b| a.intersection(b).count()).collect())
            .collect();
        OverlapMatrix { languages, counts }
    }

    pub fn get(&self, a: LanguageId, b: LanguageId) -> usize {
        let idx = |l| self.languages.iter().position(|x| *x == l).expect("language in matrix");
        self.counts[idx(a)][idx(b)]
    }

    /// Header row of language codes, then one row per language.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("lang");
        for l in &self.languages {
            out.push('\t');
            out.push_str(l.code());
        }
        out.push('\n');
        for (l, row) in self.languages.iter().zip(&self.counts) {
            out.push_str(l.code());
            for c in row {
                let _ = write!(out, "\t{c}");
            }
            out.push('\n');
        }
        out
    }

    /// One line per language: inventory size, symbols shared with Kazakh, and
    /// the graphemes that need a fallback.
    pub fn summary(&self, registry: &Registry) -> String {
        let mut out = String::new();
        for l in &self.languages {
            let size = self.get(*l, *l);
            let shared = self.get(*l, SOURCE_LANGUAGE);
            let exposed: Vec<String> = fallback_exposure(registry, *l)
                .into_iter()
                .map(|(s, g)| format!("{}={}", g.as_str(), registry.symbol(s).ipa))
                .collect();
            let _ = writeln!(
                out,
                "{:<12} {:>2} symbols, {:>2} shared with Kazakh ({:.0}%){}",
                l.meta().display_name,
                size,
                shared,
                100.0 * shared as f64 / size as f64,
                if exposed.is_empty() {
                    String::new()
                } else {
                    format!(", fallback for {}", exposed.join(" "))
                }
            );
        }
        out
    }
}
