//! WebAssembly bindings for the browser demo. Every export returns JSON text.

use serde::Serialize;
use turkic_translit::analysis::OverlapMatrix;
use turkic_translit::translit::ipa_string;
use turkic_translit::{LanguageId, Registry, Toolkit, UnknownPolicy};
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct Language {
    code: &'static str,
    name: &'static str,
    script: String,
}

#[derive(Serialize)]
struct Fallback {
    line: usize,
    position: usize,
    ipa: String,
    kazakh: String,
}

#[derive(Serialize)]
struct Dropped {
    line: usize,
    position: usize,
    text: String,
    reason: String,
}

#[derive(Serialize)]
struct Conversion {
    output: String,
    ipa: String,
    fallbacks: Vec<Fallback>,
    dropped: Vec<Dropped>,
}

fn parse(lang: &str, policy: &str) -> Result<(LanguageId, UnknownPolicy), String> {
    let lang = lang.parse::<LanguageId>().map_err(|e| e.to_string())?;
    let policy = policy.parse::<UnknownPolicy>().map_err(|e| e.to_string())?;
    Ok((lang, policy))
}

pub fn languages_json() -> String {
    let list: Vec<Language> = LanguageId::ALL
        .iter()
        .map(|l| {
            let m = l.meta();
            Language {
                code: l.code(),
                name: m.display_name,
                script: format!("{:?}", m.script),
            }
        })
        .collect();
    serde_json::to_string(&list).expect("serializable")
}

/// Converts `text` line by line, returning the Kazakh text, the IPA view
/// and the audit of fallbacks and dropped characters.
pub fn convert_json(lang: &str, text: &str, policy: &str) -> Result<String, String> {
    let (lang, policy) = parse(lang, policy)?;
    let toolkit = Toolkit::default();
    let registry = toolkit.registry();
    let mut out = Conversion {
        output: String::new(),
        ipa: String::new(),
        fallbacks: Vec::new(),
        dropped: Vec::new(),
    };
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let fail = |e: turkic_translit::TranslitError| format!("line {line_no}: {e}");
        let ipa = toolkit.ipa(lang, line);
        let result = toolkit.ipa_to_kazakh(&ipa, policy).map_err(fail)?;
        if i > 0 {
            out.output.push('\n');
            out.ipa.push('\n');
        }
        out.output.push_str(&result.output);
        out.ipa.push_str(&ipa_string(registry, &ipa, policy).map_err(fail)?);
        out.fallbacks.extend(result.used_fallbacks.iter().map(|f| Fallback {
            line: line_no,
            position: f.position,
            ipa: registry.symbol(f.symbol).ipa.clone(),
            kazakh: registry.render(f.symbol).text.to_string(),
        }));
        out.dropped.extend(result.dropped.into_iter().map(|d| Dropped {
            line: line_no,
            position: d.position,
            text: d.text,
            reason: d.reason.to_string(),
        }));
    }
    Ok(serde_json::to_string(&out).expect("serializable"))
}

pub fn overlap_json() -> String {
    serde_json::to_string(&OverlapMatrix::compute(Registry::embedded())).expect("serializable")
}

#[wasm_bindgen]
pub fn languages() -> String {
    languages_json()
}

#[wasm_bindgen]
pub fn convert(lang: &str, text: &str, policy: &str) -> Result<String, JsError> {
    convert_json(lang, text, policy).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn overlap_matrix() -> String {
    overlap_json()
}
