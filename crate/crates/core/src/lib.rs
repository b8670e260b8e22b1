//! Turkic-to-Kazakh transliteration through an IPA pivot.
//!
//! Text in any of ten Turkic languages is normalized, segmented into the
//! language's graphemes, mapped to IPA symbols and written back out in the
//! Kazakh alphabet, so a speech model trained on Kazakh alone can read it.
//! The [`tts`] module turns the result into synthesis requests for an
//! external backend.
//!
//! ```
//! use turkic_translit::{transliterate, LanguageId, UnknownPolicy};
//!
//! let out = transliterate(LanguageId::Tr, "Merhaba!", UnknownPolicy::Strict).unwrap();
//! assert_eq!(out.output, "мэрһаба!");
//! ```

pub mod analysis;
pub mod lang;
pub mod normalize;
pub mod registry;
pub mod tokenize;
pub mod translit;
pub mod tts;

pub use lang::{Branch, LanguageId, LanguageMeta, Script};
pub use normalize::{normalize, Confusables, NormalizationReport, Normalizer};
pub use registry::{DataError, DataSource, IpaSymbol, Registry, SymbolId};
pub use tokenize::{segment_oracle, tokenize, Token, TokenKind, TokenStream};
pub use translit::{
    ipa_to_kazakh, to_ipa, transliterate, IpaItem, IpaTranscription, Toolkit, TranslitError, TransliterationResult,
    UnknownPolicy,
};
