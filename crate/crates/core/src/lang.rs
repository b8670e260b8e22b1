//! The ten supported languages and their metadata.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// A supported Turkic language, identified by a short ISO-639 style code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LanguageId {
    Az,
    Ba,
    Kk,
    Ky,
    Sah,
    Tt,
    Tr,
    Tk,
    Ug,
    Uz,
}

/// Kazakh is the language every other one is rendered into.
pub const SOURCE_LANGUAGE: LanguageId = LanguageId::Kk;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Branch {
    Oghuz,
    Kipchak,
    Siberian,
    Karluk,
}

/// Script of the orthography this crate parses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Script {
    Latin,
    Cyrillic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LanguageMeta {
    pub id: LanguageId,
    pub branch: Branch,
    /// Orthography accepted as input.
    pub script: Script,
    /// Main writing system of the language community. Differs from `script`
    /// only for Uyghur, which is read in its Latin orthography.
    pub main_writing_system: &'static str,
    pub display_name: &'static str,
}

impl LanguageId {
    pub const ALL: [LanguageId; 10] = [
        LanguageId::Az,
        LanguageId::Ba,
        LanguageId::Kk,
        LanguageId::Ky,
        LanguageId::Sah,
        LanguageId::Tt,
        LanguageId::Tr,
        LanguageId::Tk,
        LanguageId::Ug,
        LanguageId::Uz,
    ];

    pub fn code(self) -> &'static str {
        match self {
            LanguageId::Az => "az",
            LanguageId::Ba => "ba",
            LanguageId::Kk => "kk",
            LanguageId::Ky => "ky",
            LanguageId::Sah => "sah",
            LanguageId::Tt => "tt",
            LanguageId::Tr => "tr",
            LanguageId::Tk => "tk",
            LanguageId::Ug => "ug",
            LanguageId::Uz => "uz",
        }
    }

    pub fn meta(self) -> LanguageMeta {
        use Branch::*;
        use Script::*;
        let (branch, script, main_writing_system, display_name) = match self {
            LanguageId::Az => (Oghuz, Latin, "Latin", "Azerbaijani"),
            LanguageId::Ba => (Kipchak, Cyrillic, "Cyrillic", "Bashkir"),
            LanguageId::Kk => (Kipchak, Cyrillic, "Cyrillic", "Kazakh"),
            LanguageId::Ky => (Kipchak, Cyrillic, "Cyrillic", "Kyrgyz"),
            LanguageId::Sah => (Siberian, Cyrillic, "Cyrillic", "Sakha"),
            LanguageId::Tt => (Kipchak, Cyrillic, "Cyrillic", "Tatar"),
            LanguageId::Tr => (Oghuz, Latin, "Latin", "Turkish"),
            LanguageId::Tk => (Oghuz, Latin, "Latin", "Turkmen"),
            LanguageId::Ug => (Karluk, Latin, "Perso-Arabic", "Uyghur"),
            LanguageId::Uz => (Karluk, Latin, "Latin", "Uzbek"),
        };
        LanguageMeta {
            id: self,
            branch,
            script,
            main_writing_system,
            display_name,
        }
    }

    pub fn script(self) -> Script {
        self.meta().script
    }

    /// Whether the language uses the Turkish dotted/dotless I casing rule.
    pub(crate) fn has_dotless_i_casing(self) -> bool {
        matches!(self, LanguageId::Tr | LanguageId::Az)
    }
}

impl fmt::Display for LanguageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown language `{0}`")]
pub struct UnknownLanguage(pub String);

impl FromStr for LanguageId {
    type Err = UnknownLanguage;

    /// Accepts short codes and English names, case-insensitively.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let wanted = s.trim().to_lowercase();
        LanguageId::ALL
            .into_iter()
            .find(|id| id.code() == wanted || id.meta().display_name.to_lowercase() == wanted)
            .ok_or_else(|| UnknownLanguage(s.to_string()))
    }
}
