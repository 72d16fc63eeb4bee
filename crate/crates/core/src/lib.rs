//! Multi-modal program synthesis: candidate programs from a language model
//! are decomposed into components and recombined, guided by examples, into a
//! program consistent with the examples.
//!
//! Two target languages are supported, regular expressions and CSS selectors.

pub mod candidates;
pub mod cegis;
pub mod css;
pub mod dsl;
pub mod engine;
pub mod prompt;
pub mod regex;

use serde::{Deserialize, Serialize};

use dsl::{DslDefinition, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    Regex,
    Css,
}

impl Language {
    pub fn dsl(self) -> &'static DslDefinition {
        match self {
            Language::Regex => regex::dsl(),
            Language::Css => css::dsl(),
        }
    }

    pub fn parse(self, s: &str) -> Result<Term, String> {
        match self {
            Language::Regex => regex::parse_regex(s).map_err(|e| e.to_string()),
            Language::Css => css::parse_selector(s).map_err(|e| e.to_string()),
        }
    }

    pub fn print(self, t: &Term) -> String {
        match self {
            Language::Regex => regex::print_regex(t),
            Language::Css => css::print_selector(t),
        }
    }

    pub fn prompt_config(self) -> prompt::PromptConfig {
        match self {
            Language::Regex => prompt::PromptConfig::regex(),
            Language::Css => prompt::PromptConfig::css(),
        }
    }

    pub fn answer_marker(self) -> &'static str {
        match self {
            Language::Regex => "Regex:",
            Language::Css => "Selector:",
        }
    }
}

impl std::str::FromStr for Language {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "regex" => Ok(Language::Regex),
            "css" => Ok(Language::Css),
            _ => Err(format!("unknown language `{s}` (expected regex or css)")),
        }
    }
}
