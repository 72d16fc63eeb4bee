//! Candidate programs from a language model, live or recorded.

use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsl::Term;
use crate::Language;

#[derive(Debug, Error)]
pub enum CandidateError {
    #[error("no candidates requested")]
    NoneRequested,
    #[error("no candidates")]
    Empty,
    #[error("empty prompt")]
    EmptyPrompt,
    #[error("cannot read fixture: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Transport(#[from] TransportError),
}

#[derive(Debug, Error)]
pub enum TransportError {
    #[error("environment variable {0} holding the API key is not set")]
    MissingKey(String),
    #[error("request failed: {0}")]
    Request(String),
    #[error("server answered {status}: {body}")]
    Status { status: u16, body: String },
    #[error("malformed completion response: {0}")]
    Response(String),
    #[error("live completions are not compiled in")]
    Unavailable,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("answer marker {0:?} not found")]
pub struct ExtractError(pub String);

/// Request field names sent to the completion endpoint.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RequestFields {
    pub prompt: String,
    pub temperature: String,
    pub n: String,
    pub max_tokens: String,
    pub stop: String,
}

impl Default for RequestFields {
    fn default() -> Self {
        RequestFields {
            prompt: "prompt".into(),
            temperature: "temperature".into(),
            n: "n".into(),
            max_tokens: "max_tokens".into(),
            stop: "stop".into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompletionConfig {
    pub temperature: f64,
    pub n_completions: usize,
    pub max_tokens: usize,
    pub stop_sequence: String,
    pub answer_marker: String,
    pub endpoint: String,
    /// Name of the environment variable that holds the key; `None` sends no key.
    pub api_key_env: Option<String>,
    pub model: Option<String>,
    pub timeout: Duration,
    pub fields: RequestFields,
    /// Collapse structurally equal programs.
    pub dedup: bool,
}

impl Default for CompletionConfig {
    fn default() -> Self {
        CompletionConfig {
            temperature: 0.6,
            n_completions: 20,
            max_tokens: 64,
            stop_sequence: "NL:".into(),
            answer_marker: "Regex:".into(),
            endpoint: "https://api.openai.com/v1/completions".into(),
            api_key_env: Some("MULTISYNTH_API_KEY".into()),
            model: None,
            timeout: Duration::from_secs(30),
            fields: RequestFields::default(),
            dedup: true,
        }
    }
}

impl CompletionConfig {
    pub fn for_language(lang: Language) -> Self {
        CompletionConfig {
            answer_marker: lang.answer_marker().into(),
            ..CompletionConfig::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateSet {
    #[serde(skip)]
    pub programs: Vec<Term>,
    /// Source text of each program, as first seen.
    pub sources: Vec<String>,
    pub raw: Vec<String>,
    pub discarded: Vec<(String, String)>,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.programs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.programs.is_empty()
    }

    /// Parses each source string, recording failures instead of stopping.
    pub fn from_sources(raw: Vec<String>, lang: Language, dedup: bool) -> Self {
        let mut programs: Vec<Term> = Vec::new();
        let mut sources = Vec::new();
        let mut discarded = Vec::new();
        for s in &raw {
            match lang.parse(s) {
                Ok(t) => {
                    if !(dedup && programs.contains(&t)) {
                        programs.push(t);
                        sources.push(s.clone());
                    }
                }
                Err(e) => discarded.push((s.clone(), e)),
            }
        }
        CandidateSet {
            programs,
            sources,
            raw,
            discarded,
        }
    }
}

/// The text after the answer marker, up to the stop sequence, trimmed.
///
/// ```
/// use multisynth::candidates::extract_program;
/// let c = "Regex: [AEIOU]{3}[0-9]{4}.*\n\nNL: lines starting with a digit\nRegex: [0-9].*";
/// assert_eq!(extract_program(c, "Regex:", "NL:").unwrap(), "[AEIOU]{3}[0-9]{4}.*");
/// ```
pub fn extract_program(completion: &str, marker: &str, stop: &str) -> Result<String, ExtractError> {
    let at = completion
        .find(marker)
        .ok_or_else(|| ExtractError(marker.to_string()))?;
    let rest = &completion[at + marker.len()..];
    let end = if stop.is_empty() {
        rest.len()
    } else {
        rest.find(stop).unwrap_or(rest.len())
    };
    Ok(rest[..end].trim().to_string())
}

/// Turns completions into a candidate set; each completion continues a
/// prompt that ended with the answer marker.
pub fn candidates_from_completions(
    completions: &[String],
    cfg: &CompletionConfig,
    lang: Language,
) -> CandidateSet {
    let mut sources = Vec::new();
    let mut discarded = Vec::new();
    for c in completions {
        let text = format!("{}{}", cfg.answer_marker, c);
        match extract_program(&text, &cfg.answer_marker, &cfg.stop_sequence) {
            Ok(p) => sources.push(p),
            Err(e) => discarded.push((c.clone(), e.to_string())),
        }
    }
    let mut set = CandidateSet::from_sources(sources, lang, cfg.dedup);
    set.programs.truncate(cfg.n_completions);
    set.sources.truncate(cfg.n_completions);
    discarded.append(&mut set.discarded);
    set.discarded = discarded;
    set
}

/// Source of raw completions for a prompt.
pub trait CompletionClient {
    fn complete(&self, prompt: &str, cfg: &CompletionConfig)
        -> Result<Vec<String>, TransportError>;
}

/// Replays fixed completions.
pub struct Replay(pub Vec<String>);

impl CompletionClient for Replay {
    fn complete(&self, _: &str, cfg: &CompletionConfig) -> Result<Vec<String>, TransportError> {
        Ok(self.0.iter().take(cfg.n_completions).cloned().collect())
    }
}

pub fn get_candidates(
    prompt: &str,
    cfg: &CompletionConfig,
    client: &dyn CompletionClient,
    lang: Language,
) -> Result<CandidateSet, CandidateError> {
    if cfg.n_completions == 0 {
        return Err(CandidateError::NoneRequested);
    }
    if prompt.trim().is_empty() {
        return Err(CandidateError::EmptyPrompt);
    }
    let completions = client.complete(prompt, cfg)?;
    Ok(candidates_from_completions(&completions, cfg, lang))
}

/// Reads one candidate per line; blank lines are skipped.
pub fn load_fixture_str(
    src: &str,
    lang: Language,
    dedup: bool,
) -> Result<CandidateSet, CandidateError> {
    let raw: Vec<String> = src
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(str::to_string)
        .collect();
    if raw.is_empty() {
        return Err(CandidateError::Empty);
    }
    Ok(CandidateSet::from_sources(raw, lang, dedup))
}

pub fn load_fixture(
    path: &Path,
    lang: Language,
    dedup: bool,
) -> Result<CandidateSet, CandidateError> {
    load_fixture_str(&std::fs::read_to_string(path)?, lang, dedup)
}

#[cfg(feature = "live")]
pub use http::HttpClient;

#[cfg(feature = "live")]
mod http {
    use rand::Rng;
    use serde_json::{json, Map, Value};

    use super::*;

    /// Blocking client for a completions endpoint answering `{choices: [{text}]}`.
    pub struct HttpClient {
        client: reqwest::blocking::Client,
    }

    impl HttpClient {
        pub fn new(timeout: Duration) -> Result<Self, TransportError> {
            let client = reqwest::blocking::Client::builder()
                .timeout(timeout)
                .build()
                .map_err(|e| TransportError::Request(e.to_string()))?;
            Ok(HttpClient { client })
        }

        fn once(
            &self,
            body: &Value,
            key: Option<&str>,
            cfg: &CompletionConfig,
        ) -> Result<Vec<String>, TransportError> {
            let mut req = self.client.post(&cfg.endpoint).json(body);
            if let Some(k) = key {
                req = req.bearer_auth(k);
            }
            let resp = req
                .send()
                .map_err(|e| TransportError::Request(e.to_string()))?;
            let status = resp.status();
            let text = resp
                .text()
                .map_err(|e| TransportError::Request(e.to_string()))?;
            if !status.is_success() {
                return Err(TransportError::Status {
                    status: status.as_u16(),
                    body: text,
                });
            }
            let v: Value =
                serde_json::from_str(&text).map_err(|e| TransportError::Response(e.to_string()))?;
            let choices = v
                .get("choices")
                .and_then(Value::as_array)
                .ok_or_else(|| TransportError::Response("missing `choices`".into()))?;
            choices
                .iter()
                .map(|c| {
                    c.get("text")
                        .and_then(Value::as_str)
                        .map(str::to_string)
                        .ok_or_else(|| TransportError::Response("choice without `text`".into()))
                })
                .collect()
        }
    }

    impl CompletionClient for HttpClient {
        fn complete(
            &self,
            prompt: &str,
            cfg: &CompletionConfig,
        ) -> Result<Vec<String>, TransportError> {
            let key = match &cfg.api_key_env {
                Some(var) => {
                    Some(std::env::var(var).map_err(|_| TransportError::MissingKey(var.clone()))?)
                }
                None => None,
            };
            let f = &cfg.fields;
            let mut body = Map::new();
            body.insert(f.prompt.clone(), json!(prompt));
            body.insert(f.temperature.clone(), json!(cfg.temperature));
            body.insert(f.n.clone(), json!(cfg.n_completions));
            body.insert(f.max_tokens.clone(), json!(cfg.max_tokens));
            body.insert(f.stop.clone(), json!(cfg.stop_sequence));
            if let Some(m) = &cfg.model {
                body.insert("model".into(), json!(m));
            }
            let body = Value::Object(body);
            match self.once(&body, key.as_deref(), cfg) {
                Err(TransportError::MissingKey(v)) => Err(TransportError::MissingKey(v)),
                Err(TransportError::Status { status, body: b })
                    if status < 500 && status != 429 =>
                {
                    Err(TransportError::Status { status, body: b })
                }
                Err(e) => {
                    let wait = rand::thread_rng().gen_range(200..600);
                    log::warn!("completion request failed ({e}); retrying in {wait} ms");
                    std::thread::sleep(Duration::from_millis(wait));
                    self.once(&body, key.as_deref(), cfg)
                }
                ok => ok,
            }
        }
    }
}
