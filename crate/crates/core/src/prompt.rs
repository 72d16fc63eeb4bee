//! Few-shot prompt assembly: question-answer pair retrieval and layout.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PromptError {
    #[error("line {line}: {message}")]
    Corpus { line: usize, message: String },
    #[error("cannot read corpus: {0}")]
    Io(#[from] std::io::Error),
    #[error("prompt needs {needed} tokens but the budget is {budget}")]
    Budget { needed: usize, budget: usize },
    #[error("k must be at least 1")]
    ZeroK,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QAPair {
    pub question: String,
    pub answer: String,
}

impl QAPair {
    pub fn new(question: &str, answer: &str) -> Self {
        QAPair {
            question: question.to_string(),
            answer: answer.to_string(),
        }
    }
}

/// A question-answer corpus with document frequencies over its questions.
#[derive(Debug, Clone)]
pub struct QACorpus {
    pairs: Vec<QAPair>,
    token_index: HashMap<String, usize>,
}

impl QACorpus {
    /// Builds a corpus, rejecting empty fields and answers that contain `stop`.
    pub fn new(pairs: Vec<QAPair>, stop: &str) -> Result<Self, PromptError> {
        for (i, p) in pairs.iter().enumerate() {
            check_pair(p, stop).map_err(|message| PromptError::Corpus {
                line: i + 1,
                message,
            })?;
        }
        let mut token_index = HashMap::new();
        for p in &pairs {
            for t in token_set(&p.question) {
                *token_index.entry(t).or_insert(0) += 1;
            }
        }
        Ok(QACorpus { pairs, token_index })
    }

    /// Reads newline-delimited JSON records `{"question": .., "answer": ..}`.
    pub fn from_jsonl(src: &str, stop: &str) -> Result<Self, PromptError> {
        let mut pairs = Vec::new();
        for (i, line) in src.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let p: QAPair = serde_json::from_str(line).map_err(|e| PromptError::Corpus {
                line: i + 1,
                message: e.to_string(),
            })?;
            check_pair(&p, stop).map_err(|message| PromptError::Corpus {
                line: i + 1,
                message,
            })?;
            pairs.push(p);
        }
        QACorpus::new(pairs, stop)
    }

    pub fn load(path: &Path, stop: &str) -> Result<Self, PromptError> {
        QACorpus::from_jsonl(&std::fs::read_to_string(path)?, stop)
    }

    pub fn pairs(&self) -> &[QAPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Number of corpus questions containing `token`.
    pub fn document_frequency(&self, token: &str) -> usize {
        self.token_index.get(token).copied().unwrap_or(0)
    }
}

fn check_pair(p: &QAPair, stop: &str) -> Result<(), String> {
    if p.question.trim().is_empty() {
        return Err("empty question".into());
    }
    if p.answer.trim().is_empty() {
        return Err("empty answer".into());
    }
    if !stop.is_empty() && p.answer.contains(stop) {
        return Err(format!("answer contains the stop sequence {stop:?}"));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Metric {
    TokenMatch,
    Tfidf,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PromptConfig {
    pub k: usize,
    pub similarity_threshold: usize,
    pub metric: Metric,
    pub header: String,
    pub question_marker: String,
    pub answer_marker: String,
    pub max_prompt_tokens: usize,
}

pub const REGEX_HEADER: &str = "Here are some examples of regular expressions\n\
and their descriptions. Use them to generate a\n\
regular expression that matches the description.";

pub const CSS_HEADER: &str = "Here are some examples of CSS selectors\n\
and their descriptions. Use them to generate a\n\
CSS selector that matches the description.";

impl PromptConfig {
    pub fn regex() -> Self {
        PromptConfig {
            k: 10,
            similarity_threshold: 5,
            metric: Metric::Tfidf,
            header: REGEX_HEADER.to_string(),
            question_marker: "NL:".to_string(),
            answer_marker: "Regex:".to_string(),
            max_prompt_tokens: 2048,
        }
    }

    pub fn css() -> Self {
        PromptConfig {
            header: CSS_HEADER.to_string(),
            answer_marker: "Selector:".to_string(),
            ..PromptConfig::regex()
        }
    }
}

/// Lowercased alphanumeric runs.
///
/// ```
/// use multisynth::prompt::tokenize;
/// assert_eq!(tokenize("Lines containing the string 'b'"), ["lines", "containing", "the", "string", "b"]);
/// ```
pub fn tokenize(q: &str) -> Vec<String> {
    q.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
        .collect()
}

fn token_set(q: &str) -> HashSet<String> {
    tokenize(q).into_iter().collect()
}

/// `|CT(q, q*)| / |q|` over distinct tokens; 0 when `q` has none.
pub fn relevance_tm(q: &str, q_star: &str) -> f64 {
    let a = token_set(q);
    if a.is_empty() {
        return 0.0;
    }
    let b = token_set(q_star);
    a.intersection(&b).count() as f64 / a.len() as f64
}

fn idf(token: &str, corpus: &QACorpus) -> f64 {
    let n = corpus.len() as f64;
    match corpus.document_frequency(token) {
        0 => (n + 1.0).ln(),
        df => -(df as f64 / n).ln(),
    }
}

/// Term frequency of `token` in `q` times its inverse document frequency.
pub fn tfidf_score(token: &str, q: &str, corpus: &QACorpus) -> f64 {
    let tf = tokenize(q).iter().filter(|t| *t == token).count();
    tf as f64 * idf(token, corpus)
}

pub fn relevance_tfidf(q: &str, q_star: &str, corpus: &QACorpus) -> f64 {
    let toks = tokenize(q);
    // summed in token order so equal inputs give bit-equal scores
    let mut tf: BTreeMap<&str, usize> = BTreeMap::new();
    for t in &toks {
        *tf.entry(t.as_str()).or_insert(0) += 1;
    }
    let other = token_set(q_star);
    let (mut shared, mut total) = (0.0, 0.0);
    for (t, n) in tf {
        let s = n as f64 * idf(t, corpus);
        total += s;
        if other.contains(t) {
            shared += s;
        }
    }
    if total > 0.0 {
        shared / total
    } else {
        0.0
    }
}

pub fn relevance(metric: Metric, q: &str, q_star: &str, corpus: &QACorpus) -> f64 {
    match metric {
        Metric::TokenMatch => relevance_tm(q, q_star),
        Metric::Tfidf => relevance_tfidf(q, q_star, corpus),
    }
}

pub fn levenshtein(a: &str, b: &str) -> usize {
    strsim::levenshtein(a, b)
}

/// Approximate model tokens: whitespace-delimited words times 1.33, rounded up.
pub fn approx_tokens(s: &str) -> usize {
    (s.split_whitespace().count() as f64 * 1.33).ceil() as usize
}

fn pair_block(p: &QAPair, cfg: &PromptConfig) -> String {
    format!(
        "{} {}\n{} {}\n\n",
        cfg.question_marker, p.question, cfg.answer_marker, p.answer
    )
}

fn tail(q_star: &str, cfg: &PromptConfig) -> String {
    format!("{} {}\n{}", cfg.question_marker, q_star, cfg.answer_marker)
}

/// Greedy relevance-ordered selection with an answer-diversity check.
///
/// Ties in relevance go to the earlier corpus entry.
pub fn select_qa_pairs(corpus: &QACorpus, q_star: &str, cfg: &PromptConfig) -> Vec<QAPair> {
    let scores: Vec<f64> = corpus
        .pairs
        .iter()
        .map(|p| relevance(cfg.metric, q_star, &p.question, corpus))
        .collect();
    let mut order: Vec<usize> = (0..corpus.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));

    let mut used = approx_tokens(&cfg.header) + approx_tokens(&tail(q_star, cfg));
    let mut out: Vec<QAPair> = Vec::new();
    for i in order {
        if out.len() >= cfg.k {
            break;
        }
        let p = &corpus.pairs[i];
        if out
            .iter()
            .any(|a| levenshtein(&a.answer, &p.answer) < cfg.similarity_threshold)
        {
            continue;
        }
        let cost = approx_tokens(&pair_block(p, cfg));
        if used + cost > cfg.max_prompt_tokens {
            break;
        }
        used += cost;
        out.push(p.clone());
    }
    out
}

/// Lays out the header, the pairs and the open question.
pub fn build_prompt(
    pairs: &[QAPair],
    q_star: &str,
    cfg: &PromptConfig,
) -> Result<String, PromptError> {
    let mut s = format!("{}\n\n", cfg.header);
    for p in pairs {
        s.push_str(&pair_block(p, cfg));
    }
    s.push_str(&tail(q_star, cfg));
    let needed = approx_tokens(&s);
    if needed > cfg.max_prompt_tokens {
        return Err(PromptError::Budget {
            needed,
            budget: cfg.max_prompt_tokens,
        });
    }
    Ok(s)
}

/// Selects pairs and builds the prompt in one step.
pub fn make_prompt(
    corpus: &QACorpus,
    q_star: &str,
    cfg: &PromptConfig,
) -> Result<String, PromptError> {
    if cfg.k == 0 {
        return Err(PromptError::ZeroK);
    }
    build_prompt(&select_qa_pairs(corpus, q_star, cfg), q_star, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus(qs: &[(&str, &str)]) -> QACorpus {
        QACorpus::new(qs.iter().map(|(q, a)| QAPair::new(q, a)).collect(), "NL:").unwrap()
    }

    #[test]
    fn token_match() {
        assert_eq!(
            relevance_tm("match all vowels", "get me all the vowels and numbers"),
            2.0 / 3.0
        );
        assert_eq!(relevance_tm("a b", "c d"), 0.0);
        assert_eq!(relevance_tm("", "c d"), 0.0);
    }

    #[test]
    fn idf_and_smoothing() {
        let c = corpus(&[("x y", "1"), ("x", "2")]);
        assert_eq!(tfidf_score("x", "x x", &c), 0.0);
        assert!((tfidf_score("y", "y", &c) - 2f64.ln()).abs() < 1e-12);
        assert!((tfidf_score("z", "z", &c) - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn stop_sequence_in_answer_rejected() {
        let e = QACorpus::from_jsonl(
            "{\"question\":\"a\",\"answer\":\"b\"}\n{\"question\":\"c\",\"answer\":\"x NL: y\"}",
            "NL:",
        )
        .unwrap_err();
        assert!(e.to_string().starts_with("line 2:"), "{e}");
    }

    #[test]
    fn zero_pairs_gives_header_and_question() {
        let cfg = PromptConfig::regex();
        let p = build_prompt(&[], "digits", &cfg).unwrap();
        assert_eq!(p, format!("{REGEX_HEADER}\n\nNL: digits\nRegex:"));
    }

    #[test]
    fn budget_error() {
        let cfg = PromptConfig {
            max_prompt_tokens: 3,
            ..PromptConfig::regex()
        };
        assert!(matches!(
            build_prompt(&[], "q", &cfg),
            Err(PromptError::Budget { .. })
        ));
    }
}
