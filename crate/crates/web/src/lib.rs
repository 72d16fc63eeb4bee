//! Browser bindings: regex matching, selector evaluation and small synthesis runs.

use std::sync::Arc;
use std::time::Duration;

use multisynth::candidates;
use multisynth::cegis::ExampleRecord;
use multisynth::css::{self, CssExample};
use multisynth::engine::{self, CssDomain, RegexDomain, SynthesisConfig};
use multisynth::regex::{self, RegexExample};
use multisynth::Language;
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct MatchRow<'a> {
    input: &'a str,
    accepted: bool,
}

#[derive(Serialize)]
struct Selected {
    node: usize,
    label: String,
}

#[derive(Serialize)]
struct SynthResult {
    program: Option<String>,
    candidates: Vec<String>,
    discarded: Vec<(String, String)>,
    outcome: engine::SynthesisOutcome,
}

fn json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

/// Matches each line of `inputs` against `pattern` in full.
pub fn match_lines(pattern: &str, inputs: &str) -> Result<String, String> {
    let t = regex::parse_regex(pattern).map_err(|e| e.to_string())?;
    let rows: Vec<MatchRow> = inputs
        .lines()
        .map(|s| MatchRow {
            input: s,
            accepted: regex::match_full(&t, s),
        })
        .collect();
    json(&rows)
}

pub fn select_nodes(selector: &str, document: &str) -> Result<String, String> {
    let t = css::parse_selector(selector).map_err(|e| e.to_string())?;
    let doc = css::load_document(document).map_err(|e| e.to_string())?;
    let rows: Vec<Selected> = css::evaluate_selector(&t, &doc)
        .into_iter()
        .map(|n| Selected {
            node: n,
            label: doc.describe(n),
        })
        .collect();
    json(&rows)
}

/// Synthesizes from newline-separated candidates and a JSON example list.
///
/// Regex examples are `{"input", "output"}`; selector examples are
/// `{"node", "output"}` against `document`.
pub fn synthesize_program(
    domain: &str,
    candidate_lines: &str,
    examples: &str,
    document: &str,
    beam_size: usize,
    depth: usize,
    time_budget_ms: u32,
) -> Result<String, String> {
    let lang: Language = domain.parse()?;
    let records: Vec<ExampleRecord> =
        serde_json::from_str(examples).map_err(|e| format!("examples: {e}"))?;
    let set =
        candidates::load_fixture_str(candidate_lines, lang, true).map_err(|e| e.to_string())?;
    let cfg = SynthesisConfig {
        beam_size,
        synth_depth: depth,
        time_budget: Some(Duration::from_millis(time_budget_ms.into())),
        ..SynthesisConfig::default()
    };
    cfg.validate().map_err(|e| e.to_string())?;
    let outcome = match lang {
        Language::Regex => {
            let mut es = Vec::new();
            for r in &records {
                match r {
                    ExampleRecord::Text { input, output } => {
                        es.push(RegexExample::new(input, *output))
                    }
                    ExampleRecord::Node { .. } => {
                        return Err("regex examples need an input string".into())
                    }
                }
            }
            engine::synthesize(&RegexDomain::new(&es), &set.programs, &set.sources, &cfg)
        }
        Language::Css => {
            let doc = Arc::new(css::load_document(document).map_err(|e| e.to_string())?);
            let mut es = Vec::new();
            for r in &records {
                match r {
                    ExampleRecord::Node { node, output } if *node < doc.len() => {
                        es.push(CssExample {
                            node: *node,
                            output: *output,
                        })
                    }
                    ExampleRecord::Node { node, .. } => {
                        return Err(format!("node {node} is not in the document"))
                    }
                    ExampleRecord::Text { .. } => {
                        return Err("selector examples need a node id".into())
                    }
                }
            }
            engine::synthesize(&CssDomain::new(doc, &es), &set.programs, &set.sources, &cfg)
        }
    }
    .map_err(|e| e.to_string())?;
    json(&SynthResult {
        program: outcome.printed.clone(),
        candidates: set.programs.iter().map(|p| lang.print(p)).collect(),
        discarded: set.discarded,
        outcome,
    })
}

#[wasm_bindgen(js_name = matchLines)]
pub fn match_lines_js(pattern: &str, inputs: &str) -> Result<String, JsError> {
    match_lines(pattern, inputs).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = selectNodes)]
pub fn select_nodes_js(selector: &str, document: &str) -> Result<String, JsError> {
    select_nodes(selector, document).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = synthesize)]
pub fn synthesize_js(
    domain: &str,
    candidate_lines: &str,
    examples: &str,
    document: &str,
    beam_size: usize,
    depth: usize,
    time_budget_ms: u32,
) -> Result<String, JsError> {
    synthesize_program(
        domain,
        candidate_lines,
        examples,
        document,
        beam_size,
        depth,
        time_budget_ms,
    )
    .map_err(|e| JsError::new(&e))
}
