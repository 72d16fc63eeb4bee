//! Benchmark driver: synthesize, compare against a ground truth, add
//! distinguishing examples, repeat.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use web_time::Instant;

use crate::candidates::{self, CandidateSet, CompletionClient, CompletionConfig};
use crate::css::{self, CssExample, DomDocument};
use crate::dsl::Term;
use crate::engine::{self, CssDomain, RegexDomain, SynthesisConfig, SynthesisOutcome};
use crate::prompt::{self, PromptConfig, QACorpus, QAPair};
use crate::regex::{self, equiv::Comparison, RegexExample};
use crate::Language;

/// Hard bound on refinement rounds per task.
pub const MAX_ITERATIONS: usize = 10;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("no tasks")]
    NoTasks,
    #[error("suite format error: {0}")]
    Format(#[from] serde_json::Error),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquivalenceConfig {
    pub max_len: usize,
    /// Cap on explored state pairs (regex) before answering unknown.
    pub max_states: usize,
}

impl Default for EquivalenceConfig {
    fn default() -> Self {
        EquivalenceConfig {
            max_len: 8,
            max_states: 200_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Equivalent,
    Different,
    Unknown,
}

/// Examples of one task, with the document for selector tasks.
#[derive(Debug, Clone)]
pub enum TaskExamples {
    Regex(Vec<RegexExample>),
    Css {
        document: Arc<DomDocument>,
        examples: Vec<CssExample>,
    },
}

impl TaskExamples {
    pub fn len(&self) -> usize {
        match self {
            TaskExamples::Regex(e) => e.len(),
            TaskExamples::Css { examples, .. } => examples.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn language(&self) -> Language {
        match self {
            TaskExamples::Regex(_) => Language::Regex,
            TaskExamples::Css { .. } => Language::Css,
        }
    }

    /// Whether `t` gives every example its expected output.
    pub fn consistent(&self, t: &Term) -> bool {
        match self {
            TaskExamples::Regex(es) => es
                .iter()
                .all(|e| regex::match_full(t, &e.input) == e.output),
            TaskExamples::Css { document, examples } => {
                let sel = css::evaluate_selector(t, document);
                examples
                    .iter()
                    .all(|e| sel.binary_search(&e.node).is_ok() == e.output)
            }
        }
    }
}

/// Example added by a refinement round, in the report's notation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExampleRecord {
    Text { input: String, output: bool },
    Node { node: usize, output: bool },
}

/// Tri-state bounded comparison of `p` against `g`, with up to two witnesses:
/// one accepted only by `p` (a negative example) and one accepted only by
/// `g` (a positive example).
pub fn compare_terms(
    p: &Term,
    g: &Term,
    examples: &TaskExamples,
    cfg: &EquivalenceConfig,
) -> (Verdict, Vec<ExampleRecord>) {
    match examples {
        TaskExamples::Regex(_) => match regex::equiv::compare(p, g, cfg.max_len, cfg.max_states) {
            Comparison::Equivalent => (Verdict::Equivalent, vec![]),
            Comparison::Unknown => (Verdict::Unknown, vec![]),
            Comparison::Different {
                left_only,
                right_only,
            } => {
                let mut w = Vec::new();
                if let Some(s) = left_only {
                    w.push(ExampleRecord::Text {
                        input: s,
                        output: false,
                    });
                }
                if let Some(s) = right_only {
                    w.push(ExampleRecord::Text {
                        input: s,
                        output: true,
                    });
                }
                (Verdict::Different, w)
            }
        },
        TaskExamples::Css { document, .. } => {
            let a = css::evaluate_selector(p, document);
            let b = css::evaluate_selector(g, document);
            if a == b {
                return (Verdict::Equivalent, vec![]);
            }
            let mut w = Vec::new();
            if let Some(&n) = a.iter().find(|n| b.binary_search(n).is_err()) {
                w.push(ExampleRecord::Node {
                    node: n,
                    output: false,
                });
            }
            if let Some(&n) = b.iter().find(|n| a.binary_search(n).is_err()) {
                w.push(ExampleRecord::Node {
                    node: n,
                    output: true,
                });
            }
            (Verdict::Different, w)
        }
    }
}

pub fn bounded_equivalent(
    p: &Term,
    g: &Term,
    examples: &TaskExamples,
    cfg: &EquivalenceConfig,
) -> Verdict {
    compare_terms(p, g, examples, cfg).0
}

pub fn distinguishing_examples(
    p: &Term,
    g: &Term,
    examples: &TaskExamples,
    cfg: &EquivalenceConfig,
) -> Vec<ExampleRecord> {
    compare_terms(p, g, examples, cfg).1
}

fn add_example(examples: &mut TaskExamples, e: &ExampleRecord) {
    match (examples, e) {
        (TaskExamples::Regex(es), ExampleRecord::Text { input, output }) => {
            es.push(RegexExample::new(input, *output))
        }
        (TaskExamples::Css { examples, .. }, ExampleRecord::Node { node, output }) => examples
            .push(CssExample {
                node: *node,
                output: *output,
            }),
        _ => unreachable!("witness kind follows the task language"),
    }
}

fn run_engine(
    examples: &TaskExamples,
    cands: &CandidateSet,
    cfg: &SynthesisConfig,
) -> Result<SynthesisOutcome, engine::EngineError> {
    let sources = &cands.sources;
    match examples {
        TaskExamples::Regex(es) => {
            engine::synthesize(&RegexDomain::new(es), &cands.programs, sources, cfg)
        }
        TaskExamples::Css { document, examples } => engine::synthesize(
            &CssDomain::new(document.clone(), examples),
            &cands.programs,
            sources,
            cfg,
        ),
    }
}

/// Ablation variants: v1 starts from all components, v2 expands without
/// pruning, v3 picks a random consistent term, v4 uses a fixed prompt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    V1,
    V2,
    V3,
    V4,
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "v1" => Ok(Variant::V1),
            "v2" => Ok(Variant::V2),
            "v3" => Ok(Variant::V3),
            "v4" => Ok(Variant::V4),
            _ => Err(format!("unknown variant `{s}` (expected v1, v2, v3 or v4)")),
        }
    }
}

impl Variant {
    pub fn apply(self, cfg: &mut SynthesisConfig) {
        match self {
            Variant::V1 => cfg.init_all_atoms = true,
            Variant::V2 => cfg.full_expansion = true,
            Variant::V3 => cfg.random_rank = true,
            Variant::V4 => {}
        }
    }
}

/// Where a task's candidates come from.
#[derive(Debug, Clone)]
pub enum CandidateSpec {
    Fixture(PathBuf),
    Inline(Vec<String>),
    /// Ask the live source configured on the harness.
    Live,
}

#[derive(Debug, Clone)]
pub struct BenchmarkTask {
    pub name: String,
    pub nl: String,
    pub examples: TaskExamples,
    pub ground_truth: Option<String>,
    pub candidates: CandidateSpec,
}

/// A completion client with its prompt corpus.
pub struct LiveSource {
    pub client: Box<dyn CompletionClient + Sync + Send>,
    pub completion: CompletionConfig,
    pub corpus: QACorpus,
    pub prompt: PromptConfig,
}

pub struct HarnessConfig {
    pub synthesis: SynthesisConfig,
    pub equivalence: EquivalenceConfig,
    pub variant: Option<Variant>,
    pub seed: u64,
    pub dedup: bool,
    pub timings: bool,
    pub live: Option<LiveSource>,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            synthesis: SynthesisConfig::default(),
            equivalence: EquivalenceConfig::default(),
            variant: None,
            seed: 0,
            dedup: true,
            timings: false,
            live: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Solved,
    Unsolved,
    /// Synthesized without a ground truth to check against.
    Unverified,
    Skipped,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TaskReport {
    pub name: String,
    pub language: Language,
    pub status: Status,
    pub iterations: usize,
    pub program: Option<String>,
    pub verdict: Option<Verdict>,
    pub reason: Option<String>,
    pub candidates: usize,
    pub discarded: usize,
    pub initial_cache: usize,
    pub added_examples: Vec<ExampleRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attempt_ms: Option<Vec<u64>>,
}

impl TaskReport {
    fn new(task: &BenchmarkTask) -> Self {
        TaskReport {
            name: task.name.clone(),
            language: task.examples.language(),
            status: Status::Unsolved,
            iterations: 0,
            program: None,
            verdict: None,
            reason: None,
            candidates: 0,
            discarded: 0,
            initial_cache: 0,
            added_examples: Vec::new(),
            wall_ms: None,
            attempt_ms: None,
        }
    }
}

/// `k` pairs drawn at random once per seed, whatever the question.
pub fn fixed_prompt_pairs(corpus: &QACorpus, k: usize, seed: u64) -> Vec<QAPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = corpus.pairs().to_vec();
    pairs.shuffle(&mut rng);
    pairs.truncate(k);
    pairs
}

fn obtain_candidates(task: &BenchmarkTask, cfg: &HarnessConfig) -> Result<CandidateSet, String> {
    let lang = task.examples.language();
    match &task.candidates {
        CandidateSpec::Fixture(p) => {
            candidates::load_fixture(p, lang, cfg.dedup).map_err(|e| e.to_string())
        }
        CandidateSpec::Inline(v) => {
            candidates::load_fixture_str(&v.join("\n"), lang, cfg.dedup).map_err(|e| e.to_string())
        }
        CandidateSpec::Live => {
            let live = cfg.live.as_ref().ok_or("no candidate source configured")?;
            let defaults = lang.prompt_config();
            let pc = PromptConfig {
                header: defaults.header,
                answer_marker: defaults.answer_marker,
                ..live.prompt.clone()
            };
            let pairs = if cfg.variant == Some(Variant::V4) {
                fixed_prompt_pairs(&live.corpus, pc.k, cfg.seed)
            } else {
                prompt::select_qa_pairs(&live.corpus, &task.nl, &pc)
            };
            let text = prompt::build_prompt(&pairs, &task.nl, &pc).map_err(|e| e.to_string())?;
            let mut cc = live.completion.clone();
            cc.answer_marker = lang.answer_marker().into();
            cc.dedup = cfg.dedup;
            candidates::get_candidates(&text, &cc, live.client.as_ref(), lang)
                .map_err(|e| e.to_string())
        }
    }
}

/// The refinement loop for one task.
pub fn run_task(task: &BenchmarkTask, cfg: &HarnessConfig) -> TaskReport {
    let start = Instant::now();
    let mut report = TaskReport::new(task);
    let lang = task.examples.language();
    let mut attempts = Vec::new();
    let finish = |mut r: TaskReport, attempts: Vec<u64>| {
        if cfg.timings {
            r.wall_ms = Some(start.elapsed().as_millis() as u64);
            r.attempt_ms = Some(attempts);
        }
        assert!(r.iterations <= MAX_ITERATIONS, "refinement bound exceeded");
        r
    };

    let ground_truth = match &task.ground_truth {
        Some(g) => match lang.parse(g) {
            Ok(t) => Some(t),
            Err(e) => {
                report.status = Status::Skipped;
                report.reason = Some(format!("ground truth does not parse: {e}"));
                return finish(report, attempts);
            }
        },
        None => None,
    };
    let cands = match obtain_candidates(task, cfg) {
        Ok(c) if !c.programs.is_empty() => c,
        Ok(_) => {
            report.reason = Some("no candidates".into());
            return finish(report, attempts);
        }
        Err(e) => {
            report.reason = Some(e);
            return finish(report, attempts);
        }
    };
    report.candidates = cands.programs.len();
    report.discarded = cands.discarded.len();

    let mut scfg = cfg.synthesis.clone();
    scfg.seed = cfg.seed;
    if let Some(v) = cfg.variant {
        v.apply(&mut scfg);
    }
    let mut examples = task.examples.clone();
    let mut iteration = 0;
    loop {
        let t0 = Instant::now();
        let outcome = run_engine(&examples, &cands, &scfg);
        attempts.push(t0.elapsed().as_millis() as u64);
        let outcome = match outcome {
            Ok(o) => o,
            Err(e) => {
                report.reason = Some(e.to_string());
                break;
            }
        };
        if report.initial_cache == 0 {
            report.initial_cache = outcome.initial_sizes.iter().sum();
        }
        report.iterations = iteration;
        let Some(program) = outcome.program else {
            report.program = None;
            report.reason = Some(if outcome.timed_out {
                "time budget exhausted".into()
            } else {
                "no consistent program".into()
            });
            break;
        };
        report.program = Some(lang.print(&program));
        log::info!(
            "{}: iteration {iteration}: {}",
            task.name,
            lang.print(&program)
        );
        let Some(g) = &ground_truth else {
            report.status = Status::Unverified;
            break;
        };
        let (verdict, witnesses) = compare_terms(&program, g, &examples, &cfg.equivalence);
        report.verdict = Some(verdict);
        match verdict {
            Verdict::Equivalent => {
                report.status = Status::Solved;
                break;
            }
            Verdict::Unknown => {
                report.reason = Some("equivalence undecided within bound".into());
                break;
            }
            Verdict::Different => {}
        }
        if iteration == MAX_ITERATIONS {
            report.reason = Some("refinement limit reached".into());
            break;
        }
        for w in &witnesses {
            add_example(&mut examples, w);
        }
        report.added_examples.extend(witnesses);
        iteration += 1;
    }
    finish(report, attempts)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub variant: Option<Variant>,
    pub seed: u64,
    pub tasks: Vec<TaskReport>,
    pub solved: usize,
    pub total: usize,
    pub accuracy: f64,
    /// Solved tasks by number of refinement rounds needed.
    pub iteration_histogram: BTreeMap<usize, usize>,
}

impl SuiteReport {
    /// Fixed-width table for terminals.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let w = self
            .tasks
            .iter()
            .map(|t| t.name.len())
            .max()
            .unwrap_or(4)
            .max(4);
        s.push_str(&format!(
            "{:w$}  {:<5}  {:<10}  {:>4}  {:>7}  program\n",
            "task", "lang", "status", "iter", "ms"
        ));
        for t in &self.tasks {
            let lang = match t.language {
                Language::Regex => "regex",
                Language::Css => "css",
            };
            let status = format!("{:?}", t.status).to_lowercase();
            let prog = t
                .program
                .clone()
                .or_else(|| t.reason.clone().map(|r| format!("({r})")))
                .unwrap_or_default();
            let ms = t.wall_ms.map(|m| m.to_string()).unwrap_or("-".into());
            s.push_str(&format!(
                "{:w$}  {:<5}  {:<10}  {:>4}  {:>7}  {}\n",
                t.name, lang, status, t.iterations, ms, prog
            ));
        }
        s.push_str(&format!(
            "\naccuracy {:.3} ({}/{})\n",
            self.accuracy, self.solved, self.total
        ));
        s.push_str("iterations:");
        for (k, v) in &self.iteration_histogram {
            s.push_str(&format!(" {k}:{v}"));
        }
        s.push('\n');
        s
    }
}

#[cfg(feature = "parallel")]
fn run_all(tasks: &[BenchmarkTask], cfg: &HarnessConfig) -> Vec<TaskReport> {
    use rayon::prelude::*;
    tasks.par_iter().map(|t| run_task(t, cfg)).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_all(tasks: &[BenchmarkTask], cfg: &HarnessConfig) -> Vec<TaskReport> {
    tasks.iter().map(|t| run_task(t, cfg)).collect()
}

pub fn run_suite(
    tasks: &[BenchmarkTask],
    cfg: &HarnessConfig,
) -> Result<SuiteReport, HarnessError> {
    if tasks.is_empty() {
        return Err(HarnessError::NoTasks);
    }
    let reports = run_all(tasks, cfg);
    let solved = reports
        .iter()
        .filter(|r| r.status == Status::Solved)
        .count();
    let mut hist = BTreeMap::new();
    for r in reports.iter().filter(|r| r.status == Status::Solved) {
        *hist.entry(r.iterations).or_insert(0) += 1;
    }
    Ok(SuiteReport {
        variant: cfg.variant,
        seed: cfg.seed,
        total: reports.len(),
        solved,
        accuracy: solved as f64 / reports.len() as f64,
        iteration_histogram: hist,
        tasks: reports,
    })
}

/// A task as written in a suite file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskRecord {
    pub name: String,
    pub domain: Language,
    pub nl: String,
    #[serde(default)]
    pub examples: Vec<ExampleRecord>,
    #[serde(default)]
    pub ground_truth: Option<String>,
    /// Candidate fixture, relative to the suite file.
    #[serde(default)]
    pub fixture: Option<PathBuf>,
    #[serde(default)]
    pub candidates: Option<Vec<String>>,
    /// Document for selector tasks, relative to the suite file.
    #[serde(default)]
    pub document: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteFile {
    pub tasks: Vec<TaskRecord>,
}

fn read(path: &Path) -> Result<String, HarnessError> {
    std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })
}

impl TaskRecord {
    /// Resolves paths against `base` and loads the document.
    pub fn resolve(&self, base: &Path) -> Result<BenchmarkTask, String> {
        let examples = match self.domain {
            Language::Regex => {
                let mut es = Vec::new();
                for e in &self.examples {
                    match e {
                        ExampleRecord::Text { input, output } => {
                            es.push(RegexExample::new(input, *output))
                        }
                        ExampleRecord::Node { .. } => {
                            return Err("regex example given as a node".into())
                        }
                    }
                }
                TaskExamples::Regex(es)
            }
            Language::Css => {
                let path = self
                    .document
                    .as_ref()
                    .ok_or("selector task needs a document")?;
                let doc = css::load_document_file(&base.join(path)).map_err(|e| e.to_string())?;
                let mut es = Vec::new();
                for e in &self.examples {
                    match e {
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
                            return Err("selector example given as text".into())
                        }
                    }
                }
                TaskExamples::Css {
                    document: Arc::new(doc),
                    examples: es,
                }
            }
        };
        let candidates = match (&self.fixture, &self.candidates) {
            (Some(f), _) => CandidateSpec::Fixture(base.join(f)),
            (None, Some(c)) => CandidateSpec::Inline(c.clone()),
            (None, None) => CandidateSpec::Live,
        };
        Ok(BenchmarkTask {
            name: self.name.clone(),
            nl: self.nl.clone(),
            examples,
            ground_truth: self.ground_truth.clone(),
            candidates,
        })
    }
}

/// Loads a suite file; tasks that fail to resolve come back as errors.
pub fn load_suite(
    path: &Path,
) -> Result<Vec<Result<BenchmarkTask, (String, String)>>, HarnessError> {
    let suite: SuiteFile = serde_json::from_str(&read(path)?)?;
    let base = path.parent().unwrap_or(Path::new("."));
    Ok(suite
        .tasks
        .iter()
        .map(|r| r.resolve(base).map_err(|e| (r.name.clone(), e)))
        .collect())
}

/// Runs a suite file; unresolvable tasks are reported as skipped.
pub fn run_suite_file(path: &Path, cfg: &HarnessConfig) -> Result<SuiteReport, HarnessError> {
    let loaded = load_suite(path)?;
    if loaded.is_empty() {
        return Err(HarnessError::NoTasks);
    }
    let tasks: Vec<BenchmarkTask> = loaded
        .iter()
        .filter_map(|r| r.as_ref().ok().cloned())
        .collect();
    let mut report = if tasks.is_empty() {
        SuiteReport {
            variant: cfg.variant,
            seed: cfg.seed,
            tasks: Vec::new(),
            solved: 0,
            total: 0,
            accuracy: 0.0,
            iteration_histogram: BTreeMap::new(),
        }
    } else {
        run_suite(&tasks, cfg)?
    };
    let mut ordered = Vec::new();
    let mut done = report.tasks.drain(..);
    for r in &loaded {
        match r {
            Ok(_) => ordered.extend(done.next()),
            Err((name, why)) => ordered.push(TaskReport {
                name: name.clone(),
                language: Language::Regex,
                status: Status::Skipped,
                iterations: 0,
                program: None,
                verdict: None,
                reason: Some(why.clone()),
                candidates: 0,
                discarded: 0,
                initial_cache: 0,
                added_examples: Vec::new(),
                wall_ms: None,
                attempt_ms: None,
            }),
        }
    }
    drop(done);
    report.total = ordered.len();
    report.accuracy = report.solved as f64 / report.total as f64;
    report.tasks = ordered;
    Ok(report)
}
