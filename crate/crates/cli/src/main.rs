use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use multisynth::candidates::{self, CandidateSet, CompletionConfig};
use multisynth::cegis::{
    self, BenchmarkTask, CandidateSpec, HarnessConfig, TaskExamples, TaskRecord, Variant,
};
use multisynth::engine::{self, CssDomain, RegexDomain, SynthesisConfig, SynthesisOutcome};
use multisynth::prompt::{self, Metric, PromptConfig, QACorpus};
use multisynth::Language;

const DEFAULT_SEED: u64 = 7;

/// Program synthesis from natural language and examples.
///
/// Exit status: 0 on success, 2 when no consistent program exists, 1 on errors.
/// The completion API key is read from the environment variable named by
/// --api-key-env (default MULTISYNTH_API_KEY).
#[derive(Parser)]
#[command(name = "multisynth", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Synthesize a program for one task file.
    Synth(SynthArgs),
    /// Print the few-shot prompt for a question.
    Prompt(PromptArgs),
    /// Fetch or replay candidate programs and show how they parse.
    Candidates(CandidatesArgs),
    /// Run a task suite with example refinement and write a report.
    Bench(BenchArgs),
}

#[derive(Args, Clone)]
struct EngineArgs {
    /// Maximum terms kept per sort after pruning.
    #[arg(long, default_value_t = 2000, value_parser = clap::value_parser!(u64).range(1..))]
    beam_size: u64,
    /// Number of expansion rounds.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    depth: u64,
    /// Minimum share of candidates a component must occur in.
    #[arg(long, default_value_t = 0.1)]
    pr_occ: f64,
    /// Maximum share of equally frequent super-components tolerated.
    #[arg(long, default_value_t = 0.0)]
    pr_red: f64,
    /// Operator-count threshold for the distance filter.
    #[arg(long, default_value_t = 1.0)]
    op_th: f64,
    /// Seconds per synthesis attempt.
    #[arg(long, default_value_t = 60.0)]
    time_budget: f64,
    /// Ablation variant: v1, v2, v3 or v4.
    #[arg(long)]
    variant: Option<String>,
    /// Seed for every randomized choice.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Most terms built per operator in one expansion round.
    #[arg(long, default_value_t = 400_000, value_parser = clap::value_parser!(u64).range(1..))]
    max_new_per_op: u64,
    /// Count duplicate candidates separately.
    #[arg(long)]
    keep_duplicates: bool,
}

impl EngineArgs {
    fn config(&self) -> Result<SynthesisConfig> {
        if !(self.time_budget > 0.0) {
            bail!("--time-budget must be positive");
        }
        let mut cfg = SynthesisConfig {
            synth_depth: self.depth as usize,
            pr_occ: self.pr_occ,
            pr_red: self.pr_red,
            beam_size: self.beam_size as usize,
            op_th: self.op_th,
            time_budget: Some(Duration::from_secs_f64(self.time_budget)),
            seed: self.seed,
            max_new_per_op: self.max_new_per_op as usize,
            ..SynthesisConfig::default()
        };
        cfg.validate()?;
        if let Some(v) = self.variant()? {
            v.apply(&mut cfg);
        }
        Ok(cfg)
    }

    fn variant(&self) -> Result<Option<Variant>> {
        match &self.variant {
            Some(v) => Ok(Some(v.parse().map_err(anyhow::Error::msg)?)),
            None => Ok(None),
        }
    }
}

#[derive(Args, Clone)]
struct LiveArgs {
    /// Completion endpoint URL.
    #[arg(long)]
    endpoint: Option<String>,
    /// Name of the environment variable holding the API key.
    #[arg(long, default_value = "MULTISYNTH_API_KEY")]
    api_key_env: String,
    /// Model name sent with each request.
    #[arg(long)]
    model: Option<String>,
    #[arg(long, default_value_t = 0.6)]
    temperature: f64,
    /// Number of completions requested.
    #[arg(long, default_value_t = 20)]
    n: usize,
    /// Question-answer corpus (JSON lines) for the prompt.
    #[arg(long)]
    corpus: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Tm,
    Tfidf,
}

#[derive(Args, Clone)]
struct PromptOpts {
    /// Number of question-answer pairs.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,
    /// Minimum edit distance between selected answers.
    #[arg(long, default_value_t = 5)]
    sim_threshold: usize,
    #[arg(long, value_enum, default_value_t = MetricArg::Tfidf)]
    metric: MetricArg,
    /// Prompt budget in approximate model tokens.
    #[arg(long, default_value_t = 2048)]
    max_prompt_tokens: usize,
}

impl PromptOpts {
    fn config(&self, lang: Language) -> PromptConfig {
        PromptConfig {
            k: self.k as usize,
            similarity_threshold: self.sim_threshold,
            metric: match self.metric {
                MetricArg::Tm => Metric::TokenMatch,
                MetricArg::Tfidf => Metric::Tfidf,
            },
            max_prompt_tokens: self.max_prompt_tokens,
            ..lang.prompt_config()
        }
    }
}

#[derive(Args)]
struct SynthArgs {
    /// Task file: {name, domain, nl, examples, ground_truth?, fixture?, candidates?, document?}.
    #[arg(long)]
    task: PathBuf,
    /// Candidate fixture, one program per line; overrides the task's.
    #[arg(long)]
    fixture: Option<PathBuf>,
    /// Document for selector tasks; overrides the task's.
    #[arg(long)]
    document: Option<PathBuf>,
    #[command(flatten)]
    engine: EngineArgs,
    #[command(flatten)]
    live: LiveArgs,
    #[command(flatten)]
    prompt: PromptOpts,
}

#[derive(Args)]
struct PromptArgs {
    #[arg(long, value_parser = parse_lang, default_value = "regex")]
    domain: Language,
    /// Question-answer corpus (JSON lines).
    #[arg(long)]
    corpus: PathBuf,
    /// The description to complete.
    #[arg(long)]
    question: String,
    /// Also print each selected pair's relevance.
    #[arg(long)]
    explain: bool,
    #[command(flatten)]
    prompt: PromptOpts,
}

#[derive(Args)]
struct CandidatesArgs {
    #[arg(long, value_parser = parse_lang, default_value = "regex")]
    domain: Language,
    /// Replay this fixture instead of calling the endpoint.
    #[arg(long)]
    fixture: Option<PathBuf>,
    /// Description used for the prompt in live mode.
    #[arg(long)]
    question: Option<String>,
    #[command(flatten)]
    live: LiveArgs,
    #[command(flatten)]
    prompt: PromptOpts,
    #[arg(long)]
    keep_duplicates: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Suite file: {"tasks": [task, ...]}.
    #[arg(long)]
    suite: PathBuf,
    /// Where to write the JSON report; standard output if absent.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Include wall-clock times in the report.
    #[arg(long)]
    timings: bool,
    /// Bound on string length for regex equivalence.
    #[arg(long, default_value_t = 8)]
    max_len: usize,
    #[command(flatten)]
    engine: EngineArgs,
    #[command(flatten)]
    live: LiveArgs,
    #[command(flatten)]
    prompt: PromptOpts,
}

fn parse_lang(s: &str) -> Result<Language, String> {
    s.parse()
}

fn completion_config(live: &LiveArgs, lang: Language, dedup: bool) -> Result<CompletionConfig> {
    if !(0.0..=1.0).contains(&live.temperature) {
        bail!("--temperature must lie in [0, 1]");
    }
    let mut cc = CompletionConfig::for_language(lang);
    if let Some(e) = &live.endpoint {
        cc.endpoint = e.clone();
    }
    cc.api_key_env = Some(live.api_key_env.clone());
    cc.model = live.model.clone();
    cc.temperature = live.temperature;
    cc.n_completions = live.n;
    cc.dedup = dedup;
    Ok(cc)
}

#[cfg(feature = "live")]
fn live_source(
    live: &LiveArgs,
    popts: &PromptOpts,
    lang: Language,
    dedup: bool,
) -> Result<Option<cegis::LiveSource>> {
    let Some(corpus) = &live.corpus else {
        return Ok(None);
    };
    let completion = completion_config(live, lang, dedup)?;
    let corpus = QACorpus::load(corpus, &completion.stop_sequence)?;
    let client = candidates::HttpClient::new(completion.timeout)?;
    Ok(Some(cegis::LiveSource {
        client: Box::new(client),
        completion,
        corpus,
        prompt: popts.config(lang),
    }))
}

#[cfg(not(feature = "live"))]
fn live_source(
    live: &LiveArgs,
    _: &PromptOpts,
    _: Language,
    _: bool,
) -> Result<Option<cegis::LiveSource>> {
    if live.corpus.is_some() {
        bail!("live completions are not compiled in");
    }
    Ok(None)
}

fn load_task(args: &SynthArgs) -> Result<BenchmarkTask> {
    let src = std::fs::read_to_string(&args.task)
        .with_context(|| format!("cannot read {}", args.task.display()))?;
    let mut rec: TaskRecord = serde_json::from_str(&src)
        .with_context(|| format!("{}: not a task file", args.task.display()))?;
    let cwd = std::env::current_dir()?;
    let base = args.task.parent().unwrap_or(Path::new("."));
    if let Some(f) = &args.fixture {
        rec.fixture = Some(cwd.join(f));
    }
    if let Some(d) = &args.document {
        rec.document = Some(cwd.join(d));
    }
    rec.resolve(base).map_err(anyhow::Error::msg)
}

fn fetch(task: &BenchmarkTask, args: &SynthArgs) -> Result<CandidateSet> {
    let lang = task.examples.language();
    let dedup = !args.engine.keep_duplicates;
    match &task.candidates {
        CandidateSpec::Fixture(p) => Ok(candidates::load_fixture(p, lang, dedup)
            .with_context(|| format!("fixture {}", p.display()))?),
        CandidateSpec::Inline(v) => Ok(candidates::load_fixture_str(&v.join("\n"), lang, dedup)?),
        CandidateSpec::Live => {
            let Some(live) = live_source(&args.live, &args.prompt, lang, dedup)? else {
                bail!("task has no candidates; give --fixture or --corpus with --endpoint");
            };
            let pairs = if args.engine.variant()? == Some(Variant::V4) {
                cegis::fixed_prompt_pairs(&live.corpus, live.prompt.k, args.engine.seed)
            } else {
                prompt::select_qa_pairs(&live.corpus, &task.nl, &live.prompt)
            };
            let text = prompt::build_prompt(&pairs, &task.nl, &live.prompt)?;
            Ok(candidates::get_candidates(
                &text,
                &live.completion,
                live.client.as_ref(),
                lang,
            )?)
        }
    }
}

fn diagnostics(cands: &CandidateSet, out: &SynthesisOutcome) {
    eprintln!(
        "candidates: {} parsed, {} discarded",
        cands.programs.len(),
        cands.discarded.len()
    );
    for (s, why) in &cands.discarded {
        eprintln!("  discarded {s:?}: {why}");
    }
    eprintln!(
        "initial components: {}",
        out.initial_sizes.iter().sum::<usize>()
    );
    for (i, r) in out.rounds.iter().enumerate() {
        eprintln!(
            "round {}: pruned {:?}, built {}, cache {:?}, consistent {}",
            i + 1,
            r.pruned_sizes,
            r.built,
            r.cache_sizes,
            r.consistent
        );
    }
    if out.timed_out {
        eprintln!("time budget exhausted");
    }
}

fn cmd_synth(args: &SynthArgs) -> Result<ExitCode> {
    let cfg = args.engine.config()?;
    let task = load_task(args)?;
    let cands = fetch(&task, args)?;
    if cands.programs.is_empty() {
        bail!("no candidates");
    }
    let out = match &task.examples {
        TaskExamples::Regex(es) => {
            engine::synthesize(&RegexDomain::new(es), &cands.programs, &cands.sources, &cfg)?
        }
        TaskExamples::Css { document, examples } => engine::synthesize(
            &CssDomain::new(document.clone(), examples),
            &cands.programs,
            &cands.sources,
            &cfg,
        )?,
    };
    diagnostics(&cands, &out);
    match out.printed {
        Some(p) => {
            println!("{p}");
            Ok(ExitCode::SUCCESS)
        }
        None => {
            eprintln!("no consistent program");
            Ok(ExitCode::from(2))
        }
    }
}

fn cmd_prompt(args: &PromptArgs) -> Result<ExitCode> {
    let cfg = args.prompt.config(args.domain);
    let corpus = QACorpus::load(&args.corpus, &cfg.question_marker)
        .with_context(|| format!("corpus {}", args.corpus.display()))?;
    if corpus.is_empty() {
        bail!("corpus {} is empty", args.corpus.display());
    }
    let pairs = prompt::select_qa_pairs(&corpus, &args.question, &cfg);
    let text = prompt::build_prompt(&pairs, &args.question, &cfg)?;
    println!("{text}");
    if args.explain {
        eprintln!("relevance ({:?}):", cfg.metric);
        for p in &pairs {
            let r = prompt::relevance(cfg.metric, &args.question, &p.question, &corpus);
            eprintln!("  {r:.4}  {}", p.question);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_candidates(args: &CandidatesArgs) -> Result<ExitCode> {
    let dedup = !args.keep_duplicates;
    let set = if let Some(f) = &args.fixture {
        candidates::load_fixture(f, args.domain, dedup)?
    } else {
        let Some(q) = &args.question else {
            bail!("give --fixture, or --question with --corpus for live completions");
        };
        let Some(live) = live_source(&args.live, &args.prompt, args.domain, dedup)? else {
            bail!("live mode needs --corpus");
        };
        let pairs = prompt::select_qa_pairs(&live.corpus, q, &live.prompt);
        let text = prompt::build_prompt(&pairs, q, &live.prompt)?;
        candidates::get_candidates(&text, &live.completion, live.client.as_ref(), args.domain)?
    };
    for (p, s) in set.programs.iter().zip(&set.sources) {
        println!("{}\t{}", args.domain.print(p), s);
    }
    for (s, why) in &set.discarded {
        eprintln!("discarded {s:?}: {why}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(args: &BenchArgs) -> Result<ExitCode> {
    let synthesis = args.engine.config()?;
    let dedup = !args.engine.keep_duplicates;
    let lang = Language::Regex;
    let cfg = HarnessConfig {
        synthesis,
        equivalence: cegis::EquivalenceConfig {
            max_len: args.max_len,
            ..Default::default()
        },
        variant: args.engine.variant()?,
        seed: args.engine.seed,
        dedup,
        timings: true,
        live: live_source(&args.live, &args.prompt, lang, dedup)?,
    };
    eprintln!("seed {}", cfg.seed);
    let mut report = cegis::run_suite_file(&args.suite, &cfg)?;
    let summary = report.summary();
    if !args.timings {
        for t in &mut report.tasks {
            t.wall_ms = None;
            t.attempt_ms = None;
        }
    }
    let json = serde_json::to_string_pretty(&report)? + "\n";
    match &args.report {
        Some(p) => {
            std::fs::write(p, &json).with_context(|| format!("cannot write {}", p.display()))?
        }
        None => print!("{json}"),
    }
    eprint!("{summary}");
    if report
        .tasks
        .iter()
        .all(|t| t.status == cegis::Status::Skipped)
    {
        bail!("no task ran");
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let res = match &cli.cmd {
        Cmd::Synth(a) => cmd_synth(a),
        Cmd::Prompt(a) => cmd_prompt(a),
        Cmd::Candidates(a) => cmd_candidates(a),
        Cmd::Bench(a) => cmd_bench(a),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
