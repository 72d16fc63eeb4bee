//! Component-based synthesis guided by candidate programs and examples.
//!
//! A [`Session`] holds one task: the candidate programs, the example-bearing
//! [`Domain`] and the memo tables. [`synthesize`] runs initialization and
//! repeated prune/expand rounds, then ranks the consistent closed terms.

mod css_domain;
mod regex_domain;

use std::collections::{HashMap, HashSet};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::Duration;

use dashmap::DashMap;
use fixedbitset::FixedBitSet;
use indexmap::{IndexMap, IndexSet};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use web_time::Instant;

use crate::dsl::{count_containing, DslDefinition, Literal, OpId, OpVector, SortId, Term};

pub use css_domain::CssDomain;
pub use regex_domain::RegexDomain;

/// What a term does on the examples' inputs; equal values put terms in the
/// same semantic class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Interpretation {
    Bits(FixedBitSet),
    Literal(Literal),
    Bottom,
}

impl Interpretation {
    pub fn from_bools(bits: impl IntoIterator<Item = bool>) -> Self {
        let v: Vec<bool> = bits.into_iter().collect();
        let mut s = FixedBitSet::with_capacity(v.len());
        for (i, b) in v.into_iter().enumerate() {
            s.set(i, b);
        }
        Interpretation::Bits(s)
    }
}

/// A target language together with the inputs of one example set.
pub trait Domain: Sync {
    type Sem: Send + Sync;

    fn dsl(&self) -> &'static DslDefinition;

    fn print(&self, t: &Term) -> String;

    /// Whether `op(args)` is worth building at all.
    fn admissible(&self, _op: OpId, _args: &[&Term]) -> bool {
        true
    }

    /// Denotation of `t` from its children's denotations.
    fn eval(&self, t: &Term, kids: &[&Self::Sem]) -> Self::Sem;

    /// The semantic class key of `t`. Terms with equal keys must stay
    /// interchangeable inside any larger term.
    fn observe(&self, t: &Term, sem: &Self::Sem) -> Interpretation;

    /// What a closed term outputs on each example, compared with `expected`.
    fn outputs(&self, t: &Term, sem: &Self::Sem) -> Interpretation {
        self.observe(t, sem)
    }

    /// Outputs that satisfy every example.
    fn expected(&self) -> Interpretation;

    fn example_count(&self) -> usize;
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SynthesisConfig {
    pub synth_depth: usize,
    pub pr_occ: f64,
    pub pr_red: f64,
    pub beam_size: usize,
    pub op_th: f64,
    pub time_budget: Option<Duration>,
    /// Start from every component of every candidate, unfiltered.
    pub init_all_atoms: bool,
    /// Expand the whole cache instead of the pruned one.
    pub full_expansion: bool,
    /// Pick uniformly among consistent terms instead of ranking.
    pub random_rank: bool,
    pub seed: u64,
    /// Stop as soon as an expansion round yields a consistent closed term.
    pub early_stop: bool,
    /// Merge new terms into the pruned cache rather than the full one.
    pub merge_into_pruned: bool,
    /// Hard cap on terms built per operator per round.
    pub max_new_per_op: usize,
}

impl Default for SynthesisConfig {
    fn default() -> Self {
        SynthesisConfig {
            synth_depth: 3,
            pr_occ: 0.1,
            pr_red: 0.0,
            beam_size: 2000,
            op_th: 1.0,
            time_budget: Some(Duration::from_secs(60)),
            init_all_atoms: false,
            full_expansion: false,
            random_rank: false,
            seed: 0,
            early_stop: false,
            merge_into_pruned: false,
            max_new_per_op: 400_000,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum EngineError {
    #[error("no candidates")]
    NoCandidates,
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl SynthesisConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        if self.beam_size == 0 {
            return Err(EngineError::Config("beam size must be at least 1".into()));
        }
        if self.synth_depth == 0 {
            return Err(EngineError::Config("depth must be at least 1".into()));
        }
        for (name, v) in [("pr_occ", self.pr_occ), ("pr_red", self.pr_red)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(EngineError::Config(format!("{name} must lie in [0, 1]")));
            }
        }
        Ok(())
    }
}

/// Terms bucketed by sort, in insertion order.
#[derive(Debug, Clone, PartialEq)]
pub struct Cache {
    sets: Vec<IndexSet<Term>>,
}

impl Cache {
    pub fn new(sorts: usize) -> Self {
        Cache {
            sets: vec![IndexSet::new(); sorts],
        }
    }

    pub fn get(&self, s: SortId) -> &IndexSet<Term> {
        &self.sets[s.0 as usize]
    }

    pub fn insert(&mut self, t: Term) -> bool {
        self.sets[t.sort().0 as usize].insert(t)
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.sets[t.sort().0 as usize].contains(t)
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.sets.iter().map(IndexSet::len).collect()
    }

    pub fn len(&self) -> usize {
        self.sets.iter().map(IndexSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = &Term> {
        self.sets.iter().flatten()
    }
}

/// Per-term facts used by pruning and ranking.
#[derive(Debug, Clone)]
pub struct TermInfo {
    pub obs: Interpretation,
    pub hamming: usize,
    pub euclid: f64,
    /// Some proper sub-term of the same sort has the same interpretation.
    pub redundant: bool,
    pub consistent: bool,
}

struct Evald<S> {
    sem: S,
    obs: Interpretation,
    opvec: OpVector,
    /// Interpretations of this term and all its sub-terms, by sort.
    below: Arc<HashSet<(SortId, Interpretation)>>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct RoundStats {
    pub pruned_sizes: Vec<usize>,
    pub built: usize,
    pub cache_sizes: Vec<usize>,
    pub consistent: usize,
    pub truncated_ops: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SynthesisOutcome {
    #[serde(skip)]
    pub program: Option<Term>,
    pub printed: Option<String>,
    pub candidates: usize,
    pub initial_sizes: Vec<usize>,
    pub rounds: Vec<RoundStats>,
    pub consistent: usize,
    pub timed_out: bool,
    #[serde(skip)]
    pub elapsed: Duration,
}

pub struct Session<'a, D: Domain> {
    domain: &'a D,
    cfg: SynthesisConfig,
    programs: Vec<Term>,
    sources: Vec<String>,
    avg: OpVector,
    expected: Interpretation,
    evald: DashMap<Term, Arc<Evald<D::Sem>>>,
    info: DashMap<Term, TermInfo>,
    deadline: Option<Instant>,
    timed_out: AtomicBool,
}

impl<'a, D: Domain> Session<'a, D> {
    /// `sources` are the candidates' source strings, used for string distance
    /// in ranking; when empty the printed programs stand in.
    pub fn new(
        domain: &'a D,
        programs: &[Term],
        sources: &[String],
        cfg: SynthesisConfig,
    ) -> Result<Self, EngineError> {
        cfg.validate()?;
        let dsl = domain.dsl();
        let avg = dsl
            .average_op_vector(programs)
            .map_err(|_| EngineError::NoCandidates)?;
        let sources = if sources.is_empty() {
            programs.iter().map(|p| domain.print(p)).collect()
        } else {
            sources.to_vec()
        };
        let deadline = cfg.time_budget.map(|b| Instant::now() + b);
        Ok(Session {
            domain,
            cfg,
            programs: programs.to_vec(),
            sources,
            avg,
            expected: domain.expected(),
            evald: DashMap::new(),
            info: DashMap::new(),
            deadline,
            timed_out: AtomicBool::new(false),
        })
    }

    pub fn config(&self) -> &SynthesisConfig {
        &self.cfg
    }

    pub fn average_op_vector(&self) -> &OpVector {
        &self.avg
    }

    fn out_of_time(&self) -> bool {
        if self.timed_out.load(Ordering::Relaxed) {
            return true;
        }
        match self.deadline {
            Some(d) if Instant::now() >= d => {
                self.timed_out.store(true, Ordering::Relaxed);
                true
            }
            _ => false,
        }
    }

    pub fn timed_out(&self) -> bool {
        self.timed_out.load(Ordering::Relaxed)
    }

    /// Fraction of candidates containing `t`.
    pub fn occurrence(&self, t: &Term) -> f64 {
        count_containing(t, &self.programs) as f64 / self.programs.len() as f64
    }

    pub fn initialize(&self) -> Cache {
        initialize(&self.programs, &self.cfg, self.domain.dsl())
    }

    fn ensure(&self, t: &Term) -> Arc<Evald<D::Sem>> {
        if let Some(e) = self.evald.get(t) {
            return e.clone();
        }
        let kids: Vec<Arc<Evald<D::Sem>>> = t.children().iter().map(|c| self.ensure(c)).collect();
        let e = Arc::new(self.evaluate(t, &kids));
        self.evald.insert(t.clone(), e.clone());
        e
    }

    fn evaluate(&self, t: &Term, kids: &[Arc<Evald<D::Sem>>]) -> Evald<D::Sem> {
        let refs: Vec<&D::Sem> = kids.iter().map(|k| &k.sem).collect();
        let sem = self.domain.eval(t, &refs);
        let obs = self.domain.observe(t, &sem);
        let opvec = self.opvec_from(t, kids.iter().map(|k| &k.opvec));
        let mut below: HashSet<(SortId, Interpretation)> = HashSet::new();
        for k in kids {
            below.extend(k.below.iter().cloned());
        }
        below.insert((t.sort(), obs.clone()));
        Evald {
            sem,
            obs,
            opvec,
            below: Arc::new(below),
        }
    }

    fn opvec_from<'v>(&self, t: &Term, kids: impl Iterator<Item = &'v OpVector>) -> OpVector {
        let mut v = vec![0.0; self.avg.len()];
        if let Some(op) = t.op() {
            v[op.index()] += 1.0;
        }
        for k in kids {
            for (a, b) in v.iter_mut().zip(&k.0) {
                *a += b;
            }
        }
        OpVector(v)
    }

    fn satisfies(&self, t: &Term, sem: &D::Sem) -> bool {
        t.sort() == self.domain.dsl().closed_sort() && self.domain.outputs(t, sem) == self.expected
    }

    fn info_from(
        &self,
        t: &Term,
        obs: Interpretation,
        opvec: &OpVector,
        kids: &[&Evald<D::Sem>],
        consistent: bool,
    ) -> TermInfo {
        let key = (t.sort(), obs);
        let redundant = kids.iter().any(|k| k.below.contains(&key));
        TermInfo {
            hamming: opvec.hamming(&self.avg, self.cfg.op_th),
            euclid: opvec.euclidean(&self.avg),
            obs: key.1,
            redundant,
            consistent,
        }
    }

    pub fn info(&self, t: &Term) -> TermInfo {
        if let Some(i) = self.info.get(t) {
            return i.clone();
        }
        let e = self.ensure(t);
        let kids: Vec<Arc<Evald<D::Sem>>> = t.children().iter().map(|c| self.ensure(c)).collect();
        let refs: Vec<&Evald<D::Sem>> = kids.iter().map(|k| k.as_ref()).collect();
        let i = self.info_from(t, e.obs.clone(), &e.opvec, &refs, self.satisfies(t, &e.sem));
        self.info.insert(t.clone(), i.clone());
        i
    }

    pub fn hamming_distance(&self, t: &Term) -> usize {
        self.domain
            .dsl()
            .op_vector(t)
            .hamming(&self.avg, self.cfg.op_th)
    }

    pub fn euclidean_distance(&self, t: &Term) -> f64 {
        self.domain.dsl().op_vector(t).euclidean(&self.avg)
    }

    pub fn interpretation(&self, t: &Term) -> Interpretation {
        self.ensure(t).obs.clone()
    }

    pub fn consistent(&self, t: &Term) -> bool {
        self.satisfies(t, &self.ensure(t).sem)
    }

    /// Semantic condensation of each sort, returned in ascending distance order.
    pub fn prune(&self, cache: &Cache) -> Cache {
        let mut out = Cache::new(cache.sets.len());
        for set in &cache.sets {
            let mut v3: Vec<(Term, TermInfo)> = Vec::new();
            for t in set {
                let i = self.info(t);
                if i.hamming == 0 && !i.redundant {
                    v3.push((t.clone(), i));
                }
            }
            let total = v3.len();
            let mut classes: IndexMap<Interpretation, Vec<(Term, f64)>> = IndexMap::new();
            for (t, i) in v3 {
                classes.entry(i.obs).or_default().push((t, i.euclid));
            }
            let mut kept: Vec<(Term, f64)> = Vec::new();
            for (_, mut class) in classes {
                let quota = class_quota(class.len(), total, self.cfg.beam_size);
                class.sort_by(|a, b| by_distance(a, b));
                class.truncate(quota);
                kept.extend(class);
            }
            kept.sort_by(by_distance);
            for (t, _) in kept {
                out.insert(t);
            }
        }
        out
    }

    /// One round: prune, apply every operator to the survivors, merge.
    ///
    /// Every new term is kept.
    pub fn expand(&self, cache: &Cache) -> Cache {
        self.expand_with(cache, true, &mut RoundStats::default())
    }

    fn expand_with(&self, cache: &Cache, keep_all: bool, stats: &mut RoundStats) -> Cache {
        let dsl = self.domain.dsl();
        let pruned = if self.cfg.full_expansion {
            cache.clone()
        } else {
            self.prune(cache)
        };
        stats.pruned_sizes = pruned.sizes();
        let args: Vec<Vec<(Term, Arc<Evald<D::Sem>>)>> = pruned
            .sets
            .iter()
            .map(|s| s.iter().map(|t| (t.clone(), self.ensure(t))).collect())
            .collect();
        let mut merged = if self.cfg.merge_into_pruned {
            pruned.clone()
        } else {
            cache.clone()
        };
        for op in dsl.operators() {
            if self.out_of_time() {
                break;
            }
            let pools: Vec<&[(Term, Arc<Evald<D::Sem>>)]> = op
                .arg_sorts
                .iter()
                .map(|s| args[s.0 as usize].as_slice())
                .collect();
            let lens: Vec<usize> = pools.iter().map(|p| p.len()).collect();
            let cap = self.cfg.max_new_per_op;
            let (mut tuples, mut truncated) =
                tuples_by_rank(&lens, op.commutative, cap.saturating_mul(SCAN_FACTOR));
            if tuples.len() > cap {
                truncated = true;
                tuples = self.closest_tuples(tuples, op.index, &pools, cap);
            }
            if truncated {
                log::warn!(
                    "{}: expansion truncated at {} terms",
                    op.name,
                    self.cfg.max_new_per_op
                );
                stats.truncated_ops.push(op.name.clone());
            }
            let opid = OpId(op.index as u16);
            let ret = op.ret_sort;
            let build = |tuple: &Vec<u32>| -> Option<(Term, TermInfo)> {
                if self.out_of_time() {
                    return None;
                }
                let picked: Vec<&(Term, Arc<Evald<D::Sem>>)> = tuple
                    .iter()
                    .zip(&pools)
                    .map(|(&i, p)| &p[i as usize])
                    .collect();
                let terms: Vec<&Term> = picked.iter().map(|(t, _)| t).collect();
                if !self.domain.admissible(opid, &terms) {
                    return None;
                }
                let t = Term::apply_unchecked(opid, ret, terms.into_iter().cloned().collect());
                if merged.contains(&t) {
                    return None;
                }
                let kids: Vec<&Evald<D::Sem>> = picked.iter().map(|(_, e)| e.as_ref()).collect();
                let sems: Vec<&D::Sem> = kids.iter().map(|k| &k.sem).collect();
                let sem = self.domain.eval(&t, &sems);
                let obs = self.domain.observe(&t, &sem);
                let opvec = self.opvec_from(&t, kids.iter().map(|k| &k.opvec));
                let consistent = self.satisfies(&t, &sem);
                let info = self.info_from(&t, obs, &opvec, &kids, consistent);
                let keep = keep_all || info.consistent || (info.hamming == 0 && !info.redundant);
                keep.then_some((t, info))
            };
            let built = par_filter_map(&tuples, build);
            stats.built += tuples.len();
            for (t, info) in built {
                if merged.insert(t.clone()) {
                    self.info.insert(t, info);
                }
            }
        }
        stats.cache_sizes = merged.sizes();
        merged
    }

    /// The `cap` tuples whose result would sit closest to the candidates'
    /// operator profile, judged from the arguments' operator vectors.
    fn closest_tuples(
        &self,
        tuples: Vec<Vec<u32>>,
        op: usize,
        pools: &[&[(Term, Arc<Evald<D::Sem>>)]],
        cap: usize,
    ) -> Vec<Vec<u32>> {
        let avg = &self.avg.0;
        let th = self.cfg.op_th;
        let mut v = vec![0.0; avg.len()];
        let mut keyed: Vec<(usize, f64, usize)> = tuples
            .iter()
            .enumerate()
            .map(|(n, tuple)| {
                v.iter_mut().for_each(|x| *x = 0.0);
                v[op] = 1.0;
                for (&i, pool) in tuple.iter().zip(pools) {
                    for (x, y) in v.iter_mut().zip(&pool[i as usize].1.opvec.0) {
                        *x += y;
                    }
                }
                let ham = v
                    .iter()
                    .zip(avg)
                    .filter(|(x, a)| **x > th && **a < th)
                    .count();
                let d: f64 = v.iter().zip(avg).map(|(x, a)| (x - a) * (x - a)).sum();
                (ham, d, n)
            })
            .collect();
        let by_key = |a: &(usize, f64, usize), b: &(usize, f64, usize)| {
            a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.cmp(&b.2))
        };
        keyed.select_nth_unstable_by(cap - 1, by_key);
        keyed.truncate(cap);
        keyed.sort_by(by_key);
        let mut tuples: Vec<Option<Vec<u32>>> = tuples.into_iter().map(Some).collect();
        keyed
            .into_iter()
            .filter_map(|(_, _, n)| tuples[n].take())
            .collect()
    }

    /// Consistent closed terms of `cache`.
    pub fn consistent_terms(&self, cache: &Cache) -> Vec<Term> {
        cache
            .get(self.domain.dsl().closed_sort())
            .iter()
            .filter(|t| self.info(t).consistent)
            .cloned()
            .collect()
    }

    fn mean_lev(&self, t: &Term) -> f64 {
        let s = self.domain.print(t);
        let total: usize = self
            .sources
            .iter()
            .map(|p| strsim::levenshtein(&s, p))
            .sum();
        total as f64 / self.sources.len() as f64
    }

    fn rank_key(&self, t: &Term) -> (f64, f64, usize, String) {
        (
            self.info(t).euclid,
            self.mean_lev(t),
            t.size(),
            self.domain.print(t),
        )
    }

    /// Orders terms by distance to the candidates' operator profile, then by
    /// mean edit distance to the candidates' source text.
    pub fn rank(&self, terms: &[Term]) -> Vec<Term> {
        let mut keyed: Vec<_> = terms
            .iter()
            .map(|t| (self.rank_key(t), t.clone()))
            .collect();
        keyed.sort_by(|(a, ta), (b, tb)| cmp_key(a, b).then_with(|| ta.cmp(tb)));
        keyed.into_iter().map(|(_, t)| t).collect()
    }

    fn choose(&self, terms: &[Term]) -> Option<Term> {
        if self.cfg.random_rank {
            let mut sorted = terms.to_vec();
            sorted.sort();
            let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
            return sorted.choose(&mut rng).cloned();
        }
        let best = terms
            .iter()
            .map(|t| self.info(t).euclid)
            .fold(f64::INFINITY, f64::min);
        let ties: Vec<Term> = terms
            .iter()
            .filter(|t| self.info(t).euclid == best)
            .cloned()
            .collect();
        self.rank(&ties).into_iter().next()
    }

    pub fn run(&self) -> SynthesisOutcome {
        let start = Instant::now();
        let mut cache = self.initialize();
        let initial_sizes = cache.sizes();
        let mut rounds = Vec::new();
        let closed = self.domain.dsl().closed_sort();
        let mut found: Vec<Term> = Vec::new();
        for _ in 0..self.cfg.synth_depth {
            if self.out_of_time() {
                break;
            }
            let mut stats = RoundStats::default();
            cache = self.expand_with(&cache, false, &mut stats);
            found = self.consistent_terms(&cache);
            stats.consistent = found.len();
            log::debug!(
                "round {}: built {}, cache {:?}, consistent {}",
                rounds.len() + 1,
                stats.built,
                stats.cache_sizes,
                stats.consistent
            );
            rounds.push(stats);
            if self.cfg.early_stop && !found.is_empty() {
                break;
            }
        }
        if rounds.is_empty() {
            found = self.consistent_terms(&cache);
        }
        debug_assert!(found.iter().all(|t| t.sort() == closed));
        let program = self.choose(&found);
        SynthesisOutcome {
            printed: program.as_ref().map(|p| self.domain.print(p)),
            program,
            candidates: self.programs.len(),
            initial_sizes,
            rounds,
            consistent: found.len(),
            timed_out: self.timed_out(),
            elapsed: start.elapsed(),
        }
    }
}

fn cmp_key(a: &(f64, f64, usize, String), b: &(f64, f64, usize, String)) -> std::cmp::Ordering {
    a.0.total_cmp(&b.0)
        .then(a.1.total_cmp(&b.1))
        .then(a.2.cmp(&b.2))
        .then_with(|| a.3.cmp(&b.3))
}

fn by_distance(a: &(Term, f64), b: &(Term, f64)) -> std::cmp::Ordering {
    a.1.total_cmp(&b.1)
        .then(a.0.size().cmp(&b.0.size()))
        .then_with(|| a.0.cmp(&b.0))
}

/// How many tuples per operator are scored before the cap applies.
const SCAN_FACTOR: usize = 16;

/// `ceil(class / total * beam)`, at least 1 and at most the class size.
pub fn class_quota(class: usize, total: usize, beam: usize) -> usize {
    if total == 0 {
        return 0;
    }
    let q = (class as f64 / total as f64 * beam as f64).ceil();
    (q.max(1.0) as usize).min(class)
}

/// Argument index tuples in order of increasing index sum, so a truncated
/// enumeration favours the best-ranked arguments. Commutative operators only
/// get tuples with `i <= j`.
fn tuples_by_rank(lens: &[usize], commutative: bool, cap: usize) -> (Vec<Vec<u32>>, bool) {
    let mut out = Vec::new();
    if lens.iter().any(|&l| l == 0) {
        return (out, false);
    }
    if lens.is_empty() {
        out.push(Vec::new());
        return (out, false);
    }
    let max_sum: usize = lens.iter().map(|l| l - 1).sum();
    let mut prefix = Vec::with_capacity(lens.len());
    for s in 0..=max_sum {
        if !with_sum(lens, s, commutative, cap, &mut prefix, &mut out) {
            return (out, true);
        }
    }
    (out, false)
}

fn with_sum(
    lens: &[usize],
    rest: usize,
    commutative: bool,
    cap: usize,
    prefix: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) -> bool {
    let k = prefix.len();
    if k == lens.len() {
        if rest != 0 {
            return true;
        }
        if out.len() >= cap {
            return false;
        }
        out.push(prefix.clone());
        return true;
    }
    let room: usize = lens[k + 1..].iter().map(|l| l - 1).sum();
    let lo = rest.saturating_sub(room);
    let mut hi = rest.min(lens[k] - 1);
    if commutative && k == 0 {
        hi = hi.min(rest / 2);
    }
    for i in lo..=hi {
        if lo > hi {
            break;
        }
        prefix.push(i as u32);
        let ok = with_sum(lens, rest - i, commutative, cap, prefix, out);
        prefix.pop();
        if !ok {
            return false;
        }
    }
    true
}

#[cfg(feature = "parallel")]
fn par_filter_map<T: Sync, R: Send>(
    items: &[T],
    f: impl Fn(&T) -> Option<R> + Sync + Send,
) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().filter_map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_filter_map<T, R>(items: &[T], f: impl Fn(&T) -> Option<R>) -> Vec<R> {
    items.iter().filter_map(f).collect()
}

/// Components of the candidates that occur often enough and are not always
/// subsumed by an equally frequent larger component, plus the standard
/// components.
pub fn initialize(programs: &[Term], cfg: &SynthesisConfig, dsl: &DslDefinition) -> Cache {
    let mut cache = Cache::new(dsl.sort_count());
    if programs.is_empty() {
        log::warn!("no candidate programs; starting from standard components only");
    }
    let mut v1: IndexSet<Term> = IndexSet::new();
    for p in programs {
        v1.extend(p.subterms());
    }
    if cfg.init_all_atoms {
        for t in v1 {
            cache.insert(t);
        }
    } else {
        let cnt: HashMap<&Term, usize> = v1
            .iter()
            .map(|t| (t, count_containing(t, programs)))
            .collect();
        let n = programs.len().max(1) as f64;
        for t in &v1 {
            if (cnt[t] as f64) / n < cfg.pr_occ {
                continue;
            }
            let supers: Vec<&Term> = v1.iter().filter(|u| u.contains(t)).collect();
            let redundant = supers
                .iter()
                .filter(|u| **u != t && cnt[**u] == cnt[t])
                .count();
            if redundant as f64 / supers.len() as f64 <= cfg.pr_red {
                cache.insert(t.clone());
            }
        }
    }
    for s in dsl.standard_components() {
        cache.insert(s.clone());
    }
    cache
}

/// Runs the whole search for one example set.
pub fn synthesize<D: Domain>(
    domain: &D,
    programs: &[Term],
    sources: &[String],
    cfg: &SynthesisConfig,
) -> Result<SynthesisOutcome, EngineError> {
    if programs.is_empty() {
        return Err(EngineError::NoCandidates);
    }
    if domain.example_count() == 0 {
        let closed = domain.dsl().closed_sort();
        let program = programs.iter().find(|p| p.sort() == closed).cloned();
        return Ok(SynthesisOutcome {
            printed: program.as_ref().map(|p| domain.print(p)),
            program,
            candidates: programs.len(),
            initial_sizes: Vec::new(),
            rounds: Vec::new(),
            consistent: 0,
            timed_out: false,
            elapsed: Duration::ZERO,
        });
    }
    Ok(Session::new(domain, programs, sources, cfg.clone())?.run())
}
