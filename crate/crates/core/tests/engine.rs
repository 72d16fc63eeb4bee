mod common;

use std::collections::{HashMap, HashSet};

use common::{rx, toy};
use multisynth::dsl::{DslDefinition, Literal, OpVector, Term};
use multisynth::engine::{
    initialize, synthesize, Cache, Domain, Interpretation, RegexDomain, Session, SynthesisConfig,
};
use multisynth::regex::{self, parse_regex, RegexExample};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn regex_setup(seed: u64) -> (Vec<Term>, RegexDomain) {
    let mut g = common::rng(seed);
    let n = g.gen_range(1..5);
    let programs: Vec<Term> = (0..n).map(|_| rx::random_term(&mut g, 8)).collect();
    let examples: Vec<RegexExample> = (0..g.gen_range(1..5))
        .map(|_| {
            let s = rx::random_string(&mut g, 4);
            let out = g.gen_bool(0.5);
            RegexExample::new(&s, out)
        })
        .collect();
    (programs, RegexDomain::new(&examples))
}

fn small(beam: usize) -> SynthesisConfig {
    SynthesisConfig {
        beam_size: beam,
        time_budget: None,
        max_new_per_op: 2000,
        ..SynthesisConfig::default()
    }
}

/// Hamming distance computed from scratch over the candidates' mean profile.
fn hamming(dsl: &DslDefinition, t: &Term, programs: &[Term], th: f64) -> usize {
    let n = dsl.operators().len();
    let mut avg = vec![0.0; n];
    for p in programs {
        for (a, c) in avg.iter_mut().zip(dsl.op_vector(p).0) {
            *a += c / programs.len() as f64;
        }
    }
    let v: OpVector = dsl.op_vector(t);
    v.0.iter()
        .zip(&avg)
        .filter(|(x, a)| **x > th && **a < th)
        .count()
}

fn proper_subterms(t: &Term) -> Vec<Term> {
    t.subterms().into_iter().filter(|u| u != t).collect()
}

fn cache_terms(c: &Cache) -> HashSet<Term> {
    c.iter().cloned().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn survivors_are_unbiased_and_irredundant(seed in any::<u64>(), beam in 1usize..60) {
        let (programs, d) = regex_setup(seed);
        let s = Session::new(&d, &programs, &[], small(beam)).unwrap();
        let c = s.expand(&s.initialize());
        let pruned = s.prune(&c);
        for t in pruned.iter() {
            prop_assert_eq!(hamming(regex::dsl(), t, &programs, 1.0), 0);
            let obs = s.interpretation(t);
            for u in proper_subterms(t) {
                if u.sort() == t.sort() {
                    prop_assert_ne!(s.interpretation(&u), obs.clone());
                }
            }
        }
    }

    #[test]
    fn survivors_per_sort_fit_the_quota(seed in any::<u64>(), beam in 1usize..40) {
        let (programs, d) = regex_setup(seed);
        let s = Session::new(&d, &programs, &[], small(beam)).unwrap();
        let c = s.expand(&s.initialize());
        let pruned = s.prune(&c);
        for sort in regex::dsl().sorts() {
            let classes: HashSet<Interpretation> =
                pruned.get(sort).iter().map(|t| s.interpretation(t)).collect();
            prop_assert!(pruned.get(sort).len() <= beam + classes.len());
            for t in pruned.get(sort) {
                prop_assert_eq!(t.sort(), sort);
            }
        }
    }

    #[test]
    fn expansion_only_adds(seed in any::<u64>()) {
        let (programs, d) = regex_setup(seed);
        let s = Session::new(&d, &programs, &[], small(30)).unwrap();
        let c0 = s.initialize();
        let c1 = s.expand(&c0);
        let c2 = s.expand(&c1);
        prop_assert!(cache_terms(&c0).is_subset(&cache_terms(&c1)));
        prop_assert!(cache_terms(&c1).is_subset(&cache_terms(&c2)));
    }

    #[test]
    fn all_atoms_never_shrinks_the_start(seed in any::<u64>(), occ in 0.0f64..1.0, red in 0.0f64..1.0) {
        let (programs, _) = regex_setup(seed);
        let cfg = SynthesisConfig { pr_occ: occ, pr_red: red, ..SynthesisConfig::default() };
        let v1 = SynthesisConfig { init_all_atoms: true, ..cfg.clone() };
        let base = initialize(&programs, &cfg, regex::dsl());
        let all = initialize(&programs, &v1, regex::dsl());
        prop_assert!(cache_terms(&base).is_subset(&cache_terms(&all)));
    }

    #[test]
    fn rank_ignores_input_order(seed in any::<u64>()) {
        let (programs, d) = regex_setup(seed);
        let s = Session::new(&d, &programs, &[], small(30)).unwrap();
        let mut terms: Vec<Term> = s.expand(&s.initialize()).get(regex::sorts::E).iter().cloned().collect();
        let first = s.rank(&terms);
        terms.shuffle(&mut common::rng(seed ^ 1));
        prop_assert_eq!(s.rank(&terms), first);
    }

    #[test]
    fn random_rank_picks_from_the_same_set(seed in 0u64..1000, pick in any::<u64>()) {
        let inst = toy::instance(seed);
        let cfg = completeness_config();
        let base = synthesize(&inst.domain, &inst.candidates, &[], &cfg).unwrap();
        let v3 = SynthesisConfig { random_rank: true, seed: pick, ..cfg };
        let out = synthesize(&inst.domain, &inst.candidates, &[], &v3).unwrap();
        prop_assert_eq!(out.consistent, base.consistent);
        prop_assert!(toy::fits(out.program.as_ref().unwrap(), &inst.domain));
    }
}

fn completeness_config() -> SynthesisConfig {
    SynthesisConfig {
        pr_occ: 0.0,
        pr_red: 1.0,
        op_th: f64::INFINITY,
        beam_size: usize::MAX,
        synth_depth: 3,
        time_budget: None,
        max_new_per_op: usize::MAX,
        ..SynthesisConfig::default()
    }
}

#[test]
fn relative_completeness_on_toy_instances() {
    for seed in 0..40 {
        let inst = toy::instance(seed);
        let out = synthesize(&inst.domain, &inst.candidates, &[], &completeness_config()).unwrap();
        let got = out.program.unwrap_or_else(|| {
            panic!(
                "seed {seed}: nothing found for {}",
                toy::dsl().show(&inst.ground_truth)
            )
        });
        assert!(toy::fits(&got, &inst.domain), "seed {seed}");
    }
}

/// Constant terms with caller-chosen classes; anything built from them gets
/// its own class.
struct Buckets(HashMap<Term, i64>);

impl Domain for Buckets {
    type Sem = i64;

    fn dsl(&self) -> &'static DslDefinition {
        toy::dsl()
    }

    fn print(&self, t: &Term) -> String {
        toy::dsl().show(t)
    }

    fn eval(&self, t: &Term, kids: &[&i64]) -> i64 {
        self.0.get(t).copied().unwrap_or_else(|| -1 - *kids[0])
    }

    fn observe(&self, _: &Term, sem: &i64) -> Interpretation {
        Interpretation::Literal(Literal::Int(*sem))
    }

    fn expected(&self) -> Interpretation {
        Interpretation::Bottom
    }

    fn example_count(&self) -> usize {
        1
    }
}

#[test]
fn beam_share_of_a_large_class() {
    let mut classes = HashMap::new();
    let mut cache = Cache::new(1);
    for i in 0..5000 {
        let t = toy::k(i);
        classes.insert(t.clone(), if i < 1000 { 0 } else { 1 + (i - 1000) / 100 });
        cache.insert(t);
    }
    // operator-heavy terms are out of profile and must not survive
    for i in 0..50 {
        let t = toy::app(toy::DBL, vec![toy::app(toy::DBL, vec![toy::k(i)])]);
        cache.insert(t);
    }
    let d = Buckets(classes.clone());
    let s = Session::new(&d, &[toy::k(0)], &[], SynthesisConfig::default()).unwrap();
    let pruned = s.prune(&cache);
    let survivors: Vec<&Term> = pruned.iter().collect();
    let from_big = survivors
        .iter()
        .filter(|t| classes.get(**t) == Some(&0))
        .count();
    assert_eq!(from_big, 400);
    assert_eq!(survivors.len(), 2000);
    assert!(survivors.iter().all(|t| s.hamming_distance(t) == 0));
}

#[test]
fn contradictory_examples_yield_nothing() {
    let d = RegexDomain::new(&[RegexExample::new("a", true), RegexExample::new("a", false)]);
    let programs = vec![parse_regex("a").unwrap(), parse_regex("a*").unwrap()];
    let out = synthesize(&d, &programs, &[], &small(100)).unwrap();
    assert!(out.program.is_none());
    assert_eq!(out.consistent, 0);
}

#[test]
fn candidate_already_consistent_is_returned() {
    let d = RegexDomain::new(&[
        RegexExample::new("ab", true),
        RegexExample::new("abab", true),
        RegexExample::new("a", false),
    ]);
    let programs = vec![parse_regex("(ab)*").unwrap(), parse_regex("(ab)+").unwrap()];
    let out = synthesize(&d, &programs, &[], &SynthesisConfig::default()).unwrap();
    let p = out.program.unwrap();
    for (s, want) in [("ab", true), ("abab", true), ("a", false)] {
        assert_eq!(rx::accepts(&p, s), want);
    }
}

#[test]
fn no_examples_returns_first_candidate() {
    let d = RegexDomain::new(&[]);
    let programs = vec![parse_regex("x+").unwrap(), parse_regex("y").unwrap()];
    let out = synthesize(&d, &programs, &[], &SynthesisConfig::default()).unwrap();
    assert_eq!(out.printed.as_deref(), Some("x+"));
}

#[test]
fn no_candidates_is_an_error() {
    let d = RegexDomain::new(&[RegexExample::new("a", true)]);
    assert!(synthesize(&d, &[], &[], &SynthesisConfig::default()).is_err());
}

#[test]
fn zero_beam_is_rejected() {
    let d = RegexDomain::new(&[RegexExample::new("a", true)]);
    let p = [parse_regex("a").unwrap()];
    let cfg = SynthesisConfig {
        beam_size: 0,
        ..SynthesisConfig::default()
    };
    assert!(Session::new(&d, &p, &[], cfg).is_err());
}
