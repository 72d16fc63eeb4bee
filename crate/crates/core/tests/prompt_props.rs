mod common;

use common::qa;
use multisynth::prompt::{
    self, build_prompt, relevance, relevance_tfidf, relevance_tm, select_qa_pairs, Metric,
    PromptConfig, QACorpus, QAPair,
};
use proptest::prelude::*;

fn corpus_of(pairs: &[(String, String)]) -> QACorpus {
    QACorpus::new(
        pairs.iter().map(|(q, a)| QAPair::new(q, a)).collect(),
        "NL:",
    )
    .unwrap()
}

fn cfg(k: usize, t: usize, metric: Metric) -> PromptConfig {
    PromptConfig {
        k,
        similarity_threshold: t,
        metric,
        max_prompt_tokens: 100_000,
        ..PromptConfig::regex()
    }
}

fn index_of(pairs: &[(String, String)], p: &QAPair) -> usize {
    pairs
        .iter()
        .position(|(q, a)| *q == p.question && *a == p.answer)
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn selection_is_sorted_diverse_and_bounded(seed in any::<u64>(), k in 1usize..12, t in 0usize..6, tm in any::<bool>()) {
        let mut g = common::rng(seed);
        let pairs = qa::planted_corpus(&mut g, 30);
        let corpus = corpus_of(&pairs);
        let q = qa::planted_question(&mut g);
        let metric = if tm { Metric::TokenMatch } else { Metric::Tfidf };
        let out = select_qa_pairs(&corpus, &q, &cfg(k, t, metric));
        prop_assert!(out.len() <= k && out.len() <= corpus.len());
        let scores: Vec<f64> = out.iter().map(|p| relevance(metric, &q, &p.question, &corpus)).collect();
        prop_assert!(scores.windows(2).all(|w| w[0] >= w[1]));
        for i in 0..out.len() {
            for j in 0..i {
                prop_assert!(qa::lev(&out[i].answer, &out[j].answer) >= t);
            }
        }
    }

    #[test]
    fn zero_threshold_is_top_k(seed in any::<u64>(), k in 1usize..20) {
        let mut g = common::rng(seed);
        let pairs = qa::planted_corpus(&mut g, 30);
        let corpus = corpus_of(&pairs);
        let q = qa::planted_question(&mut g);
        let out = select_qa_pairs(&corpus, &q, &cfg(k, 0, Metric::Tfidf));
        let mut idx: Vec<usize> = (0..pairs.len()).collect();
        let s: Vec<f64> = pairs.iter().map(|p| relevance_tfidf(&q, &p.0, &corpus)).collect();
        idx.sort_by(|&a, &b| s[b].total_cmp(&s[a]).then(a.cmp(&b)));
        idx.truncate(k);
        let got: Vec<usize> = out.iter().map(|p| index_of(&pairs, p)).collect();
        prop_assert_eq!(got, idx);
    }

    #[test]
    fn selection_matches_brute_force(seed in any::<u64>(), k in 1usize..12, t in 0usize..5) {
        let mut g = common::rng(seed);
        let pairs = qa::planted_corpus(&mut g, 30);
        let corpus = corpus_of(&pairs);
        let q = qa::planted_question(&mut g);
        let out = select_qa_pairs(&corpus, &q, &cfg(k, t, Metric::Tfidf));
        let got: Vec<usize> = out.iter().map(|p| index_of(&pairs, p)).collect();
        prop_assert_eq!(got, qa::brute_select(&pairs, &q, k, t));
    }

    #[test]
    fn question_is_fully_relevant_to_itself(seed in any::<u64>(), i in 0usize..30) {
        let mut g = common::rng(seed);
        let pairs = qa::planted_corpus(&mut g, 30);
        let corpus = corpus_of(&pairs);
        let q = &pairs[i].0;
        prop_assert_eq!(relevance_tm(q, q), 1.0);
        prop_assert_eq!(relevance_tfidf(q, q, &corpus), 1.0);
    }

    #[test]
    fn relevance_is_scale_free(seed in any::<u64>(), i in 0usize..30, j in 0usize..30) {
        let mut g = common::rng(seed);
        let pairs = qa::planted_corpus(&mut g, 30);
        let corpus = corpus_of(&pairs);
        for r in [relevance_tm(&pairs[i].0, &pairs[j].0), relevance_tfidf(&pairs[i].0, &pairs[j].0, &corpus)] {
            prop_assert!((0.0..=1.0).contains(&r));
        }
    }

    #[test]
    fn levenshtein_matches_dynamic_programming(a in "[ab!]{0,8}", b in "[ab!]{0,8}") {
        prop_assert_eq!(prompt::levenshtein(&a, &b), qa::lev(&a, &b));
    }
}

#[test]
fn ties_go_to_corpus_order() {
    let pairs: Vec<(String, String)> = (0..6)
        .map(|i| {
            (
                "lines with digits".to_string(),
                format!("answer number {i}"),
            )
        })
        .collect();
    let corpus = corpus_of(&pairs);
    for _ in 0..5 {
        let out = select_qa_pairs(&corpus, "digits", &cfg(3, 0, Metric::Tfidf));
        let got: Vec<usize> = out.iter().map(|p| index_of(&pairs, p)).collect();
        assert_eq!(got, [0, 1, 2]);
    }
}

#[test]
fn single_pair_corpus() {
    let pairs = vec![("zip codes".to_string(), "[0-9]{5}".to_string())];
    let corpus = corpus_of(&pairs);
    for m in [Metric::Tfidf, Metric::TokenMatch] {
        assert_eq!(
            select_qa_pairs(&corpus, "anything else", &cfg(4, 5, m)).len(),
            1
        );
    }
}

#[test]
fn identical_answers_admit_one() {
    let pairs = vec![
        ("lines with a digit".to_string(), "[0-9]".to_string()),
        ("a digit".to_string(), "[0-9]".to_string()),
    ];
    let out = select_qa_pairs(&corpus_of(&pairs), "a digit", &cfg(5, 1, Metric::Tfidf));
    assert_eq!(out.len(), 1);
    // both questions cover the query, so the tie goes to corpus order
    assert_eq!(out[0].question, "lines with a digit");
}

#[test]
fn rare_shared_token_outweighs_common_one() {
    let pairs: Vec<(String, String)> = [
        ("lines with hex", "h"),
        ("lines with a", "a"),
        ("lines with b", "b"),
        ("lines with c", "c"),
    ]
    .iter()
    .map(|(q, a)| (q.to_string(), a.to_string()))
    .collect();
    let corpus = corpus_of(&pairs);
    let (q, other) = ("hex lines with", "hex value");
    // "lines" and "with" occur in every question and weigh nothing
    assert!((relevance_tm(q, other) - 1.0 / 3.0).abs() < 1e-12);
    let want = qa::tfidf_relevance(
        q,
        other,
        &pairs.iter().map(|p| p.0.clone()).collect::<Vec<_>>(),
    );
    assert!((relevance_tfidf(q, other, &corpus) - want).abs() < 1e-12);
    assert!((relevance_tfidf(q, other, &corpus) - 1.0).abs() < 1e-12);
}

#[test]
fn fig7a_layout() {
    let pairs = vec![
        QAPair::new("lines which begin with an upper case vowel", "[AEIOU].*"),
        QAPair::new(
            "match lines which contain only consonants",
            "[^AEIOUaeiou]*",
        ),
        QAPair::new("lines ending with a digit followed by period", ".*[0-9][.]"),
        QAPair::new("dates in ISO 8601 format", "[0-9]{4}-[0-9]{2}-[0-9]{2}"),
    ];
    let q = "lines starting with three upper case vowels followed by four digits";
    let p = build_prompt(&pairs, q, &PromptConfig::regex()).unwrap();
    let want = [
        "Here are some examples of regular expressions",
        "and their descriptions. Use them to generate a",
        "regular expression that matches the description.",
        "",
        "NL: lines which begin with an upper case vowel",
        "Regex: [AEIOU].*",
        "",
        "NL: match lines which contain only consonants",
        "Regex: [^AEIOUaeiou]*",
        "",
        "NL: lines ending with a digit followed by period",
        "Regex: .*[0-9][.]",
        "",
        "NL: dates in ISO 8601 format",
        "Regex: [0-9]{4}-[0-9]{2}-[0-9]{2}",
        "",
        "NL: lines starting with three upper case vowels followed by four digits",
        "Regex:",
    ]
    .join("\n");
    assert_eq!(p, want);
}

#[test]
fn answers_with_the_stop_sequence_are_rejected() {
    let bad = vec![QAPair::new("q", "a NL: b")];
    assert!(QACorpus::new(bad, "NL:").is_err());
}
