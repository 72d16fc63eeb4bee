//! The bundled data agrees with the oracles.
mod common;

use common::{rx, sel};
use multisynth::cegis::{load_suite, BenchmarkTask, TaskExamples, TaskRecord};
use multisynth::prompt::QACorpus;
use multisynth::Language;

fn check(task: &BenchmarkTask) {
    let lang = task.examples.language();
    let gt = lang.parse(task.ground_truth.as_deref().unwrap()).unwrap();
    assert!(!task.examples.is_empty(), "{}", task.name);
    match &task.examples {
        TaskExamples::Regex(es) => {
            for e in es {
                assert_eq!(
                    rx::accepts(&gt, &e.input),
                    e.output,
                    "{}: {:?}",
                    task.name,
                    e.input
                );
            }
        }
        TaskExamples::Css { document, examples } => {
            for e in examples {
                assert_eq!(
                    sel::selects(&gt, document, e.node),
                    e.output,
                    "{}: {}",
                    task.name,
                    e.node
                );
            }
        }
    }
}

#[test]
fn suite_examples_follow_the_ground_truth() {
    let tasks = load_suite(&common::data_dir().join("suite.json")).unwrap();
    assert_eq!(tasks.len(), 6);
    for t in tasks {
        check(&t.unwrap());
    }
}

#[test]
fn single_task_files_follow_the_ground_truth() {
    let dir = common::data_dir().join("tasks");
    let mut n = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let rec: TaskRecord =
            serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        check(&rec.resolve(&dir).unwrap());
        n += 1;
    }
    assert_eq!(n, 7);
}

#[test]
fn qa_answers_parse() {
    for (file, lang, len) in [
        ("qa/regex.jsonl", Language::Regex, 27),
        ("qa/css.jsonl", Language::Css, 20),
    ] {
        let c = QACorpus::load(&common::data_dir().join(file), "NL:").unwrap();
        assert_eq!(c.len(), len);
        for p in c.pairs() {
            assert!(lang.parse(&p.answer).is_ok(), "{file}: {}", p.answer);
        }
    }
}
