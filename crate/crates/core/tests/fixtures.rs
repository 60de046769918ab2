//! End-to-end runs over the bundled fixtures.

use std::fs;
use std::path::PathBuf;

use ontomatch::pipeline::mine_rules;
use ontomatch::{pr_sweep, run_ablation, score_alignment, Alignment, MatchTask, Mode, RunConfig, SolverChoice, SolverMode};

fn read(dir: &str, file: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", dir, file].iter().collect();
    fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn task(dir: &str, o1: &str, o2: &str, rules: Option<(&str, &str)>) -> MatchTask {
    let (r1, r2) = match rules {
        Some((a, b)) => (Some(read(dir, a)), Some(read(dir, b))),
        None => (None, None),
    };
    MatchTask::from_texts(&read(dir, o1), &read(dir, o2), r1.as_deref(), r2.as_deref()).unwrap()
}

fn reference(dir: &str) -> Alignment {
    Alignment::from_json(&read(dir, "reference.json")).unwrap()
}

fn exact() -> RunConfig {
    RunConfig { solver: SolverChoice::Exact, ..RunConfig::default() }
}

#[test]
fn conference_matches_properties_through_rules() {
    let t = task("conference", "cmt.json", "confOf.json", Some(("cmt.rules.jsonl", "confOf.rules.jsonl")));
    let out = t.run(&exact()).unwrap();
    assert_eq!(out.assignment.mode, SolverMode::Exact);
    assert!(out.alignment.contains("writePaper", "writes"));
    assert!(out.alignment.contains("readPaper", "reviews"));

    // Without rules the property names alone are too far apart.
    let plain = run_ablation(&t, &exact(), Mode::Mlom).unwrap();
    assert!(!plain.contains("readPaper", "reviews"));
}

#[test]
fn conference_sweep_is_nested() {
    let t = task("conference", "cmt.json", "confOf.json", Some(("cmt.rules.jsonl", "confOf.rules.jsonl")));
    let biases = [-1.5, -1.0, -0.9, -0.75, -0.5, 0.0, 0.5, 1.0];
    for tau in [0.5, 0.7] {
        let mut cfg = exact();
        cfg.weights.tau = tau;
        let points = pr_sweep(&t, &cfg, &biases, &reference("conference")).unwrap();
        for w in points.windows(2) {
            assert!(w[0].1.pairs().is_subset(w[1].1.pairs()), "tau {tau}, bias {}", w[1].0.bias);
            assert!(w[0].0.scores.recall <= w[1].0.scores.recall);
        }
        assert!(points[0].1.is_empty());
        assert!(points.last().unwrap().0.scores.recall >= 0.8);
    }
}

#[test]
fn complex_fixture_finds_constructed_properties() {
    let t = task("complex", "cmt.json", "conference.json", Some(("cmt.rules.jsonl", "conference.rules.jsonl")));
    let out = t.run(&exact()).unwrap();
    assert!(out.alignment.contains("writePaper", "restrict_range(contributes,Reviewed_contribution)"));
    assert!(out.alignment.contains("readPaper", "compose(contributes,reviews)"));
    assert_eq!(score_alignment(&out.alignment, &reference("complex")).unwrap().f1, 1.0);
}

#[test]
fn nba_needs_knowledge() {
    let t = task("nba", "nba1.json", "nba2.json", Some(("nba1.rules.jsonl", "nba2.rules.jsonl")));
    let cfg = RunConfig { name_similarity: false, ..RunConfig::default() };
    let kaom = t.run(&cfg).unwrap();
    assert_eq!(kaom.assignment.mode, SolverMode::Local);
    let s = score_alignment(&kaom.alignment, &reference("nba")).unwrap();
    assert_eq!((s.precision, s.recall, s.f1), (1.0, 1.0, 1.0));
    let mlom = run_ablation(&t, &cfg, Mode::Mlom).unwrap();
    assert_eq!(score_alignment(&mlom, &reference("nba")).unwrap().f1, 0.0);
}

#[test]
fn missing_rules_reduce_to_plain_matching() {
    let with = task("conference", "cmt.json", "confOf.json", Some(("cmt.rules.jsonl", "confOf.rules.jsonl")));
    let without = task("conference", "cmt.json", "confOf.json", None);
    let kaom = run_ablation(&without, &exact(), Mode::Kaom).unwrap();
    let mlom = run_ablation(&with, &exact(), Mode::Mlom).unwrap();
    assert_eq!(kaom.pairs(), mlom.pairs());
}

#[test]
fn census_rules_are_mined_per_side() {
    let o1 = ontomatch::ontology::parse_ontology(&read("census", "census1.json")).unwrap();
    let cfg = RunConfig::default();
    let store = mine_rules(&o1, &read("census", "census1.csv"), &cfg).unwrap();
    assert!(!store.is_empty());
    let again = mine_rules(&o1, &read("census", "census1.csv"), &cfg).unwrap();
    assert_eq!(store, again);
    assert!(store.rules().iter().all(|r| r.confidence >= 0.9 && r.args.len() <= 3));
}
