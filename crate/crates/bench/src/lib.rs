//! Benchmark inputs shared by the criterion suites.

use ontomatch::grounding::{Family, GroundProblem, Literal, Shape, WeightedClause};
use ontomatch::MatchTask;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Two ontologies of `n` classes each with one property per class, half the
/// names shared verbatim and the rest perturbed, plus a chain of
/// `disjoint_props` rules on both sides.
pub fn synthetic_task(n: usize) -> MatchTask {
    let side = |tag: &str, suffix: &str| {
        let name = |i: usize| if i % 2 == 0 { format!("Class{i}") } else { format!("Class{i}{suffix}") };
        let classes: Vec<String> = (0..n).map(name).collect();
        let props: Vec<String> = (0..n).map(|i| format!("rel{i}{suffix}")).collect();
        let mut axioms = Vec::new();
        for i in 1..n {
            axioms.push(format!(r#"{{"kind": "subclass_of", "args": ["{}", "{}"]}}"#, classes[i], classes[i / 2]));
        }
        for (i, p) in props.iter().enumerate() {
            axioms.push(format!(r#"{{"kind": "domain", "args": ["{p}", "{}"]}}"#, classes[i]));
            axioms.push(format!(r#"{{"kind": "range", "args": ["{p}", "{}"]}}"#, classes[(i + 1) % n]));
        }
        let quote = |v: &[String]| v.iter().map(|s| format!("\"{s}\"")).collect::<Vec<_>>().join(", ");
        let onto = format!(
            r#"{{"tag": "{tag}", "classes": [{}], "object_properties": [{}], "axioms": [{}]}}"#,
            quote(&classes),
            quote(&props),
            axioms.join(", ")
        );
        let rules: Vec<String> = props
            .windows(2)
            .map(|w| format!(r#"{{"pattern": "disjoint_props", "args": ["{}", "{}"]}}"#, w[0], w[1]))
            .collect();
        (onto, rules.join("\n"))
    };
    let (o1, r1) = side("left", "A");
    let (o2, r2) = side("right", "Bx");
    MatchTask::from_texts(&o1, &o2, Some(&r1), Some(&r2)).expect("synthetic task is valid")
}

/// Random ground problem whose all-false assignment is feasible.
pub fn random_problem(seed: u64, atoms: usize, clauses: usize) -> GroundProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(clauses);
    while out.len() < clauses {
        let len = rng.random_range(1..=3usize.min(atoms));
        let mut lits: Vec<Literal> =
            (0..len).map(|_| Literal { atom: rng.random_range(0..atoms), positive: rng.random_bool(0.6) }).collect();
        let w = rng.random_range(0.05..1.0);
        let clause = match rng.random_range(0..4) {
            0 => {
                lits[0].positive = false;
                WeightedClause::hard(lits, Family::Cardinality)
            }
            1 => WeightedClause::soft(Shape::Any, vec![lits[0]], w, Family::Apriori),
            2 => WeightedClause::soft(Shape::All, lits, w, Family::RulePos),
            _ => WeightedClause::soft(Shape::Any, lits, -w, Family::Stability),
        };
        out.extend(clause);
    }
    GroundProblem::anonymous(atoms, out)
}
