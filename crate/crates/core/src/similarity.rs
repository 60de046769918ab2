//! A-priori string similarity and candidate generation.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::ontology::{ComplexConcept, Constructor, EntityId, EntityKind, Ontology};
use crate::rules::RuleStore;

/// Lowercases and splits camelCase, `_`, `-`, `=` and whitespace into
/// words joined by single spaces: `writePaper` -> `write paper`.
pub fn normalize_name(s: &str) -> String {
    let chars: Vec<char> = s.chars().collect();
    let mut words: Vec<String> = Vec::new();
    let mut current = String::new();
    for (i, &c) in chars.iter().enumerate() {
        if c == '_' || c == '-' || c == '=' || c.is_whitespace() {
            if !current.is_empty() {
                words.push(std::mem::take(&mut current));
            }
            continue;
        }
        if c.is_uppercase() && !current.is_empty() {
            let prev = chars[i - 1];
            let next_lower = chars.get(i + 1).is_some_and(|n| n.is_lowercase());
            if prev.is_lowercase() || prev.is_ascii_digit() || (prev.is_uppercase() && next_lower) {
                words.push(std::mem::take(&mut current));
            }
        }
        current.extend(c.to_lowercase());
    }
    if !current.is_empty() {
        words.push(current);
    }
    words.join(" ")
}

/// Unit-cost edit distance over chars.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// `1 - d(a', b') / max(|a'|, |b'|)` over normalized names; 1 when both are empty.
pub fn levenshtein_sim(a: &str, b: &str) -> f64 {
    let a = normalize_name(a);
    let b = normalize_name(b);
    let longest = a.chars().count().max(b.chars().count());
    if longest == 0 {
        return 1.0;
    }
    1.0 - levenshtein(&a, &b) as f64 / longest as f64
}

/// Similarity between a simple entity and a complex concept: the filler of
/// `exists(p,b)` is compared with the simple name, unions and intersections
/// take the best component, every other constructor scores 0.
pub fn complex_sim(simple: &EntityId, complex: &ComplexConcept) -> f64 {
    match complex.constructor() {
        Constructor::Exists => levenshtein_sim(&simple.name, &complex.components()[1].name),
        Constructor::Union | Constructor::Intersection => complex
            .components()
            .iter()
            .filter(|c| !c.kind.is_complex())
            .map(|c| levenshtein_sim(&simple.name, &c.name))
            .fold(0.0, f64::max),
        _ => 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateKind {
    Simple,
    Complex,
}

/// A possible correspondence with its a-priori similarity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub e1: EntityId,
    pub e2: EntityId,
    pub sim: f64,
    pub kind: CandidateKind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidateOptions {
    pub tau: f64,
    /// When false every similarity is 0 and only rule participants yield
    /// candidates.
    pub name_similarity: bool,
}

impl Default for CandidateOptions {
    fn default() -> Self {
        CandidateOptions { tau: 0.70, name_similarity: true }
    }
}

fn entity_sim(o1: &Ontology, e1: &EntityId, o2: &Ontology, e2: &EntityId) -> f64 {
    match (o1.complex_concept(&e1.name), o2.complex_concept(&e2.name)) {
        (None, None) => levenshtein_sim(&e1.name, &e2.name),
        (None, Some(c2)) => complex_sim(e1, c2),
        (Some(c1), None) => complex_sim(e2, c1),
        (Some(_), Some(_)) => 0.0,
    }
}

/// Rule arguments plus the owning properties of nominal-value arguments.
fn rule_participants(o: &Ontology, rules: &RuleStore) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for e in rules.participants() {
        out.insert(e.name.clone());
        if let EntityKind::NominalValue { owner } = &e.kind {
            if o.entity(owner).is_some() {
                out.insert(owner.clone());
            }
        }
    }
    out
}

/// Every kind-compatible pair whose similarity exceeds `tau` (all pairs
/// when `tau == 0`), plus every kind-compatible pair in which either side
/// takes part in a knowledge rule, whatever its similarity. Ordered by the
/// first entity, then the second; simple entities precede complex ones.
pub fn generate_candidates(
    o1: &Ontology,
    o2: &Ontology,
    rules1: &RuleStore,
    rules2: &RuleStore,
    options: &CandidateOptions,
) -> Vec<Candidate> {
    let p1 = rule_participants(o1, rules1);
    let p2 = rule_participants(o2, rules2);
    let mut out = Vec::new();
    for e1 in o1.all_entities() {
        for e2 in o2.all_entities() {
            if !e1.kind.compatible_with(&e2.kind) {
                continue;
            }
            let sim = if options.name_similarity { entity_sim(o1, e1, o2, e2) } else { 0.0 };
            let keep = sim > options.tau || options.tau == 0.0 || p1.contains(&e1.name) || p2.contains(&e2.name);
            if keep {
                let kind = if e1.kind.is_complex() || e2.kind.is_complex() {
                    CandidateKind::Complex
                } else {
                    CandidateKind::Simple
                };
                out.push(Candidate { e1: e1.clone(), e2: e2.clone(), sim, kind });
            }
        }
    }
    out
}
