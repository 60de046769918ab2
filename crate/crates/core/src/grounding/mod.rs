//! Translation of a matching task into a weighted constraint problem over
//! `match(e1, e2)` atoms, one atom per candidate.

mod problem;

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

pub use problem::{Family, GroundAtom, GroundProblem, Literal, Shape, Weight, WeightedClause};

use crate::error::GroundingError;
use crate::ontology::{AxiomKind, EntityId, EntityKind, Ontology};
use crate::rules::{
    estimate_linear_map, rule_distance, ConditionalRule, KnowledgeRule, PatternFamily, RuleStore,
};
use crate::similarity::Candidate;

/// Formula weights. Per-pattern maps override the defaults: symbolic patterns
/// default to 1.0 in both directions, association patterns to `w_assoc` for
/// agreement and 0 for disagreement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeightConfig {
    pub w_subclass: f64,
    pub w_domain_range: f64,
    pub w_rule_pos: BTreeMap<String, f64>,
    pub w_rule_neg: BTreeMap<String, f64>,
    pub w_assoc: f64,
    pub w_constructor: f64,
    pub d0: f64,
    pub bias_w: f64,
    pub tau: f64,
}

impl Default for WeightConfig {
    fn default() -> Self {
        WeightConfig {
            w_subclass: -0.5,
            w_domain_range: -0.25,
            w_rule_pos: BTreeMap::new(),
            w_rule_neg: BTreeMap::new(),
            w_assoc: 0.25,
            w_constructor: 0.5,
            d0: 0.2,
            bias_w: 0.0,
            tau: 0.70,
        }
    }
}

impl WeightConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(0.0..=1.0).contains(&self.d0) {
            return Err(format!("d0 {} outside [0, 1]", self.d0));
        }
        if !(0.0..=1.0).contains(&self.tau) {
            return Err(format!("tau {} outside [0, 1]", self.tau));
        }
        let all = [self.w_subclass, self.w_domain_range, self.w_assoc, self.w_constructor, self.bias_w];
        if all.iter().chain(self.w_rule_pos.values()).chain(self.w_rule_neg.values()).any(|w| !w.is_finite()) {
            return Err("weights must be finite".to_string());
        }
        Ok(())
    }

    /// `(agreement, disagreement)` magnitudes for a rule pattern.
    pub fn rule_weights(&self, pattern: &str, family: PatternFamily) -> (f64, f64) {
        let (pos, neg) = match family {
            PatternFamily::Association => (self.w_assoc, 0.0),
            _ => (1.0, 1.0),
        };
        (
            self.w_rule_pos.get(pattern).copied().unwrap_or(pos),
            self.w_rule_neg.get(pattern).copied().unwrap_or(neg),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundOptions {
    /// Emit the rule families; off for the baseline without knowledge rules.
    pub knowledge: bool,
    /// Grid points per antecedent for rule distances.
    pub grid_n: usize,
}

impl Default for GroundOptions {
    fn default() -> Self {
        GroundOptions { knowledge: true, grid_n: 32 }
    }
}

struct Index<'a> {
    atoms: HashMap<(&'a str, &'a str), usize>,
    by_e1: BTreeMap<&'a str, Vec<usize>>,
    by_e2: BTreeMap<&'a str, Vec<usize>>,
    candidates: &'a [Candidate],
}

impl<'a> Index<'a> {
    fn new(candidates: &'a [Candidate]) -> Self {
        let mut atoms = HashMap::new();
        let mut by_e1: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        let mut by_e2: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for (i, c) in candidates.iter().enumerate() {
            atoms.insert((c.e1.name.as_str(), c.e2.name.as_str()), i);
            by_e1.entry(&c.e1.name).or_default().push(i);
            by_e2.entry(&c.e2.name).or_default().push(i);
        }
        Index { atoms, by_e1, by_e2, candidates }
    }

    fn atom(&self, e1: &str, e2: &str) -> Option<usize> {
        self.atoms.get(&(e1, e2)).copied()
    }

    fn partners_of_1(&self, e1: &str) -> &[usize] {
        self.by_e1.get(e1).map_or(&[], Vec::as_slice)
    }

    fn partners_of_2(&self, e2: &str) -> &[usize] {
        self.by_e2.get(e2).map_or(&[], Vec::as_slice)
    }
}

/// Clause accumulator; hard clauses and rule clauses are deduplicated.
#[derive(Default)]
struct Sink {
    clauses: Vec<WeightedClause>,
    hard_seen: HashSet<Vec<Literal>>,
    rule_seen: HashSet<(String, Family, Vec<usize>)>,
}

impl Sink {
    fn hard(&mut self, literals: Vec<Literal>, origin: Family) {
        if let Some(c) = WeightedClause::hard(literals, origin) {
            if self.hard_seen.insert(c.literals.clone()) {
                self.clauses.push(c);
            }
        }
    }

    fn soft(&mut self, shape: Shape, literals: Vec<Literal>, weight: f64, origin: Family) {
        if let Some(c) = WeightedClause::soft(shape, literals, weight, origin) {
            self.clauses.push(c);
        }
    }

    /// Conjunction over a rule tuple, once per pattern, family and atom set.
    fn rule(&mut self, pattern: &str, atoms: &[usize], weight: f64, origin: Family) {
        let mut key: Vec<usize> = atoms.to_vec();
        key.sort_unstable();
        key.dedup();
        if self.rule_seen.insert((pattern.to_string(), origin, key)) {
            self.soft(Shape::All, atoms.iter().map(|&a| Literal::pos(a)).collect(), weight, origin);
        }
    }
}

/// Grounds every formula family over the given candidates. Atom `i`
/// corresponds to `candidates[i]`.
pub fn ground_problem(
    o1: &Ontology,
    o2: &Ontology,
    candidates: &[Candidate],
    rules1: &RuleStore,
    rules2: &RuleStore,
    cfg: &WeightConfig,
    options: &GroundOptions,
) -> Result<GroundProblem, GroundingError> {
    if candidates.is_empty() {
        return Err(GroundingError::NoCandidates);
    }
    for c in candidates {
        if o1.entity(&c.e1.name).is_none() {
            return Err(GroundingError::UnknownEntity(c.e1.to_string()));
        }
        if o2.entity(&c.e2.name).is_none() {
            return Err(GroundingError::UnknownEntity(c.e2.to_string()));
        }
    }
    let idx = Index::new(candidates);
    let mut sink = Sink::default();
    let mut skipped = 0usize;

    // Evidence from string similarity.
    for (i, c) in candidates.iter().enumerate() {
        if c.sim > 0.0 {
            sink.soft(Shape::Any, vec![Literal::pos(i)], c.sim, Family::Apriori);
        }
    }

    // One-to-one in both directions.
    for groups in [&idx.by_e1, &idx.by_e2] {
        for atoms in groups.values() {
            for (k, &a) in atoms.iter().enumerate() {
                for &b in &atoms[k + 1..] {
                    sink.hard(vec![Literal::neg(a), Literal::neg(b)], Family::Cardinality);
                }
            }
        }
    }

    coherence(o1, o2, &idx, &mut sink);
    stability(o1, o2, &idx, cfg, &mut sink);

    if options.knowledge {
        skipped += symbolic_rules(rules1, rules2, &idx, cfg, &mut sink);
        skipped += threshold_rules(o1, o2, rules1, rules2, &idx, cfg, options.grid_n, &mut sink)?;
    }

    skipped += constructors(o1, o2, &idx, cfg, &mut sink);

    // A nominal value only matches within matching attributes.
    for (i, c) in candidates.iter().enumerate() {
        if let (EntityKind::NominalValue { owner: a }, EntityKind::NominalValue { owner: b }) = (&c.e1.kind, &c.e2.kind)
        {
            let mut lits = vec![Literal::neg(i)];
            if let Some(owner_atom) = idx.atom(a, b) {
                lits.push(Literal::pos(owner_atom));
            }
            sink.hard(lits, Family::Nominal);
        }
    }

    for i in 0..candidates.len() {
        sink.soft(Shape::Any, vec![Literal::pos(i)], cfg.bias_w, Family::Bias);
    }

    let atoms = candidates.iter().enumerate().map(|(id, c)| GroundAtom { id, candidate: c.clone() }).collect();
    Ok(GroundProblem { atoms, clauses: sink.clauses, skipped_tuples: skipped })
}

fn axiom_pairs(o: &Ontology, kind: AxiomKind) -> impl Iterator<Item = (&str, &str)> {
    o.axioms_of(kind).map(|a| (a.lhs.name.as_str(), a.rhs.name.as_str()))
}

/// Atom pairs `(m(a, x), m(b, y))` with `x != y` for a pair `(a, b)` of O1.
fn image_pairs<'a>(idx: &'a Index<'a>, a: &'a str, b: &'a str) -> impl Iterator<Item = (usize, usize)> + 'a {
    idx.partners_of_1(a).iter().flat_map(move |&i| {
        idx.partners_of_1(b)
            .iter()
            .filter(move |&&j| idx.candidates[i].e2.name != idx.candidates[j].e2.name)
            .map(move |&j| (i, j))
    })
}

/// Same as [`image_pairs`] for a pair of O2, mapped back into O1.
fn preimage_pairs<'a>(idx: &'a Index<'a>, a: &'a str, b: &'a str) -> impl Iterator<Item = (usize, usize)> + 'a {
    idx.partners_of_2(a).iter().flat_map(move |&i| {
        idx.partners_of_2(b)
            .iter()
            .filter(move |&&j| idx.candidates[i].e1.name != idx.candidates[j].e1.name)
            .map(move |&j| (i, j))
    })
}

fn coherence(o1: &Ontology, o2: &Ontology, idx: &Index, sink: &mut Sink) {
    for (sub, disjoint) in
        [(AxiomKind::SubClassOf, AxiomKind::DisjointClasses), (AxiomKind::SubPropertyOf, AxiomKind::DisjointProperties)]
    {
        for (a, b) in axiom_pairs(o1, sub).filter(|(a, b)| a != b) {
            for (i, j) in image_pairs(idx, a, b) {
                if o2.has_axiom(disjoint, &idx.candidates[i].e2.name, &idx.candidates[j].e2.name) {
                    sink.hard(vec![Literal::neg(i), Literal::neg(j)], Family::Coherence);
                }
            }
        }
        for (a, b) in axiom_pairs(o2, sub).filter(|(a, b)| a != b) {
            for (i, j) in preimage_pairs(idx, a, b) {
                if o1.has_axiom(disjoint, &idx.candidates[i].e1.name, &idx.candidates[j].e1.name) {
                    sink.hard(vec![Literal::neg(i), Literal::neg(j)], Family::Coherence);
                }
            }
        }
    }
}

fn stability(o1: &Ontology, o2: &Ontology, idx: &Index, cfg: &WeightConfig, sink: &mut Sink) {
    let families = [
        (AxiomKind::SubClassOf, cfg.w_subclass),
        (AxiomKind::SubPropertyOf, cfg.w_subclass),
        (AxiomKind::Domain, cfg.w_domain_range),
        (AxiomKind::Range, cfg.w_domain_range),
    ];
    for (kind, w) in families {
        if w == 0.0 {
            continue;
        }
        for (a, b) in axiom_pairs(o1, kind).filter(|(a, b)| a != b) {
            for (i, j) in image_pairs(idx, a, b) {
                if !o2.has_axiom(kind, &idx.candidates[i].e2.name, &idx.candidates[j].e2.name) {
                    sink.soft(Shape::All, vec![Literal::pos(i), Literal::pos(j)], w, Family::Stability);
                }
            }
        }
        for (a, b) in axiom_pairs(o2, kind).filter(|(a, b)| a != b) {
            for (i, j) in preimage_pairs(idx, a, b) {
                if !o1.has_axiom(kind, &idx.candidates[i].e1.name, &idx.candidates[j].e1.name) {
                    sink.soft(Shape::All, vec![Literal::pos(i), Literal::pos(j)], w, Family::Stability);
                }
            }
        }
    }
}

/// Order-insensitive identity of a rule: association antecedents are a set.
fn rule_key(rule: &KnowledgeRule, family: PatternFamily) -> Vec<(String, u64)> {
    let mut items: Vec<(String, u64)> = rule
        .args
        .iter()
        .enumerate()
        .map(|(i, a)| (a.name.clone(), rule.params.get(i).map_or(0, |p| p.to_bits())))
        .collect();
    if family == PatternFamily::Association {
        let last = items.len() - 1;
        items[..last].sort();
    }
    items
}

/// All injective assignments of the positions of `left` to positions of
/// `right` allowed by `fixed` (position-locked slots) and `pair`, which
/// yields the atom for `(i, j)` if the two slots may be paired.
fn alignments(
    k: usize,
    fixed: impl Fn(usize) -> Option<usize>,
    pair: impl Fn(usize, usize) -> Option<usize>,
) -> Vec<Vec<usize>> {
    fn go(
        i: usize,
        k: usize,
        used: &mut Vec<bool>,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        fixed: &dyn Fn(usize) -> Option<usize>,
        pair: &dyn Fn(usize, usize) -> Option<usize>,
    ) {
        if i == k {
            out.push(current.clone());
            return;
        }
        let choices: Vec<usize> = match fixed(i) {
            Some(j) => vec![j],
            None => (0..k).collect(),
        };
        for j in choices {
            if used[j] {
                continue;
            }
            if let Some(atom) = pair(i, j) {
                used[j] = true;
                current.push(atom);
                go(i + 1, k, used, current, out, fixed, pair);
                current.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(0, k, &mut vec![false; k], &mut Vec::new(), &mut out, &fixed, &pair);
    out
}

/// True when the atoms map distinct entities to distinct entities.
fn injective(idx: &Index, atoms: &[usize]) -> bool {
    let mut seen: HashMap<&str, &str> = HashMap::new();
    let mut seen_back: HashMap<&str, &str> = HashMap::new();
    for &a in atoms {
        let c = &idx.candidates[a];
        if *seen.entry(&c.e1.name).or_insert(&c.e2.name) != c.e2.name
            || *seen_back.entry(&c.e2.name).or_insert(&c.e1.name) != c.e1.name
        {
            return false;
        }
    }
    true
}

/// Symbolic and association patterns: reward tuples where a rule holds on
/// both sides, penalize tuples where it holds on one side only.
fn symbolic_rules(r1: &RuleStore, r2: &RuleStore, idx: &Index, cfg: &WeightConfig, sink: &mut Sink) -> usize {
    let mut skipped = 0;
    let patterns: BTreeMap<&str, PatternFamily> = r1
        .patterns()
        .chain(r2.patterns())
        .filter(|p| p.family != PatternFamily::Threshold)
        .map(|p| (p.id.as_str(), p.family))
        .collect();
    for (&pattern, &family) in &patterns {
        let (pos, neg) = cfg.rule_weights(pattern, family);
        let left: Vec<&KnowledgeRule> = r1.rules_of(pattern).collect();
        let right: Vec<&KnowledgeRule> = r2.rules_of(pattern).collect();
        if left.is_empty() && right.is_empty() {
            continue;
        }
        let fixed = |rule: &KnowledgeRule| {
            let n = rule.args.len();
            move |i: usize| match family {
                PatternFamily::Association if i + 1 < n => None,
                _ => Some(i),
            }
        };

        if pos != 0.0 {
            for a in &left {
                for b in &right {
                    if a.args.len() != b.args.len() {
                        continue;
                    }
                    let tuples = alignments(a.args.len(), fixed(a), |i, j| {
                        if a.params.get(i) != b.params.get(j) {
                            return None;
                        }
                        idx.atom(&a.args[i].name, &b.args[j].name)
                    });
                    let mut any = false;
                    for t in tuples.iter().filter(|t| injective(idx, t)) {
                        any = true;
                        sink.rule(pattern, t, pos, Family::RulePos);
                    }
                    if !any {
                        skipped += 1;
                    }
                }
            }
        }

        if neg != 0.0 {
            let keys2: HashSet<Vec<(String, u64)>> = right.iter().map(|r| rule_key(r, family)).collect();
            let keys1: HashSet<Vec<(String, u64)>> = left.iter().map(|r| rule_key(r, family)).collect();
            for (rules, forward) in [(&left, true), (&right, false)] {
                for rule in rules.iter() {
                    for t in image_tuples(idx, rule, forward) {
                        if !injective(idx, &t) {
                            continue;
                        }
                        let mut image = (*rule).clone();
                        for (arg, &atom) in image.args.iter_mut().zip(&t) {
                            let c = &idx.candidates[atom];
                            *arg = if forward { c.e2.clone() } else { c.e1.clone() };
                        }
                        let other = if forward { &keys2 } else { &keys1 };
                        if !other.contains(&rule_key(&image, family)) {
                            sink.rule(pattern, &t, -neg, Family::RuleNeg);
                        }
                    }
                }
            }
        }
    }
    skipped
}

/// Every candidate tuple for the arguments of `rule`, as atoms.
fn image_tuples(idx: &Index, rule: &KnowledgeRule, forward: bool) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for arg in &rule.args {
        let partners = if forward { idx.partners_of_1(&arg.name) } else { idx.partners_of_2(&arg.name) };
        out = out
            .into_iter()
            .flat_map(|prefix| {
                partners.iter().map(move |&a| {
                    let mut t = prefix.clone();
                    t.push(a);
                    t
                })
            })
            .collect();
        if out.is_empty() {
            break;
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn threshold_rules(
    o1: &Ontology,
    o2: &Ontology,
    r1: &RuleStore,
    r2: &RuleStore,
    idx: &Index,
    cfg: &WeightConfig,
    grid_n: usize,
    sink: &mut Sink,
) -> Result<usize, GroundingError> {
    let mut skipped = 0;
    let left = r1.conditional_rules(o1)?;
    let right = r2.conditional_rules(o2)?;
    for a in &left {
        for b in &right {
            let k = a.antecedents.len();
            if b.antecedents.len() != k {
                continue;
            }
            let Some(head) = idx.atom(&a.consequent.name, &b.consequent.name) else {
                skipped += 1;
                continue;
            };
            let pairings = alignments(k, |_| None, |i, j| {
                idx.atom(&a.antecedents[i].property.name, &b.antecedents[j].property.name)
            });
            if pairings.is_empty() {
                skipped += 1;
            }
            for atoms in pairings {
                let pairing: Vec<usize> = atoms
                    .iter()
                    .map(|&atom| {
                        let target = &idx.candidates[atom].e2.name;
                        b.antecedents.iter().position(|x| &x.property.name == target).expect("paired antecedent")
                    })
                    .collect();
                let d = distance(a, b, &pairing, grid_n)?;
                let mut tuple = atoms;
                tuple.push(head);
                if injective(idx, &tuple) {
                    sink.soft(Shape::All, tuple.into_iter().map(Literal::pos).collect(), cfg.d0 - d, Family::RuleDist);
                }
            }
        }
    }
    Ok(skipped)
}

fn distance(a: &ConditionalRule, b: &ConditionalRule, pairing: &[usize], grid_n: usize) -> Result<f64, GroundingError> {
    let maps = pairing
        .iter()
        .enumerate()
        .map(|(i, &j)| estimate_linear_map(a.antecedents[i].range, b.antecedents[j].range))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(rule_distance(a, b, pairing, &maps, grid_n)?)
}

/// Matching components under the same constructor force the complex match;
/// conversely a complex match softly implies each component has a partner.
fn constructors(o1: &Ontology, o2: &Ontology, idx: &Index, cfg: &WeightConfig, sink: &mut Sink) -> usize {
    let mut skipped = 0;
    for c1 in o1.complex_concepts() {
        for c2 in o2.complex_concepts() {
            if c1.constructor() != c2.constructor() || c1.components().len() != c2.components().len() {
                continue;
            }
            let (x, y) = (c1.components(), c2.components());
            let commutative = c1.constructor().is_commutative();
            let complex_atom = idx.atom(&c1.id().name, &c2.id().name);
            let tuples = alignments(
                x.len(),
                |i| if commutative { None } else { Some(i) },
                |i, j| idx.atom(&x[i].name, &y[j].name),
            );
            match complex_atom {
                Some(m) => {
                    for t in &tuples {
                        let mut lits: Vec<Literal> = t.iter().map(|&a| Literal::neg(a)).collect();
                        lits.push(Literal::pos(m));
                        sink.hard(lits, Family::CtorFwd);
                    }
                    for (i, xi) in x.iter().enumerate() {
                        let partners: Vec<&EntityId> = if commutative { y.iter().collect() } else { vec![&y[i]] };
                        let mut lits = vec![Literal::neg(m)];
                        lits.extend(partners.iter().filter_map(|p| idx.atom(&xi.name, &p.name)).map(Literal::pos));
                        sink.soft(Shape::Any, lits, cfg.w_constructor, Family::CtorBwd);
                    }
                }
                None if !tuples.is_empty() => skipped += 1,
                None => {}
            }
        }
    }
    skipped
}

/// Clause multiplicities by family, in family order.
pub fn family_summary(p: &GroundProblem) -> Vec<(Family, usize)> {
    let counts = p.family_counts();
    Family::ALL.iter().filter_map(|f| counts.get(f).map(|&n| (*f, n))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::parse_ontology;
    use crate::rules::parse_rules;
    use crate::similarity::CandidateKind;

    fn cand(o1: &Ontology, a: &str, o2: &Ontology, b: &str, sim: f64) -> Candidate {
        Candidate {
            e1: o1.entity(a).unwrap().clone(),
            e2: o2.entity(b).unwrap().clone(),
            sim,
            kind: CandidateKind::Simple,
        }
    }

    fn classes(tag: &str, names: &[&str], sub: Option<(&str, &str)>) -> Ontology {
        let axioms = sub
            .map(|(a, b)| format!(r#"{{"kind": "subclass_of", "args": ["{a}", "{b}"]}}"#))
            .unwrap_or_default();
        let names: Vec<String> = names.iter().map(|n| format!("\"{n}\"")).collect();
        parse_ontology(&format!(r#"{{"tag": "{tag}", "classes": [{}], "axioms": [{axioms}]}}"#, names.join(",")))
            .unwrap()
    }

    fn ground(o1: &Ontology, o2: &Ontology, cands: &[Candidate], r1: &str, r2: &str) -> GroundProblem {
        let r1 = parse_rules(r1, o1).unwrap();
        let r2 = parse_rules(r2, o2).unwrap();
        ground_problem(o1, o2, cands, &r1, &r2, &WeightConfig::default(), &GroundOptions::default()).unwrap()
    }

    #[test]
    fn shared_endpoint_gives_one_cardinality_clause() {
        let o1 = classes("O1", &["a"], None);
        let o2 = classes("O2", &["x", "y"], None);
        let cands = [cand(&o1, "a", &o2, "x", 0.9), cand(&o1, "a", &o2, "y", 0.8)];
        let p = ground(&o1, &o2, &cands, "", "");
        let counts = p.family_counts();
        assert_eq!(counts[&Family::Cardinality], 1);
        assert_eq!(counts[&Family::Apriori], 2);
        assert!(p.hard_clauses().all(|c| c.literals == [Literal::neg(0), Literal::neg(1)]));
    }

    #[test]
    fn two_by_two_with_one_subclass_axiom() {
        let o1 = classes("O1", &["A", "B"], Some(("A", "B")));
        let o2 = classes("O2", &["X", "Y"], None);
        let cands = [
            cand(&o1, "A", &o2, "X", 0.9),
            cand(&o1, "A", &o2, "Y", 0.2),
            cand(&o1, "B", &o2, "X", 0.3),
            cand(&o1, "B", &o2, "Y", 0.8),
        ];
        let p = ground(&o1, &o2, &cands, "", "");
        // A ⊑ B has no image under (A,X)(B,Y) or (A,Y)(B,X): two penalties.
        let counts = p.family_counts();
        assert_eq!(counts[&Family::Apriori], 4);
        assert_eq!(counts[&Family::Cardinality], 4);
        assert_eq!(counts[&Family::Stability], 2);
        assert_eq!(p.clauses.len(), 10);
        let stab: Vec<&WeightedClause> = p.clauses.iter().filter(|c| c.origin == Family::Stability).collect();
        assert_eq!(stab[0].literals, [Literal::neg(0), Literal::neg(3)]);
        assert_eq!(stab[0].weight, Weight::Soft(0.5));
        assert_eq!(stab[1].literals, [Literal::neg(1), Literal::neg(2)]);
    }

    #[test]
    fn subsumption_preserved_is_not_penalized() {
        let o1 = classes("O1", &["A", "B"], Some(("A", "B")));
        let o2 = classes("O2", &["X", "Y"], Some(("X", "Y")));
        let cands = [cand(&o1, "A", &o2, "X", 0.9), cand(&o1, "B", &o2, "Y", 0.8)];
        let p = ground(&o1, &o2, &cands, "", "");
        assert!(!p.family_counts().contains_key(&Family::Stability));
    }

    #[test]
    fn coherence_blocks_subclass_onto_disjoint() {
        let o1 = classes("O1", &["A", "B"], Some(("A", "B")));
        let o2 = parse_ontology(
            r#"{"tag": "O2", "classes": ["X", "Y"], "axioms": [{"kind": "disjoint_classes", "args": ["X", "Y"]}]}"#,
        )
        .unwrap();
        let cands = [cand(&o1, "A", &o2, "X", 0.9), cand(&o1, "B", &o2, "Y", 0.8)];
        let p = ground(&o1, &o2, &cands, "", "");
        let hard: Vec<_> = p.hard_clauses().filter(|c| c.origin == Family::Coherence).collect();
        assert_eq!(hard.len(), 1);
        assert_eq!(hard[0].literals, [Literal::neg(0), Literal::neg(1)]);
    }

    fn props(tag: &str, names: &[&str]) -> Ontology {
        let names: Vec<String> = names.iter().map(|n| format!("\"{n}\"")).collect();
        parse_ontology(&format!(r#"{{"tag": "{tag}", "object_properties": [{}]}}"#, names.join(","))).unwrap()
    }

    #[test]
    fn disjoint_props_rule_pair() {
        let o1 = props("cmt", &["writePaper", "readPaper"]);
        let o2 = props("confOf", &["writes", "reviews"]);
        let mut cands = Vec::new();
        for a in ["writePaper", "readPaper"] {
            for b in ["writes", "reviews"] {
                cands.push(cand(&o1, a, &o2, b, 0.0));
            }
        }
        let p = ground(
            &o1,
            &o2,
            &cands,
            r#"{"pattern": "disjoint_props", "args": ["writePaper", "readPaper"]}"#,
            r#"{"pattern": "disjoint_props", "args": ["writes", "reviews"]}"#,
        );
        // atoms: 0 wP-w, 1 wP-r, 2 rP-w, 3 rP-r
        let pos: Vec<_> = p.clauses.iter().filter(|c| c.origin == Family::RulePos).collect();
        assert_eq!(pos.len(), 1);
        assert_eq!(pos[0].literals, [Literal::pos(0), Literal::pos(3)]);
        assert_eq!((pos[0].shape, pos[0].weight), (Shape::All, Weight::Soft(1.0)));
        let neg: Vec<_> = p.clauses.iter().filter(|c| c.origin == Family::RuleNeg).collect();
        assert_eq!(neg.len(), 1);
        assert_eq!(neg[0].literals, [Literal::neg(1), Literal::neg(2)]);
        assert_eq!(p.skipped_tuples, 0);
    }

    #[test]
    fn knowledge_off_drops_rule_families() {
        let o1 = props("O1", &["p", "q"]);
        let o2 = props("O2", &["r", "s"]);
        let cands = [cand(&o1, "p", &o2, "r", 0.5), cand(&o1, "q", &o2, "s", 0.5)];
        let r1 = parse_rules(r#"{"pattern": "precedes", "args": ["p", "q"]}"#, &o1).unwrap();
        let r2 = parse_rules(r#"{"pattern": "precedes", "args": ["r", "s"]}"#, &o2).unwrap();
        let cfg = WeightConfig::default();
        let on = ground_problem(&o1, &o2, &cands, &r1, &r2, &cfg, &GroundOptions::default()).unwrap();
        let off = ground_problem(&o1, &o2, &cands, &r1, &r2, &cfg, &GroundOptions { knowledge: false, grid_n: 32 })
            .unwrap();
        assert!(on.clauses.iter().any(|c| c.origin.is_knowledge()));
        assert!(off.clauses.iter().all(|c| !c.origin.is_knowledge()));
    }

    #[test]
    fn nominal_match_requires_owner_match() {
        let o1 = parse_ontology(
            r#"{"tag": "O1", "data_properties": [{"name": "pos", "nominal_values": ["C"]}]}"#,
        )
        .unwrap();
        let o2 = parse_ontology(
            r#"{"tag": "O2", "data_properties": [{"name": "position", "nominal_values": ["C"]}]}"#,
        )
        .unwrap();
        let cands = [cand(&o1, "pos=C", &o2, "position=C", 0.0), cand(&o1, "pos", &o2, "position", 0.0)];
        let p = ground(&o1, &o2, &cands, "", "");
        let hard: Vec<_> = p.hard_clauses().collect();
        assert_eq!(hard.len(), 1);
        assert_eq!(hard[0].literals, [Literal::neg(0), Literal::pos(1)]);
        let alone = ground(&o1, &o2, &cands[..1], "", "");
        assert_eq!(alone.hard_clauses().next().unwrap().literals, [Literal::neg(0)]);
    }

    #[test]
    fn constructor_clauses() {
        let text = |tag: &str, a: &str, b: &str| {
            format!(
                r#"{{"tag": "{tag}", "classes": ["{a}", "{b}"],
                    "complex_concepts": [{{"op": "union", "args": ["{a}", "{b}"]}}]}}"#
            )
        };
        let o1 = parse_ontology(&text("O1", "A", "B")).unwrap();
        let o2 = parse_ontology(&text("O2", "X", "Y")).unwrap();
        let mut cands = vec![cand(&o1, "A", &o2, "Y", 0.9), cand(&o1, "B", &o2, "X", 0.9)];
        cands.push(Candidate {
            e1: o1.entity("union(A,B)").unwrap().clone(),
            e2: o2.entity("union(X,Y)").unwrap().clone(),
            sim: 0.0,
            kind: CandidateKind::Complex,
        });
        let p = ground(&o1, &o2, &cands, "", "");
        let fwd: Vec<_> = p.clauses.iter().filter(|c| c.origin == Family::CtorFwd).collect();
        assert_eq!(fwd.len(), 1);
        assert_eq!(fwd[0].literals, [Literal::neg(0), Literal::neg(1), Literal::pos(2)]);
        let bwd: Vec<_> = p.clauses.iter().filter(|c| c.origin == Family::CtorBwd).collect();
        assert_eq!(bwd.len(), 2);
        assert!(bwd.iter().all(|c| c.weight == Weight::Soft(0.5)));
    }

    #[test]
    fn errors_and_determinism() {
        let o1 = classes("O1", &["a"], None);
        let o2 = classes("O2", &["x"], None);
        let r = RuleStore::new("t");
        let cfg = WeightConfig::default();
        let opts = GroundOptions::default();
        assert!(matches!(ground_problem(&o1, &o2, &[], &r, &r, &cfg, &opts), Err(GroundingError::NoCandidates)));
        let mut bad = cand(&o1, "a", &o2, "x", 0.5);
        bad.e2.name = "ghost".into();
        assert!(matches!(
            ground_problem(&o1, &o2, &[bad], &r, &r, &cfg, &opts),
            Err(GroundingError::UnknownEntity(_))
        ));
        let cands = [cand(&o1, "a", &o2, "x", 0.5)];
        let p1 = ground_problem(&o1, &o2, &cands, &r, &r, &cfg, &opts).unwrap();
        let p2 = ground_problem(&o1, &o2, &cands, &r, &r, &cfg, &opts).unwrap();
        assert_eq!(p1.to_dump(), p2.to_dump());
    }

    #[test]
    fn weight_config_defaults_and_validation() {
        let cfg: WeightConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(cfg, WeightConfig::default());
        assert_eq!(cfg.rule_weights("precedes", PatternFamily::Symbolic), (1.0, 1.0));
        assert_eq!(cfg.rule_weights("assoc_implies", PatternFamily::Association), (0.25, 0.0));
        assert!(serde_json::from_str::<WeightConfig>(r#"{"bogus": 1}"#).is_err());
        assert!(WeightConfig { d0: 1.5, ..WeightConfig::default() }.validate().is_err());
        assert!(WeightConfig { tau: -0.1, ..WeightConfig::default() }.validate().is_err());
    }
}
