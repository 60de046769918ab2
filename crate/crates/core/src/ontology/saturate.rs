use std::collections::{BTreeMap, BTreeSet};

use super::model::{Axiom, AxiomKind, ComplexConcept, EntityId, Ontology};
use crate::error::OntologyError;

/// Closes the axiom set under transitivity of both subsumption kinds,
/// downward propagation and symmetry of disjointness, and inheritance of
/// domains and ranges along sub-properties. Naive fixpoint iteration.
pub fn saturate(o: &Ontology) -> Result<Ontology, OntologyError> {
    // Each derived axiom remembers the two premises it came from.
    let mut known: BTreeMap<Axiom, Option<(Axiom, Axiom)>> =
        o.axioms.iter().map(|a| (a.clone(), None)).collect();
    loop {
        let mut fresh: Vec<(Axiom, (Axiom, Axiom))> = Vec::new();
        let by_kind = |k: AxiomKind| known.keys().filter(move |a| a.kind == k);
        for (sub, disj) in [
            (AxiomKind::SubClassOf, AxiomKind::DisjointClasses),
            (AxiomKind::SubPropertyOf, AxiomKind::DisjointProperties),
        ] {
            for ab in by_kind(sub) {
                for bc in by_kind(sub).filter(|bc| bc.lhs == ab.rhs) {
                    let ac = Axiom { kind: sub, lhs: ab.lhs.clone(), rhs: bc.rhs.clone() };
                    fresh.push((ac, (ab.clone(), bc.clone())));
                }
                for bc in by_kind(disj).filter(|bc| bc.lhs == ab.rhs) {
                    let ac = Axiom { kind: disj, lhs: ab.lhs.clone(), rhs: bc.rhs.clone() };
                    fresh.push((ac, (ab.clone(), bc.clone())));
                }
            }
            for ab in by_kind(disj) {
                let ba = Axiom { kind: disj, lhs: ab.rhs.clone(), rhs: ab.lhs.clone() };
                fresh.push((ba, (ab.clone(), ab.clone())));
            }
        }
        for pq in by_kind(AxiomKind::SubPropertyOf) {
            for kind in [AxiomKind::Domain, AxiomKind::Range] {
                for qc in by_kind(kind).filter(|qc| qc.lhs == pq.rhs) {
                    // Range only applies to object properties; the sub-property
                    // shares the super-property's sort, so the kind check holds.
                    let pc = Axiom { kind, lhs: pq.lhs.clone(), rhs: qc.rhs.clone() };
                    fresh.push((pc, (pq.clone(), qc.clone())));
                }
            }
        }
        let mut changed = false;
        for (axiom, premises) in fresh {
            if !known.contains_key(&axiom) {
                known.insert(axiom, Some(premises));
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    if let Some(bad) = known.keys().find(|a| {
        matches!(a.kind, AxiomKind::DisjointClasses | AxiomKind::DisjointProperties) && a.lhs == a.rhs
    }) {
        let mut chain = Vec::new();
        let mut seen = BTreeSet::new();
        derivation(bad, &known, &mut seen, &mut chain);
        return Err(OntologyError::Inconsistent { entity: bad.lhs.name.clone(), chain });
    }

    let mut out = o.clone();
    out.axioms = known.into_keys().collect();
    Ok(out)
}

fn derivation(
    a: &Axiom,
    known: &BTreeMap<Axiom, Option<(Axiom, Axiom)>>,
    seen: &mut BTreeSet<Axiom>,
    chain: &mut Vec<String>,
) {
    if !seen.insert(a.clone()) {
        return;
    }
    if let Some(Some((p, q))) = known.get(a) {
        derivation(p, known, seen, chain);
        derivation(q, known, seen, chain);
        chain.push(format!("{a} from {p} and {q}"));
    } else {
        chain.push(format!("{a} asserted"));
    }
}

/// Complex concepts syntactically present in the ontology (axioms and
/// declarations, including nested components) or in the given rule
/// arguments. Nothing is generated freely.
pub fn enumerate_complex_concepts<'a>(
    o: &Ontology,
    rule_args: impl IntoIterator<Item = &'a EntityId>,
    rule_concepts: impl IntoIterator<Item = &'a ComplexConcept>,
) -> BTreeSet<ComplexConcept> {
    let mut out: BTreeSet<ComplexConcept> = o.complex.values().cloned().collect();
    let from_rules: BTreeMap<&str, &ComplexConcept> =
        rule_concepts.into_iter().map(|c| (c.id().name.as_str(), c)).collect();
    let mut stack: Vec<&EntityId> = rule_args.into_iter().filter(|e| e.kind.is_complex()).collect();
    while let Some(e) = stack.pop() {
        let concept = o.complex.get(&e.name).or_else(|| from_rules.get(e.name.as_str()).copied());
        if let Some(c) = concept {
            if out.insert(c.clone()) {
                stack.extend(c.components().iter().filter(|x| x.kind.is_complex()));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::parse_ontology;

    fn onto(classes: &[&str], axioms: &[(&str, &str, &str)]) -> Ontology {
        let axioms: Vec<String> = axioms
            .iter()
            .map(|(k, a, b)| format!(r#"{{"kind": "{k}", "args": ["{a}", "{b}"]}}"#))
            .collect();
        let classes: Vec<String> = classes.iter().map(|c| format!("\"{c}\"")).collect();
        parse_ontology(&format!(
            r#"{{"tag": "O1", "classes": [{}], "object_properties": ["p", "q", "r"], "axioms": [{}]}}"#,
            classes.join(","),
            axioms.join(",")
        ))
        .unwrap()
    }

    #[test]
    fn subclass_transitivity() {
        let o = onto(&["A", "B", "C"], &[("subclass_of", "A", "B"), ("subclass_of", "B", "C")]);
        let s = saturate(&o).unwrap();
        assert!(s.has_axiom(AxiomKind::SubClassOf, "A", "C"));
        assert_eq!(s.axioms().len(), 3);
    }

    #[test]
    fn disjointness_propagates_down_and_symmetrically() {
        let o = onto(&["A", "B", "C"], &[("subclass_of", "A", "B"), ("disjoint_classes", "B", "C")]);
        let s = saturate(&o).unwrap();
        assert!(s.has_axiom(AxiomKind::DisjointClasses, "A", "C"));
        assert!(s.has_axiom(AxiomKind::DisjointClasses, "C", "A"));
        assert!(s.has_axiom(AxiomKind::DisjointClasses, "C", "B"));
    }

    #[test]
    fn inconsistency_names_entity() {
        let o = onto(
            &["A", "B", "C"],
            &[("subclass_of", "A", "B"), ("subclass_of", "A", "C"), ("disjoint_classes", "B", "C")],
        );
        match saturate(&o).unwrap_err() {
            OntologyError::Inconsistent { entity, chain } => {
                assert_eq!(entity, "A");
                assert!(chain.iter().any(|l| l.contains("disjoint_classes(B, C) asserted")));
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn domain_and_range_inherited() {
        let o = onto(
            &["A", "B"],
            &[("subproperty_of", "p", "q"), ("domain", "q", "A"), ("range", "q", "B"), ("subproperty_of", "r", "p")],
        );
        let s = saturate(&o).unwrap();
        assert!(s.has_axiom(AxiomKind::Domain, "p", "A"));
        assert!(s.has_axiom(AxiomKind::Range, "r", "B"));
        assert!(s.has_axiom(AxiomKind::SubPropertyOf, "r", "q"));
    }

    #[test]
    fn idempotent() {
        let o = onto(
            &["A", "B", "C", "D"],
            &[("subclass_of", "A", "B"), ("subclass_of", "B", "C"), ("disjoint_classes", "C", "D")],
        );
        let s = saturate(&o).unwrap();
        assert_eq!(saturate(&s).unwrap(), s);
    }

    #[test]
    fn complex_concepts_from_axioms_and_rules() {
        let o = parse_ontology(
            r#"{"tag": "conference", "classes": ["Reviewed_contribution", "Acceptance"],
                "object_properties": ["contributes", "reviews", "hasDecision"],
                "axioms": [{"kind": "disjoint_properties", "args": [
                    {"op": "restrict_range", "args": ["contributes", "Reviewed_contribution"]},
                    {"op": "compose", "args": ["contributes", "reviews"]}]}]}"#,
        )
        .unwrap();
        let names: Vec<_> = enumerate_complex_concepts(&o, [], []).iter().map(|c| c.id().name.clone()).collect();
        assert_eq!(names, ["compose(contributes,reviews)", "restrict_range(contributes,Reviewed_contribution)"]);

        let plain = parse_ontology(r#"{"tag": "x", "classes": ["A"]}"#).unwrap();
        assert!(enumerate_complex_concepts(&plain, [], []).is_empty());

        let exists = ComplexConcept::new(
            super::super::model::Constructor::Exists,
            vec![o.entity("hasDecision").unwrap().clone(), o.entity("Acceptance").unwrap().clone()],
        )
        .unwrap();
        let all = enumerate_complex_concepts(&o, [exists.id()], [&exists]);
        assert_eq!(all.len(), 3);
        assert!(all.contains(&exists));
    }
}
