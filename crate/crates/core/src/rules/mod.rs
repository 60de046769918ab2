//! Knowledge rules: relation patterns over entities with optional numeric
//! parameters, their ingestion from JSON-lines files, mining from data and
//! comparison across ontologies.

mod apriori;
mod dataset;
mod distance;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

pub use apriori::{mine_association_rules, MiningParams};
pub use dataset::{apply_edges, discretize, BinStrategy, Column, ColumnData, Dataset};
pub use distance::{
    absolute_difference, estimate_linear_map, rule_distance, rule_distance_with, LinearMap,
};

use crate::error::RuleError;
use crate::ontology::{resolve_ref, ComplexConcept, EntityId, EntityKind, EntityRef, NumericRange, Ontology};

/// Conditional rules never have more antecedents than this.
pub const MAX_ANTECEDENTS: usize = 3;

pub const PRECEDES: &str = "precedes";
pub const DISJOINT_PROPS: &str = "disjoint_props";
pub const PROPAGATES: &str = "propagates";
pub const CORRELATED: &str = "correlated";
pub const ANTICORRELATED: &str = "anticorrelated";
pub const THRESHOLD_IMPLIES: &str = "threshold_implies";
pub const ASSOC_IMPLIES: &str = "assoc_implies";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PatternFamily {
    /// Holds or does not hold for an ordered argument tuple.
    Symbolic,
    /// Mined association rule; antecedent order is irrelevant.
    Association,
    /// Conditional distribution over numeric thresholds; compared by distance.
    Threshold,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RulePattern {
    pub id: String,
    pub min_arity: usize,
    pub max_arity: usize,
    pub has_params: bool,
    pub family: PatternFamily,
    pub semantics: String,
}

impl RulePattern {
    pub fn symbolic(id: &str, arity: usize, semantics: &str) -> Self {
        RulePattern {
            id: id.to_string(),
            min_arity: arity,
            max_arity: arity,
            has_params: false,
            family: PatternFamily::Symbolic,
            semantics: semantics.to_string(),
        }
    }

    fn arity_text(&self) -> String {
        if self.min_arity == self.max_arity {
            self.min_arity.to_string()
        } else {
            format!("{}..={}", self.min_arity, self.max_arity)
        }
    }
}

pub fn builtin_patterns() -> Vec<RulePattern> {
    vec![
        RulePattern::symbolic(PRECEDES, 2, "values of a precede values of b"),
        RulePattern::symbolic(DISJOINT_PROPS, 2, "a is disjoint from b"),
        RulePattern::symbolic(PROPAGATES, 2, "a(x) and b(x, y) imply a(y)"),
        RulePattern::symbolic(CORRELATED, 2, "a and b are positively correlated"),
        RulePattern::symbolic(ANTICORRELATED, 2, "a and b are negatively correlated"),
        RulePattern {
            id: THRESHOLD_IMPLIES.to_string(),
            min_arity: 2,
            max_arity: MAX_ANTECEDENTS + 1,
            has_params: true,
            family: PatternFamily::Threshold,
            semantics: "a op t1 and b op t2 ... imply the last argument with probability p".to_string(),
        },
        RulePattern {
            id: ASSOC_IMPLIES.to_string(),
            min_arity: 2,
            max_arity: 16,
            has_params: true,
            family: PatternFamily::Association,
            semantics: "items a, b, ... imply the last item with confidence p; params hold bins (0 for nominal values)"
                .to_string(),
        },
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Comparison {
    #[serde(rename = ">")]
    Greater,
    #[serde(rename = "<=")]
    AtMost,
}

impl Comparison {
    pub fn holds(self, value: f64, threshold: f64) -> bool {
        match self {
            Comparison::Greater => value > threshold,
            Comparison::AtMost => value <= threshold,
        }
    }

    fn parse(s: &str) -> Option<Comparison> {
        match s {
            ">" => Some(Comparison::Greater),
            "<=" | "≤" => Some(Comparison::AtMost),
            _ => None,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Comparison::Greater => ">",
            Comparison::AtMost => "<=",
        }
    }
}

/// `R(a, b, ...; params)` with a confidence (or consequent probability).
#[derive(Debug, Clone, PartialEq)]
pub struct KnowledgeRule {
    pub pattern: String,
    pub args: Vec<EntityId>,
    pub params: Vec<f64>,
    pub confidence: f64,
    /// Antecedent comparisons of threshold rules; empty otherwise.
    pub ops: Vec<Comparison>,
    /// Consequent probability outside the antecedent region, if known.
    pub p_else: Option<f64>,
}

impl KnowledgeRule {
    pub fn symbolic(pattern: &str, args: Vec<EntityId>) -> Self {
        KnowledgeRule { pattern: pattern.to_string(), args, params: Vec::new(), confidence: 1.0, ops: Vec::new(), p_else: None }
    }
}

impl fmt::Display for KnowledgeRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<&str> = self.args.iter().map(|a| a.name.as_str()).collect();
        write!(f, "{}({}", self.pattern, args.join(", "))?;
        if !self.params.is_empty() {
            let ps: Vec<String> = self.params.iter().map(|p| p.to_string()).collect();
            write!(f, "; [{}]", ps.join(", "))?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Antecedent {
    pub property: EntityId,
    pub op: Comparison,
    pub threshold: f64,
    /// Declared range of the property in its ontology.
    pub range: NumericRange,
}

/// `x1 op t1 ∧ ... ⇒ consequent` with probability `p_consequent` inside the
/// region and `p_else` outside it.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalRule {
    pub antecedents: Vec<Antecedent>,
    pub consequent: EntityId,
    pub p_consequent: f64,
    pub p_else: f64,
}

impl ConditionalRule {
    pub fn new(
        antecedents: Vec<Antecedent>,
        consequent: EntityId,
        p_consequent: f64,
        p_else: Option<f64>,
    ) -> Result<Self, RuleError> {
        let pattern = THRESHOLD_IMPLIES.to_string();
        if antecedents.is_empty() || antecedents.len() > MAX_ANTECEDENTS {
            return Err(RuleError::Arity {
                pattern,
                expected: format!("1..={MAX_ANTECEDENTS} antecedents"),
                got: antecedents.len(),
            });
        }
        let mut names = BTreeSet::new();
        for a in &antecedents {
            if !names.insert(a.property.name.as_str()) {
                return Err(RuleError::Argument {
                    name: a.property.name.clone(),
                    detail: "antecedent properties must be distinct".to_string(),
                });
            }
            if a.property.kind != EntityKind::DataProperty {
                return Err(RuleError::Argument {
                    name: a.property.name.clone(),
                    detail: "antecedents must be numeric data properties".to_string(),
                });
            }
            if !a.range.contains(a.threshold) {
                return Err(RuleError::ThresholdOutOfRange {
                    property: a.property.name.clone(),
                    threshold: a.threshold,
                    min: a.range.min,
                    max: a.range.max,
                });
            }
        }
        let p_else = p_else.unwrap_or(0.0);
        for p in [p_consequent, p_else] {
            if !(0.0..=1.0).contains(&p) {
                return Err(RuleError::Params { pattern, detail: format!("probability {p} outside [0, 1]") });
            }
        }
        Ok(ConditionalRule { antecedents, consequent, p_consequent, p_else })
    }

    /// Builds the conditional view of a `threshold_implies` rule.
    pub fn from_rule(rule: &KnowledgeRule, o: &Ontology) -> Result<Self, RuleError> {
        if rule.pattern != THRESHOLD_IMPLIES {
            return Err(RuleError::Params {
                pattern: rule.pattern.clone(),
                detail: "not a conditional rule".to_string(),
            });
        }
        let n = rule.args.len().saturating_sub(1);
        let antecedents = rule.args[..n]
            .iter()
            .zip(&rule.params)
            .enumerate()
            .map(|(i, (property, &threshold))| {
                let range = o.range_of(&property.name).ok_or_else(|| RuleError::MissingRange(property.name.clone()))?;
                let op = rule.ops.get(i).copied().unwrap_or(Comparison::Greater);
                Ok(Antecedent { property: property.clone(), op, threshold, range })
            })
            .collect::<Result<Vec<_>, RuleError>>()?;
        ConditionalRule::new(antecedents, rule.args[n].clone(), rule.confidence, rule.p_else)
    }

    pub fn in_region(&self, point: &[f64]) -> bool {
        self.antecedents.iter().zip(point).all(|(a, &x)| a.op.holds(x, a.threshold))
    }

    pub fn probability_at(&self, point: &[f64]) -> f64 {
        if self.in_region(point) {
            self.p_consequent
        } else {
            self.p_else
        }
    }
}

/// Validated rules of one ontology together with the patterns they use.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleStore {
    tag: String,
    patterns: BTreeMap<String, RulePattern>,
    rules: Vec<KnowledgeRule>,
    concepts: Vec<ComplexConcept>,
}

impl RuleStore {
    pub fn new(tag: impl Into<String>) -> Self {
        RuleStore {
            tag: tag.into(),
            patterns: builtin_patterns().into_iter().map(|p| (p.id.clone(), p)).collect(),
            rules: Vec::new(),
            concepts: Vec::new(),
        }
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn rules(&self) -> &[KnowledgeRule] {
        &self.rules
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn pattern(&self, id: &str) -> Option<&RulePattern> {
        self.patterns.get(id)
    }

    pub fn patterns(&self) -> impl Iterator<Item = &RulePattern> {
        self.patterns.values()
    }

    /// Complex concepts that appear in rule arguments.
    pub fn concepts(&self) -> &[ComplexConcept] {
        &self.concepts
    }

    pub fn register_pattern(&mut self, pattern: RulePattern) -> Result<(), RuleError> {
        if pattern.min_arity == 0 || pattern.min_arity > pattern.max_arity {
            return Err(RuleError::Arity { pattern: pattern.id, expected: ">= 1".to_string(), got: 0 });
        }
        match self.patterns.get(&pattern.id) {
            Some(existing) if existing != &pattern => Err(RuleError::Params {
                pattern: pattern.id,
                detail: "conflicting redeclaration".to_string(),
            }),
            _ => {
                self.patterns.insert(pattern.id.clone(), pattern);
                Ok(())
            }
        }
    }

    /// Validates `rule` against its pattern and `o`, then stores it.
    pub fn add(&mut self, rule: KnowledgeRule, o: &Ontology) -> Result<(), RuleError> {
        let pattern = self.patterns.get(&rule.pattern).ok_or_else(|| RuleError::UnknownPattern(rule.pattern.clone()))?;
        validate_rule(&rule, pattern, o)?;
        if rule.args.iter().any(|a| a.tag != self.tag) {
            return Err(RuleError::Argument {
                name: rule.args[0].name.clone(),
                detail: format!("rule arguments must belong to {}", self.tag),
            });
        }
        self.rules.push(rule);
        Ok(())
    }

    /// Merges rules from another store over the same ontology.
    pub fn extend(&mut self, other: RuleStore) -> Result<(), RuleError> {
        for p in other.patterns.into_values() {
            self.register_pattern(p)?;
        }
        for c in other.concepts {
            if !self.concepts.contains(&c) {
                self.concepts.push(c);
            }
        }
        self.rules.extend(other.rules);
        Ok(())
    }

    pub fn rules_of<'a>(&'a self, pattern: &'a str) -> impl Iterator<Item = &'a KnowledgeRule> + 'a {
        self.rules.iter().filter(move |r| r.pattern == pattern)
    }

    /// Entities that appear as rule arguments.
    pub fn participants(&self) -> BTreeSet<&EntityId> {
        let mut out = BTreeSet::new();
        for r in &self.rules {
            out.extend(r.args.iter());
        }
        out
    }

    /// Conditional views of every `threshold_implies` rule.
    pub fn conditional_rules(&self, o: &Ontology) -> Result<Vec<ConditionalRule>, RuleError> {
        self.rules_of(THRESHOLD_IMPLIES).map(|r| ConditionalRule::from_rule(r, o)).collect()
    }

    /// One JSON object per line, in store order.
    pub fn to_json_lines(&self, o: &Ontology) -> String {
        let mut out = String::new();
        let builtin: BTreeSet<String> = builtin_patterns().into_iter().map(|p| p.id).collect();
        for p in self.patterns.values().filter(|p| !builtin.contains(&p.id)) {
            let decl = DeclareLine { declare: p.id.clone(), arity: p.min_arity };
            out.push_str(&serde_json::to_string(&decl).expect("serializes"));
            out.push('\n');
        }
        for r in &self.rules {
            let pattern = &self.patterns[&r.pattern];
            let line = RuleLine {
                pattern: r.pattern.clone(),
                args: r.args.iter().map(|a| ref_for(o, &self.concepts, a)).collect(),
                params: pattern.has_params.then(|| r.params.clone()),
                p: (pattern.family != PatternFamily::Symbolic || r.confidence != 1.0).then_some(r.confidence),
                ops: (!r.ops.is_empty()).then(|| r.ops.iter().map(|o| o.symbol().to_string()).collect()),
                p_else: r.p_else,
            };
            out.push_str(&serde_json::to_string(&line).expect("serializes"));
            out.push('\n');
        }
        out
    }
}

fn ref_for(o: &Ontology, concepts: &[ComplexConcept], e: &EntityId) -> EntityRef {
    match concepts.iter().find(|c| c.id() == e) {
        Some(c) => EntityRef::term(c.constructor(), c.components().iter().map(|x| ref_for(o, concepts, x)).collect()),
        None => EntityRef::from_entity(o, e),
    }
}

fn validate_rule(rule: &KnowledgeRule, pattern: &RulePattern, o: &Ontology) -> Result<(), RuleError> {
    let n = rule.args.len();
    if n < pattern.min_arity || n > pattern.max_arity {
        return Err(RuleError::Arity { pattern: pattern.id.clone(), expected: pattern.arity_text(), got: n });
    }
    for a in &rule.args {
        let known = o.entity(&a.name) == Some(a) || (a.kind.is_complex() && a.tag == o.tag());
        if !known {
            return Err(RuleError::Ontology(crate::error::OntologyError::UnknownEntity(a.name.clone())));
        }
    }
    let params_err = |detail: String| RuleError::Params { pattern: pattern.id.clone(), detail };
    if pattern.has_params == rule.params.is_empty() {
        return Err(params_err(if pattern.has_params {
            "parameters required".to_string()
        } else {
            "pattern takes no parameters".to_string()
        }));
    }
    if !(0.0..=1.0).contains(&rule.confidence) {
        return Err(params_err(format!("probability {} outside [0, 1]", rule.confidence)));
    }
    match pattern.family {
        PatternFamily::Symbolic => {
            if !rule.ops.is_empty() || rule.p_else.is_some() {
                return Err(params_err("ops and p_else only apply to threshold rules".to_string()));
            }
        }
        PatternFamily::Threshold => {
            if rule.params.len() != n - 1 {
                return Err(params_err(format!("expected {} thresholds, got {}", n - 1, rule.params.len())));
            }
            if !rule.ops.is_empty() && rule.ops.len() != n - 1 {
                return Err(params_err(format!("expected {} ops, got {}", n - 1, rule.ops.len())));
            }
            ConditionalRule::from_rule(rule, o)?;
        }
        PatternFamily::Association => {
            if rule.params.len() != n {
                return Err(params_err(format!("expected {} bin parameters, got {}", n, rule.params.len())));
            }
            if !rule.ops.is_empty() || rule.p_else.is_some() {
                return Err(params_err("ops and p_else only apply to threshold rules".to_string()));
            }
            let mut attributes = BTreeSet::new();
            for (a, &p) in rule.args.iter().zip(&rule.params) {
                let attribute = match &a.kind {
                    EntityKind::DataProperty if p >= 1.0 && p.fract() == 0.0 => a.name.as_str(),
                    EntityKind::NominalValue { owner } if p == 0.0 => owner.as_str(),
                    _ => {
                        return Err(RuleError::Argument {
                            name: a.name.clone(),
                            detail: format!("item with parameter {p} must be a binned data property (>= 1) or a nominal value (0)"),
                        })
                    }
                };
                if !attributes.insert(attribute) {
                    return Err(RuleError::Argument {
                        name: a.name.clone(),
                        detail: "attribute repeated within one association rule".to_string(),
                    });
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleLine {
    pattern: String,
    args: Vec<EntityRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ops: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p_else: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DeclareLine {
    declare: String,
    arity: usize,
}

/// Parses a JSON-lines rules file against an ontology. Blank lines and lines
/// starting with `#` are skipped. A line `{"declare": id, "arity": n}` adds a
/// symbolic pattern.
pub fn parse_rules(text: &str, o: &Ontology) -> Result<RuleStore, RuleError> {
    let mut store = RuleStore::new(o.tag());
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        parse_line(trimmed, o, &mut store).map_err(|e| e.at_line(i + 1))?;
    }
    Ok(store)
}

fn parse_line(line: &str, o: &Ontology, store: &mut RuleStore) -> Result<(), RuleError> {
    let value: serde_json::Value =
        serde_json::from_str(line).map_err(|e| RuleError::Syntax { column: e.column(), message: e.to_string() })?;
    let shape_err = |e: serde_json::Error| RuleError::Syntax { column: 0, message: e.to_string() };
    if value.get("declare").is_some() {
        let decl: DeclareLine = serde_json::from_value(value).map_err(shape_err)?;
        return store.register_pattern(RulePattern::symbolic(&decl.declare, decl.arity, "declared in rules file"));
    }
    let line: RuleLine = serde_json::from_value(value).map_err(shape_err)?;
    let mut built = Vec::new();
    let args = line.args.iter().map(|r| resolve_ref(o, r, &mut built)).collect::<Result<Vec<_>, _>>()?;
    let ops = line
        .ops
        .unwrap_or_default()
        .iter()
        .map(|s| {
            Comparison::parse(s).ok_or_else(|| RuleError::Params {
                pattern: line.pattern.clone(),
                detail: format!("unknown comparison `{s}`"),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let rule = KnowledgeRule {
        pattern: line.pattern,
        args,
        params: line.params.unwrap_or_default(),
        confidence: line.p.unwrap_or(1.0),
        ops,
        p_else: line.p_else,
    };
    store.add(rule, o)?;
    for c in built {
        if !store.concepts.contains(&c) {
            store.concepts.push(c);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::parse_ontology;

    fn conference() -> Ontology {
        parse_ontology(
            r#"{"tag": "cmt", "classes": ["Paper"], "object_properties": ["writePaper", "readPaper"],
                "data_properties": [{"name": "paperDueOn"}, {"name": "manuscriptDueOn"}]}"#,
        )
        .unwrap()
    }

    fn nba() -> Ontology {
        parse_ontology(
            r#"{"tag": "nba", "data_properties": [
                {"name": "h", "range_min": 60, "range_max": 90},
                {"name": "w", "range_min": 150, "range_max": 330},
                {"name": "pos", "nominal_values": ["Center", "Guard"]}]}"#,
        )
        .unwrap()
    }

    #[test]
    fn precedes_rule_is_stored() {
        let o = conference();
        let s = parse_rules(r#"{"pattern":"precedes","args":["paperDueOn","manuscriptDueOn"]}"#, &o).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.rules()[0].pattern, PRECEDES);
        assert_eq!(s.rules()[0].args[1].name, "manuscriptDueOn");
    }

    #[test]
    fn arity_mismatch_reports_line() {
        let o = conference();
        let text = "\n{\"pattern\":\"disjoint_props\",\"args\":[\"writePaper\",\"readPaper\",\"writePaper\",\"readPaper\"]}";
        match parse_rules(text, &o).unwrap_err() {
            RuleError::Line { line, source } => {
                assert_eq!(line, 2);
                assert!(matches!(*source, RuleError::Arity { got: 4, .. }));
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn unknown_entity_and_pattern() {
        let o = conference();
        assert!(parse_rules(r#"{"pattern":"precedes","args":["ghost","paperDueOn"]}"#, &o).is_err());
        assert!(parse_rules(r#"{"pattern":"nope","args":["paperDueOn"]}"#, &o).is_err());
        assert!(parse_rules(r#"{"pattern":"precedes","args":["paperDueOn","manuscriptDueOn"],"params":[1]}"#, &o)
            .is_err());
    }

    #[test]
    fn conditional_rule_threshold_checks() {
        let o = nba();
        let ok = parse_rules(
            r#"{"pattern":"threshold_implies","args":["h","w","pos=Center"],"params":[81,245],"p":1.0}"#,
            &o,
        )
        .unwrap();
        let c = &ok.conditional_rules(&o).unwrap()[0];
        assert_eq!(c.antecedents[0].threshold, 81.0);
        assert_eq!(c.antecedents[1].op, Comparison::Greater);
        assert_eq!(c.p_else, 0.0);
        assert!(c.in_region(&[82.0, 250.0]));
        assert!(!c.in_region(&[81.0, 250.0]));

        let err = parse_rules(
            r#"{"pattern":"threshold_implies","args":["h","pos=Center"],"params":[95]}"#,
            &o,
        )
        .unwrap_err();
        assert!(matches!(err, RuleError::Line { ref source, .. } if matches!(**source, RuleError::ThresholdOutOfRange { .. })));
        let dup = parse_rules(
            r#"{"pattern":"threshold_implies","args":["h","h","pos=Center"],"params":[70, 80]}"#,
            &o,
        );
        assert!(dup.is_err());
        let no_range = parse_rules(
            r#"{"pattern":"threshold_implies","args":["pos","pos=Center"],"params":[1]}"#,
            &o,
        );
        assert!(no_range.is_err());
    }

    #[test]
    fn ops_and_p_else() {
        let o = nba();
        let s = parse_rules(
            r#"{"pattern":"threshold_implies","args":["h","pos=Guard"],"params":[75],"ops":["<="],"p":0.9,"p_else":0.1}"#,
            &o,
        )
        .unwrap();
        let c = &s.conditional_rules(&o).unwrap()[0];
        assert_eq!(c.probability_at(&[70.0]), 0.9);
        assert_eq!(c.probability_at(&[80.0]), 0.1);
        let round = parse_rules(&s.to_json_lines(&o), &o).unwrap();
        assert_eq!(round, s);
    }

    #[test]
    fn association_items_validated() {
        let o = nba();
        assert!(parse_rules(
            r#"{"pattern":"assoc_implies","args":["h","pos=Center"],"params":[5,0],"p":0.95}"#,
            &o
        )
        .is_ok());
        assert!(parse_rules(r#"{"pattern":"assoc_implies","args":["h","pos=Center"],"params":[0,0]}"#, &o).is_err());
        assert!(parse_rules(
            r#"{"pattern":"assoc_implies","args":["pos=Guard","pos=Center"],"params":[0,0]}"#,
            &o
        )
        .is_err());
    }

    #[test]
    fn declared_patterns_and_complex_args() {
        let o = parse_ontology(
            r#"{"tag": "conference", "classes": ["Reviewed_contribution"],
                "object_properties": ["contributes", "reviews"]}"#,
        )
        .unwrap();
        let text = r#"
{"declare":"coauthor_of","arity":3}
{"pattern":"coauthor_of","args":["contributes","reviews","contributes"]}
{"pattern":"disjoint_props","args":[{"op":"restrict_range","args":["contributes","Reviewed_contribution"]},{"op":"compose","args":["contributes","reviews"]}]}
"#;
        let s = parse_rules(text, &o).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.concepts().len(), 2);
        assert_eq!(s.rules()[1].args[0].name, "restrict_range(contributes,Reviewed_contribution)");
        assert_eq!(parse_rules(&s.to_json_lines(&o), &o).unwrap(), s);
    }
}
