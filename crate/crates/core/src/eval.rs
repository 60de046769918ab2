//! Alignments, their file formats, and precision/recall scoring.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::EvalError;
use crate::ontology::EntityRef;

/// A one-to-one set of equivalences between entity names of two ontologies.
/// Complex concepts are named by their canonical ids.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Alignment {
    pub onto1: Option<String>,
    pub onto2: Option<String>,
    pairs: BTreeSet<(String, String)>,
    /// Free-form record of how the alignment was produced.
    pub provenance: Option<serde_json::Value>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CorrespondenceFile {
    e1: EntityRef,
    e2: EntityRef,
    #[serde(default = "equivalence")]
    relation: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    confidence: Option<f64>,
}

fn equivalence() -> String {
    "=".to_string()
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum AlignmentFile {
    List(Vec<CorrespondenceFile>),
    Object(AlignmentObject),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlignmentObject {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    onto1: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    onto2: Option<String>,
    correspondences: Vec<CorrespondenceFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<serde_json::Value>,
}

impl Alignment {
    pub fn new(onto1: Option<String>, onto2: Option<String>) -> Self {
        Alignment { onto1, onto2, ..Alignment::default() }
    }

    /// Adds a correspondence, rejecting a second partner for either side.
    pub fn insert(&mut self, e1: impl Into<String>, e2: impl Into<String>) -> Result<(), EvalError> {
        let (e1, e2) = (e1.into(), e2.into());
        if self.pairs.contains(&(e1.clone(), e2.clone())) {
            return Ok(());
        }
        if self.pairs.iter().any(|(a, _)| *a == e1) {
            return Err(EvalError::NotOneToOne(e1));
        }
        if self.pairs.iter().any(|(_, b)| *b == e2) {
            return Err(EvalError::NotOneToOne(e2));
        }
        self.pairs.insert((e1, e2));
        Ok(())
    }

    pub fn pairs(&self) -> &BTreeSet<(String, String)> {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, e1: &str, e2: &str) -> bool {
        self.pairs.contains(&(e1.to_string(), e2.to_string()))
    }

    /// Accepts either a bare list of correspondences or an object with
    /// `onto1`, `onto2`, `correspondences` and optional `provenance`.
    pub fn from_json(text: &str) -> Result<Self, EvalError> {
        let file: AlignmentFile = serde_json::from_str(text)
            .map_err(|e| EvalError::Syntax { line: e.line(), column: e.column(), message: e.to_string() })?;
        let (mut out, items) = match file {
            AlignmentFile::List(items) => (Alignment::default(), items),
            AlignmentFile::Object(o) => {
                let mut a = Alignment::new(o.onto1, o.onto2);
                a.provenance = o.provenance;
                (a, o.correspondences)
            }
        };
        for c in items {
            if c.relation != "=" {
                return Err(EvalError::Relation(c.relation));
            }
            out.insert(c.e1.canonical_name()?, c.e2.canonical_name()?)?;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        let file = AlignmentObject {
            onto1: self.onto1.clone(),
            onto2: self.onto2.clone(),
            correspondences: self
                .pairs
                .iter()
                .map(|(a, b)| CorrespondenceFile {
                    e1: EntityRef::name(a.clone()),
                    e2: EntityRef::name(b.clone()),
                    relation: equivalence(),
                    confidence: None,
                })
                .collect(),
            provenance: self.provenance.clone(),
        };
        let mut text = serde_json::to_string_pretty(&file).expect("alignment serializes");
        text.push('\n');
        text
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Precision is 1 for an empty prediction; F1 is 0 exactly when nothing overlaps.
pub fn score_alignment(pred: &Alignment, reference: &Alignment) -> Result<Scores, EvalError> {
    let differs = |a: &Option<String>, b: &Option<String>| matches!((a, b), (Some(x), Some(y)) if x != y);
    if differs(&pred.onto1, &reference.onto1) || differs(&pred.onto2, &reference.onto2) {
        let show = |t: &Option<String>| t.clone().unwrap_or_else(|| "?".into());
        return Err(EvalError::TagMismatch {
            pred1: show(&pred.onto1),
            pred2: show(&pred.onto2),
            ref1: show(&reference.onto1),
            ref2: show(&reference.onto2),
        });
    }
    let overlap = pred.pairs.intersection(&reference.pairs).count() as f64;
    let precision = if pred.is_empty() { 1.0 } else { overlap / pred.len() as f64 };
    let recall = if reference.is_empty() { 1.0 } else { overlap / reference.len() as f64 };
    let f1 = if overlap == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Ok(Scores { precision, recall, f1 })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoint {
    pub bias: f64,
    pub scores: Scores,
    pub matched: usize,
}

pub fn curve_csv(points: &[CurvePoint]) -> String {
    let mut out = String::from("bias,precision,recall,f1\n");
    for p in points {
        let _ = writeln!(out, "{},{},{},{}", p.bias, p.scores.precision, p.scores.recall, p.scores.f1);
    }
    out
}

/// Metrics as a small JSON object keyed by name.
pub fn scores_json(s: &Scores) -> String {
    let map: BTreeMap<&str, f64> = [("precision", s.precision), ("recall", s.recall), ("f1", s.f1)].into();
    serde_json::to_string(&map).expect("scores serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn align(pairs: &[(&str, &str)]) -> Alignment {
        let mut a = Alignment::default();
        for (x, y) in pairs {
            a.insert(*x, *y).unwrap();
        }
        a
    }

    #[test]
    fn identical_alignments_score_one() {
        let pairs: Vec<(String, String)> = (0..5).map(|i| (format!("a{i}"), format!("b{i}"))).collect();
        let refs: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let s = score_alignment(&align(&refs), &align(&refs)).unwrap();
        assert_eq!((s.precision, s.recall, s.f1), (1.0, 1.0, 1.0));
    }

    #[test]
    fn empty_prediction_convention() {
        let s = score_alignment(&Alignment::default(), &align(&[("a", "b")])).unwrap();
        assert_eq!((s.precision, s.recall, s.f1), (1.0, 0.0, 0.0));
    }

    #[test]
    fn partial_overlap() {
        let pred = align(&[("a", "1"), ("b", "2"), ("c", "3"), ("d", "x")]);
        let reference = align(&[("a", "1"), ("b", "2"), ("c", "3"), ("d", "4"), ("e", "5"), ("f", "6")]);
        let s = score_alignment(&pred, &reference).unwrap();
        assert_eq!(s.precision, 0.75);
        assert_eq!(s.recall, 0.5);
        assert!((s.f1 - 0.6).abs() < 1e-12);
    }

    #[test]
    fn tag_mismatch_and_one_to_one() {
        let mut a = Alignment::new(Some("cmt".into()), Some("confOf".into()));
        let b = Alignment::new(Some("cmt".into()), Some("ekaw".into()));
        assert!(matches!(score_alignment(&a, &b), Err(EvalError::TagMismatch { .. })));
        a.insert("x", "y").unwrap();
        assert!(matches!(a.insert("x", "z"), Err(EvalError::NotOneToOne(_))));
        assert!(matches!(a.insert("w", "y"), Err(EvalError::NotOneToOne(_))));
    }

    #[test]
    fn file_formats() {
        let list = r#"[{"e1": "readPaper", "e2": {"op": "compose", "args": ["contributes", "reviews"]}, "relation": "="},
                       {"e1": "Degree", "e2": {"op": "union", "args": ["PhD", "Masters"]}}]"#;
        let a = Alignment::from_json(list).unwrap();
        assert!(a.contains("readPaper", "compose(contributes,reviews)"));
        assert!(a.contains("Degree", "union(Masters,PhD)"));
        let back = Alignment::from_json(&a.to_json()).unwrap();
        assert_eq!(back.pairs(), a.pairs());
        assert!(matches!(
            Alignment::from_json(r#"[{"e1": "a", "e2": "b", "relation": "<"}]"#),
            Err(EvalError::Relation(_))
        ));
        assert!(matches!(Alignment::from_json("[\n{\"e1\": }]"), Err(EvalError::Syntax { line: 2, .. })));
    }

    #[test]
    fn csv_curve() {
        let p = CurvePoint { bias: -1.0, scores: Scores { precision: 1.0, recall: 0.5, f1: 2.0 / 3.0 }, matched: 1 };
        assert!(curve_csv(&[p]).starts_with("bias,precision,recall,f1\n-1,1,0.5,0.66"));
    }
}
