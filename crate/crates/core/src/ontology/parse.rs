//! JSON ontology files.
//!
//! ```json
//! {
//!   "tag": "cmt",
//!   "classes": ["Paper", "Person"],
//!   "object_properties": ["writePaper"],
//!   "data_properties": [{"name": "h", "range_min": 60, "range_max": 90},
//!                       {"name": "pos", "nominal_values": ["Center", "Guard"]}],
//!   "complex_concepts": [{"op": "union", "args": ["PhD", "Masters"]}],
//!   "axioms": [{"kind": "domain", "args": ["writePaper", "Person"]}]
//! }
//! ```
//!
//! A `ref` is a local name or a constructor object `{"op": ..., "args": [ref, ...]}`.
//! Nominal values are addressed as `property=value`.

use serde::{Deserialize, Serialize};

use super::model::{
    Axiom, AxiomKind, ComplexConcept, Constructor, EntityId, EntityKind, NumericRange, Ontology,
};
use crate::error::OntologyError;

/// Reference to an entity inside a file: a plain name or a constructor term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntityRef {
    Name(String),
    Term(TermRef),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermRef {
    pub op: String,
    pub args: Vec<EntityRef>,
}

impl EntityRef {
    pub fn name(name: impl Into<String>) -> Self {
        EntityRef::Name(name.into())
    }

    pub fn term(constructor: Constructor, args: Vec<EntityRef>) -> Self {
        EntityRef::Term(TermRef { op: constructor.op_name().to_string(), args })
    }

    /// Canonical name of the referenced entity without consulting an ontology.
    /// Commutative constructors sort their arguments.
    pub fn canonical_name(&self) -> Result<String, OntologyError> {
        match self {
            EntityRef::Name(n) => Ok(n.clone()),
            EntityRef::Term(t) => {
                let ctor = Constructor::from_op_name(&t.op)
                    .ok_or_else(|| OntologyError::UnknownConstructor(t.op.clone()))?;
                let mut names = t.args.iter().map(|a| a.canonical_name()).collect::<Result<Vec<_>, _>>()?;
                if ctor.is_commutative() {
                    names.sort();
                }
                Ok(super::model::canonical_name(ctor, names.iter().map(String::as_str)))
            }
        }
    }

    pub fn from_entity(o: &Ontology, e: &EntityId) -> EntityRef {
        match o.complex_concept(&e.name) {
            Some(c) => EntityRef::term(
                c.constructor(),
                c.components().iter().map(|x| EntityRef::from_entity(o, x)).collect(),
            ),
            None => EntityRef::Name(e.name.clone()),
        }
    }
}

/// Resolves a reference, building (but not registering) complex concepts whose
/// simple components are declared in `o`. Nested concepts are appended to
/// `built` innermost first.
pub fn resolve_ref(
    o: &Ontology,
    r: &EntityRef,
    built: &mut Vec<ComplexConcept>,
) -> Result<EntityId, OntologyError> {
    match r {
        EntityRef::Name(n) => {
            if let Some(e) = o.entity(n) {
                return Ok(e.clone());
            }
            if let Some(c) = built.iter().find(|c| &c.id().name == n) {
                return Ok(c.id().clone());
            }
            Err(OntologyError::UnknownEntity(n.clone()))
        }
        EntityRef::Term(t) => {
            let ctor = Constructor::from_op_name(&t.op)
                .ok_or_else(|| OntologyError::UnknownConstructor(t.op.clone()))?;
            let comps = t.args.iter().map(|a| resolve_ref(o, a, built)).collect::<Result<Vec<_>, _>>()?;
            let concept = ComplexConcept::new(ctor, comps)?;
            let id = concept.id().clone();
            if !built.contains(&concept) {
                built.push(concept);
            }
            Ok(id)
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OntologyFile {
    tag: String,
    #[serde(default)]
    classes: Vec<String>,
    #[serde(default)]
    object_properties: Vec<String>,
    #[serde(default)]
    data_properties: Vec<DataPropertyDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    complex_concepts: Vec<EntityRef>,
    #[serde(default)]
    axioms: Vec<AxiomDecl>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DataPropertyDecl {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    range_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    range_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    nominal_values: Option<Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AxiomDecl {
    kind: String,
    args: Vec<EntityRef>,
}

pub fn parse_ontology(text: &str) -> Result<Ontology, OntologyError> {
    let file: OntologyFile = serde_json::from_str(text).map_err(OntologyError::from_json)?;
    let tag = file.tag;
    if tag.is_empty() {
        return Err(OntologyError::InvalidName(tag));
    }
    let mut o = Ontology::new(tag.clone());
    for c in &file.classes {
        o.add_entity(EntityId::new(&tag, c, EntityKind::Class))?;
    }
    for p in &file.object_properties {
        o.add_entity(EntityId::new(&tag, p, EntityKind::ObjectProperty))?;
    }
    for d in &file.data_properties {
        o.add_entity(EntityId::new(&tag, &d.name, EntityKind::DataProperty))?;
        match (d.range_min, d.range_max) {
            (Some(min), Some(max)) => o.set_range(&d.name, NumericRange::new(min, max)?)?,
            (None, None) => {}
            _ => {
                return Err(OntologyError::Arity {
                    what: d.name.clone(),
                    detail: "range_min and range_max must be given together".to_string(),
                })
            }
        }
        for v in d.nominal_values.iter().flatten() {
            let kind = EntityKind::NominalValue { owner: d.name.clone() };
            o.add_entity(EntityId::new(&tag, format!("{}={}", d.name, v), kind))?;
        }
    }
    for r in &file.complex_concepts {
        register_ref(&mut o, r)?;
    }
    for a in &file.axioms {
        let kind = AxiomKind::from_file_name(&a.kind)
            .ok_or_else(|| OntologyError::UnknownAxiomKind(a.kind.clone()))?;
        if a.args.len() != 2 {
            return Err(OntologyError::Arity {
                what: a.kind.clone(),
                detail: format!("axioms take 2 arguments, got {}", a.args.len()),
            });
        }
        let lhs = register_ref(&mut o, &a.args[0])?;
        let rhs = register_ref(&mut o, &a.args[1])?;
        o.add_axiom(Axiom::new(kind, lhs, rhs)?)?;
    }
    Ok(o)
}

fn register_ref(o: &mut Ontology, r: &EntityRef) -> Result<EntityId, OntologyError> {
    let mut built = Vec::new();
    let id = resolve_ref(o, r, &mut built)?;
    for c in built {
        o.add_complex(c)?;
    }
    Ok(id)
}

/// Serializes an ontology back to the file format. Complex concepts are
/// listed explicitly so that `parse_ontology(serialize_ontology(o)) == o`.
pub fn serialize_ontology(o: &Ontology) -> String {
    let mut file = OntologyFile {
        tag: o.tag().to_string(),
        classes: Vec::new(),
        object_properties: Vec::new(),
        data_properties: Vec::new(),
        complex_concepts: Vec::new(),
        axioms: Vec::new(),
    };
    for e in o.entities() {
        match &e.kind {
            EntityKind::Class => file.classes.push(e.name.clone()),
            EntityKind::ObjectProperty => file.object_properties.push(e.name.clone()),
            EntityKind::DataProperty => {
                let range = o.range_of(&e.name);
                let values: Vec<String> = o
                    .nominal_values_of(&e.name)
                    .filter_map(|v| v.nominal_value().map(str::to_string))
                    .collect();
                file.data_properties.push(DataPropertyDecl {
                    name: e.name.clone(),
                    range_min: range.map(|r| r.min),
                    range_max: range.map(|r| r.max),
                    nominal_values: (!values.is_empty()).then_some(values),
                });
            }
            EntityKind::NominalValue { .. } | EntityKind::Complex(_) => {}
        }
    }
    file.complex_concepts = o.complex_concepts().map(|c| EntityRef::from_entity(o, c.id())).collect();
    file.axioms = o
        .axioms()
        .iter()
        .map(|a| AxiomDecl {
            kind: a.kind.file_name().to_string(),
            args: vec![EntityRef::from_entity(o, &a.lhs), EntityRef::from_entity(o, &a.rhs)],
        })
        .collect();
    serde_json::to_string_pretty(&file).expect("ontology serializes")
}
