use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::OntologyError;

/// Whether a complex concept denotes a set of individuals or a relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ComplexSort {
    Class,
    Property,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EntityKind {
    Class,
    ObjectProperty,
    DataProperty,
    /// A value of a nominal data property; `owner` names that property.
    NominalValue { owner: String },
    Complex(ComplexSort),
}

impl EntityKind {
    pub fn is_class_like(&self) -> bool {
        matches!(self, EntityKind::Class | EntityKind::Complex(ComplexSort::Class))
    }

    /// Object properties and property-valued complex concepts.
    pub fn is_object_property_like(&self) -> bool {
        matches!(
            self,
            EntityKind::ObjectProperty | EntityKind::Complex(ComplexSort::Property)
        )
    }

    pub fn is_property_like(&self) -> bool {
        self.is_object_property_like() || matches!(self, EntityKind::DataProperty)
    }

    pub fn is_complex(&self) -> bool {
        matches!(self, EntityKind::Complex(_))
    }

    /// Kinds that may appear on the two sides of one correspondence.
    pub fn compatible_with(&self, other: &EntityKind) -> bool {
        use EntityKind::*;
        match (self, other) {
            (NominalValue { .. }, NominalValue { .. }) => true,
            (DataProperty, DataProperty) => true,
            _ if self.is_class_like() && other.is_class_like() => true,
            _ if self.is_object_property_like() && other.is_object_property_like() => true,
            _ => false,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            EntityKind::Class => "class",
            EntityKind::ObjectProperty => "object_property",
            EntityKind::DataProperty => "data_property",
            EntityKind::NominalValue { .. } => "nominal",
            EntityKind::Complex(ComplexSort::Class) => "complex_class",
            EntityKind::Complex(ComplexSort::Property) => "complex_property",
        }
    }
}

/// An entity of one side of a matching task, identified by `(tag, name)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EntityId {
    pub tag: String,
    pub name: String,
    pub kind: EntityKind,
}

impl EntityId {
    pub fn new(tag: impl Into<String>, name: impl Into<String>, kind: EntityKind) -> Self {
        EntityId { tag: tag.into(), name: name.into(), kind }
    }

    /// Local name of the value part for nominal values (`pos=Center` -> `Center`).
    pub fn nominal_value(&self) -> Option<&str> {
        match &self.kind {
            EntityKind::NominalValue { owner } => self.name.strip_prefix(owner.as_str())?.strip_prefix('='),
            _ => None,
        }
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.tag, self.name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Constructor {
    Intersection,
    Union,
    Complement,
    Exists,
    Composition,
    RangeRestriction,
}

impl Constructor {
    pub const ALL: [Constructor; 6] = [
        Constructor::Intersection,
        Constructor::Union,
        Constructor::Complement,
        Constructor::Exists,
        Constructor::Composition,
        Constructor::RangeRestriction,
    ];

    pub fn op_name(self) -> &'static str {
        match self {
            Constructor::Intersection => "intersection",
            Constructor::Union => "union",
            Constructor::Complement => "complement",
            Constructor::Exists => "exists",
            Constructor::Composition => "compose",
            Constructor::RangeRestriction => "restrict_range",
        }
    }

    pub fn from_op_name(op: &str) -> Option<Constructor> {
        Constructor::ALL.into_iter().find(|c| c.op_name() == op)
    }

    pub fn is_commutative(self) -> bool {
        matches!(self, Constructor::Intersection | Constructor::Union)
    }

    pub fn sort(self) -> ComplexSort {
        match self {
            Constructor::Composition | Constructor::RangeRestriction => ComplexSort::Property,
            _ => ComplexSort::Class,
        }
    }
}

/// A constructor applied to component entities. Immutable; identified by its
/// canonical serialization, so structurally equal concepts share an id.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ComplexConcept {
    constructor: Constructor,
    components: Vec<EntityId>,
    id: EntityId,
}

impl ComplexConcept {
    pub fn new(constructor: Constructor, mut components: Vec<EntityId>) -> Result<Self, OntologyError> {
        let op = constructor.op_name();
        let arity_ok = match constructor {
            Constructor::Complement => components.len() == 1,
            Constructor::Exists | Constructor::Composition | Constructor::RangeRestriction => {
                components.len() == 2
            }
            Constructor::Intersection | Constructor::Union => components.len() >= 2,
        };
        if !arity_ok {
            return Err(OntologyError::Arity {
                what: op.to_string(),
                detail: format!("got {} components", components.len()),
            });
        }
        let kind_err = |i: usize, want: &str| OntologyError::KindMismatch {
            what: op.to_string(),
            detail: format!("component {} ({}) must be {}", i, components[i].name, want),
        };
        match constructor {
            Constructor::Intersection | Constructor::Union | Constructor::Complement => {
                if let Some(i) = components.iter().position(|c| !c.kind.is_class_like()) {
                    return Err(kind_err(i, "a class"));
                }
            }
            Constructor::Exists | Constructor::RangeRestriction => {
                if !components[0].kind.is_object_property_like() {
                    return Err(kind_err(0, "an object property"));
                }
                if !components[1].kind.is_class_like() {
                    return Err(kind_err(1, "a class"));
                }
            }
            Constructor::Composition => {
                if let Some(i) = components.iter().position(|c| !c.kind.is_object_property_like()) {
                    return Err(kind_err(i, "an object property"));
                }
            }
        }
        let tag = components[0].tag.clone();
        if let Some(other) = components.iter().find(|c| c.tag != tag) {
            return Err(OntologyError::KindMismatch {
                what: op.to_string(),
                detail: format!("components mix ontologies {} and {}", tag, other.tag),
            });
        }
        if constructor.is_commutative() {
            components.sort_by(|a, b| a.name.cmp(&b.name));
            if components.windows(2).any(|w| w[0].name == w[1].name) {
                return Err(OntologyError::Arity {
                    what: op.to_string(),
                    detail: "repeated component".to_string(),
                });
            }
        }
        let name = canonical_name(constructor, components.iter().map(|c| c.name.as_str()));
        let id = EntityId::new(tag, name, EntityKind::Complex(constructor.sort()));
        Ok(ComplexConcept { constructor, components, id })
    }

    pub fn constructor(&self) -> Constructor {
        self.constructor
    }

    pub fn components(&self) -> &[EntityId] {
        &self.components
    }

    pub fn id(&self) -> &EntityId {
        &self.id
    }
}

/// `op(a,b,...)`; callers sort the names of commutative constructors first.
pub fn canonical_name<'a>(constructor: Constructor, names: impl IntoIterator<Item = &'a str>) -> String {
    let args: Vec<&str> = names.into_iter().collect();
    format!("{}({})", constructor.op_name(), args.join(","))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AxiomKind {
    SubClassOf,
    DisjointClasses,
    SubPropertyOf,
    DisjointProperties,
    Domain,
    Range,
}

impl AxiomKind {
    pub const ALL: [AxiomKind; 6] = [
        AxiomKind::SubClassOf,
        AxiomKind::DisjointClasses,
        AxiomKind::SubPropertyOf,
        AxiomKind::DisjointProperties,
        AxiomKind::Domain,
        AxiomKind::Range,
    ];

    pub fn file_name(self) -> &'static str {
        match self {
            AxiomKind::SubClassOf => "subclass_of",
            AxiomKind::DisjointClasses => "disjoint_classes",
            AxiomKind::SubPropertyOf => "subproperty_of",
            AxiomKind::DisjointProperties => "disjoint_properties",
            AxiomKind::Domain => "domain",
            AxiomKind::Range => "range",
        }
    }

    pub fn from_file_name(s: &str) -> Option<AxiomKind> {
        AxiomKind::ALL.into_iter().find(|k| k.file_name() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Axiom {
    pub kind: AxiomKind,
    pub lhs: EntityId,
    pub rhs: EntityId,
}

impl Axiom {
    pub fn new(kind: AxiomKind, lhs: EntityId, rhs: EntityId) -> Result<Self, OntologyError> {
        let ok = match kind {
            AxiomKind::SubClassOf | AxiomKind::DisjointClasses => {
                lhs.kind.is_class_like() && rhs.kind.is_class_like()
            }
            AxiomKind::SubPropertyOf | AxiomKind::DisjointProperties => {
                (lhs.kind.is_object_property_like() && rhs.kind.is_object_property_like())
                    || (lhs.kind == EntityKind::DataProperty && rhs.kind == EntityKind::DataProperty)
            }
            AxiomKind::Domain => lhs.kind.is_property_like() && rhs.kind.is_class_like(),
            AxiomKind::Range => lhs.kind.is_object_property_like() && rhs.kind.is_class_like(),
        };
        if !ok {
            return Err(OntologyError::KindMismatch {
                what: kind.file_name().to_string(),
                detail: format!(
                    "arguments {} ({}) and {} ({})",
                    lhs.name,
                    lhs.kind.code(),
                    rhs.name,
                    rhs.kind.code()
                ),
            });
        }
        Ok(Axiom { kind, lhs, rhs })
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}, {})", self.kind.file_name(), self.lhs.name, self.rhs.name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumericRange {
    pub min: f64,
    pub max: f64,
}

impl NumericRange {
    pub fn new(min: f64, max: f64) -> Result<Self, OntologyError> {
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(OntologyError::Range { min, max });
        }
        Ok(NumericRange { min, max })
    }

    pub fn contains(&self, x: f64) -> bool {
        self.min <= x && x <= self.max
    }

    pub fn width(&self) -> f64 {
        self.max - self.min
    }
}

/// One side of a matching task.
#[derive(Debug, Clone, PartialEq)]
pub struct Ontology {
    pub(crate) tag: String,
    pub(crate) entities: BTreeMap<String, EntityId>,
    pub(crate) complex: BTreeMap<String, ComplexConcept>,
    pub(crate) axioms: BTreeSet<Axiom>,
    pub(crate) numeric_stats: BTreeMap<String, NumericRange>,
}

impl Ontology {
    pub fn new(tag: impl Into<String>) -> Self {
        Ontology {
            tag: tag.into(),
            entities: BTreeMap::new(),
            complex: BTreeMap::new(),
            axioms: BTreeSet::new(),
            numeric_stats: BTreeMap::new(),
        }
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    /// Simple entities (classes, properties, nominal values) in name order.
    pub fn entities(&self) -> impl Iterator<Item = &EntityId> {
        self.entities.values()
    }

    pub fn complex_concepts(&self) -> impl Iterator<Item = &ComplexConcept> {
        self.complex.values()
    }

    pub fn axioms(&self) -> &BTreeSet<Axiom> {
        &self.axioms
    }

    pub fn numeric_stats(&self) -> &BTreeMap<String, NumericRange> {
        &self.numeric_stats
    }

    pub fn range_of(&self, property: &str) -> Option<NumericRange> {
        self.numeric_stats.get(property).copied()
    }

    /// Looks up a simple entity or a complex concept id by local name.
    pub fn entity(&self, name: &str) -> Option<&EntityId> {
        self.entities.get(name).or_else(|| self.complex.get(name).map(|c| c.id()))
    }

    pub fn complex_concept(&self, name: &str) -> Option<&ComplexConcept> {
        self.complex.get(name)
    }

    /// Every matchable entity: simple entities, then complex concepts.
    pub fn all_entities(&self) -> impl Iterator<Item = &EntityId> {
        self.entities.values().chain(self.complex.values().map(|c| c.id()))
    }

    pub fn has_axiom(&self, kind: AxiomKind, lhs: &str, rhs: &str) -> bool {
        self.axioms.iter().any(|a| a.kind == kind && a.lhs.name == lhs && a.rhs.name == rhs)
    }

    pub fn axioms_of(&self, kind: AxiomKind) -> impl Iterator<Item = &Axiom> {
        self.axioms.iter().filter(move |a| a.kind == kind)
    }

    pub fn add_entity(&mut self, entity: EntityId) -> Result<(), OntologyError> {
        check_local_name(&entity)?;
        if entity.tag != self.tag {
            return Err(OntologyError::KindMismatch {
                what: entity.name.clone(),
                detail: format!("belongs to {}, not {}", entity.tag, self.tag),
            });
        }
        if entity.kind.is_complex() {
            return Err(OntologyError::KindMismatch {
                what: entity.name.clone(),
                detail: "complex concepts are added with add_complex".to_string(),
            });
        }
        if self.entities.contains_key(&entity.name) {
            return Err(OntologyError::Duplicate(entity.name));
        }
        self.entities.insert(entity.name.clone(), entity);
        Ok(())
    }

    /// Adds a complex concept and, recursively, its complex components.
    /// Simple components must already be declared.
    pub fn add_complex(&mut self, concept: ComplexConcept) -> Result<(), OntologyError> {
        for c in concept.components() {
            if c.kind.is_complex() {
                if !self.complex.contains_key(&c.name) {
                    return Err(OntologyError::UnknownEntity(c.name.clone()));
                }
            } else if self.entities.get(&c.name) != Some(c) {
                return Err(OntologyError::UnknownEntity(c.name.clone()));
            }
        }
        self.complex.entry(concept.id().name.clone()).or_insert(concept);
        Ok(())
    }

    pub fn add_axiom(&mut self, axiom: Axiom) -> Result<(), OntologyError> {
        for e in [&axiom.lhs, &axiom.rhs] {
            if self.entity(&e.name) != Some(e) {
                return Err(OntologyError::UnknownEntity(e.name.clone()));
            }
        }
        self.axioms.insert(axiom);
        Ok(())
    }

    pub fn set_range(&mut self, property: &str, range: NumericRange) -> Result<(), OntologyError> {
        match self.entities.get(property) {
            Some(e) if e.kind == EntityKind::DataProperty => {
                self.numeric_stats.insert(property.to_string(), range);
                Ok(())
            }
            Some(e) => Err(OntologyError::KindMismatch {
                what: property.to_string(),
                detail: format!("numeric range on a {}", e.kind.code()),
            }),
            None => Err(OntologyError::UnknownEntity(property.to_string())),
        }
    }

    /// Nominal values owned by a data property, in name order.
    pub fn nominal_values_of<'a>(&'a self, property: &'a str) -> impl Iterator<Item = &'a EntityId> + 'a {
        self.entities.values().filter(move |e| {
            matches!(&e.kind, EntityKind::NominalValue { owner } if owner == property)
        })
    }
}

pub(crate) fn check_local_name(entity: &EntityId) -> Result<(), OntologyError> {
    let name = &entity.name;
    let bad_char = |c: char| c.is_whitespace() || matches!(c, '(' | ')' | ',');
    if name.is_empty() || name.chars().any(bad_char) {
        return Err(OntologyError::InvalidName(name.clone()));
    }
    match &entity.kind {
        EntityKind::NominalValue { owner } => {
            let value_ok = name
                .strip_prefix(owner.as_str())
                .and_then(|rest| rest.strip_prefix('='))
                .is_some_and(|v| !v.is_empty());
            if !value_ok || owner.contains('=') {
                return Err(OntologyError::InvalidName(name.clone()));
            }
        }
        EntityKind::Complex(_) => {}
        _ if name.contains('=') => return Err(OntologyError::InvalidName(name.clone())),
        _ => {}
    }
    Ok(())
}
