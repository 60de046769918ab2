//! Ontologies: entities, complex concepts, axioms and their closure.

mod model;
mod parse;
mod saturate;

pub use model::{
    canonical_name, Axiom, AxiomKind, ComplexConcept, ComplexSort, Constructor, EntityId, EntityKind,
    NumericRange, Ontology,
};
pub use parse::{parse_ontology, resolve_ref, serialize_ontology, EntityRef, TermRef};
pub use saturate::{enumerate_complex_concepts, saturate};
