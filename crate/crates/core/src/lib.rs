//! Ontology matching as MAP inference over weighted clauses that combine
//! name similarity, structural constraints and knowledge rules.

pub mod error;
pub mod eval;
pub mod grounding;
pub mod ontology;
pub mod pipeline;
pub mod rules;
pub mod similarity;
pub mod solver;

pub use error::{Error, EvalError, GroundingError, OntologyError, Result, RuleError, SolverError};
pub use eval::{score_alignment, Alignment, CurvePoint, Scores};
pub use grounding::{ground_problem, Family, GroundOptions, GroundProblem, WeightConfig};
pub use ontology::{ComplexConcept, Constructor, EntityId, EntityKind, Ontology};
pub use pipeline::{pr_sweep, run_ablation, MatchOutcome, MatchTask, Mode, RunConfig, SolverChoice};
pub use rules::{KnowledgeRule, RuleStore};
pub use similarity::{Candidate, CandidateKind};
pub use solver::{brute_force, solve_exact, solve_local, Assignment, LocalParams, SolverMode};
