use thiserror::Error;

#[derive(Debug, Error)]
pub enum OntologyError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unknown entity `{0}`")]
    UnknownEntity(String),
    #[error("duplicate entity `{0}`")]
    Duplicate(String),
    #[error("invalid entity name `{0}`")]
    InvalidName(String),
    #[error("arity violation in {what}: {detail}")]
    Arity { what: String, detail: String },
    #[error("kind violation in {what}: {detail}")]
    KindMismatch { what: String, detail: String },
    #[error("invalid numeric range [{min}, {max}]")]
    Range { min: f64, max: f64 },
    #[error("unknown constructor `{0}`")]
    UnknownConstructor(String),
    #[error("unknown axiom kind `{0}`")]
    UnknownAxiomKind(String),
    #[error("inconsistent ontology: `{entity}` is disjoint with itself (derivation: {})", chain.join(" ; "))]
    Inconsistent { entity: String, chain: Vec<String> },
}

impl OntologyError {
    pub(crate) fn from_json(e: serde_json::Error) -> Self {
        OntologyError::Syntax { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

#[derive(Debug, Error)]
pub enum RuleError {
    #[error("line {line}: {source}")]
    Line {
        line: usize,
        #[source]
        source: Box<RuleError>,
    },
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error(transparent)]
    Ontology(#[from] OntologyError),
    #[error("unknown rule pattern `{0}`")]
    UnknownPattern(String),
    #[error("pattern `{pattern}` takes {expected} arguments, got {got}")]
    Arity { pattern: String, expected: String, got: usize },
    #[error("pattern `{pattern}`: {detail}")]
    Params { pattern: String, detail: String },
    #[error("threshold {threshold} on `{property}` lies outside its range [{min}, {max}]")]
    ThresholdOutOfRange { property: String, threshold: f64, min: f64, max: f64 },
    #[error("`{0}` has no declared numeric range")]
    MissingRange(String),
    #[error("invalid argument `{name}`: {detail}")]
    Argument { name: String, detail: String },
    #[error("dataset error: {0}")]
    Dataset(String),
    #[error("column `{column}` has {distinct} distinct values, fewer than {bins} bins")]
    TooFewDistinct { column: String, distinct: usize, bins: usize },
    #[error("need at least 2 bins, got {0}")]
    TooFewBins(usize),
    #[error("empty dataset")]
    EmptyDataset,
    #[error("invalid mining parameter: {0}")]
    MiningParams(String),
    #[error("degenerate range [{min}, {max}]")]
    DegenerateRange { min: f64, max: f64 },
    #[error("linear map scale must be positive, got {0}")]
    NonPositiveScale(f64),
    #[error("antecedent pairing mismatch: {0}")]
    Pairing(String),
}

impl RuleError {
    pub(crate) fn at_line(self, line: usize) -> Self {
        RuleError::Line { line, source: Box::new(self) }
    }
}

#[derive(Debug, Error)]
pub enum GroundingError {
    #[error("candidate references unknown entity `{0}`")]
    UnknownEntity(String),
    #[error("no candidates to ground")]
    NoCandidates,
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error("ground dump line {line}: {message}")]
    Dump { line: usize, message: String },
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("hard clauses are unsatisfiable; core clauses {core:?}")]
    Infeasible { core: Vec<usize> },
    #[error("{atoms} atoms exceed the budget of {budget}")]
    BudgetExceeded { atoms: usize, budget: usize },
    #[error("internal solver error: {0}")]
    Internal(String),
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("ontology tags differ: predicted ({pred1}, {pred2}) vs reference ({ref1}, {ref2})")]
    TagMismatch { pred1: String, pred2: String, ref1: String, ref2: String },
    #[error("alignment file syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("alignment is not one-to-one: `{0}` appears twice")]
    NotOneToOne(String),
    #[error("unsupported relation `{0}`")]
    Relation(String),
    #[error(transparent)]
    Ontology(#[from] OntologyError),
}

/// Top-level error for the end-to-end pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ontology: {0}")]
    Ontology(#[from] OntologyError),
    #[error("rules: {0}")]
    Rule(#[from] RuleError),
    #[error("grounding: {0}")]
    Grounding(#[from] GroundingError),
    #[error("solver: {0}")]
    Solver(#[from] SolverError),
    #[error("eval: {0}")]
    Eval(#[from] EvalError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
