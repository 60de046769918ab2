//! End-to-end matching: prepare both sides, generate candidates, ground,
//! solve, and read the alignment off the solution.

use std::collections::BTreeMap;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, GroundingError, OntologyError, RuleError};
use crate::eval::{score_alignment, Alignment, CurvePoint, Scores};
use crate::grounding::{ground_problem, Family, GroundOptions, GroundProblem, WeightConfig};
use crate::ontology::{enumerate_complex_concepts, parse_ontology, saturate, Ontology};
use crate::rules::{discretize, mine_association_rules, parse_rules, BinStrategy, Dataset, MiningParams, RuleStore};
use crate::similarity::{generate_candidates, Candidate, CandidateOptions};
use crate::solver::{evaluate, family_scores, solve_exact, solve_local, Assignment, LocalParams, SolverMode};

/// Whether knowledge rules take part in grounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Kaom,
    Mlom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverChoice {
    /// Exact when the atom count fits the budget, local search otherwise.
    #[default]
    Auto,
    Exact,
    Local,
}

/// Every knob of a run. Missing keys take their defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub ontology1: Option<PathBuf>,
    pub ontology2: Option<PathBuf>,
    pub rules1: Option<PathBuf>,
    pub rules2: Option<PathBuf>,
    pub dataset1: Option<PathBuf>,
    pub dataset2: Option<PathBuf>,
    pub reference: Option<PathBuf>,
    pub weights: WeightConfig,
    pub mode: Mode,
    pub solver: SolverChoice,
    pub atom_budget: usize,
    pub seed: u64,
    pub max_flips: usize,
    pub restarts: usize,
    pub grid_n: usize,
    /// When false all string similarities are 0.
    pub name_similarity: bool,
    pub mining: MiningParams,
    pub n_bins: usize,
    pub bin_strategy: BinStrategy,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            ontology1: None,
            ontology2: None,
            rules1: None,
            rules2: None,
            dataset1: None,
            dataset2: None,
            reference: None,
            weights: WeightConfig::default(),
            mode: Mode::Kaom,
            solver: SolverChoice::Auto,
            atom_budget: crate::solver::DEFAULT_ATOM_BUDGET,
            seed: 0,
            max_flips: 10_000,
            restarts: 20,
            grid_n: 32,
            name_similarity: true,
            mining: MiningParams::default(),
            n_bins: 5,
            bin_strategy: BinStrategy::Quantile,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        self.weights.validate()?;
        if self.grid_n < 2 {
            return Err(format!("grid_n must be at least 2, got {}", self.grid_n));
        }
        if self.max_flips == 0 || self.restarts == 0 {
            return Err("max_flips and restarts must be at least 1".to_string());
        }
        if self.n_bins < 2 {
            return Err(format!("n_bins must be at least 2, got {}", self.n_bins));
        }
        Ok(())
    }
}

/// Mines association rules from a CSV whose header names data properties of `o`.
pub fn mine_rules(o: &Ontology, csv: &str, cfg: &RunConfig) -> Result<RuleStore, Error> {
    let raw = Dataset::from_csv(csv, o.tag())?;
    for c in raw.columns() {
        if o.entity(&c.property.name).is_none() {
            return Err(RuleError::Dataset(format!("column `{}` is not a property of `{}`", c.property.name, o.tag()))
                .into());
        }
    }
    let (binned, _) = discretize(&raw, cfg.n_bins, cfg.bin_strategy)?;
    let mut store = RuleStore::new(o.tag());
    for rule in mine_association_rules(&binned, &cfg.mining)? {
        store.add(rule, o)?;
    }
    Ok(store)
}

/// Both sides saturated, with their complex concepts enumerated.
#[derive(Debug, Clone)]
pub struct MatchTask {
    pub o1: Ontology,
    pub o2: Ontology,
    pub rules1: RuleStore,
    pub rules2: RuleStore,
}

#[derive(Debug, Clone)]
pub struct MatchOutcome {
    pub alignment: Alignment,
    pub assignment: Assignment,
    pub problem: GroundProblem,
    pub family_scores: BTreeMap<Family, f64>,
}

impl MatchOutcome {
    /// Deterministic JSON summary of the solve, with scores when a
    /// reference was given.
    pub fn report_json(&self, scores: Option<Scores>) -> String {
        #[derive(Serialize)]
        struct Report<'a> {
            solver: SolverMode,
            objective: f64,
            feasible: bool,
            atoms: usize,
            clauses: usize,
            matched: usize,
            skipped_tuples: usize,
            clause_counts: BTreeMap<&'a str, usize>,
            family_scores: BTreeMap<&'a str, f64>,
            #[serde(skip_serializing_if = "Option::is_none")]
            scores: Option<Scores>,
        }
        let report = Report {
            solver: self.assignment.mode,
            objective: self.assignment.objective,
            feasible: self.assignment.feasible,
            atoms: self.problem.n_atoms(),
            clauses: self.problem.clauses.len(),
            matched: self.alignment.len(),
            skipped_tuples: self.problem.skipped_tuples,
            clause_counts: self.problem.family_counts().into_iter().map(|(f, n)| (f.name(), n)).collect(),
            family_scores: self.family_scores.iter().map(|(f, &s)| (f.name(), s)).collect(),
            scores,
        };
        let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
        text.push('\n');
        text
    }
}

impl MatchTask {
    /// Saturates both ontologies and adds every complex concept that occurs
    /// in them or in the rules.
    pub fn new(o1: &Ontology, o2: &Ontology, rules1: RuleStore, rules2: RuleStore) -> Result<Self, Error> {
        let o1 = prepare(o1, &rules1)?;
        let o2 = prepare(o2, &rules2)?;
        Ok(MatchTask { o1, o2, rules1, rules2 })
    }

    /// Parses ontology and rule texts; a missing rules text means no rules.
    pub fn from_texts(o1: &str, o2: &str, rules1: Option<&str>, rules2: Option<&str>) -> Result<Self, Error> {
        let o1 = parse_ontology(o1)?;
        let o2 = parse_ontology(o2)?;
        let r1 = match rules1 {
            Some(t) => parse_rules(t, &o1)?,
            None => RuleStore::new(o1.tag()),
        };
        let r2 = match rules2 {
            Some(t) => parse_rules(t, &o2)?,
            None => RuleStore::new(o2.tag()),
        };
        MatchTask::new(&o1, &o2, r1, r2)
    }

    pub fn candidates(&self, cfg: &RunConfig) -> Vec<Candidate> {
        let options = CandidateOptions { tau: cfg.weights.tau, name_similarity: cfg.name_similarity };
        let (r1, r2) = self.active_rules(cfg.mode);
        generate_candidates(&self.o1, &self.o2, &r1, &r2, &options)
    }

    /// The baseline ignores rules entirely, including for candidate selection.
    fn active_rules(&self, mode: Mode) -> (RuleStore, RuleStore) {
        match mode {
            Mode::Kaom => (self.rules1.clone(), self.rules2.clone()),
            Mode::Mlom => (RuleStore::new(self.rules1.tag()), RuleStore::new(self.rules2.tag())),
        }
    }

    pub fn ground(&self, cfg: &RunConfig) -> Result<GroundProblem, Error> {
        let candidates = self.candidates(cfg);
        let (r1, r2) = self.active_rules(cfg.mode);
        let options = GroundOptions { knowledge: cfg.mode == Mode::Kaom, grid_n: cfg.grid_n };
        Ok(ground_problem(&self.o1, &self.o2, &candidates, &r1, &r2, &cfg.weights, &options)?)
    }

    pub fn run(&self, cfg: &RunConfig) -> Result<MatchOutcome, Error> {
        cfg.validate().map_err(|m| RuleError::Params { pattern: "config".into(), detail: m })?;
        let problem = match self.ground(cfg) {
            Ok(p) => p,
            Err(Error::Grounding(GroundingError::NoCandidates)) => GroundProblem::new(Vec::new(), Vec::new()),
            Err(e) => return Err(e),
        };
        let assignment = solve(&problem, cfg)?;
        let mut alignment = Alignment::new(Some(self.o1.tag().to_string()), Some(self.o2.tag().to_string()));
        for i in assignment.true_atoms() {
            let c = &problem.atoms[i].candidate;
            alignment.insert(c.e1.name.clone(), c.e2.name.clone())?;
        }
        alignment.provenance = Some(provenance(cfg));
        let family_scores = family_scores(&problem, &assignment.values);
        Ok(MatchOutcome { alignment, assignment, problem, family_scores })
    }
}

fn prepare(o: &Ontology, rules: &RuleStore) -> Result<Ontology, OntologyError> {
    let mut out = saturate(o)?;
    let participants = rules.participants();
    for c in enumerate_complex_concepts(&out, participants.iter().copied(), rules.concepts()) {
        if out.complex_concept(&c.id().name).is_none() {
            out.add_complex(c)?;
        }
    }
    Ok(out)
}

/// Knobs that shape the result, minus file locations.
fn provenance(cfg: &RunConfig) -> serde_json::Value {
    serde_json::json!({
        "mode": cfg.mode,
        "solver": cfg.solver,
        "seed": cfg.seed,
        "grid_n": cfg.grid_n,
        "name_similarity": cfg.name_similarity,
        "weights": cfg.weights,
    })
}

pub fn solve(problem: &GroundProblem, cfg: &RunConfig) -> Result<Assignment, Error> {
    let local = LocalParams { seed: cfg.seed, max_flips: cfg.max_flips, restarts: cfg.restarts, ..LocalParams::default() };
    let assignment = match cfg.solver {
        SolverChoice::Exact => solve_exact(problem, cfg.atom_budget)?,
        SolverChoice::Local => solve_local(problem, &local)?,
        SolverChoice::Auto if problem.n_atoms() <= cfg.atom_budget => solve_exact(problem, cfg.atom_budget)?,
        SolverChoice::Auto => solve_local(problem, &local)?,
    };
    debug_assert_eq!(evaluate(problem, &assignment.values).1, assignment.feasible);
    Ok(assignment)
}

/// The alignment found with (`Kaom`) or without (`Mlom`) knowledge rules.
pub fn run_ablation(task: &MatchTask, cfg: &RunConfig, mode: Mode) -> Result<Alignment, Error> {
    let cfg = RunConfig { mode, ..cfg.clone() };
    Ok(task.run(&cfg)?.alignment)
}

/// One full solve per bias weight, in the given (ascending) order.
pub fn pr_sweep(
    task: &MatchTask,
    cfg: &RunConfig,
    biases: &[f64],
    reference: &Alignment,
) -> Result<Vec<(CurvePoint, Alignment)>, Error> {
    if biases.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(RuleError::Params { pattern: "sweep".into(), detail: "bias weights must be ascending".into() }.into());
    }
    biases
        .par_iter()
        .map(|&bias| {
            let mut c = cfg.clone();
            c.weights.bias_w = bias;
            let outcome = task.run(&c)?;
            let scores = score_alignment(&outcome.alignment, reference)?;
            Ok((CurvePoint { bias, scores, matched: outcome.alignment.len() }, outcome.alignment))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const O1: &str = r#"{"tag": "cmt", "object_properties": ["writePaper", "readPaper"]}"#;
    const O2: &str = r#"{"tag": "confOf", "object_properties": ["writes", "reviews"]}"#;
    const R1: &str = r#"{"pattern": "disjoint_props", "args": ["writePaper", "readPaper"]}"#;
    const R2: &str = r#"{"pattern": "disjoint_props", "args": ["writes", "reviews"]}"#;

    #[test]
    fn rules_decide_when_names_do_not() {
        let task = MatchTask::from_texts(O1, O2, Some(R1), Some(R2)).unwrap();
        let cfg = RunConfig { name_similarity: false, ..RunConfig::default() };
        let kaom = run_ablation(&task, &cfg, Mode::Kaom).unwrap();
        assert!(kaom.contains("writePaper", "writes"));
        assert!(kaom.contains("readPaper", "reviews"));
        let mlom = run_ablation(&task, &cfg, Mode::Mlom).unwrap();
        assert!(mlom.is_empty());
    }

    #[test]
    fn without_rules_modes_agree() {
        let task = MatchTask::from_texts(O1, O2, None, None).unwrap();
        let cfg = RunConfig::default();
        let a = task.run(&RunConfig { mode: Mode::Kaom, ..cfg.clone() }).unwrap();
        let b = task.run(&RunConfig { mode: Mode::Mlom, ..cfg }).unwrap();
        assert_eq!(a.problem.to_dump(), b.problem.to_dump());
        assert_eq!(a.alignment.pairs(), b.alignment.pairs());
    }

    #[test]
    fn sweep_rejects_unsorted_biases() {
        let task = MatchTask::from_texts(O1, O2, Some(R1), Some(R2)).unwrap();
        let err = pr_sweep(&task, &RunConfig::default(), &[1.0, 0.0], &Alignment::default());
        assert!(err.is_err());
    }

    #[test]
    fn config_round_trip() {
        let cfg = RunConfig { seed: 9, mode: Mode::Mlom, ..RunConfig::default() };
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), cfg);
        assert_eq!(serde_json::from_str::<RunConfig>("{}").unwrap(), RunConfig::default());
        assert!(serde_json::from_str::<RunConfig>(r#"{"sede": 1}"#).is_err());
    }
}
