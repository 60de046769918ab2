use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::GroundingError;
use crate::ontology::{ComplexSort, EntityId, EntityKind};
use crate::similarity::{Candidate, CandidateKind};

/// Formula family a ground clause came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Apriori,
    Cardinality,
    Coherence,
    Stability,
    RulePos,
    RuleNeg,
    RuleDist,
    CtorFwd,
    CtorBwd,
    Nominal,
    Bias,
}

impl Family {
    pub const ALL: [Family; 11] = [
        Family::Apriori,
        Family::Cardinality,
        Family::Coherence,
        Family::Stability,
        Family::RulePos,
        Family::RuleNeg,
        Family::RuleDist,
        Family::CtorFwd,
        Family::CtorBwd,
        Family::Nominal,
        Family::Bias,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Apriori => "apriori",
            Family::Cardinality => "cardinality",
            Family::Coherence => "coherence",
            Family::Stability => "stability",
            Family::RulePos => "rule_pos",
            Family::RuleNeg => "rule_neg",
            Family::RuleDist => "rule_dist",
            Family::CtorFwd => "ctor_fwd",
            Family::CtorBwd => "ctor_bwd",
            Family::Nominal => "nominal",
            Family::Bias => "bias",
        }
    }

    pub fn from_name(s: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == s)
    }

    /// Families that exist only because of knowledge rules.
    pub fn is_knowledge(self) -> bool {
        matches!(self, Family::RulePos | Family::RuleNeg | Family::RuleDist)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub atom: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(atom: usize) -> Self {
        Literal { atom, positive: true }
    }

    pub fn neg(atom: usize) -> Self {
        Literal { atom, positive: false }
    }

    pub fn negated(self) -> Self {
        Literal { atom: self.atom, positive: !self.positive }
    }

    pub fn holds(self, values: &[bool]) -> bool {
        values[self.atom] == self.positive
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Weight {
    Hard,
    Soft(f64),
}

/// `Any` is a disjunction of its literals, `All` a conjunction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Shape {
    Any,
    All,
}

/// After normalization soft weights are strictly positive and hard clauses
/// are disjunctions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedClause {
    pub literals: Vec<Literal>,
    pub weight: Weight,
    pub shape: Shape,
    pub origin: Family,
}

impl WeightedClause {
    pub fn is_hard(&self) -> bool {
        matches!(self.weight, Weight::Hard)
    }

    pub fn soft_weight(&self) -> f64 {
        match self.weight {
            Weight::Soft(w) => w,
            Weight::Hard => 0.0,
        }
    }

    pub fn satisfied(&self, values: &[bool]) -> bool {
        match self.shape {
            Shape::Any => self.literals.iter().any(|l| l.holds(values)),
            Shape::All => self.literals.iter().all(|l| l.holds(values)),
        }
    }

    /// Builds a normalized soft clause from a signed weight: a negative weight
    /// on a disjunction (conjunction) becomes a positive weight on the
    /// conjunction (disjunction) of the negated literals. Returns `None` for
    /// zero weights and clauses whose truth value is constant.
    pub fn soft(shape: Shape, literals: Vec<Literal>, weight: f64, origin: Family) -> Option<Self> {
        if weight == 0.0 || !weight.is_finite() {
            return None;
        }
        let (shape, literals) = if weight < 0.0 {
            let flipped = match shape {
                Shape::Any => Shape::All,
                Shape::All => Shape::Any,
            };
            (flipped, literals.into_iter().map(Literal::negated).collect())
        } else {
            (shape, literals)
        };
        let literals = normalize_literals(literals)?;
        let shape = if literals.len() == 1 { Shape::Any } else { shape };
        Some(WeightedClause { literals, weight: Weight::Soft(weight.abs()), shape, origin })
    }

    /// A hard disjunction; `None` when it is a tautology.
    pub fn hard(literals: Vec<Literal>, origin: Family) -> Option<Self> {
        let literals = normalize_literals(literals)?;
        Some(WeightedClause { literals, weight: Weight::Hard, shape: Shape::Any, origin })
    }
}

/// Sorts, drops repeats, and rejects empty lists and complementary pairs.
fn normalize_literals(mut literals: Vec<Literal>) -> Option<Vec<Literal>> {
    literals.sort();
    literals.dedup();
    if literals.is_empty() || literals.windows(2).any(|w| w[0].atom == w[1].atom) {
        return None;
    }
    Some(literals)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundAtom {
    pub id: usize,
    pub candidate: Candidate,
}

/// Maximize the total weight of satisfied soft clauses subject to every
/// hard clause.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundProblem {
    pub atoms: Vec<GroundAtom>,
    pub clauses: Vec<WeightedClause>,
    /// Rule tuples dropped because some argument pair had no candidate.
    pub skipped_tuples: usize,
}

impl GroundProblem {
    pub fn new(atoms: Vec<GroundAtom>, clauses: Vec<WeightedClause>) -> Self {
        GroundProblem { atoms, clauses, skipped_tuples: 0 }
    }

    /// A problem over `n` placeholder atoms, for solver-only use.
    pub fn anonymous(n: usize, clauses: Vec<WeightedClause>) -> Self {
        let atoms = (0..n)
            .map(|i| GroundAtom {
                id: i,
                candidate: Candidate {
                    e1: EntityId::new("O1", format!("x{i}"), EntityKind::Class),
                    e2: EntityId::new("O2", format!("y{i}"), EntityKind::Class),
                    sim: 0.0,
                    kind: CandidateKind::Simple,
                },
            })
            .collect();
        GroundProblem::new(atoms, clauses)
    }

    pub fn n_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn family_counts(&self) -> BTreeMap<Family, usize> {
        let mut out = BTreeMap::new();
        for c in &self.clauses {
            *out.entry(c.origin).or_default() += 1;
        }
        out
    }

    pub fn hard_clauses(&self) -> impl Iterator<Item = &WeightedClause> {
        self.clauses.iter().filter(|c| c.is_hard())
    }

    /// Text dump: a `p` header, one clause per line (`H` or weight, `&` for
    /// conjunctions, 1-based signed atom ids, `0`, family), then the atom table.
    pub fn to_dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "c ground problem");
        let _ = writeln!(out, "p {} {}", self.atoms.len(), self.clauses.len());
        for c in &self.clauses {
            match c.weight {
                Weight::Hard => out.push('H'),
                Weight::Soft(w) => {
                    let _ = write!(out, "{w}");
                }
            }
            if c.shape == Shape::All {
                out.push_str(" &");
            }
            for l in &c.literals {
                let id = l.atom as i64 + 1;
                let _ = write!(out, " {}", if l.positive { id } else { -id });
            }
            let _ = writeln!(out, " 0 {}", c.origin);
        }
        for a in &self.atoms {
            let c = &a.candidate;
            let kind = match c.kind {
                CandidateKind::Simple => "simple",
                CandidateKind::Complex => "complex",
            };
            let _ = writeln!(
                out,
                "a {} {} {} {} {} {} {} {} {}",
                a.id + 1,
                c.e1.kind.code(),
                c.e1.tag,
                c.e1.name,
                c.e2.kind.code(),
                c.e2.tag,
                c.e2.name,
                c.sim,
                kind
            );
        }
        out
    }

    pub fn from_dump(text: &str) -> Result<Self, GroundingError> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut atoms = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |message: String| GroundingError::Dump { line: line_no, message };
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            let mut tokens = line.split_whitespace();
            let head = tokens.next().expect("nonempty line");
            match head {
                "p" => {
                    let nums: Vec<usize> = tokens
                        .map(|t| t.parse().map_err(|_| err(format!("bad count `{t}`"))))
                        .collect::<Result<_, _>>()?;
                    if nums.len() != 2 {
                        return Err(err("expected `p <atoms> <clauses>`".to_string()));
                    }
                    header = Some((nums[0], nums[1]));
                }
                "a" => {
                    let parts: Vec<&str> = tokens.collect();
                    if parts.len() != 9 {
                        return Err(err(format!("atom line needs 9 fields, got {}", parts.len())));
                    }
                    let id: usize = parts[0].parse().map_err(|_| err(format!("bad atom id `{}`", parts[0])))?;
                    if id != atoms.len() + 1 {
                        return Err(err(format!("atom ids must be dense and ordered; got {id}")));
                    }
                    let e1 = parse_entity(parts[1], parts[2], parts[3]).ok_or_else(|| err("bad first entity".into()))?;
                    let e2 = parse_entity(parts[4], parts[5], parts[6]).ok_or_else(|| err("bad second entity".into()))?;
                    let sim: f64 = parts[7].parse().map_err(|_| err(format!("bad similarity `{}`", parts[7])))?;
                    let kind = match parts[8] {
                        "simple" => CandidateKind::Simple,
                        "complex" => CandidateKind::Complex,
                        other => return Err(err(format!("bad candidate kind `{other}`"))),
                    };
                    atoms.push(GroundAtom { id: id - 1, candidate: Candidate { e1, e2, sim, kind } });
                }
                _ => {
                    let weight = if head == "H" {
                        Weight::Hard
                    } else {
                        let w: f64 = head.parse().map_err(|_| err(format!("bad weight `{head}`")))?;
                        if !(w > 0.0 && w.is_finite()) {
                            return Err(err(format!("soft weights must be positive, got {w}")));
                        }
                        Weight::Soft(w)
                    };
                    let mut shape = Shape::Any;
                    let mut literals = Vec::new();
                    let mut origin = None;
                    let mut ended = false;
                    for t in tokens {
                        if ended {
                            origin = Some(Family::from_name(t).ok_or_else(|| err(format!("unknown family `{t}`")))?);
                            continue;
                        }
                        if t == "&" {
                            shape = Shape::All;
                            continue;
                        }
                        let v: i64 = t.parse().map_err(|_| err(format!("bad literal `{t}`")))?;
                        if v == 0 {
                            ended = true;
                        } else {
                            literals.push(Literal { atom: (v.unsigned_abs() - 1) as usize, positive: v > 0 });
                        }
                    }
                    if !ended || literals.is_empty() {
                        return Err(err("clause must list literals and end with 0".to_string()));
                    }
                    if weight == Weight::Hard && shape == Shape::All {
                        return Err(err("hard clauses are disjunctions".to_string()));
                    }
                    let mut sorted = literals.clone();
                    sorted.sort();
                    sorted.dedup_by_key(|l| l.atom);
                    if sorted.len() != literals.len() {
                        return Err(err("repeated atom in clause".to_string()));
                    }
                    clauses.push(WeightedClause {
                        literals,
                        weight,
                        shape,
                        origin: origin.unwrap_or(Family::Apriori),
                    });
                }
            }
        }
        let (n_atoms, n_clauses) = header.ok_or(GroundingError::Dump { line: 0, message: "missing `p` line".into() })?;
        if atoms.is_empty() && n_atoms > 0 {
            return Ok(GroundProblem::anonymous(n_atoms, clauses)).and_then(|p| check_counts(p, n_atoms, n_clauses));
        }
        check_counts(GroundProblem::new(atoms, clauses), n_atoms, n_clauses)
    }
}

fn check_counts(p: GroundProblem, n_atoms: usize, n_clauses: usize) -> Result<GroundProblem, GroundingError> {
    if p.atoms.len() != n_atoms || p.clauses.len() != n_clauses {
        return Err(GroundingError::Dump {
            line: 0,
            message: format!(
                "header declares {n_atoms} atoms and {n_clauses} clauses, found {} and {}",
                p.atoms.len(),
                p.clauses.len()
            ),
        });
    }
    if let Some(l) = p.clauses.iter().flat_map(|c| &c.literals).find(|l| l.atom >= n_atoms) {
        return Err(GroundingError::Dump { line: 0, message: format!("literal refers to atom {}", l.atom + 1) });
    }
    Ok(p)
}

fn parse_entity(code: &str, tag: &str, name: &str) -> Option<EntityId> {
    let kind = match code {
        "class" => EntityKind::Class,
        "object_property" => EntityKind::ObjectProperty,
        "data_property" => EntityKind::DataProperty,
        "nominal" => EntityKind::NominalValue { owner: name.split_once('=')?.0.to_string() },
        "complex_class" => EntityKind::Complex(ComplexSort::Class),
        "complex_property" => EntityKind::Complex(ComplexSort::Property),
        _ => return None,
    };
    Some(EntityId::new(tag, name, kind))
}
