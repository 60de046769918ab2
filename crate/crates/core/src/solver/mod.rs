//! MAP inference over a [`GroundProblem`]: maximize the weight of satisfied
//! soft clauses subject to every hard clause.

mod exact;
mod local;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use exact::{brute_force, solve_exact, BRUTE_FORCE_LIMIT, DEFAULT_ATOM_BUDGET};
pub use local::{solve_local, LocalParams};

use crate::grounding::{Family, GroundProblem};

/// Weights closer than this count as equal.
pub const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverMode {
    Exact,
    Local,
    Brute,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub values: Vec<bool>,
    pub objective: f64,
    pub feasible: bool,
    pub mode: SolverMode,
}

impl Assignment {
    pub(crate) fn scored(p: &GroundProblem, values: Vec<bool>, mode: SolverMode) -> Self {
        let (objective, feasible) = evaluate(p, &values);
        Assignment { values, objective, feasible, mode }
    }

    pub fn true_atoms(&self) -> impl Iterator<Item = usize> + '_ {
        self.values.iter().enumerate().filter(|(_, &v)| v).map(|(i, _)| i)
    }

    pub fn n_true(&self) -> usize {
        self.values.iter().filter(|&&v| v).count()
    }
}

/// Satisfied soft weight and whether every hard clause holds.
pub fn evaluate(p: &GroundProblem, values: &[bool]) -> (f64, bool) {
    let mut objective = 0.0;
    let mut feasible = true;
    for c in &p.clauses {
        let sat = c.satisfied(values);
        if c.is_hard() {
            feasible &= sat;
        } else if sat {
            objective += c.soft_weight();
        }
    }
    (objective, feasible)
}

/// Satisfied soft weight per clause family.
pub fn family_scores(p: &GroundProblem, values: &[bool]) -> BTreeMap<Family, f64> {
    let mut out = BTreeMap::new();
    for c in p.clauses.iter().filter(|c| !c.is_hard()) {
        let e = out.entry(c.origin).or_insert(0.0);
        if c.satisfied(values) {
            *e += c.soft_weight();
        }
    }
    out
}

/// `a` is preferred over `b`: higher objective, then earlier in bit-vector
/// order (lower-indexed atoms false first).
pub(crate) fn better(a: &Assignment, b: &Assignment) -> bool {
    if a.objective > b.objective + TOLERANCE {
        return true;
    }
    if b.objective > a.objective + TOLERANCE {
        return false;
    }
    a.values < b.values
}
