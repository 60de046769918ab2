use super::{Assignment, SolverMode, TOLERANCE};
use crate::error::SolverError;
use crate::grounding::{GroundProblem, Shape};

pub const DEFAULT_ATOM_BUDGET: usize = 40;
pub const BRUTE_FORCE_LIMIT: usize = 22;

/// Incremental clause bookkeeping for depth-first search over atoms in
/// index order.
struct Search<'a> {
    p: &'a GroundProblem,
    /// `(clause, literal polarity)` for every occurrence of each atom.
    occurs: Vec<Vec<(usize, bool)>>,
    /// Literals currently true / currently assigned, per clause.
    n_true: Vec<usize>,
    n_assigned: Vec<usize>,
    falsified_soft: f64,
    falsified_hard: usize,
    total_soft: f64,
    values: Vec<bool>,
    best: Option<Vec<bool>>,
    best_objective: f64,
    /// Restrict to hard clauses and stop at the first model.
    feasibility_only: bool,
}

impl<'a> Search<'a> {
    fn new(p: &'a GroundProblem, active: Vec<bool>, feasibility_only: bool) -> Self {
        let n = p.n_atoms();
        let mut occurs = vec![Vec::new(); n];
        for (ci, c) in p.clauses.iter().enumerate().filter(|(ci, _)| active[*ci]) {
            for l in &c.literals {
                occurs[l.atom].push((ci, l.positive));
            }
        }
        let total_soft = if feasibility_only {
            0.0
        } else {
            p.clauses.iter().zip(&active).filter(|(_, &a)| a).map(|(c, _)| c.soft_weight()).sum()
        };
        Search {
            p,
            occurs,
            n_true: vec![0; p.clauses.len()],
            n_assigned: vec![0; p.clauses.len()],
            falsified_soft: 0.0,
            falsified_hard: 0,
            total_soft,
            values: vec![false; n],
            best: None,
            best_objective: f64::NEG_INFINITY,
            feasibility_only,
        }
    }

    fn is_falsified(&self, ci: usize) -> bool {
        let c = &self.p.clauses[ci];
        let len = c.literals.len();
        match c.shape {
            Shape::Any => self.n_assigned[ci] == len && self.n_true[ci] == 0,
            Shape::All => self.n_assigned[ci] > self.n_true[ci],
        }
    }

    fn account(&mut self, ci: usize, sign: f64) {
        let c = &self.p.clauses[ci];
        if c.is_hard() {
            if sign > 0.0 {
                self.falsified_hard += 1;
            } else {
                self.falsified_hard -= 1;
            }
        } else if !self.feasibility_only {
            self.falsified_soft += sign * c.soft_weight();
        }
    }

    fn assign(&mut self, atom: usize, value: bool) {
        self.values[atom] = value;
        for k in 0..self.occurs[atom].len() {
            let (ci, positive) = self.occurs[atom][k];
            let before = self.is_falsified(ci);
            self.n_assigned[ci] += 1;
            if positive == value {
                self.n_true[ci] += 1;
            }
            if !before && self.is_falsified(ci) {
                self.account(ci, 1.0);
            }
        }
    }

    fn unassign(&mut self, atom: usize) {
        let value = self.values[atom];
        for k in 0..self.occurs[atom].len() {
            let (ci, positive) = self.occurs[atom][k];
            let before = self.is_falsified(ci);
            self.n_assigned[ci] -= 1;
            if positive == value {
                self.n_true[ci] -= 1;
            }
            if before && !self.is_falsified(ci) {
                self.account(ci, -1.0);
            }
        }
        self.values[atom] = false;
    }

    /// Visits leaves in bit-vector order and keeps strict improvements only,
    /// so the result is the earliest optimal assignment in that order.
    fn dfs(&mut self, depth: usize) -> bool {
        if self.falsified_hard > 0 {
            return false;
        }
        let bound = self.total_soft - self.falsified_soft;
        if self.best.is_some() && bound <= self.best_objective + TOLERANCE {
            return false;
        }
        if depth == self.values.len() {
            // Score leaves from scratch so results compare exactly with
            // exhaustive enumeration.
            self.best_objective = super::evaluate(self.p, &self.values).0;
            self.best = Some(self.values.clone());
            return self.feasibility_only;
        }
        for value in [false, true] {
            self.assign(depth, value);
            let stop = self.dfs(depth + 1);
            self.unassign(depth);
            if stop {
                return true;
            }
        }
        false
    }
}

/// Exact optimum by branch and bound. Ties go to the assignment that comes
/// first in bit-vector order with atom 0 most significant and false before
/// true.
pub fn solve_exact(p: &GroundProblem, atom_budget: usize) -> Result<Assignment, SolverError> {
    let n = p.n_atoms();
    if n > atom_budget {
        return Err(SolverError::BudgetExceeded { atoms: n, budget: atom_budget });
    }
    let mut search = Search::new(p, vec![true; p.clauses.len()], false);
    search.dfs(0);
    match search.best {
        Some(values) => Ok(Assignment::scored(p, values, SolverMode::Exact)),
        None => Err(SolverError::Infeasible { core: unsat_core(p) }),
    }
}

fn hard_satisfiable(p: &GroundProblem, active: Vec<bool>) -> bool {
    let mut s = Search::new(p, active, true);
    s.dfs(0);
    s.best.is_some()
}

/// Deletion-based minimal unsatisfiable subset of the hard clauses.
fn unsat_core(p: &GroundProblem) -> Vec<usize> {
    let mut active: Vec<bool> = p.clauses.iter().map(|c| c.is_hard()).collect();
    for ci in 0..p.clauses.len() {
        if !active[ci] {
            continue;
        }
        active[ci] = false;
        if hard_satisfiable(p, active.clone()) {
            active[ci] = true;
        }
    }
    (0..p.clauses.len()).filter(|&ci| active[ci]).collect()
}

/// Exhaustive enumeration in bit-vector order. Reports `feasible = false`
/// with the all-false assignment when no assignment satisfies the hard
/// clauses.
pub fn brute_force(p: &GroundProblem) -> Result<Assignment, SolverError> {
    let n = p.n_atoms();
    if n > BRUTE_FORCE_LIMIT {
        return Err(SolverError::BudgetExceeded { atoms: n, budget: BRUTE_FORCE_LIMIT });
    }
    let mut best: Option<(f64, Vec<bool>)> = None;
    let mut values = vec![false; n];
    for code in 0u64..(1u64 << n) {
        for (i, v) in values.iter_mut().enumerate() {
            *v = code >> (n - 1 - i) & 1 == 1;
        }
        let (objective, feasible) = super::evaluate(p, &values);
        if feasible && best.as_ref().is_none_or(|(b, _)| objective > b + TOLERANCE) {
            best = Some((objective, values.clone()));
        }
    }
    Ok(match best {
        Some((_, values)) => Assignment::scored(p, values, SolverMode::Brute),
        None => Assignment::scored(p, vec![false; n], SolverMode::Brute),
    })
}
