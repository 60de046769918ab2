use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{better, Assignment, SolverMode};
use crate::error::SolverError;
use crate::grounding::{GroundProblem, Shape};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalParams {
    pub seed: u64,
    pub max_flips: usize,
    pub restarts: usize,
    /// Probability of a random rather than greedy flip.
    pub noise: f64,
}

impl Default for LocalParams {
    fn default() -> Self {
        LocalParams { seed: 0, max_flips: 10_000, restarts: 20, noise: 0.3 }
    }
}

/// Hard clauses outweigh any amount of soft weight during search.
const HARD_PENALTY: f64 = 1e12;

struct State<'a> {
    p: &'a GroundProblem,
    occurs: Vec<Vec<(usize, bool)>>,
    values: Vec<bool>,
    n_true: Vec<usize>,
    hard_violated: usize,
    soft_sat: f64,
    unsat_hard: ClauseSet,
    unsat_soft: ClauseSet,
}

/// Set of clause indices with O(1) insert, remove and uniform pick.
#[derive(Clone)]
struct ClauseSet {
    items: Vec<usize>,
    slot: Vec<usize>,
}

impl ClauseSet {
    fn new(n: usize) -> Self {
        ClauseSet { items: Vec::new(), slot: vec![usize::MAX; n] }
    }

    fn insert(&mut self, ci: usize) {
        if self.slot[ci] == usize::MAX {
            self.slot[ci] = self.items.len();
            self.items.push(ci);
        }
    }

    fn remove(&mut self, ci: usize) {
        let k = self.slot[ci];
        if k != usize::MAX {
            let last = *self.items.last().expect("nonempty");
            self.items.swap_remove(k);
            if last != ci {
                self.slot[last] = k;
            }
            self.slot[ci] = usize::MAX;
        }
    }
}

impl<'a> State<'a> {
    fn new(p: &'a GroundProblem, occurs: Vec<Vec<(usize, bool)>>) -> Self {
        let mut s = State {
            p,
            occurs,
            values: vec![false; p.n_atoms()],
            n_true: vec![0; p.clauses.len()],
            hard_violated: 0,
            soft_sat: 0.0,
            unsat_hard: ClauseSet::new(p.clauses.len()),
            unsat_soft: ClauseSet::new(p.clauses.len()),
        };
        for (ci, c) in p.clauses.iter().enumerate() {
            s.n_true[ci] = c.literals.iter().filter(|l| !l.positive).count();
            if s.sat(ci) {
                s.soft_sat += c.soft_weight();
            } else if c.is_hard() {
                s.hard_violated += 1;
                s.unsat_hard.insert(ci);
            } else {
                s.unsat_soft.insert(ci);
            }
        }
        s
    }

    fn sat(&self, ci: usize) -> bool {
        let c = &self.p.clauses[ci];
        match c.shape {
            Shape::Any => self.n_true[ci] > 0,
            Shape::All => self.n_true[ci] == c.literals.len(),
        }
    }

    fn value(&self, ci: usize) -> f64 {
        let c = &self.p.clauses[ci];
        if c.is_hard() {
            HARD_PENALTY
        } else {
            c.soft_weight()
        }
    }

    /// Change in `soft_sat - HARD_PENALTY * hard_violated` if `atom` flips.
    fn delta(&self, atom: usize) -> f64 {
        let mut d = 0.0;
        let now = self.values[atom];
        for &(ci, positive) in &self.occurs[atom] {
            let c = &self.p.clauses[ci];
            let change: isize = if positive == now { -1 } else { 1 };
            let after = self.n_true[ci] as isize + change;
            let sat_after = match c.shape {
                Shape::Any => after > 0,
                Shape::All => after == c.literals.len() as isize,
            };
            match (self.sat(ci), sat_after) {
                (true, false) => d -= self.value(ci),
                (false, true) => d += self.value(ci),
                _ => {}
            }
        }
        d
    }

    fn flip(&mut self, atom: usize) {
        let now = self.values[atom];
        for k in 0..self.occurs[atom].len() {
            let (ci, positive) = self.occurs[atom][k];
            let before = self.sat(ci);
            if positive == now {
                self.n_true[ci] -= 1;
            } else {
                self.n_true[ci] += 1;
            }
            let after = self.sat(ci);
            if before != after {
                let c = &self.p.clauses[ci];
                let sign = if after { 1.0 } else { -1.0 };
                let set = if c.is_hard() { &mut self.unsat_hard } else { &mut self.unsat_soft };
                if after {
                    set.remove(ci);
                } else {
                    set.insert(ci);
                }
                if c.is_hard() {
                    if after {
                        self.hard_violated -= 1;
                    } else {
                        self.hard_violated += 1;
                    }
                } else {
                    self.soft_sat += sign * c.soft_weight();
                }
            }
        }
        self.values[atom] = !now;
    }

    /// Atoms whose flip would move clause `ci` toward satisfaction.
    fn repair_moves(&self, ci: usize) -> Vec<usize> {
        self.p.clauses[ci]
            .literals
            .iter()
            .filter(|l| self.values[l.atom] != l.positive)
            .map(|l| l.atom)
            .collect()
    }
}

fn pick_move(state: &State, moves: &[usize], noise: f64, rng: &mut ChaCha8Rng) -> usize {
    if rng.random_bool(noise) {
        return moves[rng.random_range(0..moves.len())];
    }
    let mut best = Vec::new();
    let mut best_delta = f64::NEG_INFINITY;
    for &m in moves {
        let d = state.delta(m);
        if d > best_delta + 1e-12 {
            best_delta = d;
            best.clear();
            best.push(m);
        } else if (d - best_delta).abs() <= 1e-12 {
            best.push(m);
        }
    }
    best[rng.random_range(0..best.len())]
}

/// Steepest single-flip ascent that never leaves the feasible region.
fn polish(state: &mut State) {
    loop {
        let mut choice = None;
        let mut gain = 1e-12;
        for atom in 0..state.values.len() {
            let d = state.delta(atom);
            if d > gain {
                gain = d;
                choice = Some(atom);
            }
        }
        match choice {
            Some(atom) => state.flip(atom),
            None => return,
        }
    }
}

fn run(p: &GroundProblem, occurs: &[Vec<(usize, bool)>], seed: u64, max_flips: usize, noise: f64) -> Option<Vec<bool>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = State::new(p, occurs.to_vec());
    let mut best: Option<(f64, Vec<bool>)> = None;
    let record = |state: &State, best: &mut Option<(f64, Vec<bool>)>| {
        if state.hard_violated == 0 && best.as_ref().is_none_or(|(b, _)| state.soft_sat > b + 1e-12) {
            *best = Some((state.soft_sat, state.values.clone()));
        }
    };
    record(&state, &mut best);
    for _ in 0..max_flips {
        let violated = if state.hard_violated > 0 { &state.unsat_hard.items } else { &state.unsat_soft.items };
        if violated.is_empty() {
            break;
        }
        let ci = violated[rng.random_range(0..violated.len())];
        let moves = state.repair_moves(ci);
        let atom = pick_move(&state, &moves, noise, &mut rng);
        state.flip(atom);
        record(&state, &mut best);
    }
    let (_, values) = best?;
    let mut state = State::new(p, occurs.to_vec());
    for (atom, &v) in values.iter().enumerate() {
        if v {
            state.flip(atom);
        }
    }
    polish(&mut state);
    Some(state.values)
}

/// MaxWalkSAT-style search with parallel restarts. Restart `r` draws from
/// seed `seed + r`; the best restart wins, ties broken as in the exact
/// solver. Only feasible assignments are returned.
pub fn solve_local(p: &GroundProblem, params: &LocalParams) -> Result<Assignment, SolverError> {
    if params.max_flips == 0 || params.restarts == 0 {
        return Err(SolverError::Internal("max_flips and restarts must be at least 1".into()));
    }
    let all_false = Assignment::scored(p, vec![false; p.n_atoms()], SolverMode::Local);
    if !all_false.feasible {
        return Err(SolverError::Internal("the all-false assignment violates a hard clause".into()));
    }
    let mut occurs = vec![Vec::new(); p.n_atoms()];
    for (ci, c) in p.clauses.iter().enumerate() {
        for l in &c.literals {
            occurs[l.atom].push((ci, l.positive));
        }
    }
    let found: Vec<Assignment> = (0..params.restarts as u64)
        .into_par_iter()
        .filter_map(|r| run(p, &occurs, params.seed.wrapping_add(r), params.max_flips, params.noise))
        .map(|values| Assignment::scored(p, values, SolverMode::Local))
        .filter(|a| a.feasible)
        .collect();
    Ok(found.into_iter().fold(all_false, |best, a| if better(&a, &best) { a } else { best }))
}
