//! Random instance generators and exhaustive oracles shared by the
//! integration and acceptance suites.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use ontomatch::grounding::{Family, GroundProblem, Literal, Shape, WeightedClause};
use ontomatch::ontology::{EntityId, EntityKind};
use ontomatch::rules::{Column, ColumnData, Dataset, MiningParams};
use ontomatch::KnowledgeRule;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn weight(rng: &mut ChaCha8Rng) -> f64 {
    // A coarse grid half of the time so that ties actually occur.
    if rng.random_bool(0.5) {
        f64::from(rng.random_range(1..=8u32)) * 0.125
    } else {
        rng.random_range(0.01..1.0)
    }
}

/// Random problem whose hard clauses all contain a negative literal, so the
/// all-false assignment is feasible, as it is for grounded problems.
pub fn random_problem(seed: u64, max_atoms: usize, max_clauses: usize) -> GroundProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=max_atoms);
    let m = rng.random_range(1..=max_clauses);
    let mut clauses = Vec::new();
    let lit = |rng: &mut ChaCha8Rng| Literal { atom: rng.random_range(0..n), positive: rng.random_bool(0.6) };
    while clauses.len() < m {
        let len = rng.random_range(1..=3.min(n));
        let mut lits: Vec<Literal> = (0..len).map(|_| lit(&mut rng)).collect();
        let clause = match rng.random_range(0..10) {
            0..=1 => {
                lits[0].positive = false;
                WeightedClause::hard(lits, Family::Cardinality)
            }
            2..=4 => WeightedClause::soft(Shape::Any, vec![lits[0]], weight(&mut rng), Family::Apriori),
            5..=6 => WeightedClause::soft(Shape::Any, lits, weight(&mut rng), Family::RulePos),
            7..=8 => WeightedClause::soft(Shape::All, lits, weight(&mut rng), Family::RuleNeg),
            _ => WeightedClause::soft(Shape::All, lits, -weight(&mut rng), Family::Stability),
        };
        if let Some(c) = clause {
            clauses.push(c);
        }
    }
    GroundProblem::anonymous(n, clauses)
}

/// Random dataset mixing binned and nominal columns.
pub fn random_dataset(seed: u64, max_cols: usize, max_rows: usize) -> (Dataset, MiningParams) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cols = rng.random_range(2..=max_cols);
    let rows = rng.random_range(5..=max_rows);
    let mut columns = Vec::new();
    for c in 0..cols {
        let arity = rng.random_range(1..=4u32);
        // Skewed values make confident rules more likely.
        let skew = rng.random_range(0.3..0.95);
        let draw = |rng: &mut ChaCha8Rng| if rng.random_bool(skew) { 1 } else { rng.random_range(1..=arity) };
        let data = if rng.random_bool(0.5) {
            ColumnData::Discrete((0..rows).map(|_| draw(&mut rng)).collect())
        } else {
            ColumnData::Nominal((0..rows).map(|_| format!("v{}", draw(&mut rng))).collect())
        };
        columns.push(Column { property: EntityId::new("D", format!("c{c}"), EntityKind::DataProperty), data });
    }
    let params = MiningParams {
        min_conf: [0.5, 0.8, 0.9, 1.0][rng.random_range(0..4)],
        min_sup: [0.02, 0.1, 0.2][rng.random_range(0..3)],
        max_attrs: rng.random_range(2..=4),
    };
    (Dataset::new(columns).unwrap(), params)
}

/// Canonical form of a mined rule: antecedent items, consequent item, confidence.
pub type RuleKey = (Vec<(String, u64)>, (String, u64), u64);

pub fn rule_key(r: &KnowledgeRule) -> RuleKey {
    let items: Vec<(String, u64)> =
        r.args.iter().zip(&r.params).map(|(a, p)| (a.name.clone(), p.to_bits())).collect();
    let (last, init) = items.split_last().unwrap();
    let mut antecedent = init.to_vec();
    antecedent.sort();
    (antecedent, last.clone(), r.confidence.to_bits())
}

/// Every rule with a single consequent over at most `max_attrs` columns, by
/// direct enumeration of column subsets and the value tuples that occur.
pub fn mine_oracle(ds: &Dataset, params: &MiningParams) -> BTreeSet<RuleKey> {
    let n = ds.n_rows();
    let cols = ds.columns();
    let item = |c: usize, row: usize| -> (String, u64) {
        let name = &cols[c].property.name;
        match &cols[c].data {
            ColumnData::Discrete(v) => (name.clone(), f64::from(v[row]).to_bits()),
            ColumnData::Nominal(v) => (format!("{name}={}", v[row]), 0f64.to_bits()),
            ColumnData::Numeric(_) => unreachable!(),
        }
    };
    let support = |set: &BTreeMap<usize, (String, u64)>| {
        (0..n).filter(|&row| set.iter().all(|(&c, it)| item(c, row) == *it)).count()
    };
    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << cols.len()) {
        let chosen: Vec<usize> = (0..cols.len()).filter(|c| mask >> c & 1 == 1).collect();
        if chosen.len() < 2 || chosen.len() > params.max_attrs {
            continue;
        }
        let tuples: BTreeSet<BTreeMap<usize, (String, u64)>> =
            (0..n).map(|row| chosen.iter().map(|&c| (c, item(c, row))).collect()).collect();
        for set in tuples {
            let s = support(&set);
            if (s as f64 / n as f64) < params.min_sup {
                continue;
            }
            for &consequent in &chosen {
                let mut antecedent = set.clone();
                let head = antecedent.remove(&consequent).unwrap();
                let conf = s as f64 / support(&antecedent) as f64;
                if conf >= params.min_conf {
                    let mut items: Vec<(String, u64)> = antecedent.into_values().collect();
                    items.sort();
                    out.insert((items, head, conf.to_bits()));
                }
            }
        }
    }
    out
}
