use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dataset::{ColumnData, Dataset};
use super::{KnowledgeRule, ASSOC_IMPLIES};
use crate::error::RuleError;
use crate::ontology::{EntityId, EntityKind};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MiningParams {
    pub min_conf: f64,
    pub min_sup: f64,
    /// Maximum number of distinct attributes in a rule, consequent included.
    pub max_attrs: usize,
}

impl Default for MiningParams {
    fn default() -> Self {
        MiningParams { min_conf: 0.9, min_sup: 0.001, max_attrs: 3 }
    }
}

/// `(column index, value code)`; every row holds exactly one item per column.
type Item = (usize, u32);

/// Levelwise Apriori over a discrete dataset, emitting every rule
/// `antecedent -> single consequent` that meets both thresholds.
pub fn mine_association_rules(ds: &Dataset, params: &MiningParams) -> Result<Vec<KnowledgeRule>, RuleError> {
    if ds.n_rows() == 0 || ds.columns().is_empty() {
        return Err(RuleError::EmptyDataset);
    }
    if !(params.min_sup > 0.0 && params.min_sup <= 1.0) {
        return Err(RuleError::MiningParams(format!("min_sup {} not in (0, 1]", params.min_sup)));
    }
    if !(params.min_conf > 0.0 && params.min_conf <= 1.0) {
        return Err(RuleError::MiningParams(format!("min_conf {} not in (0, 1]", params.min_conf)));
    }
    if params.max_attrs < 2 {
        return Err(RuleError::MiningParams(format!("max_attrs {} < 2", params.max_attrs)));
    }
    let encoded = Encoded::new(ds)?;
    let n = ds.n_rows();
    let frequent_enough = |count: usize| count as f64 / n as f64 >= params.min_sup;

    let mut counts: BTreeMap<Vec<Item>, usize> = BTreeMap::new();
    let mut level: Vec<Vec<Item>> = Vec::new();
    for (col, values) in encoded.rows_by_column.iter().enumerate() {
        let mut per_value: BTreeMap<u32, usize> = BTreeMap::new();
        for &v in values {
            *per_value.entry(v).or_default() += 1;
        }
        for (v, c) in per_value {
            if frequent_enough(c) {
                counts.insert(vec![(col, v)], c);
                level.push(vec![(col, v)]);
            }
        }
    }
    for _size in 2..=params.max_attrs {
        let candidates = join_level(&level, &counts);
        let counted: Vec<(Vec<Item>, usize)> = candidates
            .into_par_iter()
            .map(|items| {
                let c = encoded.support(&items);
                (items, c)
            })
            .collect();
        level = Vec::new();
        for (items, c) in counted {
            if frequent_enough(c) {
                level.push(items.clone());
                counts.insert(items, c);
            }
        }
        if level.is_empty() {
            break;
        }
    }

    let mut rules = Vec::new();
    for (items, &count) in counts.iter().filter(|(items, _)| items.len() >= 2) {
        for k in 0..items.len() {
            let mut antecedent = items.clone();
            let consequent = antecedent.remove(k);
            let confidence = count as f64 / counts[&antecedent] as f64;
            if confidence >= params.min_conf {
                rules.push(encoded.to_rule(&antecedent, consequent, confidence));
            }
        }
    }
    rules.sort_by(|a, b| rule_key(a).cmp(&rule_key(b)));
    Ok(rules)
}

/// Lexicographic order over (item names, bin params).
fn rule_key(r: &KnowledgeRule) -> Vec<(String, u64)> {
    r.args.iter().zip(&r.params).map(|(a, &p)| (a.name.clone(), p as u64)).collect()
}

fn join_level(level: &[Vec<Item>], counts: &BTreeMap<Vec<Item>, usize>) -> Vec<Vec<Item>> {
    let mut out = BTreeSet::new();
    for (i, a) in level.iter().enumerate() {
        for b in &level[i + 1..] {
            let k = a.len();
            if a[..k - 1] != b[..k - 1] || a[k - 1].0 >= b[k - 1].0 {
                continue;
            }
            let mut joined = a.clone();
            joined.push(b[k - 1]);
            let all_subsets_frequent = (0..joined.len()).all(|skip| {
                let sub: Vec<Item> =
                    joined.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &x)| x).collect();
                counts.contains_key(&sub)
            });
            if all_subsets_frequent {
                out.insert(joined);
            }
        }
    }
    out.into_iter().collect()
}

struct Encoded<'a> {
    ds: &'a Dataset,
    rows_by_column: Vec<Vec<u32>>,
    /// Sorted distinct values of nominal columns; empty for binned columns.
    labels: Vec<Vec<String>>,
}

impl<'a> Encoded<'a> {
    fn new(ds: &'a Dataset) -> Result<Self, RuleError> {
        let mut rows_by_column = Vec::new();
        let mut labels = Vec::new();
        for c in ds.columns() {
            match &c.data {
                ColumnData::Discrete(bins) => {
                    rows_by_column.push(bins.clone());
                    labels.push(Vec::new());
                }
                ColumnData::Nominal(values) => {
                    let distinct: Vec<String> =
                        values.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
                    let codes = values.iter().map(|v| distinct.binary_search(v).expect("present") as u32).collect();
                    rows_by_column.push(codes);
                    labels.push(distinct);
                }
                ColumnData::Numeric(_) => {
                    return Err(RuleError::Dataset(format!(
                        "column `{}` is numeric; discretize it before mining",
                        c.property.name
                    )))
                }
            }
        }
        Ok(Encoded { ds, rows_by_column, labels })
    }

    fn support(&self, items: &[Item]) -> usize {
        (0..self.ds.n_rows())
            .filter(|&row| items.iter().all(|&(col, v)| self.rows_by_column[col][row] == v))
            .count()
    }

    fn item_entity(&self, (col, v): Item) -> (EntityId, f64) {
        let prop = &self.ds.columns()[col].property;
        if self.labels[col].is_empty() {
            (prop.clone(), f64::from(v))
        } else {
            let name = format!("{}={}", prop.name, self.labels[col][v as usize]);
            let kind = EntityKind::NominalValue { owner: prop.name.clone() };
            (EntityId::new(&prop.tag, name, kind), 0.0)
        }
    }

    fn to_rule(&self, antecedent: &[Item], consequent: Item, confidence: f64) -> KnowledgeRule {
        let mut items: Vec<(EntityId, f64)> = antecedent.iter().map(|&i| self.item_entity(i)).collect();
        items.sort_by(|a, b| a.0.name.cmp(&b.0.name));
        items.push(self.item_entity(consequent));
        let (args, params) = items.into_iter().unzip();
        KnowledgeRule { pattern: ASSOC_IMPLIES.to_string(), args, params, confidence, ops: Vec::new(), p_else: None }
    }
}
