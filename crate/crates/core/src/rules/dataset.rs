use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::RuleError;
use crate::ontology::{EntityId, EntityKind};

#[derive(Debug, Clone, PartialEq)]
pub enum ColumnData {
    Numeric(Vec<f64>),
    Nominal(Vec<String>),
    /// Bin indices `1..=n_bins` of a discretized numeric column.
    Discrete(Vec<u32>),
}

impl ColumnData {
    pub fn len(&self) -> usize {
        match self {
            ColumnData::Numeric(v) => v.len(),
            ColumnData::Nominal(v) => v.len(),
            ColumnData::Discrete(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub property: EntityId,
    pub data: ColumnData,
}

/// Rectangular table, stored column-major; one column per data property.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    columns: Vec<Column>,
    n_rows: usize,
}

impl Dataset {
    pub fn new(columns: Vec<Column>) -> Result<Self, RuleError> {
        let n_rows = columns.first().map_or(0, |c| c.data.len());
        let mut names = BTreeSet::new();
        for c in &columns {
            if c.data.len() != n_rows {
                return Err(RuleError::Dataset(format!(
                    "column `{}` has {} rows, expected {}",
                    c.property.name,
                    c.data.len(),
                    n_rows
                )));
            }
            if !names.insert(c.property.name.as_str()) {
                return Err(RuleError::Dataset(format!("duplicate column `{}`", c.property.name)));
            }
            if c.property.kind != EntityKind::DataProperty {
                return Err(RuleError::Dataset(format!("column `{}` is not a data property", c.property.name)));
            }
        }
        Ok(Dataset { columns, n_rows })
    }

    /// Reads CSV with a header row. A column whose every cell parses as a
    /// finite real is numeric; anything else is nominal.
    pub fn from_csv(text: &str, tag: &str) -> Result<Self, RuleError> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let header: Vec<String> = reader
            .headers()
            .map_err(|e| RuleError::Dataset(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        let mut cells: Vec<Vec<String>> = vec![Vec::new(); header.len()];
        for record in reader.records() {
            let record = record.map_err(|e| RuleError::Dataset(e.to_string()))?;
            for (col, cell) in cells.iter_mut().zip(record.iter()) {
                col.push(cell.to_string());
            }
        }
        let columns = header
            .into_iter()
            .zip(cells)
            .map(|(name, values)| {
                let numeric: Option<Vec<f64>> =
                    values.iter().map(|v| v.parse::<f64>().ok().filter(|x| x.is_finite())).collect();
                let data = match numeric {
                    Some(xs) if !xs.is_empty() => ColumnData::Numeric(xs),
                    _ => ColumnData::Nominal(values),
                };
                Column { property: EntityId::new(tag, name, EntityKind::DataProperty), data }
            })
            .collect();
        Dataset::new(columns)
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.columns.iter().find(|c| c.property.name == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BinStrategy {
    #[default]
    Quantile,
    EqualWidth,
}

/// Replaces numeric columns by bins `1..=n_bins`. A value `v` falls in bin
/// `1 + #{edges e : v > e}`, so values equal to an edge go to the lower bin.
/// Returns the edges per numeric column for replay on other data.
pub fn discretize(
    ds: &Dataset,
    n_bins: usize,
    strategy: BinStrategy,
) -> Result<(Dataset, BTreeMap<String, Vec<f64>>), RuleError> {
    if n_bins < 2 {
        return Err(RuleError::TooFewBins(n_bins));
    }
    let mut edges_by_column = BTreeMap::new();
    let mut columns = Vec::with_capacity(ds.columns.len());
    for c in &ds.columns {
        let data = match &c.data {
            ColumnData::Numeric(xs) => {
                let edges = match strategy {
                    BinStrategy::Quantile => quantile_edges(&c.property.name, xs, n_bins)?,
                    BinStrategy::EqualWidth => equal_width_edges(xs, n_bins),
                };
                let bins = apply_edges(xs, &edges);
                edges_by_column.insert(c.property.name.clone(), edges);
                ColumnData::Discrete(bins)
            }
            other => other.clone(),
        };
        columns.push(Column { property: c.property.clone(), data });
    }
    Ok((Dataset { columns, n_rows: ds.n_rows }, edges_by_column))
}

pub fn apply_edges(xs: &[f64], edges: &[f64]) -> Vec<u32> {
    xs.iter().map(|&x| 1 + edges.iter().filter(|&&e| x > e).count() as u32).collect()
}

fn equal_width_edges(xs: &[f64], n_bins: usize) -> Vec<f64> {
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (1..n_bins).map(|j| lo + (hi - lo) * j as f64 / n_bins as f64).collect()
}

/// Edge `j` is the sorted value at rank `ceil(j * n / n_bins) - 1`, nudged to
/// the next distinct value when ties would make edges coincide.
fn quantile_edges(name: &str, xs: &[f64], n_bins: usize) -> Result<Vec<f64>, RuleError> {
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut distinct = sorted.clone();
    distinct.dedup();
    if distinct.len() < n_bins {
        return Err(RuleError::TooFewDistinct { column: name.to_string(), distinct: distinct.len(), bins: n_bins });
    }
    let n = sorted.len();
    let mut edges: Vec<f64> = Vec::with_capacity(n_bins - 1);
    // Index into `distinct` of the previous edge.
    let mut prev: Option<usize> = None;
    for j in 1..n_bins {
        let rank = (j * n).div_ceil(n_bins) - 1;
        let target = sorted[rank];
        let mut idx = distinct.partition_point(|&d| d < target);
        if let Some(p) = prev {
            idx = idx.max(p + 1);
        }
        // Leave one distinct value for each remaining edge and the top bin.
        idx = idx.min(distinct.len() - 1 - (n_bins - j));
        edges.push(distinct[idx]);
        prev = Some(idx);
    }
    Ok(edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn numeric(values: &[f64]) -> Dataset {
        Dataset::new(vec![Column {
            property: EntityId::new("O1", "x", EntityKind::DataProperty),
            data: ColumnData::Numeric(values.to_vec()),
        }])
        .unwrap()
    }

    fn bins(ds: &Dataset) -> Vec<u32> {
        match &ds.columns()[0].data {
            ColumnData::Discrete(b) => b.clone(),
            other => panic!("not discrete: {other:?}"),
        }
    }

    /// Bin from the count of strictly smaller values; ties share a bin.
    fn rank_oracle(xs: &[f64], n_bins: usize) -> Vec<u32> {
        xs.iter()
            .map(|&v| {
                let below = xs.iter().filter(|&&x| x < v).count();
                1 + ((n_bins * below) / xs.len()).min(n_bins - 1) as u32
            })
            .collect()
    }

    #[test]
    fn one_value_per_quartile() {
        let (d, edges) = discretize(&numeric(&[1.0, 2.0, 3.0, 4.0]), 4, BinStrategy::Quantile).unwrap();
        assert_eq!(bins(&d), [1, 2, 3, 4]);
        assert_eq!(edges["x"], [1.0, 2.0, 3.0]);
    }

    #[test]
    fn equal_width_midpoint() {
        let (d, edges) = discretize(&numeric(&[0.0, 10.0]), 2, BinStrategy::EqualWidth).unwrap();
        assert_eq!(edges["x"], [5.0]);
        assert_eq!(bins(&d), [1, 2]);
    }

    #[test]
    fn ties_never_split() {
        let xs = [1.0, 1.0, 1.0, 2.0, 3.0, 100.0];
        let (d, _) = discretize(&numeric(&xs), 3, BinStrategy::Quantile).unwrap();
        assert_eq!(bins(&d), rank_oracle(&xs, 3));
        assert_eq!(bins(&d), [1, 1, 1, 2, 3, 3]);
    }

    #[test]
    fn heavy_ties_keep_every_bin_populated() {
        let xs = [1.0, 1.0, 1.0, 1.0, 1.0, 2.0, 3.0];
        let (d, edges) = discretize(&numeric(&xs), 3, BinStrategy::Quantile).unwrap();
        assert_eq!(edges["x"], [1.0, 2.0]);
        assert_eq!(bins(&d), [1, 1, 1, 1, 1, 2, 3]);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            discretize(&numeric(&[1.0, 1.0, 2.0]), 3, BinStrategy::Quantile),
            Err(RuleError::TooFewDistinct { distinct: 2, .. })
        ));
        assert!(matches!(discretize(&numeric(&[1.0, 2.0]), 1, BinStrategy::EqualWidth), Err(RuleError::TooFewBins(1))));
    }

    #[test]
    fn csv_columns_typed() {
        let ds = Dataset::from_csv("age,education\n25,11th\n40.5,Bachelors\n", "adult").unwrap();
        assert_eq!(ds.n_rows(), 2);
        assert_eq!(ds.column("age").unwrap().data, ColumnData::Numeric(vec![25.0, 40.5]));
        assert!(matches!(ds.column("education").unwrap().data, ColumnData::Nominal(_)));
        assert!(Dataset::from_csv("a,a\n1,2\n", "t").is_err());
    }

    #[test]
    fn nominal_columns_unchanged() {
        let ds = Dataset::from_csv("c,x\nred,1\nblue,2\n", "t").unwrap();
        let (d, _) = discretize(&ds, 2, BinStrategy::Quantile).unwrap();
        assert_eq!(d.column("c"), ds.column("c"));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn quantile_matches_rank_oracle_without_clamping(
                xs in proptest::collection::vec(0u8..20, 6..60),
                n_bins in 2usize..6,
            ) {
                let xs: Vec<f64> = xs.into_iter().map(f64::from).collect();
                let mut distinct = xs.clone();
                distinct.sort_by(f64::total_cmp);
                distinct.dedup();
                prop_assume!(distinct.len() >= n_bins);
                let (d, edges) = discretize(&numeric(&xs), n_bins, BinStrategy::Quantile).unwrap();
                let got = bins(&d);
                prop_assert!(edges["x"].windows(2).all(|w| w[0] < w[1]));
                prop_assert!(got.iter().all(|&b| b >= 1 && b as usize <= n_bins));
                // When the rank edges are already distinct no nudging happens and
                // the rank oracle applies exactly.
                let oracle = rank_oracle(&xs, n_bins);
                let oracle_bins: std::collections::BTreeSet<u32> = oracle.iter().copied().collect();
                if oracle_bins.len() == n_bins {
                    prop_assert_eq!(&got, &oracle);
                }
                // Counts differ from n / n_bins by no more than the rows tied at
                // the edges.
                let tied: usize = edges["x"].iter().map(|e| xs.iter().filter(|&&x| x == *e).count()).sum();
                let ideal = xs.len() as f64 / n_bins as f64;
                for b in 1..=n_bins as u32 {
                    let count = got.iter().filter(|&&g| g == b).count() as f64;
                    prop_assert!((count - ideal).abs() <= tied as f64 + 1.0);
                }
            }

            #[test]
            fn distinct_values_balance_exactly(n in 4usize..60, n_bins in 2usize..5) {
                let xs: Vec<f64> = (0..n).map(|i| ((n - 1 - i) * 3) as f64).collect();
                prop_assume!(n >= n_bins);
                let (d, _) = discretize(&numeric(&xs), n_bins, BinStrategy::Quantile).unwrap();
                let got = bins(&d);
                let ideal = n as f64 / n_bins as f64;
                for b in 1..=n_bins as u32 {
                    let count = got.iter().filter(|&&g| g == b).count() as f64;
                    prop_assert!((count - ideal).abs() < 1.0);
                }
            }
        }
    }
}
