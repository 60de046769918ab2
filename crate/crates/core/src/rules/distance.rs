use serde::{Deserialize, Serialize};

use super::ConditionalRule;
use crate::error::RuleError;
use crate::ontology::NumericRange;

/// `f(x) = scale * x + offset` with `scale > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearMap {
    scale: f64,
    offset: f64,
}

impl LinearMap {
    pub fn new(scale: f64, offset: f64) -> Result<Self, RuleError> {
        if !(scale > 0.0 && scale.is_finite() && offset.is_finite()) {
            return Err(RuleError::NonPositiveScale(scale));
        }
        Ok(LinearMap { scale, offset })
    }

    pub fn identity() -> Self {
        LinearMap { scale: 1.0, offset: 0.0 }
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn apply(&self, x: f64) -> f64 {
        self.scale * x + self.offset
    }

    pub fn inverse(&self) -> LinearMap {
        LinearMap { scale: 1.0 / self.scale, offset: -self.offset / self.scale }
    }
}

/// The map sending `a.min -> b.min` and `a.max -> b.max`.
pub fn estimate_linear_map(a: NumericRange, b: NumericRange) -> Result<LinearMap, RuleError> {
    for r in [a, b] {
        if !(r.max > r.min) {
            return Err(RuleError::DegenerateRange { min: r.min, max: r.max });
        }
    }
    let scale = (b.max - b.min) / (a.max - a.min);
    LinearMap::new(scale, b.min - scale * a.min)
}

pub fn absolute_difference(p: f64, q: f64) -> f64 {
    (p - q).abs()
}

/// Expected `|p - p'|` between two conditional rules over a uniform grid of
/// `grid_n` points per antecedent spanning the first rule's ranges.
/// Antecedent `i` of `r1` pairs with antecedent `pairing[i]` of `r2`, and
/// `maps[i]` carries its values into `r2`'s units.
pub fn rule_distance(
    r1: &ConditionalRule,
    r2: &ConditionalRule,
    pairing: &[usize],
    maps: &[LinearMap],
    grid_n: usize,
) -> Result<f64, RuleError> {
    rule_distance_with(r1, r2, pairing, maps, grid_n, absolute_difference)
}

/// [`rule_distance`] with a caller-supplied distance between the two
/// consequent probabilities.
pub fn rule_distance_with(
    r1: &ConditionalRule,
    r2: &ConditionalRule,
    pairing: &[usize],
    maps: &[LinearMap],
    grid_n: usize,
    distance: impl Fn(f64, f64) -> f64,
) -> Result<f64, RuleError> {
    let k = r1.antecedents.len();
    if r2.antecedents.len() != k || pairing.len() != k || maps.len() != k {
        return Err(RuleError::Pairing(format!(
            "{} vs {} antecedents, {} pairings, {} maps",
            k,
            r2.antecedents.len(),
            pairing.len(),
            maps.len()
        )));
    }
    let mut seen = vec![false; k];
    for &j in pairing {
        if j >= k || std::mem::replace(&mut seen[j], true) {
            return Err(RuleError::Pairing(format!("{pairing:?} is not a permutation")));
        }
    }
    if let Some(m) = maps.iter().find(|m| !(m.scale > 0.0)) {
        return Err(RuleError::NonPositiveScale(m.scale));
    }
    if grid_n < 2 {
        return Err(RuleError::Pairing(format!("grid_n must be at least 2, got {grid_n}")));
    }

    // Both regions are products of per-axis predicates, so the four region
    // sizes factor over axes.
    let mut in_1 = 1.0;
    let mut in_2 = 1.0;
    let mut in_both = 1.0;
    for i in 0..k {
        let a = &r1.antecedents[i];
        let b = &r2.antecedents[pairing[i]];
        let (mut c1, mut c2, mut c12) = (0usize, 0usize, 0usize);
        for step in 0..grid_n {
            let x = grid_point(a.range, step, grid_n);
            let h1 = a.op.holds(x, a.threshold);
            let h2 = b.op.holds(maps[i].apply(x), b.threshold);
            c1 += h1 as usize;
            c2 += h2 as usize;
            c12 += (h1 && h2) as usize;
        }
        let n = grid_n as f64;
        in_1 *= c1 as f64 / n;
        in_2 *= c2 as f64 / n;
        in_both *= c12 as f64 / n;
    }
    let only_1 = in_1 - in_both;
    let only_2 = in_2 - in_both;
    let neither = 1.0 - in_1 - in_2 + in_both;
    let d = in_both * distance(r1.p_consequent, r2.p_consequent)
        + only_1 * distance(r1.p_consequent, r2.p_else)
        + only_2 * distance(r1.p_else, r2.p_consequent)
        + neither * distance(r1.p_else, r2.p_else);
    Ok(d.clamp(0.0, 1.0))
}

pub(crate) fn grid_point(range: NumericRange, step: usize, grid_n: usize) -> f64 {
    if step + 1 == grid_n {
        range.max
    } else {
        range.min + range.width() * step as f64 / (grid_n - 1) as f64
    }
}
