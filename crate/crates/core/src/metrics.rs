//! Dependency lengths in words and characters, length histograms and the
//! online memory cost `D = (n-1) Σ_d p(d) g(d)`.
//!
//! Character positions follow the word-centre convention: a word of
//! length λ starting at character `s` is centred at `s + (λ+1)/2 - 1`, and
//! consecutive words are separated by one space. Centres can fall on half
//! characters, so all lengths are stored in half-units.

use std::collections::BTreeMap;
use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::cost::{CostError, CostFunction};
use crate::tree::{DepTree, Linearization, Token, Unit};
use crate::value::{self, from_half_units, CostValue, Rational};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("({head}, {dependent}) is not an edge of the tree")]
    UnknownEdge { head: usize, dependent: usize },
    #[error("corpus has no dependencies")]
    EmptyCorpus,
    #[error(transparent)]
    Cost(#[from] CostError),
}

/// Length of one dependency.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeLength {
    pub head: usize,
    pub dependent: usize,
    pub unit: Unit,
    /// Length doubled, so character lengths stay integral.
    pub half_units: u64,
}

impl EdgeLength {
    pub fn value(&self) -> Rational {
        from_half_units(self.half_units)
    }

    /// Length in words; `None` for character lengths.
    pub fn words(&self) -> Option<u64> {
        (self.unit == Unit::Words).then_some(self.half_units / 2)
    }
}

/// Centre of each vertex in half-units, indexed by vertex.
pub fn word_centers(tree: &DepTree, lin: &Linearization) -> Vec<u64> {
    centers_of(tree.tokens(), lin)
}

pub(crate) fn centers_of(tokens: &[Token], lin: &Linearization) -> Vec<u64> {
    let mut centers = vec![0; tokens.len()];
    let mut start: u64 = 1;
    for &v in lin.sequence() {
        let lambda = tokens[v].char_length as u64;
        centers[v] = 2 * start + lambda - 1;
        start += lambda + 1;
    }
    centers
}

/// Position of each vertex in half-units for the given unit.
pub(crate) fn coordinates(tree: &DepTree, lin: &Linearization, unit: Unit) -> Vec<u64> {
    match unit {
        Unit::Words => (0..tree.len()).map(|v| 2 * lin.position(v) as u64).collect(),
        Unit::Characters => word_centers(tree, lin),
    }
}

pub fn edge_length(
    tree: &DepTree,
    lin: &Linearization,
    edge: (usize, usize),
    unit: Unit,
) -> Result<EdgeLength, MetricsError> {
    let (head, dependent) = edge;
    if !tree.has_edge(head, dependent) {
        return Err(MetricsError::UnknownEdge { head, dependent });
    }
    let coords = coordinates(tree, lin, unit);
    Ok(EdgeLength {
        head,
        dependent,
        unit,
        half_units: coords[head].abs_diff(coords[dependent]),
    })
}

/// Lengths of all edges, in dependent order.
pub fn edge_lengths(tree: &DepTree, lin: &Linearization, unit: Unit) -> Vec<EdgeLength> {
    let coords = coordinates(tree, lin, unit);
    tree.edges()
        .map(|(head, dependent)| EdgeLength {
            head,
            dependent,
            unit,
            half_units: coords[head].abs_diff(coords[dependent]),
        })
        .collect()
}

pub fn sum_lengths(tree: &DepTree, lin: &Linearization, unit: Unit) -> Rational {
    let half: u64 = edge_lengths(tree, lin, unit).iter().map(|e| e.half_units).sum();
    from_half_units(half)
}

/// Counts of word-unit dependency lengths.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LengthHistogram {
    counts: BTreeMap<u64, u64>,
    total_edges: u64,
}

impl LengthHistogram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, d: u64) {
        *self.counts.entry(d).or_default() += 1;
        self.total_edges += 1;
    }

    pub fn merge(&mut self, other: &LengthHistogram) {
        for (&d, &c) in &other.counts {
            *self.counts.entry(d).or_default() += c;
        }
        self.total_edges += other.total_edges;
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    pub fn count(&self, d: u64) -> u64 {
        self.counts.get(&d).copied().unwrap_or(0)
    }

    pub fn total_edges(&self) -> u64 {
        self.total_edges
    }

    /// `p(d)`; zero for unobserved lengths and empty histograms.
    pub fn proportion(&self, d: u64) -> Rational {
        if self.total_edges == 0 {
            return Rational::zero();
        }
        Rational::new(BigInt::from(self.count(d)), BigInt::from(self.total_edges))
    }

    pub fn proportions(&self) -> BTreeMap<u64, Rational> {
        self.counts.keys().map(|&d| (d, self.proportion(d))).collect()
    }

    /// CSV with columns `d,count,p`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("d,count,p\n");
        for (&d, &c) in &self.counts {
            writeln!(out, "{},{},{}", d, c, value::to_f64(&self.proportion(d))).unwrap();
        }
        out
    }
}

impl Serialize for LengthHistogram {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.counts.len()))?;
        for (d, c) in &self.counts {
            map.serialize_entry(&d.to_string(), c)?;
        }
        map.end()
    }
}

/// Word-unit histogram over a collection of linearized trees.
pub fn length_histogram<'a, I>(items: I) -> Result<LengthHistogram, MetricsError>
where
    I: IntoIterator<Item = (&'a DepTree, &'a Linearization)>,
{
    let mut histogram = LengthHistogram::new();
    for (tree, lin) in items {
        for e in edge_lengths(tree, lin, Unit::Words) {
            histogram.record(e.half_units / 2);
        }
    }
    if histogram.total_edges() == 0 {
        return Err(MetricsError::EmptyCorpus);
    }
    Ok(histogram)
}

/// Per-sentence cost summary.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CostReport {
    pub n: usize,
    pub unit: Unit,
    #[serde(serialize_with = "value::serialize_rational")]
    pub sum_lengths: Rational,
    /// `(n-1) Σ_d p(d) g(d)`.
    #[serde(rename = "D")]
    pub cost: CostValue,
    /// `Σ_edges g(d_e)`, computed independently of the grouping by length.
    #[serde(skip)]
    pub direct_sum: CostValue,
    /// Word-unit lengths only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub histogram: Option<LengthHistogram>,
}

/// Online memory cost of one linearized sentence.
pub fn cost_d(tree: &DepTree, lin: &Linearization, g: &CostFunction, unit: Unit) -> Result<CostReport, MetricsError> {
    let lengths = edge_lengths(tree, lin, unit);
    let edges = lengths.len() as u64;

    let mut direct_sum = CostValue::zero();
    for e in &lengths {
        direct_sum = direct_sum + g.eval(&e.value())?;
    }

    // Group by length and weight each g(d) by its proportion.
    let mut by_length: BTreeMap<u64, u64> = BTreeMap::new();
    for e in &lengths {
        *by_length.entry(e.half_units).or_default() += 1;
    }
    let mut weighted = CostValue::zero();
    for (&half, &count) in &by_length {
        let p = Rational::new(BigInt::from(count), BigInt::from(edges));
        weighted = weighted + g.eval(&from_half_units(half))?.scale(&p);
    }
    let cost = weighted.scale(&Rational::from_integer(BigInt::from(edges)));
    debug_assert!(!cost.is_exact() || cost == direct_sum);

    let histogram = (unit == Unit::Words).then(|| {
        let mut h = LengthHistogram::new();
        for e in &lengths {
            h.record(e.half_units / 2);
        }
        h
    });
    let half: u64 = lengths.iter().map(|e| e.half_units).sum();
    Ok(CostReport {
        n: tree.len(),
        unit,
        sum_lengths: from_half_units(half),
        cost,
        direct_sum,
        histogram,
    })
}

/// `Σ_edges g3(head, dependent, d)` for a cost that may depend on the
/// tokens it links.
pub fn generalized_cost<F>(tree: &DepTree, lin: &Linearization, unit: Unit, g3: F) -> Result<CostValue, MetricsError>
where
    F: Fn(&Token, &Token, &Rational) -> Result<CostValue, CostError>,
{
    let mut total = CostValue::zero();
    for e in edge_lengths(tree, lin, unit) {
        total = total + g3(tree.token(e.head), tree.token(e.dependent), &e.value())?;
    }
    Ok(total)
}

/// `g3(u, v, d) = w(u, v) · g(d)` with per-edge weights keyed by 1-based
/// `(head, dependent)` token indices; missing pairs weigh 1.
pub fn weighted_cost<'a>(
    g: &'a CostFunction,
    weights: &'a BTreeMap<(usize, usize), Rational>,
) -> impl Fn(&Token, &Token, &Rational) -> Result<CostValue, CostError> + 'a {
    move |u, v, d| {
        let base = g.eval(d)?;
        Ok(match weights.get(&(u.index, v.index)) {
            Some(w) => base.scale(w),
            None => base,
        })
    }
}
