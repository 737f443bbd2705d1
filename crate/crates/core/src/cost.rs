//! Dependency cost functions `g(d)` and the rearrangement pairing of
//! length proportions with costs.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::value::{self, to_f64, CostValue, Rational};

/// Largest multiset size accepted by the exhaustive pairing check.
pub const MAX_EXHAUSTIVE_PAIRING: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CostError {
    #[error("cost table is not strictly increasing: g({d}) = {current} after g({prev_d}) = {previous}")]
    NonMonotone {
        prev_d: u64,
        d: u64,
        previous: String,
        current: String,
    },
    #[error("cost table must define g(d) for every d in 1..={domain_max}; g({missing}) is missing")]
    TableGap { domain_max: u64, missing: u64 },
    #[error("cost table is empty")]
    EmptyTable,
    #[error("power exponent must be positive and finite, got {0}")]
    BadExponent(f64),
    #[error("cost function {function} is undefined at d = {d}")]
    Domain { function: String, d: String },
    #[error("unrecognised cost function spec {0:?}")]
    BadSpec(String),
    #[error("cannot read cost table {path}: {message}")]
    Table { path: String, message: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PairingError {
    #[error("multisets differ in size: {p} proportions, {g} costs")]
    SizeMismatch { p: usize, g: usize },
    #[error("multisets must be non-empty")]
    Empty,
    #[error("proportions must be non-negative")]
    NegativeProportion,
    #[error("exhaustive check limited to {max} elements, got {got}")]
    TooLarge { max: usize, got: usize },
}

/// Shape of a cost function.
#[derive(Clone, Debug, PartialEq)]
pub enum CostKind {
    Identity,
    /// `d^alpha`; exact for integer exponents.
    Power(f64),
    /// `ln(1 + d)`.
    Logarithmic,
    /// Explicit values for `d = 1..=domain_max`.
    Table(BTreeMap<u64, Rational>),
}

/// Textual description of a cost function, as accepted on the command line.
#[derive(Clone, Debug, PartialEq)]
pub enum CostSpec {
    Identity,
    Power(f64),
    Log,
    Table(Vec<(u64, Rational)>),
}

impl CostSpec {
    /// Parse `identity`, `power:α`, `log` or `table:PATH` (CSV of `d,cost`).
    pub fn parse(text: &str) -> Result<CostSpec, CostError> {
        let text = text.trim();
        match text {
            "identity" => return Ok(CostSpec::Identity),
            "log" => return Ok(CostSpec::Log),
            _ => {}
        }
        if let Some(alpha) = text.strip_prefix("power:") {
            let alpha: f64 = alpha.trim().parse().map_err(|_| CostError::BadSpec(text.to_string()))?;
            return Ok(CostSpec::Power(alpha));
        }
        if let Some(path) = text.strip_prefix("table:") {
            return Ok(CostSpec::Table(read_table(Path::new(path))?));
        }
        Err(CostError::BadSpec(text.to_string()))
    }
}

/// Read a `d,cost` CSV. A header row is allowed.
pub fn read_table(path: &Path) -> Result<Vec<(u64, Rational)>, CostError> {
    let table_err = |message: String| CostError::Table {
        path: path.display().to_string(),
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| table_err(e.to_string()))?;
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| table_err(e.to_string()))?;
        if record.len() != 2 {
            return Err(table_err(format!("row {}: expected 2 columns", i + 1)));
        }
        let d = record[0].parse::<u64>();
        let cost = value::parse_rational(&record[1]);
        match (d, cost) {
            (Ok(d), Some(cost)) => rows.push((d, cost)),
            _ if i == 0 => continue,
            _ => {
                return Err(table_err(format!(
                    "row {}: expected integer d and rational cost",
                    i + 1
                )))
            }
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CostFunction {
    kind: CostKind,
    domain_max: Option<u64>,
    monotone: bool,
}

impl CostFunction {
    pub fn identity() -> Self {
        CostFunction {
            kind: CostKind::Identity,
            domain_max: None,
            monotone: true,
        }
    }

    pub fn power(alpha: f64) -> Result<Self, CostError> {
        make_cost_function(CostSpec::Power(alpha), None, false)
    }

    pub fn logarithmic() -> Self {
        CostFunction {
            kind: CostKind::Logarithmic,
            domain_max: None,
            monotone: true,
        }
    }

    pub fn table(values: Vec<(u64, Rational)>, allow_nonmonotone: bool) -> Result<Self, CostError> {
        make_cost_function(CostSpec::Table(values), None, allow_nonmonotone)
    }

    pub fn kind(&self) -> &CostKind {
        &self.kind
    }

    pub fn domain_max(&self) -> Option<u64> {
        self.domain_max
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.kind, CostKind::Identity) && self.domain_max.is_none()
    }

    /// Strictly increasing over its whole domain.
    pub fn is_monotone(&self) -> bool {
        self.monotone
    }

    /// Never negative, so partial sums bound totals from below.
    pub fn is_nonnegative(&self) -> bool {
        match &self.kind {
            CostKind::Table(values) => values.values().all(|v| !v.is_negative()),
            _ => true,
        }
    }

    /// True when every value is an exact rational.
    pub fn is_exact(&self) -> bool {
        match &self.kind {
            CostKind::Identity | CostKind::Table(_) => true,
            CostKind::Power(alpha) => integer_exponent(*alpha).is_some(),
            CostKind::Logarithmic => false,
        }
    }

    /// Evaluate `g(d)`.
    pub fn eval(&self, d: &Rational) -> Result<CostValue, CostError> {
        let domain = || CostError::Domain {
            function: self.to_string(),
            d: value::fmt_decimal(d),
        };
        if d.is_negative() {
            return Err(domain());
        }
        if let Some(max) = self.domain_max {
            if d > &Rational::from_integer(BigInt::from(max)) {
                return Err(domain());
            }
        }
        match &self.kind {
            CostKind::Identity => Ok(CostValue::Exact(d.clone())),
            CostKind::Power(alpha) => match integer_exponent(*alpha) {
                Some(k) => Ok(CostValue::Exact(num_traits::pow(d.clone(), k as usize))),
                None => Ok(CostValue::Approx(to_f64(d).powf(*alpha))),
            },
            CostKind::Logarithmic => Ok(CostValue::Approx(to_f64(d).ln_1p())),
            CostKind::Table(values) => {
                if !d.is_integer() {
                    return Err(domain());
                }
                let key = d.to_integer().to_u64().ok_or_else(domain)?;
                values.get(&key).cloned().map(CostValue::Exact).ok_or_else(domain)
            }
        }
    }

    pub fn eval_int(&self, d: u64) -> Result<CostValue, CostError> {
        self.eval(&Rational::from_integer(BigInt::from(d)))
    }
}

fn integer_exponent(alpha: f64) -> Option<u32> {
    (alpha.fract() == 0.0 && (1.0..=64.0).contains(&alpha)).then_some(alpha as u32)
}

impl fmt::Display for CostFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            CostKind::Identity => f.write_str("identity"),
            CostKind::Power(alpha) => write!(f, "power:{}", alpha),
            CostKind::Logarithmic => f.write_str("log"),
            CostKind::Table(values) => write!(f, "table[{}]", values.len()),
        }
    }
}

/// Validate a cost spec. Tables must cover `1..=max d` and be strictly
/// increasing unless `allow_nonmonotone` is set.
pub fn make_cost_function(
    spec: CostSpec,
    domain_max: Option<u64>,
    allow_nonmonotone: bool,
) -> Result<CostFunction, CostError> {
    let (kind, domain_max) = match spec {
        CostSpec::Identity => (CostKind::Identity, domain_max),
        CostSpec::Power(alpha) => {
            if !(alpha.is_finite() && alpha > 0.0) {
                return Err(CostError::BadExponent(alpha));
            }
            (CostKind::Power(alpha), domain_max)
        }
        CostSpec::Log => (CostKind::Logarithmic, domain_max),
        CostSpec::Table(rows) => {
            let values: BTreeMap<u64, Rational> = rows.into_iter().filter(|(d, _)| *d > 0).collect();
            let table_max = *values.keys().next_back().ok_or(CostError::EmptyTable)?;
            let max = domain_max.map_or(table_max, |m| m.min(table_max));
            if let Some(missing) = (1..=max).find(|d| !values.contains_key(d)) {
                return Err(CostError::TableGap {
                    domain_max: max,
                    missing,
                });
            }
            (CostKind::Table(values), Some(max))
        }
    };
    let mut function = CostFunction {
        kind,
        domain_max,
        monotone: true,
    };
    if let Some(max) = domain_max {
        let mut previous: Option<(u64, CostValue)> = None;
        for d in 1..=max {
            let current = function.eval_int(d)?;
            if let Some((prev_d, prev)) = &previous {
                if current.compare(prev) != std::cmp::Ordering::Greater {
                    if !allow_nonmonotone {
                        return Err(CostError::NonMonotone {
                            prev_d: *prev_d,
                            d,
                            previous: prev.display(),
                            current: current.display(),
                        });
                    }
                    function.monotone = false;
                }
            }
            previous = Some((d, current));
        }
    }
    Ok(function)
}

/// Minimum of `Σ p·g` over bijections between two multisets.
#[derive(Clone, Debug, PartialEq)]
pub struct PairingResult {
    /// `assignment[i]` is the index in `g_values` paired with `p_values[i]`.
    pub assignment: Vec<usize>,
    pub total: Rational,
}

impl PairingResult {
    /// Cost paired with each proportion, in proportion order.
    pub fn paired_costs(&self, g_values: &[Rational]) -> Vec<Rational> {
        self.assignment.iter().map(|&j| g_values[j].clone()).collect()
    }
}

fn check_sizes(p_values: &[Rational], g_values: &[Rational]) -> Result<(), PairingError> {
    if p_values.len() != g_values.len() {
        return Err(PairingError::SizeMismatch {
            p: p_values.len(),
            g: g_values.len(),
        });
    }
    if p_values.is_empty() {
        return Err(PairingError::Empty);
    }
    if p_values.iter().any(|p| p.is_negative()) {
        return Err(PairingError::NegativeProportion);
    }
    Ok(())
}

fn pairing_total(p_values: &[Rational], g_values: &[Rational], assignment: &[usize]) -> Rational {
    p_values
        .iter()
        .zip(assignment)
        .map(|(p, &j)| p * &g_values[j])
        .fold(Rational::zero(), |acc, x| acc + x)
}

/// Pair the largest proportion with the smallest cost, the second largest
/// with the second smallest, and so on. Ties keep input order.
pub fn optimal_pairing(p_values: &[Rational], g_values: &[Rational]) -> Result<PairingResult, PairingError> {
    check_sizes(p_values, g_values)?;
    let mut p_order: Vec<usize> = (0..p_values.len()).collect();
    p_order.sort_by(|&a, &b| p_values[b].cmp(&p_values[a]));
    let mut g_order: Vec<usize> = (0..g_values.len()).collect();
    g_order.sort_by(|&a, &b| g_values[a].cmp(&g_values[b]));
    let mut assignment = vec![0; p_values.len()];
    for (&i, &j) in p_order.iter().zip(&g_order) {
        assignment[i] = j;
    }
    let total = pairing_total(p_values, g_values, &assignment);
    Ok(PairingResult { assignment, total })
}

/// Minimum over all `m!` bijections, by enumeration.
pub fn exhaustive_pairing_minimum(p_values: &[Rational], g_values: &[Rational]) -> Result<Rational, PairingError> {
    check_sizes(p_values, g_values)?;
    let m = p_values.len();
    if m > MAX_EXHAUSTIVE_PAIRING {
        return Err(PairingError::TooLarge {
            max: MAX_EXHAUSTIVE_PAIRING,
            got: m,
        });
    }
    if let (Some((p_int, p_scale)), Some((g_int, g_scale))) = (scaled_integers(p_values), scaled_integers(g_values)) {
        // Each product is below 2^62, so eight of them fit in an i128.
        let mut perm: Vec<usize> = (0..m).collect();
        let total = |perm: &[usize]| -> i128 { perm.iter().enumerate().map(|(i, &j)| p_int[i] * g_int[j]).sum() };
        let mut best = total(&perm);
        while next_permutation(&mut perm) {
            best = best.min(total(&perm));
        }
        return Ok(Rational::new(BigInt::from(best), p_scale * g_scale));
    }
    let mut perm: Vec<usize> = (0..m).collect();
    let mut best = pairing_total(p_values, g_values, &perm);
    while next_permutation(&mut perm) {
        let total = pairing_total(p_values, g_values, &perm);
        if total < best {
            best = total;
        }
    }
    Ok(best)
}

/// Values times the LCM of their denominators, when every scaled value
/// fits in 31 bits.
fn scaled_integers(values: &[Rational]) -> Option<(Vec<i128>, BigInt)> {
    let scale = values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let scaled = values
        .iter()
        .map(|v| {
            let x = (v * Rational::from_integer(scale.clone())).to_integer().to_i128()?;
            (x.abs() < 1 << 31).then_some(x)
        })
        .collect::<Option<Vec<i128>>>()?;
    Some((scaled, scale))
}

/// True when the sorted pairing attains the exhaustive minimum.
pub fn verify_pairing_optimal(p_values: &[Rational], g_values: &[Rational]) -> Result<bool, PairingError> {
    let minimum = exhaustive_pairing_minimum(p_values, g_values)?;
    Ok(optimal_pairing(p_values, g_values)?.total == minimum)
}

/// Lexicographic successor in place; returns false (and leaves the slice
/// sorted ascending) after the last permutation.
pub fn next_permutation<T: Ord>(items: &mut [T]) -> bool {
    if items.len() < 2 {
        return false;
    }
    let mut i = items.len() - 1;
    while i > 0 && items[i - 1] >= items[i] {
        i -= 1;
    }
    if i == 0 {
        items.reverse();
        return false;
    }
    let mut j = items.len() - 1;
    while items[j] <= items[i - 1] {
        j -= 1;
    }
    items.swap(i - 1, j);
    items[i..].reverse();
    true
}
