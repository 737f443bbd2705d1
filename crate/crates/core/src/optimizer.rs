//! Minimum linear arrangement solvers for dependency trees.
//!
//! * [`brute_force_mla`] / [`constrained_mla`]: exact search over all
//!   permutations, optionally restricted by precedence and contiguity
//!   constraints. Returns every optimal order.
//! * [`enumerate_projective`]: lazily yields each projective order once.
//! * [`projective_mla`]: direct construction of a minimum projective
//!   arrangement for word lengths with `g(d) = d`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cost::{next_permutation, CostError, CostFunction};
use crate::metrics;
use crate::tree::{DepTree, Linearization, Unit};
use crate::value::{approx_cmp, from_half_units, CostValue, Rational};

/// Largest sentence accepted by the permutation search.
pub const MAX_BRUTE_FORCE_N: usize = 10;
/// Largest sentence accepted by the projective enumerator.
pub const MAX_PROJECTIVE_N: usize = 12;
/// Below this size the permutation search runs on one thread.
const PARALLEL_FROM_N: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OptimizeError {
    #[error("sentence has {n} tokens; exact search is limited to {max}")]
    TooLarge { n: usize, max: usize },
    #[error("no order satisfies the constraints")]
    InfeasibleConstraints,
    #[error("constraint refers to vertex {vertex}, but the sentence has {n} tokens")]
    ConstraintOutOfRange { vertex: usize, n: usize },
    #[error("cost values are too large for exact search")]
    Overflow,
    #[error(transparent)]
    Cost(#[from] CostError),
}

/// Ordering requirements over vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrecedenceConstraint {
    /// `(a, b)`: vertex `a` must precede vertex `b`.
    pub pairs: Vec<(usize, usize)>,
    /// Vertex sets that must occupy consecutive positions.
    pub blocks: Vec<Vec<usize>>,
}

impl PrecedenceConstraint {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn precede(mut self, first: usize, second: usize) -> Self {
        self.pairs.push((first, second));
        self
    }

    /// Every vertex of `first` precedes every vertex of `second`.
    pub fn precede_all(mut self, first: &[usize], second: &[usize]) -> Self {
        for &a in first {
            for &b in second {
                self.pairs.push((a, b));
            }
        }
        self
    }

    pub fn contiguous(mut self, block: Vec<usize>) -> Self {
        self.blocks.push(block);
        self
    }

    /// Contiguous blocks in the given left-to-right order.
    pub fn ordered_blocks(mut self, blocks: Vec<Vec<usize>>) -> Self {
        for pair in blocks.windows(2) {
            self = self.precede_all(&pair[0], &pair[1]);
        }
        for block in blocks {
            self = self.contiguous(block);
        }
        self
    }

    /// Pin the complete order.
    pub fn fixed(sequence: &[usize]) -> Self {
        let mut c = Self::new();
        for pair in sequence.windows(2) {
            c = c.precede(pair[0], pair[1]);
        }
        c
    }

    pub fn is_satisfied_by(&self, lin: &Linearization) -> bool {
        self.pairs.iter().all(|&(a, b)| lin.position(a) < lin.position(b))
            && self.blocks.iter().all(|block| {
                let positions = block.iter().map(|&v| lin.position(v));
                let lo = positions.clone().min().unwrap_or(0);
                let hi = positions.max().unwrap_or(0);
                hi + 1 - lo == block.len()
            })
    }

    fn compile(&self, n: usize) -> Result<Compiled, OptimizeError> {
        let check = |v: usize| {
            if v >= n {
                Err(OptimizeError::ConstraintOutOfRange { vertex: v, n })
            } else {
                Ok(())
            }
        };
        let mut before = vec![0u32; n];
        for &(a, b) in &self.pairs {
            check(a)?;
            check(b)?;
            if a == b {
                return Err(OptimizeError::InfeasibleConstraints);
            }
            before[b] |= 1 << a;
        }
        let mut blocks = Vec::new();
        for block in &self.blocks {
            let mut mask = 0u32;
            for &v in block {
                check(v)?;
                mask |= 1 << v;
            }
            if mask.count_ones() > 1 {
                blocks.push(mask);
            }
        }
        // Kahn's algorithm on the precedence relation.
        let mut placed = 0u32;
        for _ in 0..n {
            match (0..n).find(|&v| placed & (1 << v) == 0 && before[v] & !placed == 0) {
                Some(v) => placed |= 1 << v,
                None => return Err(OptimizeError::InfeasibleConstraints),
            }
        }
        Ok(Compiled { before, blocks })
    }
}

struct Compiled {
    before: Vec<u32>,
    blocks: Vec<u32>,
}

impl Compiled {
    fn unconstrained(n: usize) -> Self {
        Compiled {
            before: vec![0; n],
            blocks: Vec::new(),
        }
    }

    fn can_place(&self, v: usize, placed: u32) -> bool {
        let bit = 1u32 << v;
        if self.before[v] & !placed != 0 {
            return false;
        }
        // A block that is started but unfinished must not be interrupted.
        self.blocks
            .iter()
            .all(|&b| b & bit != 0 || b & placed == 0 || b & !placed == 0)
    }
}

/// Exact optimum with every order attaining it.
#[derive(Clone, Debug, PartialEq)]
pub struct MlaResult {
    pub min_cost: CostValue,
    /// Sorted lexicographically by sequence.
    pub optimal_orders: Vec<Linearization>,
    /// Number of complete candidate orders scored.
    pub searched: u64,
}

impl MlaResult {
    /// Lexicographically smallest optimum.
    pub fn representative(&self) -> &Linearization {
        &self.optimal_orders[0]
    }

    pub fn summary(&self) -> MlaSummary<'_> {
        MlaSummary {
            min_cost: &self.min_cost,
            optimal_order_count: self.optimal_orders.len(),
            representative: self.representative(),
            searched: self.searched,
        }
    }
}

/// JSON form of an [`MlaResult`].
#[derive(Serialize)]
pub struct MlaSummary<'a> {
    pub min_cost: &'a CostValue,
    pub optimal_order_count: usize,
    pub representative: &'a Linearization,
    pub searched: u64,
}

/// Scalar used inside the search loops.
trait Score: Copy + Send + Sync {
    fn zero() -> Self;
    fn plus(self, other: Self) -> Self;
    fn compare(&self, other: &Self) -> Ordering;
}

impl Score for i128 {
    fn zero() -> Self {
        0
    }
    fn plus(self, other: Self) -> Self {
        self + other
    }
    fn compare(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
}

impl Score for f64 {
    fn zero() -> Self {
        0.0
    }
    fn plus(self, other: Self) -> Self {
        self + other
    }
    fn compare(&self, other: &Self) -> Ordering {
        approx_cmp(*self, *other)
    }
}

/// `g` tabulated by distance in half-units; `None` where undefined.
enum ScoreTable {
    /// Values multiplied by `scale` so that they are integers.
    Exact {
        values: Vec<Option<i128>>,
        scale: BigInt,
    },
    Approx(Vec<Option<f64>>),
}

impl ScoreTable {
    fn build(g: &CostFunction, max_half: u64, edges: usize) -> Result<ScoreTable, OptimizeError> {
        let raw: Vec<Option<CostValue>> = (0..=max_half)
            .map(|h| if h == 0 { None } else { g.eval(&from_half_units(h)).ok() })
            .collect();
        if !g.is_exact() {
            return Ok(ScoreTable::Approx(
                raw.iter().map(|v| v.as_ref().map(CostValue::to_f64)).collect(),
            ));
        }
        let scale = raw
            .iter()
            .flatten()
            .filter_map(CostValue::as_exact)
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let limit = i128::MAX / (edges.max(1) as i128 + 1);
        let scale_r = Rational::from_integer(scale.clone());
        let values = raw
            .iter()
            .map(|v| match v {
                None => Ok(None),
                Some(v) => {
                    let scaled = v.as_exact().expect("exact cost function") * &scale_r;
                    match scaled.to_integer().to_i128() {
                        Some(x) if x.abs() <= limit => Ok(Some(x)),
                        _ => Err(OptimizeError::Overflow),
                    }
                }
            })
            .collect::<Result<_, _>>()?;
        Ok(ScoreTable::Exact { values, scale })
    }
}

/// Largest possible distance (half-units) between two vertices.
fn max_half_distance(tree: &DepTree, unit: Unit) -> u64 {
    match unit {
        Unit::Words => 2 * tree.len() as u64,
        Unit::Characters => 2 * tree.tokens().iter().map(|t| t.char_length as u64 + 1).sum::<u64>(),
    }
}

fn undefined_at(g: &CostFunction, half: u64) -> OptimizeError {
    match g.eval(&from_half_units(half)) {
        Err(e) => OptimizeError::Cost(e),
        Ok(_) => unreachable!("tabulated as undefined"),
    }
}

struct Search<'a, S> {
    n: usize,
    unit: Unit,
    lambdas: Vec<u64>,
    neighbors: Vec<Vec<usize>>,
    table: &'a [Option<S>],
    constraint: &'a Compiled,
    prune: bool,
}

struct Best<S> {
    cost: Option<S>,
    orders: Vec<Vec<usize>>,
    searched: u64,
}

impl<S: Score> Best<S> {
    fn new() -> Self {
        Best {
            cost: None,
            orders: Vec::new(),
            searched: 0,
        }
    }

    fn offer(&mut self, cost: S, order: &[usize]) {
        self.searched += 1;
        match self.cost.as_ref().map(|b| cost.compare(b)) {
            Some(Ordering::Greater) => {}
            Some(Ordering::Equal) => self.orders.push(order.to_vec()),
            _ => {
                self.cost = Some(cost);
                self.orders.clear();
                self.orders.push(order.to_vec());
            }
        }
    }

    fn merge(mut self, other: Best<S>) -> Self {
        self.searched += other.searched;
        if let Some(c) = other.cost {
            match self.cost.as_ref().map(|b| c.compare(b)) {
                Some(Ordering::Greater) => {}
                Some(Ordering::Equal) => self.orders.extend(other.orders),
                _ => {
                    self.cost = Some(c);
                    self.orders = other.orders;
                }
            }
        }
        self
    }
}

struct State<S> {
    sequence: Vec<usize>,
    coords: Vec<u64>,
    placed: u32,
    next_start: u64,
    cost: S,
}

impl<S: Score> Search<'_, S> {
    /// Place `v` next; returns the added cost or the undefined distance.
    fn place(&self, state: &mut State<S>, v: usize) -> Result<S, u64> {
        let coord = match self.unit {
            Unit::Words => 2 * state.sequence.len() as u64,
            Unit::Characters => {
                let c = 2 * state.next_start + self.lambdas[v] - 1;
                state.next_start += self.lambdas[v] + 1;
                c
            }
        };
        state.coords[v] = coord;
        let mut added = S::zero();
        for &u in &self.neighbors[v] {
            if state.placed & (1 << u) != 0 {
                let half = state.coords[u].abs_diff(coord);
                added = added.plus(self.table[half as usize].ok_or(half)?);
            }
        }
        state.placed |= 1 << v;
        state.sequence.push(v);
        Ok(added)
    }

    fn unplace(&self, state: &mut State<S>, v: usize) {
        state.sequence.pop();
        state.placed &= !(1 << v);
        if self.unit == Unit::Characters {
            state.next_start -= self.lambdas[v] + 1;
        }
    }

    fn dfs(&self, state: &mut State<S>, best: &mut Best<S>) -> Result<(), u64> {
        if state.sequence.len() == self.n {
            best.offer(state.cost, &state.sequence);
            return Ok(());
        }
        if self.prune {
            if let Some(b) = &best.cost {
                if state.cost.compare(b) == Ordering::Greater {
                    return Ok(());
                }
            }
        }
        for v in 0..self.n {
            if state.placed & (1 << v) != 0 || !self.constraint.can_place(v, state.placed) {
                continue;
            }
            let saved = state.cost;
            let added = self.place(state, v)?;
            state.cost = saved.plus(added);
            let result = self.dfs(state, best);
            state.cost = saved;
            self.unplace(state, v);
            result?;
        }
        Ok(())
    }

    fn run(&self) -> Result<Best<S>, u64> {
        let branch = |first: usize| -> Result<Best<S>, u64> {
            let mut best = Best::new();
            if !self.constraint.can_place(first, 0) {
                return Ok(best);
            }
            let mut state = State {
                sequence: Vec::with_capacity(self.n),
                coords: vec![0; self.n],
                placed: 0,
                next_start: 1,
                cost: S::zero(),
            };
            let added = self.place(&mut state, first)?;
            state.cost = added;
            self.dfs(&mut state, &mut best)?;
            Ok(best)
        };
        let branches: Vec<Result<Best<S>, u64>> = if self.n >= PARALLEL_FROM_N {
            (0..self.n).into_par_iter().map(branch).collect()
        } else {
            (0..self.n).map(branch).collect()
        };
        let mut merged = Best::new();
        for b in branches {
            merged = merged.merge(b?);
        }
        Ok(merged)
    }
}

fn finish_result<S: Score>(best: Best<S>, to_value: impl Fn(S) -> CostValue) -> Result<MlaResult, OptimizeError> {
    let cost = best.cost.ok_or(OptimizeError::InfeasibleConstraints)?;
    let mut optimal_orders: Vec<Linearization> = best
        .orders
        .into_iter()
        .map(|seq| Linearization::from_sequence(seq).expect("search yields permutations"))
        .collect();
    optimal_orders.sort();
    optimal_orders.dedup();
    Ok(MlaResult {
        min_cost: to_value(cost),
        optimal_orders,
        searched: best.searched,
    })
}

fn exact_value(scale: &BigInt) -> impl Fn(i128) -> CostValue + '_ {
    move |x| CostValue::Exact(Rational::new(BigInt::from(x), scale.clone()))
}

fn search(tree: &DepTree, unit: Unit, g: &CostFunction, constraint: &Compiled) -> Result<MlaResult, OptimizeError> {
    let n = tree.len();
    let table = ScoreTable::build(g, max_half_distance(tree, unit), tree.edge_count())?;
    let lambdas = tree.tokens().iter().map(|t| t.char_length as u64).collect::<Vec<_>>();
    let neighbors = (0..n).map(|v| tree.neighbors(v).collect()).collect::<Vec<_>>();
    match &table {
        ScoreTable::Exact { values, scale } => {
            let s = Search {
                n,
                unit,
                lambdas,
                neighbors,
                table: values,
                constraint,
                prune: g.is_nonnegative(),
            };
            let best = s.run().map_err(|h| undefined_at(g, h))?;
            finish_result(best, exact_value(scale))
        }
        ScoreTable::Approx(values) => {
            let s = Search {
                n,
                unit,
                lambdas,
                neighbors,
                table: values,
                constraint,
                prune: g.is_nonnegative(),
            };
            let best = s.run().map_err(|h| undefined_at(g, h))?;
            finish_result(best, CostValue::Approx)
        }
    }
}

/// Exact minimum over all `n!` orders (optionally constrained).
pub fn brute_force_mla(
    tree: &DepTree,
    unit: Unit,
    g: &CostFunction,
    constraint: Option<&PrecedenceConstraint>,
) -> Result<MlaResult, OptimizeError> {
    let n = tree.len();
    if n > MAX_BRUTE_FORCE_N {
        return Err(OptimizeError::TooLarge {
            n,
            max: MAX_BRUTE_FORCE_N,
        });
    }
    let compiled = match constraint {
        Some(c) => c.compile(n)?,
        None => Compiled::unconstrained(n),
    };
    search(tree, unit, g, &compiled)
}

/// Exact minimum over the orders satisfying `constraint`.
pub fn constrained_mla(
    tree: &DepTree,
    constraint: &PrecedenceConstraint,
    unit: Unit,
    g: &CostFunction,
) -> Result<MlaResult, OptimizeError> {
    brute_force_mla(tree, unit, g, Some(constraint))
}

/// Number of orders of `n` vertices satisfying `constraint`.
pub fn count_feasible(n: usize, constraint: &PrecedenceConstraint) -> Result<u64, OptimizeError> {
    if n > MAX_BRUTE_FORCE_N {
        return Err(OptimizeError::TooLarge {
            n,
            max: MAX_BRUTE_FORCE_N,
        });
    }
    let compiled = constraint.compile(n)?;
    fn count(c: &Compiled, n: usize, placed: u32, depth: usize) -> u64 {
        if depth == n {
            return 1;
        }
        (0..n)
            .filter(|&v| placed & (1 << v) == 0 && c.can_place(v, placed))
            .map(|v| count(c, n, placed | (1 << v), depth + 1))
            .sum()
    }
    Ok(count(&compiled, n, 0, 0))
}

/// Lazy enumeration of projective orders.
///
/// Each vertex keeps a permutation of itself and its dependents; an order
/// is the recursive flattening of those permutations with every
/// dependent expanded to its own block. The permutations advance like an
/// odometer, so each projective order appears exactly once.
pub struct ProjectiveOrders<'a> {
    tree: &'a DepTree,
    arrangements: Vec<Vec<usize>>,
    done: bool,
}

impl ProjectiveOrders<'_> {
    fn current_sequence(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.tree.len());
        let mut stack = vec![self.tree.root()];
        let mut expanded = vec![false; self.tree.len()];
        while let Some(v) = stack.pop() {
            if expanded[v] {
                out.push(v);
                continue;
            }
            expanded[v] = true;
            // `v` comes back already expanded and is emitted; dependents expand.
            stack.extend(self.arrangements[v].iter().rev());
        }
        out
    }
}

impl Iterator for ProjectiveOrders<'_> {
    type Item = Linearization;

    fn next(&mut self) -> Option<Linearization> {
        if self.done {
            return None;
        }
        let current = Linearization::from_sequence(self.current_sequence()).expect("flattening is a permutation");
        self.done = !self.arrangements.iter_mut().any(|a| next_permutation(a));
        Some(current)
    }
}

/// Every projective order of `tree`, each exactly once.
pub fn enumerate_projective(tree: &DepTree) -> Result<ProjectiveOrders<'_>, OptimizeError> {
    if tree.len() > MAX_PROJECTIVE_N {
        return Err(OptimizeError::TooLarge {
            n: tree.len(),
            max: MAX_PROJECTIVE_N,
        });
    }
    let arrangements = (0..tree.len())
        .map(|v| {
            let mut items: Vec<usize> = tree.children(v).to_vec();
            items.push(v);
            items.sort_unstable();
            items
        })
        .collect();
    Ok(ProjectiveOrders {
        tree,
        arrangements,
        done: false,
    })
}

/// Number of projective orders: the product of `(k_v + 1)!` over vertices.
pub fn projective_order_count(tree: &DepTree) -> u128 {
    (0..tree.len())
        .map(|v| (1..=tree.children(v).len() as u128 + 1).product::<u128>())
        .product()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

/// Minimum projective arrangement for word lengths and `g(d) = d`.
///
/// Dependents of each vertex are placed by decreasing subtree size,
/// alternating sides, so the smallest blocks end up next to the head.
/// Below the root, the first (largest) block goes to the side facing
/// away from the vertex's own head, since the edge to the head already
/// spans everything on the near side.
pub fn projective_mla(tree: &DepTree) -> MlaResult {
    let sizes = tree.subtree_sizes();
    let mut sequence = Vec::with_capacity(tree.len());
    arrange(tree, &sizes, tree.root(), None, &mut sequence);
    let lin = Linearization::from_sequence(sequence).expect("arrangement is a permutation");
    let cost = metrics::sum_lengths(tree, &lin, Unit::Words);
    MlaResult {
        min_cost: CostValue::Exact(cost),
        optimal_orders: vec![lin],
        searched: 1,
    }
}

fn arrange(tree: &DepTree, sizes: &[usize], v: usize, head_side: Option<Side>, out: &mut Vec<usize>) {
    let mut children = tree.children(v).to_vec();
    children.sort_by(|&a, &b| sizes[b].cmp(&sizes[a]).then(a.cmp(&b)));
    let mut side = match head_side {
        Some(Side::Left) => Side::Right,
        _ => Side::Left,
    };
    // Both lists run from the outside in.
    let mut left = Vec::new();
    let mut right = Vec::new();
    for c in children {
        match side {
            Side::Left => left.push(c),
            Side::Right => right.push(c),
        }
        side = if side == Side::Left { Side::Right } else { Side::Left };
    }
    for &c in &left {
        arrange(tree, sizes, c, Some(Side::Right), out);
    }
    out.push(v);
    for &c in right.iter().rev() {
        arrange(tree, sizes, c, Some(Side::Left), out);
    }
}

/// Minimum over all projective orders, with the full optimal set.
pub fn projective_enumeration_mla(tree: &DepTree, unit: Unit, g: &CostFunction) -> Result<MlaResult, OptimizeError> {
    let orders = enumerate_projective(tree)?;
    let table = ScoreTable::build(g, max_half_distance(tree, unit), tree.edge_count())?;
    let edges: Vec<(usize, usize)> = tree.edges().collect();
    fn scan<S: Score>(
        orders: ProjectiveOrders<'_>,
        tree: &DepTree,
        unit: Unit,
        edges: &[(usize, usize)],
        table: &[Option<S>],
    ) -> Result<Best<S>, u64> {
        let mut best = Best::new();
        for lin in orders {
            let coords = metrics::coordinates(tree, &lin, unit);
            let mut cost = S::zero();
            for &(h, d) in edges {
                let half = coords[h].abs_diff(coords[d]);
                cost = cost.plus(table[half as usize].ok_or(half)?);
            }
            best.offer(cost, lin.sequence());
        }
        Ok(best)
    }
    match &table {
        ScoreTable::Exact { values, scale } => {
            let best = scan(orders, tree, unit, &edges, values).map_err(|h| undefined_at(g, h))?;
            finish_result(best, exact_value(scale))
        }
        ScoreTable::Approx(values) => {
            let best = scan(orders, tree, unit, &edges, values).map_err(|h| undefined_at(g, h))?;
            finish_result(best, CostValue::Approx)
        }
    }
}

/// Projective optimum for any unit and cost: the direct construction for
/// words with `g(d) = d`, enumeration otherwise.
pub fn projective_mla_with(tree: &DepTree, unit: Unit, g: &CostFunction) -> Result<MlaResult, OptimizeError> {
    if unit == Unit::Words && g.is_identity() {
        Ok(projective_mla(tree))
    } else {
        projective_enumeration_mla(tree, unit, g)
    }
}

/// Cost of a given order, for re-scoring optima.
pub fn order_cost(
    tree: &DepTree,
    lin: &Linearization,
    unit: Unit,
    g: &CostFunction,
) -> Result<CostValue, OptimizeError> {
    Ok(metrics::cost_d(tree, lin, g, unit)
        .map_err(|e| match e {
            metrics::MetricsError::Cost(c) => OptimizeError::Cost(c),
            other => unreachable!("{other}"),
        })?
        .direct_sum)
}

/// `observed / optimal`, with `0 / 0` read as 1.
pub fn gap_ratio(observed: &CostValue, optimal: &CostValue) -> CostValue {
    match (observed, optimal) {
        (CostValue::Exact(o), CostValue::Exact(m)) => {
            if num_traits::Zero::is_zero(m) {
                CostValue::Exact(Rational::one())
            } else {
                CostValue::Exact(o / m)
            }
        }
        _ => {
            let (o, m) = (observed.to_f64(), optimal.to_f64());
            CostValue::Approx(if m == 0.0 { 1.0 } else { o / m })
        }
    }
}
