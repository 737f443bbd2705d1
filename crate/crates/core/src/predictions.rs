//! Word-order placement predictions of dependency length minimization,
//! each checked against the exact optimizer.
//!
//! A [`Scenario`] is a tree, an ordering constraint and an
//! [`Expectation`] about the set of optimal orders. Checking a scenario
//! runs the constrained brute-force search and tests the expectation on
//! every optimum, so a single tied optimum that violates it is enough to
//! make the prediction fail.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cost::CostFunction;
use crate::optimizer::{self, MlaResult, OptimizeError, PrecedenceConstraint};
use crate::tree::{DepTree, Linearization, Unit};
use crate::value::CostValue;

pub const MAX_STAR_DEPENDENTS: usize = 7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PredictionError {
    #[error("star scenarios take 1..={max} dependents, got {0}", max = MAX_STAR_DEPENDENTS)]
    Range(usize),
    #[error("argument scenarios take 1 or 2 dependents per argument, got {0}")]
    ArgumentSize(usize),
    #[error(transparent)]
    Optimize(#[from] OptimizeError),
}

/// What must be true of every optimal order.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Expectation {
    /// `head` sits at a median position (0-based positions given).
    HeadAtMedian {
        head: usize,
        positions: Vec<usize>,
    },
    /// Every feasible order is optimal.
    AllOrdersEqual,
    /// Each listed head precedes all of its dependents.
    HeadsPrecedeDependents {
        heads: Vec<usize>,
    },
    /// Each listed head follows all of its dependents.
    HeadsFollowDependents {
        heads: Vec<usize>,
    },
    ImmediatelyAfter {
        token: usize,
        anchor: usize,
    },
    ImmediatelyBefore {
        token: usize,
        anchor: usize,
    },
    /// Nothing asserted; the optimum is only described.
    ReportOnly,
}

impl Expectation {
    /// Whether an individual order satisfies the expectation. Set-level
    /// expectations are always satisfied here.
    pub fn accepts(&self, tree: &DepTree, lin: &Linearization) -> bool {
        match self {
            Expectation::HeadAtMedian { head, positions } => positions.contains(&lin.position(*head)),
            Expectation::HeadsPrecedeDependents { heads } => heads
                .iter()
                .all(|&h| tree.children(h).iter().all(|&d| lin.position(h) < lin.position(d))),
            Expectation::HeadsFollowDependents { heads } => heads
                .iter()
                .all(|&h| tree.children(h).iter().all(|&d| lin.position(h) > lin.position(d))),
            Expectation::ImmediatelyAfter { token, anchor } => lin.position(*token) == lin.position(*anchor) + 1,
            Expectation::ImmediatelyBefore { token, anchor } => lin.position(*token) + 1 == lin.position(*anchor),
            Expectation::AllOrdersEqual | Expectation::ReportOnly => true,
        }
    }
}

/// One conditional prediction.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub tree: DepTree,
    pub constraint: PrecedenceConstraint,
    pub unit: Unit,
    pub g: CostFunction,
    pub expectation: Expectation,
}

impl Scenario {
    pub fn solve(&self) -> Result<MlaResult, OptimizeError> {
        optimizer::constrained_mla(&self.tree, &self.constraint, self.unit, &self.g)
    }

    /// Solve and test the expectation on the full optimal set.
    pub fn check(&self) -> Result<PredictionReport, PredictionError> {
        let witness = self.solve()?;
        let (verdict, counterexample) = match &self.expectation {
            Expectation::ReportOnly => (Verdict::Reported, None),
            Expectation::AllOrdersEqual => {
                let feasible = optimizer::count_feasible(self.tree.len(), &self.constraint)?;
                let holds = witness.optimal_orders.len() as u64 == feasible;
                (Verdict::from_bool(holds), None)
            }
            expectation => {
                let counterexample = witness
                    .optimal_orders
                    .iter()
                    .find(|o| !expectation.accepts(&self.tree, o))
                    .cloned();
                (Verdict::from_bool(counterexample.is_none()), counterexample)
            }
        };
        Ok(PredictionReport {
            scenario: self.name.clone(),
            verdict,
            witness: Some(witness),
            counterexample,
            notes: Vec::new(),
            setup: Some(self.clone()),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    /// Not asserted; informational only.
    Reported,
    /// The comparison is empty for this configuration.
    Vacuous,
}

impl Verdict {
    fn from_bool(holds: bool) -> Self {
        if holds {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "PASS",
            Verdict::Fails => "FAIL",
            Verdict::Reported => "INFO",
            Verdict::Vacuous => "VACUOUS",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PredictionReport {
    pub scenario: String,
    pub verdict: Verdict,
    pub witness: Option<MlaResult>,
    /// An optimum violating the expectation, when there is one.
    pub counterexample: Option<Linearization>,
    pub notes: Vec<String>,
    /// The scenario that produced the witness, for re-verification.
    pub setup: Option<Scenario>,
}

impl PredictionReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    /// Asserted reports count towards pass/fail; reported and vacuous ones do not.
    pub fn asserted(&self) -> bool {
        matches!(self.verdict, Verdict::Holds | Verdict::Fails)
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

#[derive(Serialize)]
struct ReportJson<'a> {
    scenario: &'a str,
    verdict: Verdict,
    holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<optimizer::MlaSummary<'a>>,
    counterexample: &'a Option<Linearization>,
    notes: &'a [String],
}

impl Serialize for PredictionReport {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ReportJson {
            scenario: &self.scenario,
            verdict: self.verdict,
            holds: self.holds(),
            witness: self.witness.as_ref().map(MlaResult::summary),
            counterexample: &self.counterexample,
            notes: &self.notes,
        }
        .serialize(serializer)
    }
}

/// Star of one head and `k` dependents (head is vertex 0).
pub fn star(k: usize) -> DepTree {
    let heads: Vec<usize> = (0..=k).map(|i| if i == 0 { 0 } else { 1 }).collect();
    DepTree::synthetic(&heads).expect("star is a tree")
}

/// Central head placement for `k >= 2` dependents; indifference for one.
pub fn check_star_placement(k: usize, g: &CostFunction) -> Result<PredictionReport, PredictionError> {
    if !(1..=MAX_STAR_DEPENDENTS).contains(&k) {
        return Err(PredictionError::Range(k));
    }
    let tree = star(k);
    // 1-based medians ⌊(k+2)/2⌋ and ⌈(k+2)/2⌉ among k+1 tokens.
    let mut positions = vec![(k + 2) / 2 - 1, (k + 3) / 2 - 1];
    positions.dedup();
    let expectation = if k == 1 {
        Expectation::AllOrdersEqual
    } else {
        Expectation::HeadAtMedian { head: 0, positions }
    };
    let scenario = Scenario {
        name: format!("star placement (k={k})"),
        tree: tree.clone(),
        constraint: PrecedenceConstraint::new(),
        unit: Unit::Words,
        g: g.clone(),
        expectation,
    };
    let report = scenario.check()?;
    let head_first = Linearization::identity(k + 1);
    let peripheral = optimizer::order_cost(&tree, &head_first, Unit::Words, g)?;
    let optimum = report.witness.as_ref().expect("solved").min_cost.clone();
    Ok(report.with_note(format!("optimal cost {optimum}, head-peripheral cost {peripheral}")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerbPosition {
    Initial,
    Medial,
    Final,
}

impl fmt::Display for VerbPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerbPosition::Initial => "verb-initial",
            VerbPosition::Medial => "verb-medial",
            VerbPosition::Final => "verb-final",
        })
    }
}

/// Verb (vertex 0) with two argument heads, each carrying `m` leaf
/// dependents. Returns the tree and the two argument blocks, head first.
pub fn verb_with_arguments(m: usize) -> (DepTree, [Vec<usize>; 2]) {
    let n1 = 1;
    let n2 = 2 + m;
    let mut heads = vec![0, 1];
    heads.extend(std::iter::repeat_n(n1 + 1, m));
    heads.push(1);
    heads.extend(std::iter::repeat_n(n2 + 1, m));
    let tree = DepTree::synthetic(&heads).expect("argument tree is valid");
    let block1 = (n1..n1 + 1 + m).collect();
    let block2 = (n2..n2 + 1 + m).collect();
    (tree, [block1, block2])
}

/// Where an argument head sits relative to its own dependents.
fn direction(tree: &DepTree, lin: &Linearization, head: usize) -> &'static str {
    let p = lin.position(head);
    let deps = tree.children(head);
    if deps.iter().all(|&d| lin.position(d) > p) {
        "head-first"
    } else if deps.iter().all(|&d| lin.position(d) < p) {
        "head-last"
    } else {
        "head-internal"
    }
}

fn direction_summary(tree: &DepTree, optima: &[Linearization], head: usize, label: &str) -> String {
    let mut counts: Vec<(&str, usize)> = Vec::new();
    for o in optima {
        let d = direction(tree, o, head);
        match counts.iter_mut().find(|(k, _)| *k == d) {
            Some((_, c)) => *c += 1,
            None => counts.push((d, 1)),
        }
    }
    let parts: Vec<String> = counts.iter().map(|(d, c)| format!("{d} {c}")).collect();
    format!("{label}: {} of {} optima", parts.join(", "), optima.len())
}

/// Head direction inside the verb's arguments for a fixed verb position.
///
/// Arguments are contiguous blocks. Verb-initial expects head-first
/// arguments, verb-final head-last; verb-medial (first argument before the
/// verb, second after) is only reported.
pub fn check_verb_argument_branching(
    position: VerbPosition,
    m: usize,
    g: &CostFunction,
) -> Result<PredictionReport, PredictionError> {
    if !(1..=2).contains(&m) {
        return Err(PredictionError::ArgumentSize(m));
    }
    let (tree, [arg1, arg2]) = verb_with_arguments(m);
    let others: Vec<usize> = (1..tree.len()).collect();
    let heads = vec![arg1[0], arg2[0]];
    let base = PrecedenceConstraint::new()
        .contiguous(arg1.clone())
        .contiguous(arg2.clone());
    let (constraint, expectation) = match position {
        VerbPosition::Initial => (
            base.precede_all(&[0], &others),
            Expectation::HeadsPrecedeDependents { heads },
        ),
        VerbPosition::Final => (
            base.precede_all(&others, &[0]),
            Expectation::HeadsFollowDependents { heads },
        ),
        VerbPosition::Medial => (
            base.precede_all(&arg1, &[0]).precede_all(&[0], &arg2),
            Expectation::ReportOnly,
        ),
    };
    let scenario = Scenario {
        name: format!("{position} argument branching (m={m})"),
        tree: tree.clone(),
        constraint,
        unit: Unit::Words,
        g: g.clone(),
        expectation,
    };
    let report = scenario.check()?;
    let optima = report.witness.as_ref().expect("solved").optimal_orders.clone();
    let (first, second) = match position {
        VerbPosition::Medial => ("preverbal argument", "postverbal argument"),
        _ => ("argument 1", "argument 2"),
    };
    Ok(report
        .with_note(direction_summary(&tree, &optima, arg1[0], first))
        .with_note(direction_summary(&tree, &optima, arg2[0], second)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BaseOrder {
    #[serde(rename = "SOV")]
    Sov,
    #[serde(rename = "VSO")]
    Vso,
}

impl fmt::Display for BaseOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaseOrder::Sov => "SOV",
            BaseOrder::Vso => "VSO",
        })
    }
}

pub const AUX_MAIN_VERB: usize = 0;
pub const AUX_AUXILIARY: usize = 5;

/// Main verb as hub for subject, object and auxiliary.
///
/// Vertices: 0 main verb, 1 subject head, 2 its dependent, 3 object head,
/// 4 its dependent, 5 auxiliary.
pub fn auxiliary_tree() -> DepTree {
    DepTree::synthetic(&[0, 1, 2, 1, 4, 1]).expect("auxiliary tree is valid")
}

/// Auxiliary right after the verb in SOV, right before it in VSO.
pub fn check_auxiliary_placement(base: BaseOrder, g: &CostFunction) -> Result<PredictionReport, PredictionError> {
    let tree = auxiliary_tree();
    let subject = vec![1, 2];
    let object = vec![3, 4];
    let verb = vec![AUX_MAIN_VERB];
    let blocks = PrecedenceConstraint::new()
        .contiguous(subject.clone())
        .contiguous(object.clone());
    let (constraint, expectation) = match base {
        BaseOrder::Sov => (
            blocks.precede_all(&subject, &object).precede_all(&object, &verb),
            Expectation::ImmediatelyAfter {
                token: AUX_AUXILIARY,
                anchor: AUX_MAIN_VERB,
            },
        ),
        BaseOrder::Vso => (
            blocks.precede_all(&verb, &subject).precede_all(&subject, &object),
            Expectation::ImmediatelyBefore {
                token: AUX_AUXILIARY,
                anchor: AUX_MAIN_VERB,
            },
        ),
    };
    let scenario = Scenario {
        name: format!("auxiliary placement ({base})"),
        tree,
        constraint,
        unit: Unit::Words,
        g: g.clone(),
        expectation,
    };
    let report = scenario.check()?;
    let rep = report.witness.as_ref().expect("solved").representative().clone();
    let offset = rep.position(AUX_AUXILIARY) as isize - rep.position(AUX_MAIN_VERB) as isize;
    Ok(report.with_note(format!(
        "auxiliary offset from main verb in representative optimum: {offset:+}"
    )))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AntilocalityVariant {
    /// S and O with two adjectives each, verb last.
    Sov,
    /// Mirror image: verb first, then O and S.
    Vos,
    /// S and O with a single adjective each.
    SingleAdjective,
}

/// Adjectives before the noun in S and O versus the noun in the middle of
/// its constituent, under total cost `Σ g(d)`.
///
/// Holds when the noun-final arrangement has a strictly smaller total
/// while its adjective–noun dependencies are individually no shorter.
/// With a single adjective per constituent there is no central position,
/// so that variant is vacuous.
pub fn antilocality_demo(variant: AntilocalityVariant, g: &CostFunction) -> Result<PredictionReport, PredictionError> {
    let adjectives = if variant == AntilocalityVariant::SingleAdjective {
        1
    } else {
        2
    };
    // Vertex 0 verb; subject noun 1 with adjectives; object noun after.
    let (tree, [subject, object]) = verb_with_arguments(adjectives);
    let (s_noun, o_noun) = (subject[0], object[0]);
    let s_adj = &subject[1..];
    let o_adj = &object[1..];

    let noun_final = |adj: &[usize], noun: usize| -> Vec<usize> { adj.iter().copied().chain([noun]).collect() };
    let noun_central = |adj: &[usize], noun: usize| -> Vec<usize> {
        match adj {
            [a, b] => vec![*a, noun, *b],
            [a] => vec![noun, *a],
            _ => unreachable!(),
        }
    };
    let sov = |s: Vec<usize>, o: Vec<usize>| {
        let mut seq = s;
        seq.extend(o);
        seq.push(0);
        Linearization::from_sequence(seq).expect("permutation")
    };
    let mut anti_local = sov(noun_final(s_adj, s_noun), noun_final(o_adj, o_noun));
    let mut central = sov(noun_central(s_adj, s_noun), noun_central(o_adj, o_noun));
    let mut constraint = PrecedenceConstraint::new().ordered_blocks(vec![subject.clone(), object.clone(), vec![0]]);
    if variant == AntilocalityVariant::Vos {
        anti_local = anti_local.reversed();
        central = central.reversed();
        constraint = PrecedenceConstraint::new().ordered_blocks(vec![vec![0], object.clone(), subject.clone()]);
    }

    let total_anti = optimizer::order_cost(&tree, &anti_local, Unit::Words, g)?;
    let total_central = optimizer::order_cost(&tree, &central, Unit::Words, g)?;
    let adj_no_shorter = s_adj
        .iter()
        .map(|&a| (a, s_noun))
        .chain(o_adj.iter().map(|&a| (a, o_noun)))
        .all(|(a, n)| {
            anti_local.position(a).abs_diff(anti_local.position(n)) >= central.position(a).abs_diff(central.position(n))
        });

    let name = match variant {
        AntilocalityVariant::Sov => "anti-locality within constituents (SOV)",
        AntilocalityVariant::Vos => "anti-locality within constituents (VOS mirror)",
        AntilocalityVariant::SingleAdjective => "anti-locality within constituents (one adjective)",
    };
    let verdict = if variant == AntilocalityVariant::SingleAdjective {
        Verdict::Vacuous
    } else {
        Verdict::from_bool(total_anti.compare(&total_central).is_lt() && adj_no_shorter)
    };
    let scenario = Scenario {
        name: name.to_string(),
        tree,
        constraint,
        unit: Unit::Words,
        g: g.clone(),
        expectation: Expectation::ReportOnly,
    };
    let witness = scenario.solve()?;
    let noun_outer = |lin: &Linearization| {
        [(&subject, s_noun), (&object, o_noun)].iter().all(|(block, noun)| {
            let edge = if variant == AntilocalityVariant::Vos {
                block.iter().map(|&v| lin.position(v)).min()
            } else {
                block.iter().map(|&v| lin.position(v)).max()
            };
            edge == Some(lin.position(*noun))
        })
    };
    let outer_count = witness.optimal_orders.iter().filter(|o| noun_outer(o)).count();
    let mut report = PredictionReport {
        scenario: name.to_string(),
        verdict,
        counterexample: (verdict == Verdict::Fails).then(|| anti_local.clone()),
        witness: Some(witness.clone()),
        notes: Vec::new(),
        setup: Some(scenario),
    };
    let placement = if variant == AntilocalityVariant::SingleAdjective {
        "noun-initial"
    } else {
        "noun-central"
    };
    report = report
        .with_note(format!(
            "noun-peripheral total {total_anti} vs {placement} total {}",
            total_central
        ))
        .with_note(format!(
            "adjective-noun dependencies no shorter in the anti-local order: {adj_no_shorter}"
        ))
        .with_note(format!(
            "constrained optimum {} with the noun at the verb-facing edge in {} of {} optima",
            witness.min_cost,
            outer_count,
            witness.optimal_orders.len()
        ));
    if variant == AntilocalityVariant::SingleAdjective {
        report = report
            .with_note("two-token constituents keep the adjective adjacent to the noun; no central position exists");
    }
    Ok(report)
}

/// Every scenario, in a fixed order; runs in parallel.
pub fn default_suite(g: &CostFunction) -> Result<Vec<PredictionReport>, PredictionError> {
    enum Job {
        Star(usize),
        Branching(VerbPosition, usize),
        Auxiliary(BaseOrder),
        Antilocality(AntilocalityVariant),
    }
    let mut jobs: Vec<Job> = (1..=MAX_STAR_DEPENDENTS).map(Job::Star).collect();
    for position in [VerbPosition::Initial, VerbPosition::Final, VerbPosition::Medial] {
        for m in 1..=2 {
            jobs.push(Job::Branching(position, m));
        }
    }
    jobs.push(Job::Auxiliary(BaseOrder::Sov));
    jobs.push(Job::Auxiliary(BaseOrder::Vso));
    for variant in [
        AntilocalityVariant::Sov,
        AntilocalityVariant::Vos,
        AntilocalityVariant::SingleAdjective,
    ] {
        jobs.push(Job::Antilocality(variant));
    }
    jobs.par_iter()
        .map(|job| match job {
            Job::Star(k) => check_star_placement(*k, g),
            Job::Branching(p, m) => check_verb_argument_branching(*p, *m, g),
            Job::Auxiliary(b) => check_auxiliary_placement(*b, g),
            Job::Antilocality(v) => antilocality_demo(*v, g),
        })
        .collect()
}

/// Minimum cost of the witness, if any.
pub fn witness_cost(report: &PredictionReport) -> Option<&CostValue> {
    report.witness.as_ref().map(|w| &w.min_cost)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::integer;

    fn id() -> CostFunction {
        CostFunction::identity()
    }

    #[test]
    fn star_one_dependent_is_indifferent() {
        let r = check_star_placement(1, &id()).unwrap();
        assert!(r.holds());
        let w = r.witness.unwrap();
        assert_eq!(w.min_cost, CostValue::Exact(integer(1)));
        assert_eq!(w.optimal_orders.len(), 2);
    }

    #[test]
    fn star_two_dependents() {
        let r = check_star_placement(2, &id()).unwrap();
        assert!(r.holds());
        assert_eq!(r.notes[0], "optimal cost 2, head-peripheral cost 3");
    }

    #[test]
    fn star_four_dependents_unique_centre() {
        let r = check_star_placement(4, &id()).unwrap();
        assert!(r.holds());
        let w = r.witness.unwrap();
        assert_eq!(w.min_cost, CostValue::Exact(integer(6)));
        assert!(w.optimal_orders.iter().all(|o| o.position(0) == 2));
    }

    #[test]
    fn star_range_is_checked() {
        assert_eq!(check_star_placement(0, &id()).unwrap_err(), PredictionError::Range(0));
        assert_eq!(check_star_placement(8, &id()).unwrap_err(), PredictionError::Range(8));
    }

    #[test]
    fn branching_with_one_dependent() {
        let initial = check_verb_argument_branching(VerbPosition::Initial, 1, &id()).unwrap();
        assert!(initial.holds());
        let last = check_verb_argument_branching(VerbPosition::Final, 1, &id()).unwrap();
        assert!(last.holds());
        let a = initial.witness.unwrap();
        let b = last.witness.unwrap();
        assert_eq!(a.min_cost, b.min_cost);
        let mut mirrored: Vec<Linearization> = a.optimal_orders.iter().map(Linearization::reversed).collect();
        mirrored.sort();
        assert_eq!(mirrored, b.optimal_orders);
    }

    #[test]
    fn two_dependents_tie_head_first_with_head_central() {
        let r = check_verb_argument_branching(VerbPosition::Initial, 2, &id()).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        let w = r.witness.as_ref().unwrap();
        assert_eq!(w.min_cost, CostValue::Exact(integer(11)));
        assert_eq!(w.optimal_orders.len(), 32);
        let c = r.counterexample.as_ref().unwrap();
        assert_eq!(r.setup.as_ref().unwrap().solve().unwrap().min_cost, w.min_cost);
        assert!(c.position(1) > 1 || c.position(4) > 4);
    }

    #[test]
    fn medial_verb_is_reported() {
        let r = check_verb_argument_branching(VerbPosition::Medial, 1, &id()).unwrap();
        assert_eq!(r.verdict, Verdict::Reported);
        assert!(r.notes[1].starts_with("postverbal argument: head-first"));
        assert!(r.notes[0].starts_with("preverbal argument: head-last"));
    }

    #[test]
    fn auxiliary_follows_verb_in_sov_and_precedes_in_vso() {
        let sov = check_auxiliary_placement(BaseOrder::Sov, &id()).unwrap();
        let vso = check_auxiliary_placement(BaseOrder::Vso, &id()).unwrap();
        assert!(sov.holds() && vso.holds());
        let a = sov.witness.unwrap();
        let b = vso.witness.unwrap();
        assert_eq!(a.min_cost, CostValue::Exact(integer(7)));
        assert_eq!(a.min_cost, b.min_cost);
        // Reversal maps S O M to M O S; swapping the argument labels gives VSO.
        let swap = |v: usize| match v {
            1 => 3,
            2 => 4,
            3 => 1,
            4 => 2,
            v => v,
        };
        let mut mirrored: Vec<Linearization> = a
            .optimal_orders
            .iter()
            .map(|o| Linearization::from_sequence(o.reversed().sequence().iter().map(|&v| swap(v)).collect()).unwrap())
            .collect();
        mirrored.sort();
        assert_eq!(mirrored, b.optimal_orders);
    }

    #[test]
    fn antilocality_totals() {
        let id_report = antilocality_demo(AntilocalityVariant::Sov, &id()).unwrap();
        assert_eq!(id_report.notes[0], "noun-peripheral total 11 vs noun-central total 11");
        assert_eq!(id_report.verdict, Verdict::Fails);
        let sq = CostFunction::power(2.0).unwrap();
        let sq_report = antilocality_demo(AntilocalityVariant::Sov, &sq).unwrap();
        assert_eq!(sq_report.notes[0], "noun-peripheral total 27 vs noun-central total 33");
        assert!(sq_report.holds());
        let mirror = antilocality_demo(AntilocalityVariant::Vos, &sq).unwrap();
        assert!(mirror.holds());
        let single = antilocality_demo(AntilocalityVariant::SingleAdjective, &id()).unwrap();
        assert_eq!(single.verdict, Verdict::Vacuous);
        assert_eq!(single.notes[0], "noun-peripheral total 6 vs noun-initial total 8");
    }

    #[test]
    fn report_json_has_verdict_and_witness() {
        let r = check_star_placement(2, &id()).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["verdict"], "holds");
        assert_eq!(json["witness"]["optimal_order_count"], 2);
        assert_eq!(json["witness"]["representative"], serde_json::json!([2, 1, 3]));
    }
}
