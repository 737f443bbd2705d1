//! Character-length comparison of three French clause shapes: SVO with a
//! nominal object, SOV with a clitic object, and SOV with the nominal
//! object.
//!
//! The sentences are illustrative exemplars with plausible French word
//! lengths; they are not taken from any published figure.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::metrics::{self, MetricsError};
use crate::tree::{DepTree, Linearization, Token, Unit};
use crate::value::{self, Rational};
use crate::CostFunction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    A,
    B,
    C,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::A => "a",
            Label::B => "b",
            Label::C => "c",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fixture {
    pub label: Label,
    pub gloss: String,
    pub tree: DepTree,
    pub order: Linearization,
    /// Relation name of the edge above each vertex (`None` for the root).
    pub relations: Vec<Option<&'static str>>,
}

impl Fixture {
    pub fn sentence(&self) -> String {
        let forms: Vec<&str> = self
            .order
            .sequence()
            .iter()
            .map(|&v| self.tree.token(v).form.as_str())
            .collect();
        forms.join(" ")
    }
}

fn tokens(forms: &[&str]) -> Vec<Token> {
    forms
        .iter()
        .enumerate()
        .map(|(i, f)| Token::new(i + 1, *f).expect("fixture forms are non-empty"))
        .collect()
}

/// The three built-in fixtures.
pub fn french_fixture() -> (Fixture, Fixture, Fixture) {
    // Marie mange la pomme: Marie -> mange, pomme -> mange, la -> pomme.
    let nominal = DepTree::from_head_ids(tokens(&["Marie", "mange", "la", "pomme"]), &[2, 0, 4, 2])
        .expect("fixture tree is valid");
    let nominal_relations = vec![Some("nsubj"), None, Some("det"), Some("obj")];
    let a = Fixture {
        label: Label::A,
        gloss: "SVO, nominal object ('Marie eats the apple')".into(),
        tree: nominal.clone(),
        order: Linearization::identity(4),
        relations: nominal_relations.clone(),
    };
    let clitic = DepTree::from_head_ids(tokens(&["Marie", "la", "mange"]), &[3, 3, 0]).expect("fixture tree is valid");
    let b = Fixture {
        label: Label::B,
        gloss: "SOV, clitic object ('Marie eats it')".into(),
        tree: clitic,
        order: Linearization::identity(3),
        relations: vec![Some("nsubj"), Some("obj"), None],
    };
    let c = Fixture {
        label: Label::C,
        gloss: "SOV, nominal object (ungrammatical)".into(),
        tree: nominal,
        order: Linearization::from_sequence(vec![0, 2, 3, 1]).expect("permutation"),
        relations: nominal_relations,
    };
    (a, b, c)
}

/// Fixture (c) with its object block replaced by one token of `lambda`
/// characters.
pub fn shortened_object(lambda: usize) -> Fixture {
    let tree = DepTree::synthetic(&[3, 3, 0])
        .expect("valid")
        .with_char_lengths(&[5, lambda, 5]);
    Fixture {
        label: Label::C,
        gloss: format!("SOV, object of {lambda} characters"),
        tree,
        order: Linearization::identity(3),
        relations: vec![Some("nsubj"), Some("obj"), None],
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeRow {
    pub relation: &'static str,
    pub head: String,
    pub dependent: String,
    #[serde(serialize_with = "value::serialize_rational")]
    pub length: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixtureRow {
    pub label: Label,
    pub gloss: String,
    pub sentence: String,
    /// In order of the dependent's position in the sentence.
    pub edges: Vec<EdgeRow>,
    #[serde(serialize_with = "value::serialize_rational")]
    pub sum: Rational,
}

impl FixtureRow {
    pub fn length_of(&self, relation: &str) -> Option<&Rational> {
        self.edges.iter().find(|e| e.relation == relation).map(|e| &e.length)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseStudyReport {
    pub unit: Unit,
    pub fixtures: Vec<FixtureRow>,
    /// Labels by increasing sum.
    pub ranking: Vec<Label>,
    /// The asserted comparison: clitic SOV below nominal SOV.
    pub b_below_c: bool,
    /// Reported only.
    #[serde(serialize_with = "serialize_ordering")]
    pub a_vs_b: Ordering,
}

fn serialize_ordering<S: serde::Serializer>(o: &Ordering, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(match o {
        Ordering::Less => "less",
        Ordering::Equal => "equal",
        Ordering::Greater => "greater",
    })
}

impl CaseStudyReport {
    pub fn row(&self, label: Label) -> &FixtureRow {
        self.fixtures
            .iter()
            .find(|r| r.label == label)
            .expect("all labels present")
    }
}

pub fn fixture_row(fixture: &Fixture, unit: Unit) -> Result<FixtureRow, MetricsError> {
    let mut lengths = metrics::edge_lengths(&fixture.tree, &fixture.order, unit);
    lengths.sort_by_key(|e| fixture.order.position(e.dependent));
    let edges: Vec<EdgeRow> = lengths
        .iter()
        .map(|e| EdgeRow {
            relation: fixture.relations[e.dependent].unwrap_or("root"),
            head: fixture.tree.token(e.head).form.clone(),
            dependent: fixture.tree.token(e.dependent).form.clone(),
            length: e.value(),
        })
        .collect();
    let report = metrics::cost_d(&fixture.tree, &fixture.order, &CostFunction::identity(), unit)?;
    Ok(FixtureRow {
        label: fixture.label,
        gloss: fixture.gloss.clone(),
        sentence: fixture.sentence(),
        edges,
        sum: report.sum_lengths,
    })
}

/// Sums per fixture, their ranking, and the asserted `b < c` comparison.
pub fn compare_fixture(unit: Unit) -> Result<CaseStudyReport, MetricsError> {
    let (a, b, c) = french_fixture();
    let fixtures = [a, b, c]
        .iter()
        .map(|f| fixture_row(f, unit))
        .collect::<Result<Vec<_>, _>>()?;
    let mut ranking: Vec<&FixtureRow> = fixtures.iter().collect();
    ranking.sort_by(|x, y| x.sum.cmp(&y.sum).then(x.label.cmp(&y.label)));
    let ranking = ranking.iter().map(|r| r.label).collect();
    let b_below_c = fixtures[1].sum < fixtures[2].sum;
    let a_vs_b = fixtures[0].sum.cmp(&fixtures[1].sum);
    Ok(CaseStudyReport {
        unit,
        fixtures,
        ranking,
        b_below_c,
        a_vs_b,
    })
}
