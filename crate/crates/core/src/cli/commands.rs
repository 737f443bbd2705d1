use std::path::Path;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::render;
use super::{CliError, Format, InputArgs, Options, PairArgs, EXIT_CHECK_FAILED, EXIT_OK};
use crate::case_study::{self, CaseStudyReport};
use crate::cost::{self, make_cost_function, CostFunction, CostSpec};
use crate::metrics::{self, CostReport, LengthHistogram};
use crate::optimizer::{self, MlaResult};
use crate::predictions::{self, PredictionReport, Verdict};
use crate::tree::{parse_conllu, DepTree, Linearization, Unit};
use crate::value::{self, fmt_decimal, integer, parse_rational, CostValue, Rational};

/// A rendered report with its JSON form and exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub status: i32,
    pub rendered: String,
    pub json: String,
}

fn finish<T: Serialize>(
    options: &Options,
    value: &T,
    table: String,
    csv: Result<String, CliError>,
    status: i32,
) -> Result<Report, CliError> {
    let json = render::json(value);
    let rendered = match options.format {
        Format::Table => table,
        Format::Json => json.clone(),
        Format::Csv => csv?,
    };
    Ok(Report { status, rendered, json })
}

fn unit_or(options: &Options, default: Unit) -> Unit {
    options.unit.map(Unit::from).unwrap_or(default)
}

fn cost_function(options: &Options) -> Result<CostFunction, CliError> {
    let spec = CostSpec::parse(&options.g)?;
    Ok(make_cost_function(spec, None, options.allow_nonmonotone_g)?)
}

fn load_corpus(input: &InputArgs) -> Result<Vec<DepTree>, CliError> {
    let path = input.input.display().to_string();
    let text = std::fs::read_to_string(&input.input).map_err(|e| CliError::Io {
        path: path.clone(),
        message: e.to_string(),
    })?;
    let mut trees = parse_conllu(&text).map_err(|source| CliError::Conllu {
        path: path.clone(),
        source,
    })?;
    if input.drop_punct {
        trees = trees
            .iter()
            .enumerate()
            .map(|(i, t)| {
                t.drop_punctuation().map_err(|source| CliError::Tree {
                    path: path.clone(),
                    sentence: i + 1,
                    source,
                })
            })
            .collect::<Result<_, _>>()?;
    }
    if trees.iter().all(|t| t.edge_count() == 0) {
        return Err(CliError::EmptyCorpus(path));
    }
    Ok(trees)
}

fn text_of(tree: &DepTree, lin: &Linearization) -> String {
    lin.sequence()
        .iter()
        .map(|&v| tree.token(v).form.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|f| f.to_string_lossy().into_owned())
        .unwrap_or_default()
}

#[derive(Serialize)]
struct SentenceAnalysis {
    sentence: usize,
    text: String,
    #[serde(flatten)]
    report: CostReport,
}

#[derive(Serialize)]
struct CorpusSummary {
    sentences: usize,
    edges: usize,
    #[serde(serialize_with = "value::serialize_rational")]
    sum_lengths: Rational,
    #[serde(rename = "D")]
    cost: CostValue,
    #[serde(skip_serializing_if = "Option::is_none")]
    histogram: Option<LengthHistogram>,
}

#[derive(Serialize)]
struct AnalyzeReport {
    input: String,
    unit: Unit,
    g: String,
    sentences: Vec<SentenceAnalysis>,
    corpus: CorpusSummary,
}

pub fn run_analyze(options: &Options, input: &InputArgs) -> Result<Report, CliError> {
    let unit = unit_or(options, Unit::Words);
    let g = cost_function(options)?;
    let trees = load_corpus(input)?;
    let sentences = trees
        .par_iter()
        .enumerate()
        .map(|(i, tree)| {
            let lin = Linearization::identity(tree.len());
            Ok(SentenceAnalysis {
                sentence: i + 1,
                text: text_of(tree, &lin),
                report: metrics::cost_d(tree, &lin, &g, unit)?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let orders: Vec<Linearization> = trees.iter().map(|t| Linearization::identity(t.len())).collect();
    let histogram = match unit {
        Unit::Words => Some(metrics::length_histogram(trees.iter().zip(&orders))?),
        Unit::Characters => None,
    };
    let corpus = CorpusSummary {
        sentences: trees.len(),
        edges: trees.iter().map(DepTree::edge_count).sum(),
        sum_lengths: sentences.iter().map(|s| s.report.sum_lengths.clone()).sum(),
        cost: sentences.iter().map(|s| s.report.cost.clone()).sum(),
        histogram,
    };
    let report = AnalyzeReport {
        input: file_name(&input.input),
        unit,
        g: g.to_string(),
        sentences,
        corpus,
    };

    let rows: Vec<Vec<String>> = report
        .sentences
        .iter()
        .map(|s| {
            vec![
                s.sentence.to_string(),
                s.report.n.to_string(),
                fmt_decimal(&s.report.sum_lengths),
                s.report.cost.display(),
                s.text.clone(),
            ]
        })
        .collect();
    let mut table = format!("unit: {unit}  g: {g}\n\n");
    table += &render::table(&["#", "n", "sum", "D", "text"], &rows);
    table += &format!(
        "\ncorpus: {} sentences, {} edges, sum {}, D {}\n",
        report.corpus.sentences,
        report.corpus.edges,
        fmt_decimal(&report.corpus.sum_lengths),
        report.corpus.cost
    );
    if let Some(h) = &report.corpus.histogram {
        let rows: Vec<Vec<String>> = h
            .counts()
            .iter()
            .map(|(&d, &c)| vec![d.to_string(), c.to_string(), fmt_decimal(&h.proportion(d))])
            .collect();
        table += "\n";
        table += &render::table(&["d", "count", "p"], &rows);
    }
    let csv = match &report.corpus.histogram {
        Some(h) => Ok(h.to_csv()),
        None => Err(CliError::Usage(
            "the CSV histogram is only defined for --unit words".into(),
        )),
    };
    finish(options, &report, table, csv, EXIT_OK)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Method {
    /// Exhaustive search over all orders.
    Exact,
    /// Best projective order only.
    Projective,
}

#[derive(Serialize)]
struct SentenceOptimum {
    sentence: usize,
    text: String,
    n: usize,
    method: Method,
    observed: CostValue,
    optimal: CostValue,
    gap: CostValue,
    optimal_order_count: usize,
    representative: Linearization,
    representative_text: String,
    searched: u64,
}

#[derive(Serialize)]
struct OptimizeReport {
    input: String,
    unit: Unit,
    g: String,
    max_n: usize,
    sentences: Vec<SentenceOptimum>,
}

pub fn run_optimize(options: &Options, input: &InputArgs) -> Result<Report, CliError> {
    let unit = unit_or(options, Unit::Words);
    let g = cost_function(options)?;
    let trees = load_corpus(input)?;
    let path = input.input.display().to_string();
    let sentences = trees
        .par_iter()
        .enumerate()
        .map(|(i, tree)| {
            let wrap = |source| CliError::Sentence {
                path: path.clone(),
                sentence: i + 1,
                source,
            };
            let (method, result): (Method, MlaResult) = if tree.len() <= options.max_n {
                (
                    Method::Exact,
                    optimizer::brute_force_mla(tree, unit, &g, None).map_err(wrap)?,
                )
            } else {
                (
                    Method::Projective,
                    optimizer::projective_mla_with(tree, unit, &g).map_err(wrap)?,
                )
            };
            let lin = Linearization::identity(tree.len());
            let observed = optimizer::order_cost(tree, &lin, unit, &g).map_err(wrap)?;
            let gap = optimizer::gap_ratio(&observed, &result.min_cost);
            let representative = result.representative().clone();
            Ok(SentenceOptimum {
                sentence: i + 1,
                text: text_of(tree, &lin),
                n: tree.len(),
                method,
                observed,
                gap,
                optimal_order_count: result.optimal_orders.len(),
                representative_text: text_of(tree, &representative),
                representative,
                optimal: result.min_cost,
                searched: result.searched,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let report = OptimizeReport {
        input: file_name(&input.input),
        unit,
        g: g.to_string(),
        max_n: options.max_n,
        sentences,
    };

    let cells = |s: &SentenceOptimum| {
        vec![
            s.sentence.to_string(),
            s.n.to_string(),
            match s.method {
                Method::Exact => "exact".to_string(),
                Method::Projective => "projective*".to_string(),
            },
            s.observed.display(),
            s.optimal.display(),
            s.gap.display(),
            s.optimal_order_count.to_string(),
            s.representative.to_string(),
        ]
    };
    let rows: Vec<Vec<String>> = report.sentences.iter().map(cells).collect();
    let mut table = format!("unit: {unit}  g: {g}  max-n: {}\n\n", options.max_n);
    table += &render::table(
        &[
            "#",
            "n",
            "method",
            "observed",
            "optimal",
            "gap",
            "optima",
            "representative",
        ],
        &rows,
    );
    if report.sentences.iter().any(|s| s.method == Method::Projective) {
        table += "\n* longer than max-n: optimum over projective orders only\n";
    }
    let csv = render::csv(
        &[
            "sentence",
            "n",
            "method",
            "observed",
            "optimal",
            "gap",
            "optimal_orders",
            "representative",
        ],
        &report
            .sentences
            .iter()
            .map(|s| {
                let mut row = cells(s);
                row[2] = format!("{:?}", s.method).to_lowercase();
                row
            })
            .collect::<Vec<_>>(),
    );
    finish(options, &report, table, Ok(csv), EXIT_OK)
}

#[derive(Serialize)]
struct PredictReport<'a> {
    g: String,
    asserted: usize,
    passed: usize,
    failed: usize,
    reports: &'a [PredictionReport],
}

pub fn run_predict(options: &Options) -> Result<Report, CliError> {
    let g = cost_function(options)?;
    let reports = predictions::default_suite(&g)?;
    let asserted = reports.iter().filter(|r| r.asserted()).count();
    let passed = reports.iter().filter(|r| r.holds()).count();
    let failed = asserted - passed;
    let summary = PredictReport {
        g: g.to_string(),
        asserted,
        passed,
        failed,
        reports: &reports,
    };

    let min_cost = |r: &PredictionReport| predictions::witness_cost(r).map(CostValue::display).unwrap_or_default();
    let optima = |r: &PredictionReport| {
        r.witness
            .as_ref()
            .map(|w| w.optimal_orders.len().to_string())
            .unwrap_or_default()
    };
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| vec![r.verdict.to_string(), r.scenario.clone(), min_cost(r), optima(r)])
        .collect();
    let mut table = format!("g: {g}\n\n");
    table += &render::table(&["result", "scenario", "min cost", "optima"], &rows);
    table += "\n";
    for r in &reports {
        table += &format!("{}\n", r.scenario);
        if let Some(c) = &r.counterexample {
            table += &format!("  counterexample: {c}\n");
        }
        for note in &r.notes {
            table += &format!("  {note}\n");
        }
    }
    table += &format!("\nasserted {asserted}, passed {passed}, failed {failed}\n");
    let csv = render::csv(
        &[
            "result",
            "scenario",
            "min_cost",
            "optimal_orders",
            "counterexample",
            "notes",
        ],
        &reports
            .iter()
            .map(|r| {
                vec![
                    format!("{:?}", r.verdict).to_lowercase(),
                    r.scenario.clone(),
                    min_cost(r),
                    optima(r),
                    r.counterexample.as_ref().map(ToString::to_string).unwrap_or_default(),
                    r.notes.join("; "),
                ]
            })
            .collect::<Vec<_>>(),
    );
    let status = if reports.iter().any(|r| r.verdict == Verdict::Fails) {
        EXIT_CHECK_FAILED
    } else {
        EXIT_OK
    };
    finish(options, &summary, table, Ok(csv), status)
}

#[derive(Serialize)]
struct PairRow {
    d: usize,
    #[serde(serialize_with = "value::serialize_rational")]
    p: Rational,
    #[serde(serialize_with = "value::serialize_rational")]
    g: Rational,
}

#[derive(Serialize)]
struct TrialSummary {
    seed: u64,
    instances: usize,
    matched_exhaustive: usize,
    induced_g_nondecreasing: usize,
    /// 1-based indices of failing instances.
    failures: Vec<usize>,
}

#[derive(Serialize)]
struct PairReport {
    pairing: Vec<PairRow>,
    #[serde(serialize_with = "value::serialize_rational")]
    total: Rational,
    #[serde(serialize_with = "serialize_optional_rational")]
    exhaustive_minimum: Option<Rational>,
    trials: TrialSummary,
}

fn serialize_optional_rational<S: serde::Serializer>(value: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match value {
        Some(r) => value::serialize_rational(r, s),
        None => s.serialize_none(),
    }
}

fn parse_list(text: &str, what: &str) -> Result<Vec<Rational>, CliError> {
    text.split(',')
        .map(|item| parse_rational(item.trim()).ok_or_else(|| CliError::Usage(format!("bad {what} value {item:?}"))))
        .collect()
}

/// Strictly decreasing proportions over `d = 1..=m` and arbitrary costs.
pub(crate) fn random_pairing_instance<R: Rng>(rng: &mut R) -> (Vec<Rational>, Vec<Rational>) {
    let m = rng.gen_range(1..=cost::MAX_EXHAUSTIVE_PAIRING);
    let mut weights: Vec<i64> = sample(rng, 100, m).iter().map(|i| i as i64 + 1).collect();
    weights.sort_unstable_by(|a, b| b.cmp(a));
    let total: i64 = weights.iter().sum();
    let p = weights.iter().map(|&w| value::rational(w, total)).collect();
    let g = (0..m).map(|_| integer(rng.gen_range(0..=20))).collect();
    (p, g)
}

pub fn run_pair(options: &Options, args: &PairArgs) -> Result<Report, CliError> {
    let (p, g) = match (&args.p, &args.costs) {
        (Some(p), Some(c)) => (parse_list(p, "proportion")?, parse_list(c, "cost")?),
        _ => (
            vec![value::rational(1, 2), value::rational(3, 10), value::rational(1, 5)],
            vec![integer(1), integer(2), integer(3)],
        ),
    };
    let result = cost::optimal_pairing(&p, &g)?;
    let exhaustive_minimum = if p.len() <= cost::MAX_EXHAUSTIVE_PAIRING {
        Some(cost::exhaustive_pairing_minimum(&p, &g)?)
    } else {
        None
    };
    let paired = result.paired_costs(&g);
    let pairing: Vec<PairRow> = p
        .iter()
        .zip(&paired)
        .enumerate()
        .map(|(i, (p, g))| PairRow {
            d: i + 1,
            p: p.clone(),
            g: g.clone(),
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut trials = TrialSummary {
        seed: options.seed,
        instances: args.trials,
        matched_exhaustive: 0,
        induced_g_nondecreasing: 0,
        failures: Vec::new(),
    };
    for i in 0..args.trials {
        let (tp, tg) = random_pairing_instance(&mut rng);
        let optimal = cost::verify_pairing_optimal(&tp, &tg)?;
        let induced = cost::optimal_pairing(&tp, &tg)?.paired_costs(&tg);
        let monotone = induced.windows(2).all(|w| w[0] <= w[1]);
        trials.matched_exhaustive += optimal as usize;
        trials.induced_g_nondecreasing += monotone as usize;
        if !(optimal && monotone) {
            trials.failures.push(i + 1);
        }
    }
    let demo_ok = exhaustive_minimum.as_ref().is_none_or(|m| *m == result.total);
    let status = if demo_ok && trials.failures.is_empty() {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    };
    let report = PairReport {
        pairing,
        total: result.total,
        exhaustive_minimum,
        trials,
    };

    let rows: Vec<Vec<String>> = report
        .pairing
        .iter()
        .map(|r| vec![r.d.to_string(), fmt_decimal(&r.p), fmt_decimal(&r.g)])
        .collect();
    let mut table = render::table(&["d", "p", "g(d)"], &rows);
    table += &format!("\ntotal {}", fmt_decimal(&report.total));
    match &report.exhaustive_minimum {
        Some(m) => table += &format!(" (exhaustive minimum {})\n", fmt_decimal(m)),
        None => table += "\n",
    }
    table += &format!(
        "random instances (seed {}): {}/{} match the exhaustive minimum, {}/{} induce a non-decreasing g\n",
        report.trials.seed,
        report.trials.matched_exhaustive,
        report.trials.instances,
        report.trials.induced_g_nondecreasing,
        report.trials.instances
    );
    let csv = render::csv(&["d", "p", "g"], &rows);
    finish(options, &report, table, Ok(csv), status)
}

pub fn run_casestudy(options: &Options) -> Result<Report, CliError> {
    let unit = unit_or(options, Unit::Characters);
    let report: CaseStudyReport = case_study::compare_fixture(unit)?;

    let mut edge_rows = Vec::new();
    for f in &report.fixtures {
        for e in &f.edges {
            edge_rows.push(vec![
                f.label.to_string(),
                e.relation.to_string(),
                e.dependent.clone(),
                e.head.clone(),
                fmt_decimal(&e.length),
            ]);
        }
    }
    let sum_rows: Vec<Vec<String>> = report
        .fixtures
        .iter()
        .map(|f| {
            vec![
                f.label.to_string(),
                fmt_decimal(&f.sum),
                f.sentence.clone(),
                f.gloss.clone(),
            ]
        })
        .collect();
    let mut table = format!("unit: {unit}\n\n");
    table += &render::table(&["fixture", "relation", "dependent", "head", "length"], &edge_rows);
    table += "\n";
    table += &render::table(&["fixture", "sum", "sentence", "gloss"], &sum_rows);
    let mut ranking = String::new();
    for (i, label) in report.ranking.iter().enumerate() {
        if i > 0 {
            let prev = &report.row(report.ranking[i - 1]).sum;
            ranking += if *prev == report.row(*label).sum { " = " } else { " < " };
        }
        ranking += &label.to_string();
    }
    table += &format!("\nranking: {ranking}\n");
    table += &format!("b below c: {}\n", if report.b_below_c { "yes" } else { "no" });
    let csv = render::csv(&["fixture", "relation", "dependent", "head", "length"], &edge_rows);
    let status = if report.b_below_c { EXIT_OK } else { EXIT_CHECK_FAILED };
    finish(options, &report, table, Ok(csv), status)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_instances_have_strictly_decreasing_p() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let (p, g) = random_pairing_instance(&mut rng);
            assert_eq!(p.len(), g.len());
            assert!(p.windows(2).all(|w| w[0] > w[1]));
            assert_eq!(p.iter().cloned().sum::<Rational>(), integer(1));
        }
    }
}
