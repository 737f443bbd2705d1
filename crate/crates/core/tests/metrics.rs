mod common;

use common::{arb_instance, int, lengths, lin, q, total, tree, tree_with_lengths, RefG};
use deplen::metrics::{cost_d, edge_lengths, generalized_cost, length_histogram, sum_lengths, weighted_cost};
use deplen::{CostFunction, CostValue, Rational, Unit};
use num_traits::{One, Zero};
use proptest::prelude::*;
use std::collections::BTreeMap;

/// Strictly increasing table long enough for word lengths up to 11.
fn arb_table() -> impl Strategy<Value = RefG> {
    proptest::collection::vec(1i64..6, 11).prop_map(|steps| {
        let mut acc = 0;
        RefG::Table(
            steps
                .iter()
                .map(|s| {
                    acc += s;
                    acc
                })
                .collect(),
        )
    })
}

fn arb_g() -> impl Strategy<Value = RefG> {
    prop_oneof![(1u32..=3).prop_map(RefG::Power), arb_table()]
}

fn exact(v: &CostValue) -> &Rational {
    v.as_exact().expect("exact cost")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn word_lengths_match_positions((heads, order, _) in arb_instance(1, 12)) {
        let t = tree(&heads);
        let got: Vec<Rational> = edge_lengths(&t, &lin(&order), Unit::Words).iter().map(|e| e.value()).collect();
        prop_assert_eq!(got, lengths(&heads, &order, None));
    }

    #[test]
    fn character_lengths_match_span_midpoints((heads, order, lambdas) in arb_instance(1, 12)) {
        let t = tree_with_lengths(&heads, &lambdas);
        let got: Vec<Rational> = edge_lengths(&t, &lin(&order), Unit::Characters).iter().map(|e| e.value()).collect();
        prop_assert_eq!(got, lengths(&heads, &order, Some(&lambdas)));
    }

    #[test]
    fn grouped_cost_equals_direct_sum((heads, order, _) in arb_instance(1, 12), g in arb_g()) {
        let t = tree(&heads);
        let report = cost_d(&t, &lin(&order), &g.to_library(), Unit::Words).unwrap();
        let expected = total(&lengths(&heads, &order, None), |d| g.eval(d));
        prop_assert_eq!(exact(&report.cost), &expected);
        prop_assert_eq!(exact(&report.direct_sum), &expected);
    }

    #[test]
    fn proportions_weight_the_cost((heads, order, _) in arb_instance(2, 12), g in arb_g()) {
        // (n-1) Σ_d p(d) g(d), with p taken from the histogram.
        let t = tree(&heads);
        let l = lin(&order);
        let h = length_histogram([(&t, &l)]).unwrap();
        prop_assert_eq!(h.total_edges() as usize, heads.len() - 1);
        let sum_p: Rational = h.proportions().values().cloned().sum();
        prop_assert_eq!(sum_p, Rational::one());
        let weighted: Rational = h.proportions().iter().map(|(&d, p)| p * g.eval(&int(d as i64))).sum();
        let eq1 = weighted * int(heads.len() as i64 - 1);
        let report = cost_d(&t, &l, &g.to_library(), Unit::Words).unwrap();
        prop_assert_eq!(exact(&report.cost), &eq1);
    }

    #[test]
    fn reversal_preserves_lengths((heads, order, lambdas) in arb_instance(1, 12)) {
        let t = tree_with_lengths(&heads, &lambdas);
        let l = lin(&order);
        for unit in [Unit::Words, Unit::Characters] {
            prop_assert_eq!(sum_lengths(&t, &l, unit), sum_lengths(&t, &l.reversed(), unit));
        }
    }

    #[test]
    fn larger_g_gives_larger_cost((heads, order, _) in arb_instance(1, 12), base in arb_table(), bumps in proptest::collection::vec(0i64..4, 11)) {
        let RefG::Table(values) = &base else { unreachable!() };
        // Adding a non-decreasing bump keeps the table strictly increasing.
        let mut acc = 0;
        let bigger: Vec<i64> = values.iter().zip(&bumps).map(|(v, b)| { acc += b; v + acc }).collect();
        let t = tree(&heads);
        let l = lin(&order);
        let small = cost_d(&t, &l, &base.to_library(), Unit::Words).unwrap().cost;
        let large = cost_d(&t, &l, &RefG::Table(bigger).to_library(), Unit::Words).unwrap().cost;
        prop_assert!(exact(&small) <= exact(&large));
    }

    #[test]
    fn identity_cost_is_sum_of_lengths((heads, order, lambdas) in arb_instance(1, 12)) {
        let t = tree_with_lengths(&heads, &lambdas);
        let l = lin(&order);
        for unit in [Unit::Words, Unit::Characters] {
            let r = cost_d(&t, &l, &CostFunction::identity(), unit).unwrap();
            prop_assert_eq!(exact(&r.cost), &r.sum_lengths);
        }
    }

    #[test]
    fn character_lengths_are_half_integers((heads, order, lambdas) in arb_instance(1, 12)) {
        let t = tree_with_lengths(&heads, &lambdas);
        for e in edge_lengths(&t, &lin(&order), Unit::Characters) {
            let doubled = e.value() * int(2);
            prop_assert!(doubled.is_integer());
            prop_assert!(e.value() >= Rational::one());
        }
    }
}

#[test]
fn unit_weights_reproduce_the_plain_cost() {
    let heads = [2, 0, 4, 2, 2];
    let t = tree(&heads);
    let order = [0, 1, 2, 3, 4];
    let l = lin(&order);
    let ones: BTreeMap<(usize, usize), Rational> =
        [((2, 1), int(1)), ((2, 4), int(1)), ((4, 3), int(1)), ((2, 5), int(1))]
            .into_iter()
            .collect();
    let g = CostFunction::power(2.0).unwrap();
    let weighted = generalized_cost(&t, &l, Unit::Words, weighted_cost(&g, &ones)).unwrap();
    let plain = cost_d(&t, &l, &g, Unit::Words).unwrap().cost;
    assert_eq!(weighted, plain);
    let mut half = ones.clone();
    half.insert((2, 5), q(1, 2));
    let lighter = generalized_cost(&t, &l, Unit::Words, weighted_cost(&g, &half)).unwrap();
    assert!(exact(&lighter) < exact(&plain));
    assert!(!exact(&lighter).is_zero());
}

#[test]
fn logarithmic_cost_is_approximate_but_consistent() {
    let t = tree(&[0, 1, 1, 1]);
    let l = lin(&[1, 0, 2, 3]);
    let r = cost_d(&t, &l, &CostFunction::logarithmic(), Unit::Words).unwrap();
    let expected = 2.0 * 2f64.ln() + 3f64.ln();
    assert!(!r.cost.is_exact());
    assert!((r.cost.to_f64() - expected).abs() < 1e-12);
    assert!(r.cost.same_as(&r.direct_sum));
}
