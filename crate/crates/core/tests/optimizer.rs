mod common;

use common::{
    arb_heads, arb_instance, argmin, int, lengths, lin, permutations, projective_by_crossings, random_heads, total,
    tree, tree_with_lengths, RefG,
};
use deplen::optimizer::{
    brute_force_mla, constrained_mla, count_feasible, enumerate_projective, gap_ratio, order_cost,
    projective_enumeration_mla, projective_mla, projective_order_count, OptimizeError,
};
use deplen::{CostFunction, CostValue, Linearization, PrecedenceConstraint, Rational, Unit};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sequences(orders: &[Linearization]) -> Vec<Vec<usize>> {
    orders.iter().map(|o| o.sequence().to_vec()).collect()
}

fn exact(v: &CostValue) -> Rational {
    v.as_exact().expect("exact").clone()
}

fn arb_g() -> impl Strategy<Value = RefG> {
    prop_oneof![
        (1u32..=3).prop_map(RefG::Power),
        proptest::collection::vec(1i64..5, 8).prop_map(|steps| {
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
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn brute_force_matches_enumeration((heads, _, _) in arb_instance(1, 7), g in arb_g()) {
        let t = tree(&heads);
        let n = heads.len();
        let (best, all) = argmin(permutations(n), |s| total(&lengths(&heads, s, None), |d| g.eval(d)));
        let r = brute_force_mla(&t, Unit::Words, &g.to_library(), None).unwrap();
        prop_assert_eq!(exact(&r.min_cost), best);
        prop_assert_eq!(sequences(&r.optimal_orders), all);
    }

    #[test]
    fn brute_force_matches_enumeration_in_characters((heads, _, lambdas) in arb_instance(1, 6), square in any::<bool>()) {
        let t = tree_with_lengths(&heads, &lambdas);
        let g = RefG::Power(if square { 2 } else { 1 });
        let (best, all) = argmin(permutations(heads.len()), |s| total(&lengths(&heads, s, Some(&lambdas)), |d| g.eval(d)));
        let r = brute_force_mla(&t, Unit::Characters, &g.to_library(), None).unwrap();
        prop_assert_eq!(exact(&r.min_cost), best);
        prop_assert_eq!(sequences(&r.optimal_orders), all);
    }

    #[test]
    fn optimal_set_is_closed_under_reversal((heads, _, _) in arb_instance(1, 7)) {
        let r = brute_force_mla(&tree(&heads), Unit::Words, &CostFunction::identity(), None).unwrap();
        let mut reversed: Vec<Linearization> = r.optimal_orders.iter().map(Linearization::reversed).collect();
        reversed.sort();
        prop_assert_eq!(reversed, r.optimal_orders);
    }

    #[test]
    fn constrained_search_matches_filtered_enumeration(
        (heads, _, _) in arb_instance(2, 7),
        raw_pairs in proptest::collection::vec((0usize..7, 0usize..7), 0..4),
        block_start in 0usize..7,
        block_len in 0usize..4,
    ) {
        let n = heads.len();
        // Pairs oriented low-to-high cannot form a cycle.
        let mut c = PrecedenceConstraint::new();
        for (a, b) in raw_pairs {
            let (a, b) = (a % n, b % n);
            if a < b {
                c = c.precede(a, b);
            }
        }
        let start = block_start % n;
        let block: Vec<usize> = (start..(start + block_len).min(n)).collect();
        if block.len() > 1 {
            c = c.contiguous(block);
        }
        let feasible: Vec<Vec<usize>> = permutations(n).into_iter().filter(|s| c.is_satisfied_by(&lin(s))).collect();
        prop_assert_eq!(count_feasible(n, &c).unwrap(), feasible.len() as u64);
        let (best, all) = argmin(feasible, |s| total(&lengths(&heads, s, None), |d| d.clone()));
        let r = constrained_mla(&tree(&heads), &c, Unit::Words, &CostFunction::identity()).unwrap();
        prop_assert_eq!(exact(&r.min_cost), best);
        prop_assert_eq!(sequences(&r.optimal_orders), all);
    }

    #[test]
    fn projective_orders_are_exactly_the_noncrossing_ones(heads in arb_heads(1, 7)) {
        let t = tree(&heads);
        let mut got: Vec<Vec<usize>> = enumerate_projective(&t).unwrap().map(|l| l.sequence().to_vec()).collect();
        got.sort();
        let expected: Vec<Vec<usize>> = permutations(heads.len()).into_iter().filter(|s| projective_by_crossings(&heads, s)).collect();
        prop_assert_eq!(projective_order_count(&t), expected.len() as u128);
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn no_order_beats_the_optimum((heads, order, _) in arb_instance(1, 8)) {
        let t = tree(&heads);
        let g = CostFunction::power(2.0).unwrap();
        let r = brute_force_mla(&t, Unit::Words, &g, None).unwrap();
        let observed = order_cost(&t, &lin(&order), Unit::Words, &g).unwrap();
        prop_assert!(exact(&observed) >= exact(&r.min_cost));
        prop_assert!(exact(&gap_ratio(&observed, &r.min_cost)) >= int(1));
    }
}

#[test]
fn projective_solver_against_enumeration_on_random_trees() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..200 {
        let n = rng.gen_range(1..=9);
        let heads = random_heads(n, &mut rng);
        let t = tree(&heads);
        let fast = projective_mla(&t);
        let best = enumerate_projective(&t)
            .unwrap()
            .map(|l| total(&lengths(&heads, l.sequence(), None), |d| d.clone()))
            .min()
            .unwrap();
        assert_eq!(exact(&fast.min_cost), best, "heads {heads:?}");
        assert!(projective_by_crossings(&heads, fast.representative().sequence()));
        let full = projective_enumeration_mla(&t, Unit::Words, &CostFunction::identity()).unwrap();
        assert_eq!(exact(&full.min_cost), best);
        assert!(full.optimal_orders.contains(fast.representative()));
    }
}

#[test]
fn unconstrained_optimum_never_exceeds_projective_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..40 {
        let n = rng.gen_range(2..=8);
        let t = tree(&random_heads(n, &mut rng));
        let free = brute_force_mla(&t, Unit::Words, &CostFunction::identity(), None).unwrap();
        let proj = projective_mla(&t);
        assert!(exact(&free.min_cost) <= exact(&proj.min_cost));
    }
}

#[test]
fn size_guards() {
    let heads: Vec<usize> = (0..11).map(|i| if i == 0 { 0 } else { 1 }).collect();
    let t = tree(&heads);
    assert_eq!(
        brute_force_mla(&t, Unit::Words, &CostFunction::identity(), None).unwrap_err(),
        OptimizeError::TooLarge { n: 11, max: 10 }
    );
    let heads: Vec<usize> = (0..13).collect();
    assert!(matches!(
        enumerate_projective(&tree(&heads)),
        Err(OptimizeError::TooLarge { n: 13, .. })
    ));
}

#[test]
fn contradictory_pairs_are_infeasible() {
    let c = PrecedenceConstraint::new().precede(0, 1).precede(1, 2).precede(2, 0);
    assert_eq!(
        constrained_mla(&tree(&[0, 1, 1]), &c, Unit::Words, &CostFunction::identity()).unwrap_err(),
        OptimizeError::InfeasibleConstraints
    );
}
