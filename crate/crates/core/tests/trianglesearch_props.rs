use netlocal::finitemodel::{evaluate, p_eq, p_neq, two_bit_triangle_model, FiniteLocalModel};
use netlocal::netcore::Network;
use netlocal::scalar::{int, rat};
use netlocal::trianglesearch::{
    achievable_supports, numeric_feasibility, possibilistic_feasible, support_mask, FeasibilityProblem, NumericConfig,
    NumericOutcome, SearchMode, SupportPattern, TriangleSymmetry,
};
use netlocal::Rational;
use proptest::prelude::*;

fn element() -> impl Strategy<Value = TriangleSymmetry> {
    (0usize..384).prop_map(|k| TriangleSymmetry::all()[k])
}

fn small_cards() -> impl Strategy<Value = [usize; 3]> {
    [1usize..=2, 1usize..=2, 1usize..=2]
}

/// Random exact triangle model whose entries are 0, 1/2 or 1.
fn model(cards: [usize; 3], raw: &[u8]) -> FiniteLocalModel<Rational> {
    let sources = cards.iter().map(|&c| (0..c).map(|_| rat(1, c as i64)).collect()).collect();
    FiniteLocalModel::from_fn(Network::triangle(), sources, |i, _, lam| {
        let p0 = rat(raw[i * 4 + lam[0] * 2 + lam[1]] as i64, 2);
        vec![p0.clone(), int(1) - p0]
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn symmetry_preserves_possible_outcomes(code in 0u64..3u64.pow(12), g in element()) {
        let p = SupportPattern::from_code(code);
        prop_assert_eq!(g.act_pattern(&p).possible_outcomes(), g.act_mask(p.possible_outcomes()));
    }

    #[test]
    fn symmetry_preserves_feasibility_of_a_target(mask in any::<u8>(), g in element()) {
        let mode = SearchMode::default();
        let before = possibilistic_feasible(mask, [2, 2, 2], mode).unwrap().is_feasible();
        let after = possibilistic_feasible(g.act_mask(mask), [2, 2, 2], mode).unwrap().is_feasible();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn symmetry_commutes_with_evaluation(cards in small_cards(), raw in prop::collection::vec(0u8..3, 12), g in element()) {
        let m = model(cards, &raw);
        let moved = evaluate(&g.act_model(&m).unwrap()).unwrap();
        prop_assert_eq!(moved, g.act_behavior(&evaluate(&m).unwrap()).unwrap());
    }

    #[test]
    fn dropping_a_zero_weight_value_keeps_the_behavior(raw in prop::collection::vec(0u8..3, 27), j in 0usize..3) {
        // source j gets a third value of weight 0; the (2, 2, 2) model is the same without it
        let mut it = raw.iter().cycle();
        let mut entries = std::collections::HashMap::new();
        let sources: Vec<Vec<Rational>> = (0..3)
            .map(|k| if k == j { vec![rat(1, 3), rat(2, 3), int(0)] } else { vec![rat(1, 2), rat(1, 2)] })
            .collect();
        let big = FiniteLocalModel::try_from_fn(Network::triangle(), sources, |i, _, lam| {
            let p0 = rat(*it.next().unwrap() as i64, 2);
            entries.insert((i, lam.to_vec()), p0.clone());
            Ok(vec![p0.clone(), int(1) - p0])
        })
        .unwrap();
        let small_sources: Vec<Vec<Rational>> = big.sources().iter().map(|w| w[..2].to_vec()).collect();
        let small = FiniteLocalModel::from_fn(Network::triangle(), small_sources, |i, _, lam| {
            let p0 = entries[&(i, lam.to_vec())].clone();
            vec![p0.clone(), int(1) - p0]
        })
        .unwrap();
        prop_assert_eq!(evaluate(&small).unwrap(), evaluate(&big).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn achievable_supports_grow_with_cards(small in small_cards(), bump in [0usize..=1, 0usize..=1, 0usize..=1]) {
        let large = [small[0].max(bump[0] + 1), small[1].max(bump[1] + 1), small[2].max(bump[2] + 1)];
        let a = achievable_supports(small, 531_441).unwrap();
        let b = achievable_supports(large, 531_441).unwrap();
        prop_assert!((0..256).all(|m| !a[m] || b[m]));
    }

    #[test]
    fn returned_models_reproduce_their_target(g in element()) {
        let known = SupportPattern::of_model(&two_bit_triangle_model()).unwrap();
        let target = g.act_behavior(&p_neq()).unwrap();
        let problem = FeasibilityProblem::new(g.act_pattern(&known), target.clone()).unwrap();
        let config = NumericConfig { starts: 200, ..NumericConfig::default() };
        match numeric_feasibility(&problem, &config) {
            NumericOutcome::Model { model, .. } => prop_assert_eq!(evaluate(&model).unwrap(), target),
            NumericOutcome::NoSolutionFound { .. } => prop_assert!(false, "image of the known pattern not solved"),
        }
    }
}

#[test]
fn equal_outputs_are_infeasible_at_every_small_cardinality() {
    let mask = support_mask(p_eq().values());
    for code in 0..8 {
        let cards = [1 + (code >> 2 & 1), 1 + (code >> 1 & 1), 1 + (code & 1)];
        let r = possibilistic_feasible(mask, cards, SearchMode::default()).unwrap();
        assert!(!r.is_feasible(), "{cards:?}");
    }
    for cards in [[3, 2, 2], [3, 3, 2], [3, 3, 3]] {
        let r = possibilistic_feasible(mask, cards, SearchMode::Pruned { node_cap: u64::MAX }).unwrap();
        assert!(!r.is_feasible(), "{cards:?}");
    }
}
