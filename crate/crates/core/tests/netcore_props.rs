use netlocal::finitemodel::{evaluate, FiniteLocalModel};
use netlocal::netcore::{affine_dimension, cardinality_bound_refined, is_nonsignaling, Network, Party};
use netlocal::scalar::rat;
use proptest::prelude::*;

/// Up to four parties with alphabets up to 3 and a random valid incidence matrix.
fn any_network() -> impl Strategy<Value = Network> {
    (1usize..=4, 1usize..=3).prop_flat_map(|(m, n)| {
        (
            prop::collection::vec((1usize..=3, 1usize..=3), m),
            prop::collection::vec(prop::collection::vec(any::<bool>(), n), m),
        )
            .prop_filter_map("every party and source connected", move |(alph, inc)| {
                let parties = alph.iter().map(|&(x, a)| Party::new(x, a)).collect();
                Network::new(parties, inc).ok()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn behavior_index_round_trips(net in any_network()) {
        for k in 0..net.dimension() {
            let (x, a) = net.behavior_unindex(k).unwrap();
            prop_assert_eq!(net.behavior_index(&x, &a).unwrap(), k);
        }
    }

    #[test]
    fn affine_dimension_is_monotone(
        alph in prop::collection::vec((1usize..4, 1usize..4), 1..5),
        pick in any::<prop::sample::Index>(),
        grow_input in any::<bool>(),
    ) {
        let (x, a): (Vec<usize>, Vec<usize>) = alph.iter().copied().unzip();
        let i = pick.index(x.len());
        let (mut x2, mut a2) = (x.clone(), a.clone());
        if grow_input { x2[i] += 1 } else { a2[i] += 1 }
        prop_assert!(affine_dimension(&x2, &a2) >= affine_dimension(&x, &a));
    }

    #[test]
    fn refined_bound_is_at_most_the_affine_dimension(net in any_network()) {
        let all = affine_dimension(&net.input_sizes(), &net.output_sizes());
        for j in 0..net.source_count() {
            prop_assert!(cardinality_bound_refined(&net, j).unwrap().value <= all);
        }
    }

    #[test]
    fn evaluated_models_pass_the_nonsignaling_check(net in any_network(), seed in prop::collection::vec(0i64..4, 256)) {
        let mut next = seed.into_iter().cycle();
        let cards = vec![2; net.source_count()];
        let mut draw = |n: usize| {
            let raw: Vec<i64> = (0..n).map(|_| next.next().unwrap() + 1).collect();
            let total: i64 = raw.iter().sum();
            raw.iter().map(|&r| rat(r, total)).collect::<Vec<_>>()
        };
        let sources = cards.iter().map(|&c| draw(c)).collect();
        let m = FiniteLocalModel::try_from_fn(net.clone(), sources, |i, _, _| Ok(draw(net.party(i).outputs))).unwrap();
        prop_assert!(is_nonsignaling(&evaluate(&m).unwrap()).nonsignaling);
    }
}
