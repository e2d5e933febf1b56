use netlocal::polysos::{
    build_model_table, derived_g, probability_from_signs, MultiPoly, Var, SIGN_PATTERNS, VAR_COUNT,
};
use netlocal::scalar::{int, rat};
use netlocal::Rational;
use proptest::prelude::*;

fn point() -> impl Strategy<Value = [Rational; VAR_COUNT]> {
    prop::collection::vec((-6i64..7, 1i64..5), VAR_COUNT).prop_map(|v| std::array::from_fn(|k| rat(v[k].0, v[k].1)))
}

/// Sum of up to six terms in three variables with exponents below 3.
fn poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((-5i64..6, 0u32..3, 0u32..3, 0u32..3), 0..6).prop_map(|terms| {
        terms.into_iter().fold(MultiPoly::zero(), |acc, (c, e, x, z)| {
            acc + MultiPoly::var(Var::Eta).pow(e)
                * MultiPoly::var(Var::XiBar).pow(x)
                * MultiPoly::var(Var::ZetaBar).pow(z)
                * MultiPoly::int(c)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn evaluation_is_a_ring_homomorphism(p in poly(), q in poly(), x in point()) {
        prop_assert_eq!((&p + &q).eval(&x), p.eval(&x) + q.eval(&x));
        prop_assert_eq!((&p * &q).eval(&x), p.eval(&x) * q.eval(&x));
        prop_assert_eq!(&p - &p, MultiPoly::zero());
    }

    #[test]
    fn substitution_matches_evaluation(p in poly(), q in poly(), x in point()) {
        let mut y = x.clone();
        y[Var::XiBar as usize] = q.eval(&x);
        prop_assert_eq!(p.substitute(Var::XiBar, &q).eval(&x), p.eval(&y));
    }

    #[test]
    fn sign_probabilities_sum_to_one(x in point()) {
        let table = build_model_table();
        let total: Rational = (0..64usize)
            .map(|k| {
                let signs = std::array::from_fn(|j| if k >> (5 - j) & 1 == 1 { -1 } else { 1 });
                probability_from_signs(&table, signs, false).eval(&x)
            })
            .sum();
        prop_assert_eq!(total, int(1));
    }

    #[test]
    fn g_is_sixty_four_times_the_probability(x in point(), k in 1usize..=6) {
        let mut y = x.clone();
        y[Var::XiBar as usize] = int(1) - &x[Var::Xi as usize];
        y[Var::ZetaBar as usize] = int(1) + &x[Var::Zeta as usize];
        let p = probability_from_signs(&build_model_table(), SIGN_PATTERNS[k - 1], false).eval(&x);
        prop_assert_eq!(derived_g(k).eval(&y), p * int(64));
    }
}
