use std::collections::BTreeSet;

use netlocal::bellpoly::{enumerate_strategies, facet_enumeration, membership_lp, CollinsGisin, Membership};
use netlocal::linalg::null_vector;
use netlocal::netcore::{Behavior, Network, Party};
use netlocal::scalar::{dot, int, primitive_integer, rat};
use netlocal::Rational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn chsh() -> Network {
    Network::bell(vec![Party::new(2, 2); 2]).unwrap()
}

/// The eight PR-type boxes `a ⊕ b = xy ⊕ αx ⊕ βy ⊕ γ`.
fn pr_boxes() -> Vec<Vec<Rational>> {
    (0..8)
        .map(|s| {
            let (al, be, ga) = (s >> 2 & 1, s >> 1 & 1, s & 1);
            (0..16)
                .map(|k| {
                    let (x, y, a, b) = (k >> 3 & 1, k >> 2 & 1, k >> 1 & 1, k & 1);
                    if a ^ b == (x & y) ^ (al & x) ^ (be & y) ^ ga {
                        rat(1, 2)
                    } else {
                        int(0)
                    }
                })
                .collect()
        })
        .collect()
}

fn homogenized_vertices() -> Vec<Vec<Rational>> {
    let chart = CollinsGisin::new(&chsh());
    enumerate_strategies(&chsh())
        .unwrap()
        .columns()
        .iter()
        .map(|c| std::iter::once(Rational::one()).chain(chart.project(c.values())).collect())
        .collect()
}

/// Every hyperplane through 8 affinely independent vertices with all vertices on one side.
fn brute_force_facets() -> BTreeSet<Vec<Rational>> {
    let verts = homogenized_vertices();
    let mut found = BTreeSet::new();
    let n = verts.len();
    for mask in 0u32..1 << n {
        if mask.count_ones() != 8 {
            continue;
        }
        let rows: Vec<Vec<Rational>> = (0..n).filter(|k| mask >> k & 1 == 1).map(|k| verts[k].clone()).collect();
        if netlocal::linalg::rank(&rows) != 8 {
            continue;
        }
        let h = null_vector(&rows).unwrap();
        let vals: Vec<Rational> = verts.iter().map(|v| dot(&h, v)).collect();
        let h = if vals.iter().all(|v| !v.is_negative()) {
            h
        } else if vals.iter().all(|v| !v.is_positive()) {
            h.iter().map(|x| -x).collect()
        } else {
            continue;
        };
        found.insert(primitive_integer(&h));
    }
    found
}

#[test]
fn chsh_facets_match_brute_force() {
    let facets = facet_enumeration(&chsh()).unwrap();
    let ours: BTreeSet<Vec<Rational>> =
        facets.iter().map(|f| std::iter::once(-f.constant.clone()).chain(f.cg.iter().cloned()).collect()).collect();
    let oracle = brute_force_facets();
    assert_eq!(oracle.len(), 24);
    assert_eq!(ours, oracle);
}

#[test]
fn chsh_facets_are_positivity_or_chsh() {
    let strategies = enumerate_strategies(&chsh()).unwrap();
    let verts = homogenized_vertices();
    let mut chsh_type = 0;
    for f in facet_enumeration(&chsh()).unwrap() {
        let h: Vec<Rational> = std::iter::once(-f.constant.clone()).chain(f.cg.iter().cloned()).collect();
        let range: BTreeSet<Rational> = verts.iter().map(|v| dot(&h, v)).collect();
        assert!(range.iter().all(|v| *v >= int(0) && *v <= int(3)), "{range:?}");
        assert_eq!(f.tight_dimension(&strategies), 7);
        for (k, col) in strategies.columns().iter().enumerate() {
            let value = dot(&f.xi, col.values());
            assert!(!value.is_negative());
            assert_eq!(value.is_zero(), f.tight.contains(&k));
        }
        if pr_boxes().iter().any(|p| dot(&f.xi, p).is_negative()) {
            chsh_type += 1;
        }
    }
    assert_eq!(chsh_type, 8);
}

#[test]
fn pr_box_certificate_is_a_chsh_facet() {
    let p = Behavior::new(chsh(), pr_boxes()[0].clone()).unwrap();
    let Membership::Nonlocal(cert) = membership_lp(&p).unwrap() else { panic!("PR box is nonlocal") };
    let strategies = enumerate_strategies(&chsh()).unwrap();
    assert!(cert.verify(&strategies, &p));
    let facets = facet_enumeration(&chsh()).unwrap();
    let facet = facets.iter().find(|f| f.tight == cert.tight_strategies).expect("certificate is a facet");
    assert_eq!(facet.tight_dimension(&strategies), 7);
    // full-coordinate vectors differ by terms constant on behaviors; compare on vertices
    let on_vertices = |xi: &[Rational]| -> Vec<Rational> {
        primitive_integer(&strategies.columns().iter().map(|c| dot(xi, c.values())).collect::<Vec<_>>())
    };
    assert_eq!(on_vertices(&facet.xi), on_vertices(&cert.xi));
}

fn weights(raw: &[u8]) -> Vec<Rational> {
    let total: i64 = raw.iter().map(|&r| r as i64).sum();
    raw.iter().map(|&r| rat(r as i64, total)).collect()
}

fn mix(parts: &[(&[Rational], Rational)]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); parts[0].0.len()];
    for (v, w) in parts {
        for (o, x) in out.iter_mut().zip(v.iter()) {
            *o += x * w;
        }
    }
    out
}

fn scenario() -> impl Strategy<Value = Network> {
    prop_oneof![
        Just(chsh()),
        Just(Network::bell(vec![Party::new(2, 2), Party::new(3, 2)]).unwrap()),
        Just(Network::bell(vec![Party::new(2, 3), Party::new(1, 2)]).unwrap()),
        Just(Network::bell(vec![Party::new(2, 2); 3]).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn local_mixtures_are_reproduced(net in scenario(), raw in prop::collection::vec(0u8..6, 64)) {
        let strategies = enumerate_strategies(&net).unwrap();
        let n = strategies.len();
        prop_assume!(raw[..n].iter().any(|&r| r > 0));
        let w = weights(&raw[..n]);
        let parts: Vec<(&[Rational], Rational)> =
            (0..n).map(|k| (strategies.column(k), w[k].clone())).collect();
        let p = Behavior::new(net.clone(), mix(&parts)).unwrap();
        let Membership::Local(q) = membership_lp(&p).unwrap() else {
            return Err(TestCaseError::fail("mixture classified nonlocal"));
        };
        prop_assert!(q.weights.iter().all(|x| !x.is_negative()));
        let back: Vec<(&[Rational], Rational)> =
            (0..n).map(|k| (strategies.column(k), q.weights[k].clone())).collect();
        prop_assert_eq!(mix(&back), p.values().to_vec());
    }

    #[test]
    fn lp_agrees_with_facets(
        raw in prop::collection::vec(0u8..4, 16),
        pr in 0usize..8,
        pr_weight in 0u8..8,
    ) {
        let net = chsh();
        let strategies = enumerate_strategies(&net).unwrap();
        prop_assume!(raw.iter().any(|&r| r > 0));
        let w = weights(&raw);
        let boxes = pr_boxes();
        let t = rat(pr_weight as i64, 7);
        let mut parts: Vec<(&[Rational], Rational)> =
            (0..16).map(|k| (strategies.column(k), &w[k] * (Rational::one() - &t))).collect();
        parts.push((&boxes[pr], t));
        let p = Behavior::new(net.clone(), mix(&parts)).unwrap();
        let facets = facet_enumeration(&net).unwrap();
        let inside = facets.iter().all(|f| !dot(&f.xi, p.values()).is_negative());
        match membership_lp(&p).unwrap() {
            Membership::Local(_) => prop_assert!(inside),
            Membership::Nonlocal(cert) => {
                prop_assert!(!inside);
                prop_assert!(cert.verify(&strategies, &p));
            }
        }
    }
}
