use num_traits::Zero;

use super::caratheodory::caratheodory_reduce;
use super::model::{conditional_family, FiniteLocalModel};
use crate::error::{domain, Result};
use crate::linalg::affine_dimension;
use crate::scalar::Rational;

#[derive(Clone, Debug)]
pub struct Compression {
    pub model: FiniteLocalModel<Rational>,
    /// Original values of the compressed source that survive, in their new order.
    pub kept: Vec<usize>,
    /// Distinct conditional behaviors among positive-weight values.
    pub distinct_points: usize,
    /// Affine dimension of those conditional behaviors.
    pub hull_dimension: usize,
}

/// Shrinks source `source` to at most `affdim(U) + 1` values without changing the
/// behavior, where `U` is the set of conditional behaviors `P_μ`.
pub fn compress_source(model: &FiniteLocalModel<Rational>, source: usize) -> Result<Compression> {
    let family = conditional_family(model, source)?;

    // merge duplicate P_μ onto their first occurrence
    let mut reps: Vec<usize> = Vec::new();
    let mut points: Vec<Vec<Rational>> = Vec::new();
    let mut weights: Vec<Rational> = Vec::new();
    for m in family.members.iter().filter(|m| !m.weight.is_zero()) {
        let v = m.behavior.values();
        match points.iter().position(|p| p.as_slice() == v) {
            Some(k) => weights[k] += &m.weight,
            None => {
                reps.push(m.value);
                points.push(v.to_vec());
                weights.push(m.weight.clone());
            }
        }
    }
    if points.is_empty() {
        return domain(format!("source {source} has no positive weight"));
    }
    let hull_dimension = affine_dimension(&points).unwrap_or(0);
    let reduced = caratheodory_reduce(&points, &weights)?;
    let (kept, new_weights): (Vec<usize>, Vec<Rational>) =
        reps.iter().zip(reduced).filter(|(_, w)| !w.is_zero()).map(|(&mu, w)| (mu, w)).unzip();
    Ok(Compression {
        model: model.restrict_source(source, &kept, new_weights),
        kept,
        distinct_points: points.len(),
        hull_dimension,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finitemodel::evaluate;
    use crate::netcore::{cardinality_bound_refined, Network};
    use crate::scalar::{int, rat};

    #[test]
    fn single_value_source_unchanged() {
        let m = FiniteLocalModel::from_fn(
            Network::triangle(),
            vec![vec![int(1)], vec![rat(1, 2), rat(1, 2)], vec![int(1)]],
            |i, _, lam| {
                if i == 0 && lam[0] == 1 {
                    vec![int(0), int(1)]
                } else {
                    vec![int(1), int(0)]
                }
            },
        )
        .unwrap();
        let c = compress_source(&m, 0).unwrap();
        assert_eq!(c.model, m);
        assert_eq!(c.kept, vec![0]);
    }

    #[test]
    fn equal_conditionals_collapse() {
        let m = FiniteLocalModel::from_fn(
            Network::triangle(),
            vec![vec![rat(1, 5); 5], vec![rat(1, 2), rat(1, 2)], vec![rat(1, 2), rat(1, 2)]],
            |i, _, lam| if i == 0 && lam[0] == 0 { vec![rat(1, 3), rat(2, 3)] } else { vec![int(1), int(0)] },
        )
        .unwrap();
        let c = compress_source(&m, 0).unwrap();
        assert_eq!(c.model.cards()[0], 1);
        assert_eq!(evaluate(&c.model).unwrap(), evaluate(&m).unwrap());
    }

    #[test]
    fn twenty_random_rows_compress_to_eight() {
        let mut s = 99u64;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 33) % 7 + 1
        };
        let net = Network::triangle();
        let mut resp = |n: usize| -> Vec<Rational> {
            (0..n)
                .flat_map(|_| {
                    let a = next() as i64;
                    let b = next() as i64;
                    [rat(a, a + b), rat(b, a + b)]
                })
                .collect()
        };
        // A reads (β, γ): 2·2 columns; B and C read α: 20·2 columns
        let responses = vec![resp(4), resp(40), resp(40)];
        let raw: Vec<i64> = (0..20).map(|_| next() as i64).collect();
        let total: i64 = raw.iter().sum();
        let sources =
            vec![raw.iter().map(|&r| rat(r, total)).collect(), vec![rat(1, 3), rat(2, 3)], vec![rat(3, 4), rat(1, 4)]];
        let m = FiniteLocalModel::new(net.clone(), sources, responses).unwrap();
        let c = compress_source(&m, 0).unwrap();
        assert!(c.model.cards()[0] <= 8);
        assert!(c.model.cards()[0] <= c.hull_dimension + 1);
        assert!(c.hull_dimension as u128 <= cardinality_bound_refined(&net, 0).unwrap().value);
        assert_eq!(evaluate(&c.model).unwrap(), evaluate(&m).unwrap());
        let again = compress_source(&c.model, 0).unwrap();
        assert_eq!(again.model, c.model);
    }
}
