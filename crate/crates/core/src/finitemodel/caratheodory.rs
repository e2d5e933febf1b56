use num_traits::{One, Zero};

use crate::error::{domain, Result};
use crate::linalg::null_vector;
use crate::scalar::Rational;

/// Reweights `points` so at most `affdim + 1` carry positive weight while the
/// weighted mean is unchanged.
///
/// Each step takes the affine dependency built from the lowest-index free
/// column among supported points and slides along it until the first weight
/// (smallest ratio, lowest index on ties) reaches zero.
pub fn caratheodory_reduce(points: &[Vec<Rational>], weights: &[Rational]) -> Result<Vec<Rational>> {
    if points.len() != weights.len() {
        return domain(format!("{} points but {} weights", points.len(), weights.len()));
    }
    let dim = points.first().map_or(0, Vec::len);
    if points.iter().any(|p| p.len() != dim) {
        return domain("points have different lengths");
    }
    if weights.iter().any(|w| w < &Rational::zero()) {
        return domain("weights must be nonnegative");
    }
    if !points.is_empty() && weights.iter().sum::<Rational>() != Rational::one() {
        return domain("weights must sum to 1");
    }

    let mut w = weights.to_vec();
    loop {
        let support: Vec<usize> = (0..w.len()).filter(|&k| !w[k].is_zero()).collect();
        // rows: coordinates, then the affine row of ones
        let mut rows: Vec<Vec<Rational>> =
            (0..dim).map(|r| support.iter().map(|&k| points[k][r].clone()).collect()).collect();
        rows.push(vec![Rational::one(); support.len()]);
        let Some(c) = null_vector(&rows) else {
            return Ok(w);
        };
        let mut best: Option<(usize, Rational)> = None;
        for (pos, ck) in c.iter().enumerate() {
            if ck > &Rational::zero() {
                let ratio = &w[support[pos]] / ck;
                if best.as_ref().is_none_or(|(_, b)| &ratio < b) {
                    best = Some((pos, ratio));
                }
            }
        }
        let (hit, t) = best.expect("a nonzero affine dependency has a positive entry");
        for (pos, ck) in c.iter().enumerate() {
            let k = support[pos];
            w[k] = if pos == hit { Rational::zero() } else { &w[k] - &t * ck };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::affine_dimension;
    use crate::scalar::{int, rat};

    fn mean(points: &[Vec<Rational>], w: &[Rational]) -> Vec<Rational> {
        let mut m = vec![Rational::zero(); points[0].len()];
        for (p, wk) in points.iter().zip(w) {
            for (a, b) in m.iter_mut().zip(p) {
                *a += wk * b;
            }
        }
        m
    }

    #[test]
    fn collinear_triple() {
        let pts = vec![vec![int(0), int(0)], vec![int(1), int(1)], vec![int(2), int(2)]];
        let w = vec![rat(1, 4), rat(1, 2), rat(1, 4)];
        let r = caratheodory_reduce(&pts, &w).unwrap();
        assert!(r.iter().filter(|x| !x.is_zero()).count() <= 2);
        assert_eq!(mean(&pts, &r), mean(&pts, &w));
    }

    #[test]
    fn independent_points_untouched() {
        let pts = vec![vec![int(0), int(0)], vec![int(1), int(0)], vec![int(0), int(1)]];
        let w = vec![rat(1, 3), rat(1, 3), rat(1, 3)];
        assert_eq!(caratheodory_reduce(&pts, &w).unwrap(), w);
    }

    #[test]
    fn mean_at_a_present_point() {
        let pts = vec![vec![int(0)], vec![int(1)], vec![int(2)]];
        let w = vec![rat(1, 2), int(0), rat(1, 2)];
        let r = caratheodory_reduce(&pts, &w).unwrap();
        assert_eq!(mean(&pts, &r), vec![int(1)]);
        assert!(r.iter().filter(|x| !x.is_zero()).count() <= 2);
    }

    #[test]
    fn twenty_points_in_dimension_seven() {
        // deterministic pseudo-random rationals
        let mut s = 17u64;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 33) % 11
        };
        let pts: Vec<Vec<Rational>> =
            (0..20).map(|_| (0..7).map(|_| rat(next() as i64 - 5, next() as i64 + 1)).collect()).collect();
        let raw: Vec<i64> = (0..20).map(|_| next() as i64 + 1).collect();
        let total: i64 = raw.iter().sum();
        let w: Vec<Rational> = raw.iter().map(|&r| rat(r, total)).collect();
        let r = caratheodory_reduce(&pts, &w).unwrap();
        let support = r.iter().filter(|x| !x.is_zero()).count();
        assert!(support <= affine_dimension(&pts).unwrap() + 1);
        assert!(support <= 8);
        assert!(r.iter().all(|x| x >= &Rational::zero()));
        assert_eq!(mean(&pts, &r), mean(&pts, &w));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(caratheodory_reduce(&[vec![int(0)]], &[]).is_err());
        assert!(caratheodory_reduce(&[vec![int(0)], vec![int(0), int(1)]], &[rat(1, 2), rat(1, 2)]).is_err());
        assert!(caratheodory_reduce(&[vec![int(0)]], &[rat(1, 2)]).is_err());
    }
}
