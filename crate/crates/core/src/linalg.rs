//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::scalar::Rational;

/// Reduced row echelon form of `rows` (row-major), returning the pivot columns.
pub fn rref(rows: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..ncols {
                    let delta = &f * &rows[r][j];
                    rows[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    rref(&mut rows.to_vec()).len()
}

/// A nonzero vector `c` with `M c = 0`, built from the lowest-index free column,
/// or `None` when the columns are independent.
pub fn null_vector(rows: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free = (0..ncols).find(|c| !pivots.contains(c))?;
    let mut v = vec![Rational::zero(); ncols];
    v[free] = Rational::one();
    for (r, &pc) in pivots.iter().enumerate() {
        v[pc] = -m[r][free].clone();
    }
    Some(v)
}

/// Affine dimension of a finite point set (`-1` is reported as `None` for an empty set).
pub fn affine_dimension(points: &[Vec<Rational>]) -> Option<usize> {
    let (first, rest) = points.split_first()?;
    let diffs: Vec<Vec<Rational>> = rest.iter().map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect()).collect();
    if diffs.is_empty() {
        return Some(0);
    }
    Some(rank(&diffs))
}

/// Solves the square system `M x = b`; `None` when `M` is singular.
pub fn solve(m: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = m.len();
    let mut aug: Vec<Vec<Rational>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n].clone()).collect())
}

/// Inverse of a square matrix; `None` when singular.
pub fn inverse(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut aug: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn rank_and_null_vector() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a), 2);
        let v = null_vector(&a).unwrap();
        for row in &a {
            let s: Rational = row.iter().zip(&v).map(|(x, y)| x * y).sum();
            assert!(s.is_zero());
        }
        assert!(null_vector(&m(&[&[1, 0], &[0, 1]])).is_none());
    }

    #[test]
    fn solve_and_invert() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let x = solve(&a, &[int(3), int(5)]).unwrap();
        assert_eq!(x, vec![rat(4, 5), rat(7, 5)]);
        let inv = inverse(&a).unwrap();
        assert_eq!(inv, vec![vec![rat(3, 5), rat(-1, 5)], vec![rat(-1, 5), rat(2, 5)]]);
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn affine_dimension_of_collinear_points() {
        let pts = m(&[&[0, 0], &[1, 1], &[2, 2]]);
        assert_eq!(affine_dimension(&pts), Some(1));
        assert_eq!(affine_dimension(&pts[..1]), Some(0));
        assert_eq!(affine_dimension(&[]), None);
    }
}
