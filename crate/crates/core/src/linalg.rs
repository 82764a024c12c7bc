//! Exact Gaussian elimination over the rationals.
//!
//! Row reduction, kernels, ranks and linear solves for the small dense
//! matrices this crate works with. No pivot scaling tricks: entries are
//! exact, so plain fraction arithmetic is already stable.

use num_traits::{One, Zero};

use crate::rat::{Mat, Rat, Vector};

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect()
}

pub fn transpose(a: &Mat) -> Mat {
    if a.is_empty() {
        return Vec::new();
    }
    let (m, n) = (a.len(), a[0].len());
    (0..n).map(|j| (0..m).map(|i| a[i][j].clone()).collect()).collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let m = a.len();
    let inner = if m > 0 { a[0].len() } else { 0 };
    let n = if b.is_empty() { 0 } else { b[0].len() };
    assert_eq!(inner, b.len(), "matrix product shape mismatch");
    let mut out = vec![vec![Rat::zero(); n]; m];
    for i in 0..m {
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

pub fn mat_vec(a: &Mat, x: &[Rat]) -> Vector {
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), x.len(), "matrix-vector shape mismatch");
            row.iter().zip(x).map(|(r, xi)| r * xi).fold(Rat::zero(), |s, t| s + t)
        })
        .collect()
}

/// Reduced row echelon form; returns the echelon matrix and pivot columns.
pub fn rref(a: &Mat) -> (Mat, Vec<usize>) {
    let mut m = a.clone();
    let rows = m.len();
    let cols = if rows > 0 { m[0].len() } else { 0 };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].clone();
        for j in c..cols {
            let v = &m[r][j] / &inv;
            m[r][j] = v;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let v = &m[i][j] - &f * &m[r][j];
                    m[i][j] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank(a: &Mat) -> usize {
    rref(a).1.len()
}

/// Basis of the null space `{x : a x = 0}`; one vector per free column,
/// in column order, so the basis is deterministic.
pub fn kernel_basis(a: &Mat) -> Vec<Vector> {
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    let (e, pivots) = rref(a);
    let pivot_rows: Vec<(usize, usize)> = pivots.iter().copied().enumerate().map(|(r, c)| (c, r)).collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); cols];
        v[free] = Rat::one();
        for &(pc, pr) in &pivot_rows {
            v[pc] = -e[pr][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// One solution of `a x = b` if the system is consistent.
pub fn solve(a: &Mat, b: &[Rat]) -> Option<Vector> {
    let rows = a.len();
    assert_eq!(rows, b.len(), "solve shape mismatch");
    let cols = if rows > 0 { a[0].len() } else { 0 };
    let mut aug: Mat = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    if rows == 0 {
        return Some(vec![Rat::zero(); cols]);
    }
    let (e, pivots) = rref(&aug);
    if pivots.contains(&cols) {
        return None; // pivot in the augmented column: inconsistent
    }
    aug = e;
    let mut x = vec![Rat::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

/// Whether `target` lies in the rational span of `vectors`.
pub fn in_span(vectors: &[Vector], target: &[Rat]) -> bool {
    if vectors.is_empty() {
        return target.iter().all(|x| x.is_zero());
    }
    let cols: Mat = transpose(&vectors.to_vec());
    solve(&cols, target).is_some()
}

/// Coefficients expressing `target` over `vectors`, when they exist.
pub fn span_coefficients(vectors: &[Vector], target: &[Rat]) -> Option<Vector> {
    if vectors.is_empty() {
        return if target.iter().all(|x| x.is_zero()) { Some(Vec::new()) } else { None };
    }
    let cols: Mat = transpose(&vectors.to_vec());
    solve(&cols, target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn m(rows: &[&[i64]]) -> Mat {
        rows.iter().map(|r| r.iter().map(|&x| rat_int(x)).collect()).collect()
    }

    #[test]
    fn rref_and_rank() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(rank(&a), 2);
        let (e, pivots) = rref(&a);
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(e[0], vec![rat_int(1), rat_int(0), rat_int(1)]);
    }

    #[test]
    fn kernel_annihilates() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 1);
        for v in &k {
            assert!(mat_vec(&a, v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = m(&[&[1, 1], &[1, -1]]);
        let x = solve(&a, &[rat_int(3), rat_int(1)]).unwrap();
        assert_eq!(x, vec![rat_int(2), rat_int(1)]);
        let singular = m(&[&[1, 1], &[2, 2]]);
        assert!(solve(&singular, &[rat_int(1), rat_int(3)]).is_none());
        assert!(solve(&singular, &[rat_int(1), rat_int(2)]).is_some());
    }

    #[test]
    fn span_membership() {
        let basis = vec![vec![rat_int(1), rat_int(0), rat_int(1)], vec![rat_int(0), rat_int(1), rat_int(1)]];
        assert!(in_span(&basis, &[rat_int(2), rat_int(3), rat_int(5)]));
        assert!(!in_span(&basis, &[rat_int(0), rat_int(0), rat_int(1)]));
        let c = span_coefficients(&basis, &[rat_int(2), rat_int(3), rat_int(5)]).unwrap();
        assert_eq!(c, vec![rat_int(2), rat_int(3)]);
    }

    #[test]
    fn mat_mul_associates_with_rationals() {
        let a = vec![vec![rat(1, 2), rat_int(1)], vec![rat_int(0), rat(2, 3)]];
        let i = identity(2);
        assert_eq!(mat_mul(&a, &i), a);
        assert_eq!(mat_mul(&i, &a), a);
    }
}
