//! Exact linear algebra over `BigRational`: reduced row echelon form, rank,
//! nullspace bases, and dense multi-right-hand-side solves. Small matrices
//! only — everything here is O(rows·cols·rank) with exact arithmetic.

use num_rational::BigRational;
use num_traits::Zero;

pub type Mat = Vec<Vec<BigRational>>;

/// Reduce `m` to reduced row echelon form in place and return the pivot
/// column indices in order.
pub fn rref(m: &mut Mat) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = &*x / &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let delta = &m[r][j] * &f;
                    m[i][j] = &m[i][j] - &delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// Canonical nullspace basis of the linear map given by `m` (rows are
/// equations over `cols` unknowns): one vector per free column, with a 1 in
/// the free position, derived from the reduced echelon form. Deterministic
/// given the column order.
pub fn nullspace(m: &Mat, cols: usize) -> Vec<Vec<BigRational>> {
    let mut red = m.clone();
    let pivots = rref(&mut red);
    let pivot_of_col: Vec<Option<usize>> = {
        let mut v = vec![None; cols];
        for (row, &c) in pivots.iter().enumerate() {
            v[c] = Some(row);
        }
        v
    };
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut vec = vec![BigRational::zero(); cols];
        vec[free] = BigRational::from_integer(1.into());
        for (row, &pc) in pivots.iter().enumerate() {
            vec[pc] = -red[row][free].clone();
        }
        basis.push(vec);
    }
    basis
}

/// Solve `a · x = b` for a square invertible `a` with several right-hand
/// sides (`b` is rows × nrhs). Returns `None` when `a` is singular.
pub fn solve_multi(a: &Mat, b: &Mat) -> Option<Mat> {
    let n = a.len();
    let nrhs = b[0].len();
    let mut aug: Mat = (0..n)
        .map(|i| {
            let mut row = a[i].clone();
            row.extend(b[i].iter().cloned());
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(k, &c)| k != c) {
        return None;
    }
    Some(
        (0..n)
            .map(|i| aug[i][n..n + nrhs].to_vec())
            .collect(),
    )
}

/// Express `target` in terms of the rows of `basis` (each of length `dim`):
/// returns `x` with `Σ x_k · basis_k = target`, or `None` if inconsistent.
pub fn coordinates_in_rowspace(
    basis: &[Vec<BigRational>],
    target: &[BigRational],
) -> Option<Vec<BigRational>> {
    let k = basis.len();
    let dim = target.len();
    // Transposed system: dim equations, k unknowns, augmented with target.
    let mut aug: Mat = (0..dim)
        .map(|j| {
            let mut row: Vec<BigRational> = basis.iter().map(|b| b[j].clone()).collect();
            row.push(target[j].clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&k) {
        return None; // pivot in the augmented column: inconsistent
    }
    let mut x = vec![BigRational::zero(); k];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = aug[row][k].clone();
    }
    // With independent basis rows every unknown is a pivot; verify anyway.
    let mut check = vec![BigRational::zero(); dim];
    for (xk, b) in x.iter().zip(basis) {
        for (cj, bj) in check.iter_mut().zip(b) {
            *cj = &*cj + &(xk * bj);
        }
    }
    if check
        .iter()
        .zip(target)
        .all(|(u, v)| u == v)
    {
        Some(x)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn m(rows: &[&[i64]]) -> Mat {
        rows.iter()
            .map(|r| r.iter().map(|&x| ratio(x, 1)).collect())
            .collect()
    }

    #[test]
    fn rref_rank_nullspace() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 1, 1]]);
        let mut e = a.clone();
        assert_eq!(rref(&mut e).len(), 2);
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 1);
        // Verify a · v = 0.
        for row in &a {
            let dot: BigRational = row
                .iter()
                .zip(&ns[0])
                .map(|(x, y)| x * y)
                .sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn solve_and_coordinates() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let b = m(&[&[5], &[10]]);
        let x = solve_multi(&a, &b).unwrap();
        assert_eq!(x[0][0], ratio(1, 1));
        assert_eq!(x[1][0], ratio(3, 1));

        let basis = vec![
            vec![ratio(1, 1), ratio(0, 1), ratio(1, 1)],
            vec![ratio(0, 1), ratio(1, 1), ratio(1, 1)],
        ];
        let target = vec![ratio(2, 1), ratio(3, 1), ratio(5, 1)];
        let x = coordinates_in_rowspace(&basis, &target).unwrap();
        assert_eq!(x, vec![ratio(2, 1), ratio(3, 1)]);
        let bad = vec![ratio(1, 1), ratio(0, 1), ratio(0, 1)];
        assert!(coordinates_in_rowspace(&basis, &bad).is_none());
    }
}
