//! Exact Gaussian elimination over the rationals.

use num_traits::Zero;

use crate::rational::Rational;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut [Vec<Rational>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Some solution `c` of `sum_j c_j * columns[j] = target`, or `None` when the
/// system is inconsistent. Free variables are set to zero, so the solution is
/// the unique one whenever the columns are independent.
pub fn solve_columns(columns: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let k = columns.len();
    let mut rows: Vec<Vec<Rational>> = (0..target.len())
        .map(|i| {
            let mut row: Vec<Rational> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut rows);
    if pivots.last() == Some(&k) {
        return None;
    }
    let mut sol = vec![Rational::zero(); k];
    for (r, &col) in pivots.iter().enumerate() {
        sol[col] = rows[r][k].clone();
    }
    Some(sol)
}

/// For linearly independent `gens`, the rows `h_j` of the dual basis inside
/// their span: `h_j · gens[i] = [i == j]`, and `h_j · x` is the `j`-th
/// coordinate of any `x` in the span.
pub fn dual_basis(gens: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let r = gens.len();
    let dim = gens.first().map_or(0, Vec::len);
    // [G | M] with G the Gram matrix; row reduction yields [I | G^{-1} M].
    let mut rows: Vec<Vec<Rational>> = (0..r)
        .map(|i| {
            let mut row: Vec<Rational> =
                (0..r).map(|j| crate::rational::dot(&gens[i], &gens[j])).collect();
            row.extend(gens[i].iter().cloned());
            row
        })
        .collect();
    let pivots = rref(&mut rows);
    if pivots.len() < r || pivots.iter().any(|&p| p >= r) {
        return None;
    }
    Some(rows.into_iter().map(|row| row[r..r + dim].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{dot, int};

    #[test]
    fn rank_and_solve() {
        let rows = vec![vec![int(1), int(2)], vec![int(2), int(4)], vec![int(0), int(1)]];
        assert_eq!(rank(&rows), 2);
        let cols = vec![vec![int(1), int(0), int(1)], vec![int(0), int(1), int(1)]];
        assert_eq!(solve_columns(&cols, &[int(2), int(3), int(5)]), Some(vec![int(2), int(3)]));
        assert_eq!(solve_columns(&cols, &[int(2), int(3), int(4)]), None);
    }

    #[test]
    fn dual_basis_inverts_on_span() {
        let gens = vec![vec![int(1), int(1), int(0)], vec![int(0), int(1), int(2)]];
        let h = dual_basis(&gens).unwrap();
        for (j, hj) in h.iter().enumerate() {
            for (i, g) in gens.iter().enumerate() {
                assert_eq!(dot(hj, g), int((i == j) as i64));
            }
        }
        assert!(dual_basis(&[vec![int(1), int(2)], vec![int(2), int(4)]]).is_none());
    }
}
