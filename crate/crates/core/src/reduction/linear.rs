//! Exact row reduction over the rationals.

use num_traits::{One, Zero};

use crate::arith::Q;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<Q>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Q::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{v : rows · v = 0}`, one vector per free column in increasing
/// column order. The vector for free column `f` has `v[f] = 1`, vanishes on
/// the other free columns, and is supported on columns `<= f`.
pub fn nullspace(mut rows: Vec<Vec<Q>>, ncols: usize) -> Vec<Vec<Q>> {
    let pivots = rref(&mut rows, ncols);
    let mut out = Vec::new();
    let mut pi = 0;
    for f in 0..ncols {
        if pi < pivots.len() && pivots[pi] == f {
            pi += 1;
            continue;
        }
        let mut v = vec![Q::zero(); ncols];
        v[f] = Q::one();
        for (row, &p) in rows.iter().zip(&pivots) {
            if !row[f].is_zero() {
                v[p] = -row[f].clone();
            }
        }
        out.push(v);
    }
    out
}
