//! Dense Gaussian elimination over a finite field, sized for the small
//! systems that appear here: generator matrices, kernel constraints, and
//! 3×3 Gram matrices.

use crate::fields::{FieldSpec, Felt};

/// Row rank, consuming the matrix. Rows may have any equal length.
pub fn rank(field: &FieldSpec, mut rows: Vec<Vec<Felt>>) -> usize {
    let nrows = rows.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = rows[0].len();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(pivot) = (rank..nrows).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = field.inv(rows[rank][col]);
        for i in rank + 1..nrows {
            if rows[i][col].is_zero() {
                continue;
            }
            let factor = field.mul(rows[i][col], inv);
            for j in col..ncols {
                let t = field.mul(factor, rows[rank][j]);
                rows[i][j] = field.sub(rows[i][j], t);
            }
        }
        rank += 1;
    }
    rank
}

/// Basis of the right null space {v : A·v = 0}, where every row of
/// `constraints` is one linear condition on `ncols` unknowns. With no
/// constraints the basis is the standard one.
pub fn nullspace(field: &FieldSpec, constraints: &[Vec<Felt>], ncols: usize) -> Vec<Vec<Felt>> {
    let mut rows: Vec<Vec<Felt>> = constraints
        .iter()
        .filter(|r| r.iter().any(|c| !c.is_zero()))
        .cloned()
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == rows.len() {
            break;
        }
        let Some(pr) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = field.inv(rows[rank][col]);
        for j in col..ncols {
            rows[rank][j] = field.mul(rows[rank][j], inv);
        }
        for i in 0..rows.len() {
            if i != rank && !rows[i][col].is_zero() {
                let f = rows[i][col];
                for j in col..ncols {
                    let t = field.mul(f, rows[rank][j]);
                    rows[i][j] = field.sub(rows[i][j], t);
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }

    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in 0..ncols {
        if is_pivot[free] {
            continue;
        }
        let mut v = vec![Felt::ZERO; ncols];
        v[free] = Felt::ONE;
        for (prow, &pcol) in pivots.iter().enumerate() {
            v[pcol] = field.neg(rows[prow][free]);
        }
        basis.push(v);
    }
    basis
}
