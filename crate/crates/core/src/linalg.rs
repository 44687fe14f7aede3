//! Dense linear algebra over a `FieldTable`.

use crate::field::{FieldElement, FieldTable};

#[inline]
pub fn dot(f: &FieldTable, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

/// Reduces `rows` in place to reduced row-echelon form and returns the pivot
/// columns. Non-zero rows come first; zero rows are truncated.
pub fn rref(f: &FieldTable, rows: &mut Vec<Vec<FieldElement>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(sel) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = f.inv_nonzero(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let factor = row[c];
            for (x, &pv) in row.iter_mut().zip(&pivot_row) {
                *x = f.sub(*x, f.mul(factor, pv));
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of the right null space of the matrix with the given rows.
///
/// For an RREF input the basis vector attached to free column `c` has a 1 in
/// column `c`, zeros in the other free columns, and the negated row entries
/// in the pivot columns.
pub fn kernel(f: &FieldTable, rows: &[Vec<FieldElement>], ncols: usize) -> Vec<Vec<FieldElement>> {
    let mut m = rows.to_vec();
    let pivots = rref(f, &mut m);
    let mut basis = Vec::new();
    for c in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0; ncols];
        v[c] = 1;
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = f.neg(row[c]);
        }
        basis.push(v);
    }
    basis
}

pub fn rank(f: &FieldTable, rows: &[Vec<FieldElement>]) -> usize {
    let mut m = rows.to_vec();
    rref(f, &mut m).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_annihilates_rows() {
        let f = FieldTable::with_order(9).unwrap();
        let rows = vec![vec![1, 3, 0, 5, 2], vec![2, 6, 1, 1, 0], vec![3, 0, 1, 6, 2]];
        let ker = kernel(&f, &rows, 5);
        assert_eq!(ker.len() + rank(&f, &rows), 5);
        for v in &ker {
            for r in &rows {
                assert_eq!(dot(&f, r, v), 0);
            }
        }
    }

    #[test]
    fn rref_is_canonical_for_same_row_space() {
        let f = FieldTable::with_order(5).unwrap();
        let mut a = vec![vec![1, 2, 3, 4], vec![0, 1, 1, 1]];
        let mut b = vec![vec![1, 3, 4, 0], vec![2, 4, 1, 3]];
        // b rows: a0 + a1, 2*a0
        rref(&f, &mut a);
        rref(&f, &mut b);
        assert_eq!(a, b);
    }

    #[test]
    fn dependent_rows_truncate() {
        let f = FieldTable::with_order(3).unwrap();
        let mut m = vec![vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 0]];
        let piv = rref(&f, &mut m);
        assert_eq!(piv, vec![0]);
        assert_eq!(m, vec![vec![1, 2, 0]]);
    }
}
