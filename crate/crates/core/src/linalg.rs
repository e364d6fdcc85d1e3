//! Exact Gaussian elimination over `BigRational`.

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Reduced row echelon form of a dense matrix, with pivot columns.
///
/// Pivoting is deterministic: for each column the first row (from the current
/// pivot row down) with a nonzero entry is chosen.
pub struct RowEchelon {
    pub rows: Vec<Vec<BigRational>>,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl RowEchelon {
    pub fn new(mut rows: Vec<Vec<BigRational>>, cols: usize) -> Self {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows.len() {
                break;
            }
            let Some(found) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, found);
            let inv = rows[r][c].recip();
            if !inv.is_one() {
                for v in rows[r].iter_mut().skip(c) {
                    if !v.is_zero() {
                        *v *= &inv;
                    }
                }
            }
            let pivot_row = std::mem::take(&mut rows[r]);
            let support: Vec<usize> = (c..cols).filter(|&j| !pivot_row[j].is_zero()).collect();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == r || row.is_empty() || row[c].is_zero() {
                    continue;
                }
                let factor = row[c].clone();
                for &j in &support {
                    let delta = &factor * &pivot_row[j];
                    row[j] -= delta;
                }
            }
            rows[r] = pivot_row;
            pivots.push(c);
            r += 1;
        }
        Self { rows, pivots, cols }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// A basis of the null space: one vector per free column, with a 1 in
    /// that column.
    pub fn kernel(&self) -> Vec<Vec<BigRational>> {
        let mut is_pivot = vec![false; self.cols];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![BigRational::zero(); self.cols];
                v[f] = BigRational::one();
                for (row, &pc) in self.rows.iter().zip(&self.pivots) {
                    if !row[f].is_zero() {
                        v[pc] = -row[f].clone();
                    }
                }
                v
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect())
            .collect()
    }

    fn apply(rows: &[Vec<BigRational>], v: &[BigRational]) -> Vec<BigRational> {
        rows.iter()
            .map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    #[test]
    fn kernel_of_small_matrix() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let e = RowEchelon::new(a.clone(), 3);
        assert_eq!(e.rank(), 1);
        let k = e.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(apply(&a, v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn full_rank_has_trivial_kernel() {
        let a = m(&[&[0, 1], &[1, 0]]);
        let e = RowEchelon::new(a, 2);
        assert_eq!(e.rank(), 2);
        assert!(e.kernel().is_empty());
    }

    #[test]
    fn empty_rows() {
        let e = RowEchelon::new(Vec::new(), 4);
        assert_eq!(e.rank(), 0);
        assert_eq!(e.kernel().len(), 4);
    }
}
