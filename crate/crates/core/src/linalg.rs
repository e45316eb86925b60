//! Dense exact-rational matrices: rank, kernel, determinant.
//!
//! Sizes here are small (graded pieces, Euler matrices), so plain Gaussian
//! elimination over `BigRational` is the right tool.

use num::bigint::BigInt;
use num::{One, Signed, Zero};

use crate::rat::Q;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Q>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        QMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn at(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows);
        let mut out = QMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.at(k, j);
                    let cur = out.at(i, j).clone();
                    out.set(i, j, cur + add);
                }
            }
        }
        out
    }

    /// Row echelon form in place; returns the pivot columns.
    fn echelon(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.at(r, col).is_zero()) else {
                continue;
            };
            for c in 0..self.cols {
                self.data.swap(row * self.cols + c, p * self.cols + c);
            }
            let inv = self.at(row, col).clone();
            for c in col..self.cols {
                let v = self.at(row, c).clone() / inv.clone();
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r != row && !self.at(r, col).is_zero() {
                    let f = self.at(r, col).clone();
                    for c in col..self.cols {
                        let v = self.at(r, c).clone() - f.clone() * self.at(row, c);
                        self.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.echelon().len()
    }

    /// Basis of the right kernel {v : M v = 0}, one column vector per entry.
    pub fn kernel_basis(&self) -> Vec<Vec<Q>> {
        let mut m = self.clone();
        let pivots = m.echelon();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![Q::zero(); self.cols];
            v[f] = Q::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -m.at(i, f).clone();
            }
            basis.push(v);
        }
        basis
    }

    pub fn det(&self) -> Q {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Q::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m.at(r, col).is_zero()) else {
                return Q::zero();
            };
            if p != col {
                for c in 0..n {
                    m.data.swap(col * n + c, p * n + c);
                }
                det = -det;
            }
            let piv = m.at(col, col).clone();
            det *= piv.clone();
            for r in col + 1..n {
                if m.at(r, col).is_zero() {
                    continue;
                }
                let f = m.at(r, col).clone() / piv.clone();
                for c in col..n {
                    let v = m.at(r, c).clone() - f.clone() * m.at(col, c);
                    m.set(r, c, v);
                }
            }
        }
        det
    }
}

/// Determinant of an integer matrix, exact.
pub fn int_det(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    let rows: Vec<Vec<Q>> = m
        .iter()
        .map(|r| {
            assert_eq!(r.len(), n, "determinant of non-square matrix");
            r.iter().map(|&x| crate::rat::qi(x)).collect()
        })
        .collect();
    if n == 0 {
        return BigInt::one();
    }
    let d = QMat::from_rows(rows).det();
    assert!(d.denom().is_one());
    d.numer().clone()
}

/// |det| == 1 test for an integer matrix.
pub fn is_unimodular(m: &[Vec<i64>]) -> bool {
    int_det(m).abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{q, qi};

    #[test]
    fn rank_and_kernel() {
        let m = QMat::from_rows(vec![
            vec![qi(1), qi(2), qi(3)],
            vec![qi(2), qi(4), qi(6)],
            vec![qi(1), qi(0), qi(1)],
        ]);
        assert_eq!(m.rank(), 2);
        let ker = m.kernel_basis();
        assert_eq!(ker.len(), 1);
        for row in 0..3 {
            let mut s = Q::zero();
            for c in 0..3 {
                s += m.at(row, c) * &ker[0][c];
            }
            assert!(s.is_zero());
        }
    }

    #[test]
    fn det_values() {
        let m = QMat::from_rows(vec![vec![q(1, 2), qi(1)], vec![qi(1), qi(4)]]);
        assert_eq!(m.det(), qi(1));
        assert_eq!(int_det(&[vec![2, 0], vec![0, 3]]), BigInt::from(6));
        assert!(is_unimodular(&[vec![1, 5], vec![0, -1]]));
        assert!(!is_unimodular(&[vec![2, 0], vec![0, 1]]));
    }
}
