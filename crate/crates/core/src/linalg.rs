//! Dense matrices over a [`Scalar`] with the elimination routines the
//! cohomology code needs: rank, reduced row echelon form, null spaces, linear
//! solves, inverses and positive-definiteness tests.
//!
//! For exact backends every routine is exact. For the approximate backend an
//! entry counts as zero when its magnitude is at most `tol * scale`, where
//! `scale` is the largest entry magnitude of the input (floored at one).

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::{scale_of, RealScalar, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    expected: c,
                    got: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[S]) -> Result<Vec<S>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect())
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                got: rhs.rows * rhs.cols,
            });
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        })
    }

    /// Rows `top` stacked over rows `bottom`.
    pub fn vstack(&self, bottom: &Self) -> Result<Self> {
        if self.cols != bottom.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: bottom.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend(bottom.data.iter().cloned());
        Ok(Matrix {
            rows: self.rows + bottom.rows,
            cols: self.cols,
            data,
        })
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.data.iter().all(|x| x.is_negligible(tol))
    }

    fn threshold(&self, tol: f64) -> f64 {
        tol * scale_of(&self.data)
    }

    /// Gauss-Jordan reduction; pivot columns are taken left to right.
    pub fn rref(&self, tol: f64) -> Rref<S> {
        let thr = self.threshold(tol);
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = m.pick_pivot(r, c, thr) else {
                for i in r..m.rows {
                    m[(i, c)] = S::zero();
                }
                continue;
            };
            m.swap_rows(r, p);
            let inv = S::one() / m[(r, c)].clone();
            for j in c..m.cols {
                m[(r, j)] = m[(r, j)].clone() * inv.clone();
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    m[(i, j)] = m[(i, j)].clone() - f.clone() * m[(r, j)].clone();
                }
                m[(i, c)] = S::zero();
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    fn pick_pivot(&self, from: usize, c: usize, thr: f64) -> Option<usize> {
        if S::EXACT {
            (from..self.rows).find(|&i| !self[(i, c)].is_zero())
        } else {
            let (best, mag) = (from..self.rows)
                .map(|i| (i, self[(i, c)].magnitude()))
                .fold((from, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            (mag > thr).then_some(best)
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Rank. Exact backends use Gauss-Jordan; the approximate backend uses
    /// complete pivoting with relative threshold `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        if S::EXACT {
            return self.rref(tol).pivots.len();
        }
        let thr = self.threshold(tol);
        let mut m = self.clone();
        let mut rank = 0;
        let (rows, cols) = (m.rows, m.cols);
        let mut col_order: Vec<usize> = (0..cols).collect();
        while rank < rows.min(cols) {
            let mut best = (rank, rank, -1.0);
            for i in rank..rows {
                for (jj, &j) in col_order.iter().enumerate().skip(rank) {
                    let v = m[(i, j)].magnitude();
                    if v > best.2 {
                        best = (i, jj, v);
                    }
                }
            }
            if best.2 <= thr {
                break;
            }
            m.swap_rows(rank, best.0);
            col_order.swap(rank, best.1);
            let pc = col_order[rank];
            let piv = m[(rank, pc)].clone();
            for i in rank + 1..rows {
                if m[(i, pc)].is_zero() {
                    continue;
                }
                let f = m[(i, pc)].clone() / piv.clone();
                for &j in &col_order[rank..] {
                    m[(i, j)] = m[(i, j)].clone() - f.clone() * m[(rank, j)].clone();
                }
            }
            rank += 1;
        }
        rank
    }

    /// Basis of the right null space: one vector per free column, with that
    /// column set to one and the other free columns zero.
    pub fn nullspace(&self, tol: f64) -> Vec<Vec<S>> {
        let rref = self.rref(tol);
        let free: Vec<usize> = (0..self.cols).filter(|c| !rref.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![S::zero(); self.cols];
                v[f] = S::one();
                for (r, &pc) in rref.pivots.iter().enumerate() {
                    v[pc] = -rref.matrix[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    /// A solution of `self * x = rhs`, or `None` when the system is
    /// inconsistent. Free variables are set to zero, so the support of the
    /// solution lies in the leftmost pivot columns.
    pub fn solve(&self, rhs: &[S], tol: f64) -> Result<Option<Vec<S>>> {
        if rhs.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: rhs.len(),
            });
        }
        let aug = Self::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                rhs[i].clone()
            }
        });
        let rref = aug.rref(tol);
        if rref.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![S::zero(); self.cols];
        for (r, &pc) in rref.pivots.iter().enumerate() {
            x[pc] = rref.matrix[(r, self.cols)].clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self, tol: f64) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                S::one()
            } else {
                S::zero()
            }
        });
        let rref = aug.rref(tol);
        if rref.pivots.len() < n || rref.pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        Ok(Self::from_fn(n, n, |i, j| rref.matrix[(i, n + j)].clone()))
    }

    /// Determinant by Gaussian elimination.
    pub fn determinant(&self) -> Result<S> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = S::one();
        for c in 0..n {
            let Some(p) = m.pick_pivot(c, c, 0.0) else {
                return Ok(S::zero());
            };
            if m[(p, c)].is_zero() {
                return Ok(S::zero());
            }
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = det * piv.clone();
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone() / piv.clone();
                for j in c..n {
                    m[(i, j)] = m[(i, j)].clone() - f.clone() * m[(c, j)].clone();
                }
            }
        }
        Ok(det)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)].approx_eq(&self[(j, i)], tol)))
    }
}

impl<S: RealScalar> Matrix<S> {
    /// Positive definiteness of a symmetric matrix via symmetric elimination
    /// without pivoting: every pivot must be positive. The k-th pivot equals
    /// the ratio of consecutive leading principal minors, so for exact input
    /// this is the leading-minor criterion; for doubles it is the
    /// square-root-free form of Cholesky.
    pub fn is_positive_definite(&self, tol: f64) -> bool {
        if !self.is_symmetric(tol) {
            return false;
        }
        let thr = self.threshold(tol);
        let n = self.rows;
        let mut m = self.clone();
        for c in 0..n {
            let piv = m[(c, c)].clone();
            if !piv.is_positive(thr) {
                return false;
            }
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone() / piv.clone();
                for j in c..n {
                    m[(i, j)] = m[(i, j)].clone() - f.clone() * m[(c, j)].clone();
                }
            }
        }
        true
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Rref<S> {
    pub matrix: Matrix<S>,
    pub pivots: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_traits::Zero;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from_i64(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn exact_rank_and_nullspace() {
        let m = qm(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(0.0), 2);
        let ns = m.nullspace(0.0);
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).unwrap().iter().all(|x| x.is_zero()));
    }

    #[test]
    fn float_rank_uses_relative_threshold() {
        let m = Matrix::from_rows(vec![vec![1.0, 1.0], vec![1.0, 1.0 + 1e-13]]).unwrap();
        assert_eq!(m.rank(1e-9), 1);
        let m = Matrix::from_rows(vec![vec![1e8, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(m.rank(1e-9), 2);
    }

    #[test]
    fn solve_and_inconsistency() {
        let m = qm(&[&[1, 1], &[1, -1]]);
        let x = m.solve(&[q(3, 1), q(1, 1)], 0.0).unwrap().unwrap();
        assert_eq!(x, vec![q(2, 1), q(1, 1)]);
        let s = qm(&[&[1, 1], &[2, 2]]);
        assert!(s.solve(&[q(1, 1), q(3, 1)], 0.0).unwrap().is_none());
        assert!(s.inverse(0.0).is_err());
    }

    #[test]
    fn inverse_and_determinant() {
        let m = qm(&[&[2, 1], &[1, 2]]);
        let inv = m.inverse(0.0).unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(2));
        assert_eq!(m.determinant().unwrap(), q(3, 1));
        assert_eq!(qm(&[&[0, 1], &[1, 0]]).determinant().unwrap(), q(-1, 1));
    }

    #[test]
    fn positive_definiteness() {
        assert!(qm(&[&[2, 1], &[1, 2]]).is_positive_definite(0.0));
        assert!(!qm(&[&[1, 2], &[2, 1]]).is_positive_definite(0.0));
        assert!(!qm(&[&[1, 0], &[1, 1]]).is_positive_definite(0.0));
        let f = Matrix::from_rows(vec![vec![2.0, -1.0], vec![-1.0, 2.0]]).unwrap();
        assert!(f.is_positive_definite(1e-9));
    }
}
