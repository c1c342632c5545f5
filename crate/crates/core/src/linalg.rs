//! Small dense matrices over a [`Scalar`] field, with row reduction.
//!
//! Row reduction is exact over `Q`. Over `f64` it uses partial pivoting and
//! treats entries with `|x| <= tol` as zero; rank decisions that need to be
//! robust in floating point go through [`singular_values`] instead.

use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;

use crate::scalar::Scalar;

/// Default pivot threshold for floating-point row reduction.
pub const FLOAT_PIVOT_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<C> {
    rows: usize,
    cols: usize,
    data: Vec<C>,
}

impl<C: Scalar> Mat<C> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<C>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[C] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<C>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(C::zero(), |acc, k| {
                acc + self[(i, k)].clone() * other[(k, j)].clone()
            })
        })
    }

    pub fn mul_vec(&self, v: &[C]) -> Vec<C> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(C::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() + other[(i, j)].clone()
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() - other[(i, j)].clone()
        })
    }

    pub fn scale(&self, s: &C) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() * s.clone()
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .map(|x| x.to_f64().abs())
            .fold(0.0, f64::max)
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Mat<D> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> Mat<f64> {
        self.map(|x| x.to_f64())
    }

    /// Reduced row echelon form; returns the reduced matrix and pivot columns.
    pub fn rref(&self, tol: f64) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let pivot = if C::EXACT {
                (r..m.rows).find(|&i| !m[(i, c)].is_zero_tol(tol))
            } else {
                (r..m.rows)
                    .filter(|&i| !m[(i, c)].is_zero_tol(tol))
                    .max_by(|&a, &b| {
                        m[(a, c)]
                            .to_f64()
                            .abs()
                            .total_cmp(&m[(b, c)].to_f64().abs())
                    })
            };
            let Some(p) = pivot else { continue };
            m.swap_rows(r, p);
            let inv = C::one() / m[(r, c)].clone();
            for j in c..m.cols {
                let v = m[(r, j)].clone() * inv.clone();
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero_tol(0.0) {
                    continue;
                }
                let factor = m[(i, c)].clone();
                for j in c..m.cols {
                    let v = m[(i, j)].clone() - factor.clone() * m[(r, j)].clone();
                    m[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.rref(tol).1.len()
    }

    /// Basis of the right null space `{x : A x = 0}`.
    pub fn kernel(&self, tol: f64) -> Vec<Vec<C>> {
        let (r, pivots) = self.rref(tol);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![C::zero(); self.cols];
                v[f] = C::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    /// One solution of `A x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[C], tol: f64) -> Option<Vec<C>> {
        assert_eq!(b.len(), self.rows);
        let aug = Self::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let (r, pivots) = aug.rref(tol);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![C::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r[(row, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self, tol: f64) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                C::one()
            } else {
                C::zero()
            }
        });
        let (r, pivots) = aug.rref(tol);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| r[(i, j + n)].clone()))
    }

    pub fn determinant(&self) -> C {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let mut det = C::one();
        for c in 0..m.cols {
            let p = if C::EXACT {
                (c..m.rows).find(|&i| !m[(i, c)].is_zero_tol(0.0))
            } else {
                (c..m.rows).max_by(|&a, &b| {
                    m[(a, c)]
                        .to_f64()
                        .abs()
                        .total_cmp(&m[(b, c)].to_f64().abs())
                })
            };
            let Some(p) = p else { return C::zero() };
            if m[(p, c)].is_zero_tol(0.0) {
                return C::zero();
            }
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = det * piv.clone();
            for i in c + 1..m.rows {
                let factor = m[(i, c)].clone() / piv.clone();
                if factor.is_zero_tol(0.0) {
                    continue;
                }
                for j in c..m.cols {
                    let v = m[(i, j)].clone() - factor.clone() * m[(c, j)].clone();
                    m[(i, j)] = v;
                }
            }
        }
        det
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..i).all(|j| (self[(i, j)].clone() - self[(j, i)].clone()).is_zero_tol(tol))
            })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<C> Index<(usize, usize)> for Mat<C> {
    type Output = C;

    fn index(&self, (i, j): (usize, usize)) -> &C {
        &self.data[i * self.cols + j]
    }
}

impl<C> IndexMut<(usize, usize)> for Mat<C> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C {
        &mut self.data[i * self.cols + j]
    }
}

/// Singular values of a floating-point matrix, largest first.
pub fn singular_values(m: &Mat<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let dm = DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)]);
    let mut sv: Vec<f64> = dm.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Numerical rank: number of singular values above `threshold`.
pub fn numerical_rank(m: &Mat<f64>, threshold: f64) -> usize {
    singular_values(m)
        .iter()
        .filter(|&&s| s > threshold)
        .count()
}

/// Least-squares solution of `A x ≈ b` and the residual norm `|A x - b|`.
pub fn least_squares(a: &Mat<f64>, b: &[f64]) -> Option<(Vec<f64>, f64)> {
    let dm = DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)]);
    let rhs = nalgebra::DVector::from_column_slice(b);
    let svd = dm.clone().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > 1e-12 * smax.max(1.0))
        .count();
    if rank < a.ncols() {
        return None;
    }
    let x = svd.solve(&rhs, 1e-14 * smax.max(1.0)).ok()?;
    let resid = (&dm * &x - rhs).norm();
    Some((x.iter().copied().collect(), resid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qr, Q};

    fn qm(rows: &[&[i64]]) -> Mat<Q> {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| q(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn exact_rank_kernel_and_inverse() {
        let m = qm(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(0.0), 2);
        let k = m.kernel(0.0);
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(|x| *x == q(0)));

        let a = qm(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse(0.0).unwrap();
        assert_eq!(a.mul(&inv), Mat::identity(2));
        assert_eq!(a.determinant(), q(1));
        assert!(m.inverse(0.0).is_none());
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = qm(&[&[1, 1], &[2, 2]]);
        assert!(a.solve(&[q(1), q(3)], 0.0).is_none());
        let x = a.solve(&[q(1), q(2)], 0.0).unwrap();
        assert_eq!(x[0].clone() + x[1].clone(), q(1));
        let b = qm(&[&[3, 0], &[0, 2]]);
        assert_eq!(
            b.solve(&[q(1), q(1)], 0.0).unwrap(),
            vec![qr(1, 3), qr(1, 2)]
        );
    }

    #[test]
    fn float_rank_via_svd() {
        let m = Mat::from_rows(vec![vec![1.0, 2.0], vec![2.0, 4.0 + 1e-13]]);
        assert_eq!(numerical_rank(&m, 1e-7), 1);
        let (x, r) =
            least_squares(&Mat::from_rows(vec![vec![1.0], vec![1.0]]), &[1.0, 3.0]).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-12);
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
    }
}
