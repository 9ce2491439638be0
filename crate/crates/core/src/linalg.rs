//! Dense matrices over any [`Scalar`], with exact elimination over fields.

use std::fmt;

use nalgebra::DMatrix;

use crate::scalar::{Field, Scalar};

#[derive(Clone, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().cloned());
        }
        Mat { rows: r, cols: c, data }
    }

    /// Matrix whose `j`-th column is `cols[j]`.
    pub fn from_columns(cols: &[Vec<T>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |col| col.len());
        Self::from_fn(r, c, |i, j| cols[j][i].clone())
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

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn matmul(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out: Mat<T> = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cell = out.at_mut(i, j);
                    *cell = cell.clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in apply");
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc + a.clone() * b.clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Mat<T> {
        self.map(|a| a.clone() * s.clone())
    }

    pub fn neg(&self) -> Mat<T> {
        self.map(|a| -a.clone())
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Mat<T>) -> Mat<T> {
        self.matmul(other).sub(&other.matmul(self))
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self.at(i, i).clone())
    }

    /// `tr(self · other)` without forming the product.
    pub fn trace_of_product(&self, other: &Mat<T>) -> T {
        assert_eq!((self.rows, self.cols), (other.cols, other.rows));
        let mut acc = T::zero();
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                let b = other.at(k, i);
                if !a.is_zero() && !b.is_zero() {
                    acc = acc + a.clone() * b.clone();
                }
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.magnitude()).fold(0.0, f64::max)
    }

    pub fn to_f64(&self) -> Mat<f64> {
        self.map(|a| a.to_c64().re)
    }

    /// Outer product `|a⟩⟨b|` in raw coordinates.
    pub fn outer(a: &[T], b: &[T]) -> Mat<T> {
        Self::from_fn(a.len(), b.len(), |i, j| a[i].clone() * b[j].clone())
    }
}

impl<T: Field> Mat<T> {
    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self, tol: f64) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let pick = if T::is_exact() {
                (row..self.rows).find(|&r| !self.at(r, col).is_zero())
            } else {
                (row..self.rows)
                    .map(|r| (r, self.at(r, col).magnitude()))
                    .filter(|&(_, m)| m > tol)
                    .max_by(|a, b| a.1.total_cmp(&b.1))
                    .map(|(r, _)| r)
            };
            let Some(p) = pick else { continue };
            if p != row {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, row * self.cols + j);
                }
            }
            let inv = self.at(row, col).inv();
            for j in col..self.cols {
                let v = self.at(row, j).clone() * inv.clone();
                self.set(row, j, v);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.at(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in col..self.cols {
                    let pv = self.at(row, j).clone();
                    if pv.is_zero() {
                        continue;
                    }
                    let v = self.at(r, j).clone() - factor.clone() * pv;
                    self.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let tol = if T::is_exact() { 0.0 } else { 1e-9 * self.max_abs().max(1.0) };
        self.clone().rref(tol).len()
    }

    pub fn inverse(&self) -> Option<Mat<T>> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Mat::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.at(i, j).clone()
            } else if j - n == i {
                T::one()
            } else {
                T::zero()
            }
        });
        let tol = if T::is_exact() { 0.0 } else { 1e-12 * self.max_abs().max(1.0) };
        let piv = aug.rref(tol);
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        Some(Mat::from_fn(n, n, |i, j| aug.at(i, n + j).clone()))
    }

    /// Basis of the right null space.
    pub fn nullspace(&self) -> Vec<Vec<T>> {
        let mut m = self.clone();
        let tol = if T::is_exact() { 0.0 } else { 1e-9 * self.max_abs().max(1.0) };
        let pivots = m.rref(tol);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![T::zero(); self.cols];
                v[fc] = T::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m.at(r, fc).clone();
                }
                v
            })
            .collect()
    }
}

/// Incremental echelon basis; tells which of a stream of vectors are new.
#[derive(Clone, Debug)]
pub struct EchelonBasis<T> {
    rows: Vec<(usize, Vec<T>)>,
    len: usize,
    tol: f64,
}

impl<T: Field> EchelonBasis<T> {
    pub fn new(len: usize) -> Self {
        EchelonBasis { rows: Vec::new(), len, tol: 1e-9 }
    }

    pub fn with_tolerance(len: usize, tol: f64) -> Self {
        EchelonBasis { rows: Vec::new(), len, tol }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored pivots.
    pub fn reduce(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.len);
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            let c = v[*p].clone();
            if c.is_zero() {
                continue;
            }
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.clone() - c.clone() * r.clone();
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[T]) -> bool {
        let r = self.reduce(v);
        self.pivot_of(&r).is_none()
    }

    fn pivot_of(&self, v: &[T]) -> Option<usize> {
        if T::is_exact() {
            v.iter().position(|x| !x.is_zero())
        } else {
            let scale = v.iter().map(|x| x.magnitude()).fold(0.0, f64::max);
            if scale <= self.tol {
                return None;
            }
            v.iter()
                .enumerate()
                .max_by(|a, b| a.1.magnitude().total_cmp(&b.1.magnitude()))
                .map(|(i, _)| i)
        }
    }

    /// Inserts `v`; returns `true` when it enlarged the span.
    pub fn insert(&mut self, v: &[T]) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = self.pivot_of(&r) else { return false };
        let inv = r[p].inv();
        for x in r.iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for (_, row) in self.rows.iter_mut() {
            let c = row[p].clone();
            if c.is_zero() {
                continue;
            }
            for (x, y) in row.iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x = x.clone() - c.clone() * y.clone();
                }
            }
        }
        self.rows.push((p, r));
        true
    }
}

/// Indices of a maximal independent prefix-greedy subset of `vectors`.
pub fn independent_subset<T: Field>(vectors: &[Vec<T>]) -> Vec<usize> {
    let Some(first) = vectors.first() else { return Vec::new() };
    let mut basis = EchelonBasis::new(first.len());
    vectors
        .iter()
        .enumerate()
        .filter_map(|(i, v)| basis.insert(v).then_some(i))
        .collect()
}

pub fn to_dmatrix(m: &Mat<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| *m.at(i, j))
}

pub fn from_dmatrix(m: &DMatrix<f64>) -> Mat<f64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: &Mat<f64>) -> Vec<f64> {
    let d = to_dmatrix(m);
    let sym = (&d + d.transpose()) * 0.5;
    let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
pub fn expm(m: &Mat<f64>) -> Mat<f64> {
    assert!(m.is_square());
    let n = m.rows();
    let norm = (0..n)
        .map(|i| m.row(i).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm * scale > 0.25 {
        scale *= 0.5;
        squarings += 1;
    }
    let a = m.scale(&scale);
    let mut term = Mat::identity(n);
    let mut sum = Mat::identity(n);
    for k in 1..40 {
        term = term.matmul(&a).scale(&(1.0 / k as f64));
        sum = sum.add(&term);
        if term.max_abs() < 1e-18 * sum.max_abs() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum);
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, ModP, Q};

    #[test]
    fn exact_inverse_roundtrip() {
        let m = Mat::from_rows(&[vec![q(2, 1), q(1, 3)], vec![q(-1, 2), q(5, 1)]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.matmul(&inv), Mat::<Q>::identity(2));
    }

    #[test]
    fn nullspace_of_rank_one() {
        let m = Mat::from_rows(&[vec![q(1, 1), q(2, 1), q(3, 1)], vec![q(2, 1), q(4, 1), q(6, 1)]]);
        assert_eq!(m.rank(), 1);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(m.apply(&v).iter().all(|x| x == &Q::from_integer(0.into())));
        }
    }

    #[test]
    fn modular_rank_matches_rational() {
        let rows: Vec<Vec<Q>> = (0..4)
            .map(|i| (0..5).map(|j| q(((i * j) % 3) as i64 - 1, 1 + (i + j) as i64 % 2)).collect())
            .collect();
        let m = Mat::from_rows(&rows);
        let mp = m.map(ModP::from_q);
        assert_eq!(m.rank(), mp.rank());
    }

    #[test]
    fn expm_of_rotation_generator() {
        let t = 1.3_f64;
        let m = Mat::from_rows(&[vec![0.0, -t], vec![t, 0.0]]);
        let e = expm(&m);
        assert!((e.at(0, 0) - t.cos()).abs() < 1e-13);
        assert!((e.at(1, 0) - t.sin()).abs() < 1e-13);
    }

    #[test]
    fn echelon_detects_dependence() {
        let mut b = EchelonBasis::<Q>::new(3);
        assert!(b.insert(&[q(1, 1), q(0, 1), q(1, 1)]));
        assert!(b.insert(&[q(0, 1), q(1, 1), q(1, 1)]));
        assert!(!b.insert(&[q(2, 1), q(-3, 1), q(-1, 1)]));
        assert_eq!(b.rank(), 2);
    }
}
