//! Compressed sparse row matrices and the matrix-free apply contract.

use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use num_traits::Zero;
use rayon::prelude::*;

/// Rows above this count are applied in parallel. Each row is reduced
/// sequentially, so results do not depend on the thread count.
const PAR_ROWS: usize = 4096;

/// A real linear operator that can be applied to a dense vector.
pub trait MatVec: Sync {
    fn dim(&self) -> usize;

    /// `y <- M x`. `y` is overwritten.
    fn apply(&self, x: &[f64], y: &mut [f64]);

    /// Materialize the operator column by column. Only meant for small sizes.
    fn to_dense(&self) -> DenseMatrix {
        let n = self.dim();
        let mut out = DenseMatrix::zeros(n, n);
        let mut e = vec![0.0; n];
        let mut col = vec![0.0; n];
        for j in 0..n {
            e[j] = 1.0;
            self.apply(&e, &mut col);
            for (i, &v) in col.iter().enumerate() {
                out[(i, j)] = v;
            }
            e[j] = 0.0;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix<T> {
    rows: usize,
    cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<T>,
}

impl<T> CsrMatrix<T>
where
    T: Copy + Zero + Add<Output = T> + Mul<Output = T> + PartialEq + Send + Sync,
{
    /// Builds a matrix from (row, col, value) triplets. Duplicates are summed,
    /// explicit zeros dropped and columns sorted within each row.
    pub fn from_triplets(rows: usize, cols: usize, triplets: &[(usize, usize, T)]) -> Self {
        let mut per_row: Vec<BTreeMap<usize, T>> = vec![BTreeMap::new(); rows];
        for &(i, j, v) in triplets {
            assert!(i < rows && j < cols, "triplet ({i}, {j}) out of bounds");
            let slot = per_row[i].entry(j).or_insert_with(T::zero);
            *slot = *slot + v;
        }
        Self::from_row_maps(rows, cols, per_row)
    }

    fn from_row_maps(rows: usize, cols: usize, per_row: Vec<BTreeMap<usize, T>>) -> Self {
        let mut indptr = Vec::with_capacity(rows + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for row in per_row {
            for (j, v) in row {
                if v != T::zero() {
                    indices.push(j);
                    values.push(v);
                }
            }
            indptr.push(indices.len());
        }
        CsrMatrix {
            rows,
            cols,
            indptr,
            indices,
            values,
        }
    }

    /// Builds a matrix from per-row column lists whose entries all equal `one`.
    /// Repeated columns within a row are summed.
    pub fn from_pattern_rows(cols: usize, pattern: &[Vec<usize>], one: T) -> Self {
        let per_row = pattern
            .iter()
            .map(|r| {
                let mut m = BTreeMap::new();
                for &j in r {
                    let slot = m.entry(j).or_insert_with(T::zero);
                    *slot = *slot + one;
                }
                m
            })
            .collect();
        Self::from_row_maps(pattern.len(), cols, per_row)
    }

    pub fn identity(n: usize, one: T) -> Self {
        CsrMatrix {
            rows: n,
            cols: n,
            indptr: (0..=n).collect(),
            indices: (0..n).collect(),
            values: vec![one; n],
        }
    }

    pub fn diagonal(diag: &[T]) -> Self {
        let t: Vec<_> = diag.iter().enumerate().map(|(i, &v)| (i, i, v)).collect();
        Self::from_triplets(diag.len(), diag.len(), &t)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let r = self.indptr[i]..self.indptr[i + 1];
        self.indices[r.clone()]
            .iter()
            .copied()
            .zip(self.values[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        let r = self.indptr[i]..self.indptr[i + 1];
        match self.indices[r.clone()].binary_search(&j) {
            Ok(p) => self.values[r.start + p],
            Err(_) => T::zero(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut trip = Vec::with_capacity(self.nnz());
        for i in 0..self.rows {
            for (j, v) in self.row(i) {
                trip.push((j, i, v));
            }
        }
        Self::from_triplets(self.cols, self.rows, &trip)
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matmul");
        let per_row = (0..self.rows)
            .map(|i| {
                let mut acc: BTreeMap<usize, T> = BTreeMap::new();
                for (k, a) in self.row(i) {
                    for (j, b) in other.row(k) {
                        let slot = acc.entry(j).or_insert_with(T::zero);
                        *slot = *slot + a * b;
                    }
                }
                acc
            })
            .collect();
        Self::from_row_maps(self.rows, other.cols, per_row)
    }

    /// `alpha * self + beta * other`.
    pub fn linear_combination(&self, alpha: T, other: &Self, beta: T) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let per_row = (0..self.rows)
            .map(|i| {
                let mut acc: BTreeMap<usize, T> = BTreeMap::new();
                for (j, a) in self.row(i) {
                    let slot = acc.entry(j).or_insert_with(T::zero);
                    *slot = *slot + alpha * a;
                }
                for (j, b) in other.row(i) {
                    let slot = acc.entry(j).or_insert_with(T::zero);
                    *slot = *slot + beta * b;
                }
                acc
            })
            .collect();
        Self::from_row_maps(self.rows, self.cols, per_row)
    }

    pub fn map<U, F>(&self, f: F) -> CsrMatrix<U>
    where
        F: Fn(T) -> U,
    {
        CsrMatrix {
            rows: self.rows,
            cols: self.cols,
            indptr: self.indptr.clone(),
            indices: self.indices.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// `y <- self * x`, deterministic regardless of thread count.
    pub fn mul_vec_into(&self, x: &[T], y: &mut [T]) {
        assert_eq!(x.len(), self.cols);
        assert_eq!(y.len(), self.rows);
        let row_dot = |i: usize| {
            let mut s = T::zero();
            for p in self.indptr[i]..self.indptr[i + 1] {
                s = s + self.values[p] * x[self.indices[p]];
            }
            s
        };
        if self.rows >= PAR_ROWS {
            y.par_iter_mut()
                .enumerate()
                .for_each(|(i, yi)| *yi = row_dot(i));
        } else {
            for (i, yi) in y.iter_mut().enumerate() {
                *yi = row_dot(i);
            }
        }
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        let mut y = vec![T::zero(); self.rows];
        self.mul_vec_into(x, &mut y);
        y
    }

    pub fn to_dense_rows(&self) -> Vec<Vec<T>> {
        let mut out = vec![vec![T::zero(); self.cols]; self.rows];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in self.row(i) {
                row[j] = v;
            }
        }
        out
    }
}

impl CsrMatrix<f64> {
    pub fn is_symmetric(&self, tol: f64) -> bool {
        if self.rows != self.cols {
            return false;
        }
        (0..self.rows).all(|i| self.row(i).all(|(j, v)| (self.get(j, i) - v).abs() <= tol))
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for (j, v) in self.row(i) {
                d[(i, j)] = v;
            }
        }
        d
    }
}

impl MatVec for CsrMatrix<f64> {
    fn dim(&self) -> usize {
        assert_eq!(self.rows, self.cols);
        self.rows
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.mul_vec_into(x, y);
    }
}

/// Row-major dense real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            m.data[i * c..(i + 1) * c].copy_from_slice(row);
        }
        m
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl MatVec for DenseMatrix {
    fn dim(&self) -> usize {
        assert_eq!(self.rows, self.cols);
        self.rows
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    fn to_dense(&self) -> DenseMatrix {
        self.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_sum_duplicates_and_drop_zeros() {
        let m = CsrMatrix::from_triplets(2, 3, &[(0, 2, 1i64), (0, 2, 2), (1, 0, 5), (1, 1, 0)]);
        assert_eq!(m.get(0, 2), 3);
        assert_eq!(m.get(1, 0), 5);
        assert_eq!(m.nnz(), 2);
    }

    #[test]
    fn matmul_matches_dense() {
        let a = CsrMatrix::from_triplets(2, 3, &[(0, 0, 1i64), (0, 2, 2), (1, 1, 3)]);
        let b = CsrMatrix::from_triplets(3, 2, &[(0, 1, 4i64), (1, 0, 5), (2, 0, 6)]);
        let c = a.matmul(&b);
        assert_eq!(c.to_dense_rows(), vec![vec![12, 4], vec![15, 0]]);
        assert_eq!(a.transpose().transpose(), a);
    }

    #[test]
    fn parallel_and_serial_matvec_agree() {
        let n = PAR_ROWS + 17;
        let trip: Vec<_> = (0..n)
            .flat_map(|i| [(i, (i * 7 + 3) % n, 0.5), (i, (i * 13 + 1) % n, -1.25)])
            .collect();
        let m = CsrMatrix::from_triplets(n, n, &trip);
        let x: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let y = m.mul_vec(&x);
        for i in 0..n {
            let s: f64 = m.row(i).map(|(j, v)| v * x[j]).sum();
            assert_eq!(y[i], s);
        }
    }
}
