//! Sparse symmetric matrices and the linear solvers used for the global system.

use std::collections::{BTreeMap, VecDeque};

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Symmetric matrix stored with both triangles in compressed rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymmetric<T> {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<T>,
}

/// Accumulates `(i, j, v)` contributions; repeated entries are summed in
/// insertion order, so the result is deterministic.
#[derive(Debug, Clone)]
pub struct TripletBuilder<T> {
    rows: Vec<BTreeMap<usize, T>>,
}

impl<T: Scalar> TripletBuilder<T> {
    pub fn new(n: usize) -> Self {
        Self { rows: vec![BTreeMap::new(); n] }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn add(&mut self, i: usize, j: usize, v: T) {
        *self.rows[i].entry(j).or_insert_with(T::zero) += v;
    }

    pub fn build(self) -> SparseSymmetric<T> {
        let n = self.rows.len();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for row in self.rows {
            for (j, v) in row {
                cols.push(j);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        SparseSymmetric { n, row_ptr, cols, vals }
    }
}

impl<T: Scalar> SparseSymmetric<T> {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// `(column, value)` pairs of row `i`, sorted by column.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[span.clone()].iter().copied().zip(self.vals[span].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[span.clone()].binary_search(&j) {
            Ok(k) => self.vals[span.start + k],
            Err(_) => T::zero(),
        }
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        (0..self.n).map(|i| self.row(i).map(|(j, v)| v * x[j]).sum()).collect()
    }

    pub fn max_abs(&self) -> T {
        self.vals.iter().fold(T::zero(), |acc, &v| acc.max(v.abs()))
    }

    /// Largest `|a_ij − a_ji|` over stored entries.
    pub fn asymmetry(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                worst = worst.max((v - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Principal submatrix on the listed indices (in that order).
    pub fn principal_submatrix(&self, keep: &[usize]) -> Self {
        let mut map = vec![usize::MAX; self.n];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        let mut b = TripletBuilder::new(keep.len());
        for (new_i, &old_i) in keep.iter().enumerate() {
            for (j, v) in self.row(old_i) {
                if map[j] != usize::MAX {
                    b.add(new_i, map[j], v);
                }
            }
        }
        b.build()
    }

    pub fn to_dense(&self) -> DenseMatrix<T> {
        let mut d = DenseMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                d[(i, j)] = v;
            }
        }
        d
    }

    /// Reverse Cuthill–McKee ordering of the matrix graph.
    pub fn rcm_ordering(&self) -> Vec<usize> {
        let degree: Vec<usize> = (0..self.n).map(|i| self.row_ptr[i + 1] - self.row_ptr[i]).collect();
        let mut visited = vec![false; self.n];
        let mut order = Vec::with_capacity(self.n);
        while order.len() < self.n {
            let start =
                (0..self.n).filter(|&i| !visited[i]).min_by_key(|&i| (degree[i], i)).expect("unvisited node remains");
            visited[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                order.push(i);
                let mut nbrs: Vec<usize> = self.row(i).map(|(j, _)| j).filter(|&j| !visited[j]).collect();
                nbrs.sort_by_key(|&j| (degree[j], j));
                for j in nbrs {
                    visited[j] = true;
                    queue.push_back(j);
                }
            }
        }
        order.reverse();
        order
    }
}

/// Profile (skyline) Cholesky factor `P A Pᵀ = L Lᵀ` under an RCM ordering.
#[derive(Debug, Clone)]
pub struct SkylineCholesky<T> {
    perm: Vec<usize>,
    first: Vec<usize>,
    start: Vec<usize>,
    values: Vec<T>,
}

impl<T: Scalar> SkylineCholesky<T> {
    pub fn factor(a: &SparseSymmetric<T>) -> Result<Self> {
        let n = a.dim();
        let perm = a.rcm_ordering();
        let mut inv = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut first: Vec<usize> = (0..n).collect();
        for (new_i, &old_i) in perm.iter().enumerate() {
            for (old_j, _) in a.row(old_i) {
                first[new_i] = first[new_i].min(inv[old_j]);
            }
        }
        let mut start = Vec::with_capacity(n + 1);
        start.push(0);
        for i in 0..n {
            start.push(start[i] + (i - first[i] + 1));
        }
        let mut values = vec![T::zero(); start[n]];
        let mut diag = vec![T::zero(); n];
        for (new_i, &old_i) in perm.iter().enumerate() {
            for (old_j, v) in a.row(old_i) {
                let new_j = inv[old_j];
                if new_j <= new_i {
                    values[start[new_i] + new_j - first[new_i]] = v;
                }
                if new_j == new_i {
                    diag[new_i] = v;
                }
            }
        }

        let at = |i: usize, j: usize| start[i] + j - first[i];
        for i in 0..n {
            for j in first[i]..=i {
                let lo = first[i].max(first[j]);
                let mut s = values[at(i, j)];
                for k in lo..j {
                    s -= values[at(i, k)] * values[at(j, k)];
                }
                if j < i {
                    values[at(i, j)] = s / values[at(j, j)];
                } else {
                    if !(s > T::lit(1e-13) * diag[i].abs()) {
                        return Err(Error::SingularSystem { equation: perm[i] });
                    }
                    values[at(i, i)] = s.sqrt();
                }
            }
        }
        Ok(Self { perm, first, start, values })
    }

    pub fn solve(&self, rhs: &[T]) -> Result<Vec<T>> {
        let n = self.perm.len();
        if rhs.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: rhs.len() });
        }
        let at = |i: usize, j: usize| self.start[i] + j - self.first[i];
        let mut y: Vec<T> = self.perm.iter().map(|&old| rhs[old]).collect();
        for i in 0..n {
            let mut s = y[i];
            for k in self.first[i]..i {
                s -= self.values[at(i, k)] * y[k];
            }
            y[i] = s / self.values[at(i, i)];
        }
        for i in (0..n).rev() {
            y[i] /= self.values[at(i, i)];
            let yi = y[i];
            for k in self.first[i]..i {
                y[k] -= self.values[at(i, k)] * yi;
            }
        }
        let mut x = vec![T::zero(); n];
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = y[new];
        }
        Ok(x)
    }

    /// Stored entries of the factor, a measure of fill.
    pub fn profile_size(&self) -> usize {
        self.values.len()
    }
}

/// Jacobi-preconditioned conjugate gradients to relative residual `tol`.
pub fn conjugate_gradient<T: Scalar>(a: &SparseSymmetric<T>, rhs: &[T], tol: T, max_iter: usize) -> Result<Vec<T>> {
    let n = a.dim();
    let dot = |u: &[T], v: &[T]| -> T { u.iter().zip(v).map(|(&x, &y)| x * y).sum() };
    let bnorm = dot(rhs, rhs).sqrt();
    let mut x = vec![T::zero(); n];
    if bnorm == T::zero() {
        return Ok(x);
    }
    let inv_diag: Vec<T> = (0..n)
        .map(|i| {
            let d = a.get(i, i);
            if d > T::zero() {
                T::one() / d
            } else {
                T::one()
            }
        })
        .collect();
    let mut r = rhs.to_vec();
    let mut z: Vec<T> = r.iter().zip(&inv_diag).map(|(&r, &d)| r * d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    for it in 0..max_iter {
        let ap = a.matvec(&p);
        let pap = dot(&p, &ap);
        if !(pap > T::zero()) {
            return Err(Error::SingularSystem { equation: it });
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rnorm = dot(&r, &r).sqrt();
        if rnorm <= tol * bnorm {
            return Ok(x);
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    let residual = (dot(&r, &r).sqrt() / bnorm).to_f64_lossy();
    Err(Error::NotConverged { iterations: max_iter, residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian(n: usize) -> SparseSymmetric<f64> {
        let mut b = TripletBuilder::new(n);
        for i in 0..n {
            b.add(i, i, 3.0);
            if i + 1 < n {
                b.add(i, i + 1, -1.0);
                b.add(i + 1, i, -1.0);
            }
            if i + 5 < n {
                b.add(i, i + 5, -0.3);
                b.add(i + 5, i, -0.3);
            }
        }
        b.build()
    }

    #[test]
    fn skyline_matches_dense_cholesky() {
        let a = laplacian(23);
        let rhs: Vec<f64> = (0..23).map(|i| (i as f64).sin()).collect();
        let x = SkylineCholesky::factor(&a).unwrap().solve(&rhs).unwrap();
        let y = a.to_dense().cholesky_solve(&rhs).unwrap();
        for (u, v) in x.iter().zip(&y) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn cg_agrees_with_direct() {
        let a = laplacian(40);
        let rhs: Vec<f64> = (0..40).map(|i| 1.0 + i as f64 * 0.1).collect();
        let x = conjugate_gradient(&a, &rhs, 1e-12, 500).unwrap();
        let y = SkylineCholesky::factor(&a).unwrap().solve(&rhs).unwrap();
        for (u, v) in x.iter().zip(&y) {
            assert!((u - v).abs() < 1e-9);
        }
    }

    #[test]
    fn singular_detected() {
        let mut b = TripletBuilder::new(2);
        b.add(0, 0, 1.0);
        b.add(0, 1, -1.0);
        b.add(1, 0, -1.0);
        b.add(1, 1, 1.0);
        assert!(matches!(SkylineCholesky::factor(&b.build()), Err(Error::SingularSystem { .. })));
    }

    #[test]
    fn submatrix_and_lookup() {
        let a = laplacian(6);
        let s = a.principal_submatrix(&[4, 1, 2]);
        assert_eq!(s.get(1, 2), -1.0);
        assert_eq!(s.get(0, 0), 3.0);
        assert_eq!(s.get(0, 1), 0.0);
        assert_eq!(a.asymmetry(), 0.0);
    }
}
