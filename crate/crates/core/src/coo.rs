//! Sparse complex matrices in coordinate form.
//!
//! Blocks of the many-body operators are diagonal, permutation, rank-one or
//! Kronecker-lifted structures, so a canonical COO representation (entries
//! sorted by row then column, duplicates merged, exact zeros dropped) covers
//! everything the builders produce. Dense fallbacks go through
//! [`CooMatrix::to_dense`].

use nalgebra::DMatrix;
use num_complex::Complex64;

/// A sparse complex matrix in canonical coordinate form.
#[derive(Debug, Clone, PartialEq)]
pub struct CooMatrix {
    nrows: usize,
    ncols: usize,
    /// Sorted by (row, col); at most one entry per coordinate; no exact zeros.
    entries: Vec<(u32, u32, Complex64)>,
}

impl CooMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        CooMatrix {
            nrows,
            ncols,
            entries: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        CooMatrix {
            nrows: n,
            ncols: n,
            entries: (0..n as u32)
                .map(|i| (i, i, Complex64::new(1.0, 0.0)))
                .collect(),
        }
    }

    pub fn scaled_identity(n: usize, value: Complex64) -> Self {
        Self::from_entries(n, n, (0..n as u32).map(|i| (i, i, value)))
    }

    pub fn from_diag(values: &[Complex64]) -> Self {
        let n = values.len();
        Self::from_entries(
            n,
            n,
            values
                .iter()
                .enumerate()
                .map(|(i, &v)| (i as u32, i as u32, v)),
        )
    }

    pub fn from_real_diag(values: &[f64]) -> Self {
        let complex: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        Self::from_diag(&complex)
    }

    /// Builds the canonical form: stable-sorts by coordinate, merges
    /// duplicates by summation in input order, drops exact zeros.
    pub fn from_entries<I>(nrows: usize, ncols: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, Complex64)>,
    {
        let mut raw: Vec<(u32, u32, Complex64)> = entries.into_iter().collect();
        for &(r, c, _) in &raw {
            debug_assert!((r as usize) < nrows && (c as usize) < ncols);
        }
        raw.sort_by_key(|&(r, c, _)| (r, c));
        let mut merged: Vec<(u32, u32, Complex64)> = Vec::with_capacity(raw.len());
        for (r, c, v) in raw {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|&(_, _, v)| v != Complex64::new(0.0, 0.0));
        CooMatrix {
            nrows,
            ncols,
            entries: merged,
        }
    }

    pub fn from_dense(m: &DMatrix<Complex64>) -> Self {
        Self::from_entries(
            m.nrows(),
            m.ncols(),
            (0..m.nrows()).flat_map(|r| {
                (0..m.ncols()).filter_map(move |c| {
                    let v = m[(r, c)];
                    (v != Complex64::new(0.0, 0.0)).then_some((r as u32, c as u32, v))
                })
            }),
        )
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(u32, u32, Complex64)] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        match self
            .entries
            .binary_search_by_key(&(row as u32, col as u32), |&(r, c, _)| (r, c))
        {
            Ok(i) => self.entries[i].2,
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::from_entries(
            self.nrows,
            self.ncols,
            self.entries.iter().map(|&(r, c, v)| (r, c, factor * v)),
        )
    }

    pub fn add(&self, other: &CooMatrix) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        Self::from_entries(
            self.nrows,
            self.ncols,
            self.entries
                .iter()
                .chain(other.entries.iter())
                .copied(),
        )
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_entries(
            self.ncols,
            self.nrows,
            self.entries.iter().map(|&(r, c, v)| (c, r, v.conj())),
        )
    }

    /// Kronecker product, row-major index convention:
    /// `(self ⊗ other)[(i1·m2+i2),(j1·n2+j2)] = self[i1,j1]·other[i2,j2]`.
    pub fn kron(&self, other: &CooMatrix) -> Self {
        let (m2, n2) = (other.nrows as u32, other.ncols as u32);
        Self::from_entries(
            self.nrows * other.nrows,
            self.ncols * other.ncols,
            self.entries.iter().flat_map(|&(r1, c1, v1)| {
                other
                    .entries
                    .iter()
                    .map(move |&(r2, c2, v2)| (r1 * m2 + r2, c1 * n2 + c2, v1 * v2))
            }),
        )
    }

    /// Relocates entries: entry at `(r, c)` moves to `(row_map[r], col_map[c])`.
    /// Both maps must be injective into the target shape.
    pub fn remap(&self, nrows: usize, ncols: usize, row_map: &[usize], col_map: &[usize]) -> Self {
        Self::from_entries(
            nrows,
            ncols,
            self.entries.iter().map(|&(r, c, v)| {
                (
                    row_map[r as usize] as u32,
                    col_map[c as usize] as u32,
                    v,
                )
            }),
        )
    }

    pub fn matvec(&self, x: &[Complex64], y: &mut [Complex64]) {
        debug_assert_eq!(x.len(), self.ncols);
        debug_assert_eq!(y.len(), self.nrows);
        for &(r, c, v) in &self.entries {
            y[r as usize] += v * x[c as usize];
        }
    }

    /// `y += self^H · x` without materializing the adjoint.
    pub fn matvec_adjoint(&self, x: &[Complex64], y: &mut [Complex64]) {
        debug_assert_eq!(x.len(), self.nrows);
        debug_assert_eq!(y.len(), self.ncols);
        for &(r, c, v) in &self.entries {
            y[c as usize] += v.conj() * x[r as usize];
        }
    }

    /// Sparse product `self · other`.
    pub fn matmul(&self, other: &CooMatrix) -> CooMatrix {
        assert_eq!(self.ncols, other.nrows);
        // group the right factor by row
        let mut row_start = vec![0usize; other.nrows + 1];
        for &(r, _, _) in &other.entries {
            row_start[r as usize + 1] += 1;
        }
        for i in 0..other.nrows {
            row_start[i + 1] += row_start[i];
        }
        let mut product = Vec::new();
        for &(r, k, v) in &self.entries {
            let k = k as usize;
            for &(_, c, w) in &other.entries[row_start[k]..row_start[k + 1]] {
                product.push((r, c, v * w));
            }
        }
        CooMatrix::from_entries(self.nrows, other.ncols, product)
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.nrows, self.ncols);
        for &(r, c, v) in &self.entries {
            m[(r as usize, c as usize)] += v;
        }
        m
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.entries
            .iter()
            .map(|&(_, _, v)| v.norm())
            .fold(0.0, f64::max)
    }

    /// Max-norm of the difference, treating absent entries as zero.
    pub fn max_abs_diff(&self, other: &CooMatrix) -> f64 {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut worst = 0.0f64;
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let ka = a.get(i).map(|&(r, c, _)| (r, c));
            let kb = b.get(j).map(|&(r, c, _)| (r, c));
            let d = match (ka, kb) {
                (Some(x), Some(y)) if x == y => {
                    let d = (a[i].2 - b[j].2).norm();
                    i += 1;
                    j += 1;
                    d
                }
                (Some(x), Some(y)) if x < y => {
                    let d = a[i].2.norm();
                    i += 1;
                    d
                }
                (Some(_), Some(_)) | (None, Some(_)) => {
                    let d = b[j].2.norm();
                    j += 1;
                    d
                }
                (Some(_), None) => {
                    let d = a[i].2.norm();
                    i += 1;
                    d
                }
                (None, None) => break,
            };
            worst = worst.max(d);
        }
        worst
    }

    /// Deviation from Hermitian symmetry (square matrices).
    pub fn hermitian_deviation(&self) -> f64 {
        assert_eq!(self.nrows, self.ncols);
        self.max_abs_diff(&self.adjoint())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn canonical_form_merges_and_drops_zeros() {
        let m = CooMatrix::from_entries(
            2,
            2,
            vec![
                (1, 0, c(1.0, 0.0)),
                (0, 0, c(2.0, 0.0)),
                (1, 0, c(-1.0, 0.0)),
                (0, 1, c(0.0, 3.0)),
            ],
        );
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.get(0, 0), c(2.0, 0.0));
        assert_eq!(m.get(0, 1), c(0.0, 3.0));
        assert_eq!(m.get(1, 0), c(0.0, 0.0));
    }

    #[test]
    fn kron_matches_dense() {
        let a = CooMatrix::from_entries(2, 2, vec![(0, 1, c(1.0, 1.0)), (1, 0, c(2.0, 0.0))]);
        let b = CooMatrix::from_diag(&[c(1.0, 0.0), c(0.0, -1.0), c(3.0, 0.0)]);
        let k = a.kron(&b);
        let ka = a.to_dense().kronecker(&b.to_dense());
        assert!((k.to_dense() - ka).iter().all(|v| v.norm() < 1e-15));
    }

    #[test]
    fn adjoint_and_matvec() {
        let m = CooMatrix::from_entries(2, 3, vec![(0, 2, c(1.0, 2.0)), (1, 0, c(0.0, -1.0))]);
        let adj = m.adjoint();
        assert_eq!(adj.get(2, 0), c(1.0, -2.0));

        let x = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)];
        let mut y = [c(0.0, 0.0); 2];
        m.matvec(&x, &mut y);
        assert_eq!(y[0], c(-2.0, 1.0));
        assert_eq!(y[1], c(0.0, -1.0));

        // adjoint matvec agrees with materialized adjoint
        let w = [c(1.0, 1.0), c(2.0, 0.0)];
        let mut y1 = [c(0.0, 0.0); 3];
        let mut y2 = [c(0.0, 0.0); 3];
        m.matvec_adjoint(&w, &mut y1);
        adj.matvec(&w, &mut y2);
        assert_eq!(y1, y2);
    }

    #[test]
    fn max_abs_diff_sees_missing_entries() {
        let a = CooMatrix::from_entries(2, 2, vec![(0, 0, c(1.0, 0.0)), (1, 1, c(2.0, 0.0))]);
        let b = CooMatrix::from_entries(2, 2, vec![(0, 0, c(1.0, 0.0))]);
        assert!((a.max_abs_diff(&b) - 2.0).abs() < 1e-15);
        assert!((b.max_abs_diff(&a) - 2.0).abs() < 1e-15);
        assert_eq!(a.max_abs_diff(&a), 0.0);
    }

    #[test]
    fn matmul_matches_dense() {
        let a = CooMatrix::from_entries(
            2,
            3,
            vec![(0, 0, c(1.0, 0.5)), (0, 2, c(-1.0, 0.0)), (1, 1, c(0.0, 2.0))],
        );
        let b = CooMatrix::from_entries(
            3,
            2,
            vec![(0, 1, c(2.0, 0.0)), (1, 0, c(1.0, -1.0)), (2, 1, c(0.0, 1.0))],
        );
        let prod = a.matmul(&b);
        let dense = a.to_dense() * b.to_dense();
        assert!((prod.to_dense() - dense).iter().all(|v| v.norm() < 1e-15));
    }

    #[test]
    fn remap_moves_entries() {
        let m = CooMatrix::identity(2);
        let moved = m.remap(4, 4, &[1, 3], &[0, 2]);
        assert_eq!(moved.get(1, 0), c(1.0, 0.0));
        assert_eq!(moved.get(3, 2), c(1.0, 0.0));
        assert_eq!(moved.nnz(), 2);
    }
}
