//! Compressed sparse row matrices and a banded Cholesky factorization.

use crate::error::{Error, Result};

/// Row-compressed sparse matrix. Column indices are sorted within each row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    rows: usize,
    cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds from `(row, col, value)` triplets. Duplicates are summed in
    /// insertion order, so the result is a deterministic function of the input.
    pub fn from_triplets(rows: usize, cols: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut order: Vec<usize> = (0..triplets.len()).collect();
        order.sort_by_key(|&t| (triplets[t].0, triplets[t].1));
        let mut indptr = vec![0; rows + 1];
        let mut indices = Vec::with_capacity(triplets.len());
        let mut values: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for t in order {
            let (r, c, v) = triplets[t];
            assert!(r < rows && c < cols, "triplet ({r}, {c}) outside {rows}x{cols}");
            if last == Some((r, c)) {
                *values.last_mut().expect("duplicate follows an entry") += v;
            } else {
                indices.push(c);
                values.push(v);
                indptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..rows {
            indptr[r + 1] += indptr[r];
        }
        Self { rows, cols, indptr, indices, values }
    }

    /// Builds a symmetric matrix from its upper triangle (`row <= col`),
    /// mirroring every off-diagonal entry so that `A = Aᵀ` holds bitwise.
    pub fn symmetric_from_upper(n: usize, upper: &[(usize, usize, f64)]) -> Self {
        let mut all = Vec::with_capacity(2 * upper.len());
        for &(r, c, v) in upper {
            debug_assert!(r <= c);
            all.push((r, c, v));
        }
        let upper_matrix = Self::from_triplets(n, n, &all);
        let mut mirrored = Vec::with_capacity(2 * upper_matrix.nnz());
        for (r, c, v) in upper_matrix.iter() {
            mirrored.push((r, c, v));
            if r != c {
                mirrored.push((c, r, v));
            }
        }
        Self::from_triplets(n, n, &mirrored)
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self {
            rows: n,
            cols: n,
            indptr: (0..=n).collect(),
            indices: (0..n).collect(),
            values: diag.to_vec(),
        }
    }

    /// Dense row-major input; zeros are dropped.
    pub fn from_dense(rows: usize, cols: usize, data: &[f64]) -> Self {
        assert_eq!(data.len(), rows * cols);
        let triplets: Vec<_> = (0..rows)
            .flat_map(|r| (0..cols).map(move |c| (r, c)))
            .filter_map(|(r, c)| {
                let v = data[r * cols + c];
                (v != 0.0).then_some((r, c, v))
            })
            .collect();
        Self::from_triplets(rows, cols, &triplets)
    }

    /// Block-diagonal concatenation.
    pub fn block_diagonal(blocks: &[&CsrMatrix]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut triplets = Vec::with_capacity(blocks.iter().map(|b| b.nnz()).sum());
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            triplets.extend(b.iter().map(|(r, c, v)| (r + r0, c + c0, v)));
            r0 += b.rows;
            c0 += b.cols;
        }
        Self::from_triplets(rows, cols, &triplets)
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

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.indptr[r]..self.indptr[r + 1];
        self.indices[span.clone()].iter().copied().zip(self.values[span].iter().copied())
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.rows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let span = self.indptr[r]..self.indptr[r + 1];
        match self.indices[span.clone()].binary_search(&c) {
            Ok(k) => self.values[span.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.rows];
        self.mul_vec_into(x, &mut y);
        y
    }

    pub fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.cols);
        assert_eq!(y.len(), self.rows);
        for (r, out) in y.iter_mut().enumerate() {
            *out = self.row(r).map(|(c, v)| v * x[c]).sum();
        }
    }

    /// `Aᵀ x` without forming the transpose.
    pub fn transpose_mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.rows);
        let mut y = vec![0.0; self.cols];
        for (r, &xr) in x.iter().enumerate() {
            for (c, v) in self.row(r) {
                y[c] += v * xr;
            }
        }
        y
    }

    /// Exact (bitwise) symmetry.
    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && self.iter().all(|(r, c, v)| self.get(c, r).to_bits() == v.to_bits())
    }

    /// Largest `|i - j|` over stored entries.
    pub fn bandwidth(&self) -> usize {
        self.iter().map(|(r, c, _)| r.abs_diff(c)).max().unwrap_or(0)
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|r| self.row(r).map(|(_, v)| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn diagonal_values(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    /// `self + alpha * other`, both of the same shape.
    pub fn add_scaled(&self, alpha: f64, other: &CsrMatrix) -> CsrMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut triplets: Vec<_> = self.iter().collect();
        triplets.extend(other.iter().map(|(r, c, v)| (r, c, alpha * v)));
        Self::from_triplets(self.rows, self.cols, &triplets)
    }

    /// Weighted Gram product `Lᵀ diag(w) L`, assembled from its upper triangle.
    pub fn weighted_gram(&self, weights: &[f64]) -> CsrMatrix {
        assert_eq!(weights.len(), self.rows);
        let mut upper = Vec::new();
        for (r, &w) in weights.iter().enumerate() {
            let entries: Vec<_> = self.row(r).collect();
            for (a, &(ci, vi)) in entries.iter().enumerate() {
                for &(cj, vj) in &entries[a..] {
                    let (lo, hi) = if ci <= cj { (ci, cj) } else { (cj, ci) };
                    upper.push((lo, hi, w * vi * vj));
                }
            }
        }
        Self::symmetric_from_upper(self.cols, &upper)
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.rows, self.cols);
        for (r, c, v) in self.iter() {
            m[(r, c)] = v;
        }
        m
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Cholesky factor `L Lᵀ` of a symmetric positive-definite banded matrix,
/// stored as the lower band row by row.
#[derive(Debug, Clone)]
pub struct BandCholesky {
    n: usize,
    bandwidth: usize,
    band: Vec<f64>,
}

impl BandCholesky {
    /// Factors `matrix` (symmetric; only its lower triangle is read).
    pub fn factor(matrix: &CsrMatrix) -> Result<Self> {
        if matrix.rows() != matrix.cols() {
            return Err(Error::Factorization("matrix is not square".into()));
        }
        let n = matrix.rows();
        let bw = matrix.bandwidth();
        let width = bw + 1;
        let mut band = vec![0.0; n * width];
        for (r, c, v) in matrix.iter() {
            if c <= r {
                band[r * width + (c + bw - r)] = v;
            }
        }
        for i in 0..n {
            let i_first = i.saturating_sub(bw);
            for j in i_first..=i {
                let first = i_first.max(j.saturating_sub(bw));
                let row_i = &band[i * width..(i + 1) * width];
                let row_j = &band[j * width..(j + 1) * width];
                let dot: f64 = row_i[first + bw - i..j + bw - i]
                    .iter()
                    .zip(&row_j[first + bw - j..bw])
                    .map(|(a, b)| a * b)
                    .sum();
                let s = band[i * width + (j + bw - i)] - dot;
                if i == j {
                    if s <= 0.0 || !s.is_finite() {
                        return Err(Error::Factorization(format!(
                            "non-positive pivot {s:e} at row {i}; matrix is not numerically SPD"
                        )));
                    }
                    band[i * width + bw] = s.sqrt();
                } else {
                    band[i * width + (j + bw - i)] = s / band[j * width + bw];
                }
            }
        }
        Ok(Self { n, bandwidth: bw, band })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let mut columns = vec![rhs.to_vec()];
        self.solve_in_place(&mut columns);
        columns.pop().expect("one column")
    }

    /// Solves for several right-hand sides at once, streaming the factor
    /// once per triangular sweep.
    pub fn solve_in_place(&self, columns: &mut [Vec<f64>]) {
        let (n, bw) = (self.n, self.bandwidth);
        let width = bw + 1;
        for col in columns.iter() {
            assert_eq!(col.len(), n);
        }
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            let row = &self.band[i * width..(i + 1) * width];
            let (coeffs, diag) = (&row[lo + bw - i..bw], row[bw]);
            for y in columns.iter_mut() {
                let s: f64 = coeffs.iter().zip(&y[lo..i]).map(|(l, v)| l * v).sum();
                y[i] = (y[i] - s) / diag;
            }
        }
        // Lᵀ x = y by columns of Lᵀ, i.e. rows of L, from the bottom.
        for i in (0..n).rev() {
            let lo = i.saturating_sub(bw);
            let row = &self.band[i * width..(i + 1) * width];
            let (coeffs, diag) = (&row[lo + bw - i..bw], row[bw]);
            for y in columns.iter_mut() {
                let xi = y[i] / diag;
                y[i] = xi;
                y[lo..i].iter_mut().zip(coeffs).for_each(|(v, l)| *v -= l * xi);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_1d(n: usize) -> CsrMatrix {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
            }
        }
        CsrMatrix::symmetric_from_upper(n, &t)
    }

    #[test]
    fn triplets_sum_duplicates() {
        let m = CsrMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (1, 0, 2.0), (0, 0, 3.0)]);
        assert_eq!(m.get(0, 0), 4.0);
        assert_eq!(m.get(1, 0), 2.0);
        assert_eq!(m.get(0, 1), 0.0);
        assert_eq!(m.nnz(), 2);
    }

    #[test]
    fn symmetric_from_upper_is_exactly_symmetric() {
        let m = laplacian_1d(6);
        assert!(m.is_symmetric());
        assert_eq!(m.bandwidth(), 1);
        assert_eq!(m.get(3, 2), -1.0);
    }

    #[test]
    fn band_cholesky_solves() {
        let m = laplacian_1d(9).add_scaled(0.5, &CsrMatrix::identity(9));
        let x: Vec<f64> = (0..9).map(|i| (i as f64 * 0.7).sin()).collect();
        let b = m.mul_vec(&x);
        let f = BandCholesky::factor(&m).unwrap();
        let y = f.solve(&b);
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn band_cholesky_rejects_indefinite() {
        let m = laplacian_1d(4).add_scaled(-3.0, &CsrMatrix::identity(4));
        assert!(matches!(BandCholesky::factor(&m), Err(Error::Factorization(_))));
    }

    #[test]
    fn gram_matches_explicit_product() {
        let l = CsrMatrix::from_dense(3, 2, &[1.0, 2.0, 0.0, -1.0, 3.0, 0.5]);
        let w = [2.0, 1.0, 0.5];
        let g = l.weighted_gram(&w);
        // Lᵀ W L = [[2+4.5, 4+0.75], [., 8+1+0.125]]
        assert_eq!(g.get(0, 0), 6.5);
        assert_eq!(g.get(0, 1), 4.75);
        assert_eq!(g.get(1, 0), 4.75);
        assert_eq!(g.get(1, 1), 9.125);
    }

    #[test]
    fn transpose_product() {
        let l = CsrMatrix::from_dense(2, 3, &[1.0, 0.0, 2.0, 0.0, 3.0, -1.0]);
        assert_eq!(l.transpose_mul_vec(&[1.0, 2.0]), vec![1.0, 6.0, 0.0]);
    }
}
