use std::io::Write;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Real matrix in compressed-row storage.
///
/// Column indices are strictly increasing within each row; explicit zeros
/// are allowed but duplicates are not.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix<T> {
    n_rows: usize,
    n_cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<T>,
}

impl<T: Real> CsrMatrix<T> {
    /// Builds a matrix from raw compressed-row arrays, checking the invariants.
    pub fn new(n_rows: usize, n_cols: usize, row_ptr: Vec<usize>, col_idx: Vec<usize>, values: Vec<T>) -> Result<Self> {
        if row_ptr.len() != n_rows + 1 || row_ptr[0] != 0 {
            return Err(Error::InvalidArgument("row offsets must have n_rows + 1 entries starting at 0".into()));
        }
        if col_idx.len() != values.len() || *row_ptr.last().unwrap() != col_idx.len() {
            return Err(Error::InvalidArgument("column/value arrays disagree with row offsets".into()));
        }
        for r in 0..n_rows {
            if row_ptr[r] > row_ptr[r + 1] {
                return Err(Error::InvalidArgument(format!("row offsets decrease at row {r}")));
            }
            let cols = &col_idx[row_ptr[r]..row_ptr[r + 1]];
            if cols.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidArgument(format!("columns of row {r} not strictly increasing")));
            }
            if cols.last().is_some_and(|&c| c >= n_cols) {
                return Err(Error::InvalidArgument(format!("column index out of range in row {r}")));
            }
        }
        Ok(Self { n_rows, n_cols, row_ptr, col_idx, values })
    }

    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self { n_rows, n_cols, row_ptr: vec![0; n_rows + 1], col_idx: Vec::new(), values: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![T::one(); n])
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let n = diag.len();
        Self { n_rows: n, n_cols: n, row_ptr: (0..=n).collect(), col_idx: (0..n).collect(), values: diag.to_vec() }
    }

    /// Sums duplicate `(row, col, value)` triplets into a compressed matrix.
    pub fn from_triplets(n_rows: usize, n_cols: usize, triplets: &[(usize, usize, T)]) -> Result<Self> {
        let mut counts = vec![0usize; n_rows + 1];
        for &(r, c, _) in triplets {
            if r >= n_rows || c >= n_cols {
                return Err(Error::DimensionMismatch(format!("triplet ({r}, {c}) outside {n_rows}x{n_cols}")));
            }
            counts[r + 1] += 1;
        }
        for r in 0..n_rows {
            counts[r + 1] += counts[r];
        }
        let mut next = counts.clone();
        let mut cols = vec![0usize; triplets.len()];
        let mut vals = vec![T::zero(); triplets.len()];
        for &(r, c, v) in triplets {
            cols[next[r]] = c;
            vals[next[r]] = v;
            next[r] += 1;
        }
        let mut row_ptr = Vec::with_capacity(n_rows + 1);
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        row_ptr.push(0);
        let mut scratch: Vec<(usize, T)> = Vec::new();
        for r in 0..n_rows {
            scratch.clear();
            scratch.extend((counts[r]..counts[r + 1]).map(|p| (cols[p], vals[p])));
            scratch.sort_by_key(|e| e.0);
            for &(c, v) in &scratch {
                if col_idx.len() > row_ptr[r] && *col_idx.last().unwrap() == c {
                    *values.last_mut().unwrap() += v;
                } else {
                    col_idx.push(c);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Ok(Self { n_rows, n_cols, row_ptr, col_idx, values })
    }

    /// Structure-only constructor: each row lists its (unsorted, possibly repeated) columns.
    pub fn from_pattern(n_cols: usize, rows: Vec<Vec<usize>>) -> Self {
        let n_rows = rows.len();
        let mut row_ptr = Vec::with_capacity(n_rows + 1);
        let mut col_idx = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            row.sort_unstable();
            row.dedup();
            col_idx.extend_from_slice(&row);
            row_ptr.push(col_idx.len());
        }
        let values = vec![T::zero(); col_idx.len()];
        Self { n_rows, n_cols, row_ptr, col_idx, values }
    }

    pub fn from_dense(rows: &[Vec<T>]) -> Self {
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut triplets = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != T::zero() {
                    triplets.push((i, j, v));
                }
            }
        }
        Self::from_triplets(rows.len(), n_cols, &triplets).expect("dense rows are in range")
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut out = vec![vec![T::zero(); self.n_cols]; self.n_rows];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, v) in self.row(r) {
                row[c] = v;
            }
        }
        out
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[span.clone()].iter().copied().zip(self.values[span].iter().copied())
    }

    /// Position of `(r, c)` in the value array, if structurally present.
    pub fn position(&self, r: usize, c: usize) -> Option<usize> {
        let start = self.row_ptr[r];
        self.col_idx[start..self.row_ptr[r + 1]].binary_search(&c).ok().map(|p| start + p)
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        self.position(r, c).map_or(T::zero(), |p| self.values[p])
    }

    /// Adds `v` to a structurally present entry. Panics when absent.
    #[inline]
    pub fn add_to(&mut self, r: usize, c: usize, v: T) {
        let p = self.position(r, c).unwrap_or_else(|| panic!("entry ({r}, {c}) not in sparsity pattern"));
        self.values[p] += v;
    }

    pub fn fill_zero(&mut self) {
        self.values.iter_mut().for_each(|v| *v = T::zero());
    }

    pub fn spmv(&self, x: &[T]) -> Result<Vec<T>> {
        let mut y = vec![T::zero(); self.n_rows];
        self.spmv_into(x, &mut y)?;
        Ok(y)
    }

    pub fn spmv_into(&self, x: &[T], y: &mut [T]) -> Result<()> {
        if x.len() != self.n_cols || y.len() != self.n_rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix applied to vector of length {} into {}",
                self.n_rows,
                self.n_cols,
                x.len(),
                y.len()
            )));
        }
        for (r, out) in y.iter_mut().enumerate() {
            let mut acc = T::zero();
            for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.values[p] * x[self.col_idx[p]];
            }
            *out = acc;
        }
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        let mut counts = vec![0usize; self.n_cols + 1];
        for &c in &self.col_idx {
            counts[c + 1] += 1;
        }
        for c in 0..self.n_cols {
            counts[c + 1] += counts[c];
        }
        let mut next = counts.clone();
        let mut col_idx = vec![0usize; self.nnz()];
        let mut values = vec![T::zero(); self.nnz()];
        for r in 0..self.n_rows {
            for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = self.col_idx[p];
                col_idx[next[c]] = r;
                values[next[c]] = self.values[p];
                next[c] += 1;
            }
        }
        Self { n_rows: self.n_cols, n_cols: self.n_rows, row_ptr: counts, col_idx, values }
    }

    pub fn scaled(&self, s: T) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= s);
        out
    }

    /// `a * self + b * other` over the union of both patterns.
    pub fn linear_combination(&self, a: T, other: &Self, b: T) -> Result<Self> {
        if self.n_rows != other.n_rows || self.n_cols != other.n_cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot combine {}x{} with {}x{}",
                self.n_rows, self.n_cols, other.n_rows, other.n_cols
            )));
        }
        let mut row_ptr = Vec::with_capacity(self.n_rows + 1);
        let mut col_idx = Vec::with_capacity(self.nnz().max(other.nnz()));
        let mut values = Vec::with_capacity(col_idx.capacity());
        row_ptr.push(0);
        for r in 0..self.n_rows {
            let (mut p, pe) = (self.row_ptr[r], self.row_ptr[r + 1]);
            let (mut q, qe) = (other.row_ptr[r], other.row_ptr[r + 1]);
            while p < pe || q < qe {
                let cp = if p < pe { self.col_idx[p] } else { usize::MAX };
                let cq = if q < qe { other.col_idx[q] } else { usize::MAX };
                if cp == cq {
                    col_idx.push(cp);
                    values.push(a * self.values[p] + b * other.values[q]);
                    p += 1;
                    q += 1;
                } else if cp < cq {
                    col_idx.push(cp);
                    values.push(a * self.values[p]);
                    p += 1;
                } else {
                    col_idx.push(cq);
                    values.push(b * other.values[q]);
                    q += 1;
                }
            }
            row_ptr.push(col_idx.len());
        }
        Ok(Self { n_rows: self.n_rows, n_cols: self.n_cols, row_ptr, col_idx, values })
    }

    /// Keeps only the entries `(r, c)` with `keep_row[r] && keep_col[c]`,
    /// renumbering the survivors compactly.
    pub fn submatrix(&self, keep_row: &[bool], keep_col: &[bool]) -> Self {
        let col_map = compact_map(keep_col);
        let n_cols = keep_col.iter().filter(|&&k| k).count();
        let mut row_ptr = vec![0];
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        for r in (0..self.n_rows).filter(|&r| keep_row[r]) {
            for (c, v) in self.row(r) {
                if let Some(nc) = col_map[c] {
                    col_idx.push(nc);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Self { n_rows: row_ptr.len() - 1, n_cols, row_ptr, col_idx, values }
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> T {
        (0..self.n_rows).map(|r| self.row(r).fold(T::zero(), |s, (_, v)| s + v.abs())).fold(T::zero(), T::max)
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn is_symmetric(&self, tol: T) -> bool {
        self.n_rows == self.n_cols && (0..self.n_rows).all(|r| self.row(r).all(|(c, v)| (v - self.get(c, r)).abs() <= tol))
    }

    /// Writes the matrix in MatrixMarket coordinate format (1-based indices).
    pub fn write_matrix_market<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
        writeln!(w, "{} {} {}", self.n_rows, self.n_cols, self.nnz())?;
        for r in 0..self.n_rows {
            for (c, v) in self.row(r) {
                writeln!(w, "{} {} {:.17e}", r + 1, c + 1, v)?;
            }
        }
        Ok(())
    }
}

fn compact_map(keep: &[bool]) -> Vec<Option<usize>> {
    let mut next = 0;
    keep.iter()
        .map(|&k| {
            k.then(|| {
                next += 1;
                next - 1
            })
        })
        .collect()
}
