use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sparse::CsrMatrix;

/// Replaces constrained rows and columns by the identity.
pub fn constrain_matrix<T: Real>(a: &CsrMatrix<T>, constrained: &[usize]) -> Result<CsrMatrix<T>> {
    let n = a.n_rows();
    if a.n_cols() != n {
        return Err(Error::DimensionMismatch("Dirichlet elimination needs a square matrix".into()));
    }
    let mut fixed = vec![false; n];
    for &i in constrained {
        if i >= n {
            return Err(Error::DimensionMismatch(format!("constrained index {i} out of range {n}")));
        }
        fixed[i] = true;
    }
    let mut row_ptr = Vec::with_capacity(n + 1);
    let mut col_idx = Vec::with_capacity(a.nnz());
    let mut values = Vec::with_capacity(a.nnz());
    row_ptr.push(0);
    for r in 0..n {
        if fixed[r] {
            col_idx.push(r);
            values.push(T::one());
        } else {
            for (c, v) in a.row(r) {
                if !fixed[c] {
                    col_idx.push(c);
                    values.push(v);
                }
            }
        }
        row_ptr.push(col_idx.len());
    }
    CsrMatrix::new(n, n, row_ptr, col_idx, values)
}

/// Symmetric elimination of `x_i = g_i` for `i ∈ constrained`: moves the
/// known columns to `b`, sets `b_i = g_i`, and returns the constrained matrix.
pub fn apply_dirichlet<T: Real>(a: &CsrMatrix<T>, b: &mut [T], constrained: &[usize], values: &[T]) -> Result<CsrMatrix<T>> {
    if constrained.len() != values.len() || b.len() != a.n_rows() {
        return Err(Error::DimensionMismatch("Dirichlet data sizes disagree".into()));
    }
    let out = constrain_matrix(a, constrained)?;
    let mut g = vec![T::zero(); a.n_cols()];
    let mut fixed = vec![false; a.n_cols()];
    for (&i, &v) in constrained.iter().zip(values) {
        g[i] = v;
        fixed[i] = true;
    }
    for (r, br) in b.iter_mut().enumerate() {
        if fixed[r] {
            *br = g[r];
        } else {
            for (c, v) in a.row(r) {
                if fixed[c] {
                    *br -= v * g[c];
                }
            }
        }
    }
    Ok(out)
}
