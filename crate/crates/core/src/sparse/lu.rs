//! Left-looking sparse LU with threshold partial pivoting.
//!
//! Columns are eliminated in a fill-reducing order (nested dissection of
//! `A + Aᵀ`); within each column the pivot is chosen by threshold partial
//! pivoting that prefers the diagonal so the symmetric ordering keeps its
//! fill properties. Each column of `L` is obtained from a sparse triangular
//! solve whose nonzero pattern is found by depth-first search.

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::ordering::{nested_dissection, symmetric_graph};
use super::CsrMatrix;

const NONE: usize = usize::MAX;

/// Column ordering used before numeric factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Ordering {
    Natural,
    #[default]
    NestedDissection,
}

/// A reusable factorization `P A Q = L U`.
///
/// `solve` takes `&self` and allocates its own workspace, so one factorization
/// can serve concurrent solves from several threads.
#[derive(Debug, Clone)]
pub struct SparseLu<T> {
    n: usize,
    // L in compressed columns, unit diagonal stored first in each column
    l_ptr: Vec<usize>,
    l_idx: Vec<usize>,
    l_val: Vec<T>,
    // U in compressed columns, diagonal stored last in each column
    u_ptr: Vec<usize>,
    u_idx: Vec<usize>,
    u_val: Vec<T>,
    /// `pinv[row] = k`: original row pivoted at step `k`
    pinv: Vec<usize>,
    /// `q[k]`: original column eliminated at step `k`
    q: Vec<usize>,
}

impl<T: Real> SparseLu<T> {
    pub fn factor(a: &CsrMatrix<T>) -> Result<Self> {
        Self::factor_with(a, Ordering::default(), T::lit(0.1))
    }

    /// Factors `a`. A diagonal entry is accepted as pivot when its magnitude is
    /// at least `threshold` times the largest candidate in its column.
    pub fn factor_with(a: &CsrMatrix<T>, ordering: Ordering, threshold: T) -> Result<Self> {
        let n = a.n_rows();
        if a.n_cols() != n {
            return Err(Error::DimensionMismatch(format!("LU needs a square matrix, got {}x{}", n, a.n_cols())));
        }
        let q = match ordering {
            Ordering::Natural => (0..n).collect(),
            Ordering::NestedDissection => nested_dissection(&symmetric_graph(a)),
        };
        Self::factor_ordered(a, q, threshold)
    }

    /// Factors with a caller-supplied column order, e.g. [`SparseLu::column_order`]
    /// of an earlier factorization of a matrix with the same pattern.
    pub fn factor_with_order(a: &CsrMatrix<T>, order: &[usize], threshold: T) -> Result<Self> {
        let n = a.n_rows();
        if a.n_cols() != n || order.len() != n {
            return Err(Error::DimensionMismatch(format!("order of length {} for a {}x{} matrix", order.len(), n, a.n_cols())));
        }
        let mut seen = vec![false; n];
        for &c in order {
            if c >= n || std::mem::replace(&mut seen[c], true) {
                return Err(Error::InvalidArgument("column order is not a permutation".into()));
            }
        }
        Self::factor_ordered(a, order.to_vec(), threshold)
    }

    fn factor_ordered(a: &CsrMatrix<T>, q: Vec<usize>, threshold: T) -> Result<Self> {
        let n = a.n_rows();
        // compressed columns of A are the rows of Aᵀ
        let at = a.transpose();
        let tiny = T::epsilon() * T::lit(64.0) * a.max_abs();

        let mut l_ptr = Vec::with_capacity(n + 1);
        let mut u_ptr = Vec::with_capacity(n + 1);
        let guess = 4 * a.nnz() + n;
        let mut l_idx = Vec::with_capacity(guess);
        let mut l_val = Vec::with_capacity(guess);
        let mut u_idx = Vec::with_capacity(guess);
        let mut u_val = Vec::with_capacity(guess);
        let mut pinv = vec![NONE; n];
        let mut x = vec![T::zero(); n];
        let mut reach = Reach::new(n);

        for k in 0..n {
            l_ptr.push(l_idx.len());
            u_ptr.push(u_idx.len());
            let col = q[k];

            // x = L \ A(:, col) on the reachable pattern
            let pattern = reach.compute(col, &at, &l_ptr, &l_idx, &pinv);
            for &i in pattern {
                x[i] = T::zero();
            }
            for (i, v) in at.row(col) {
                x[i] = v;
            }
            for &j in pattern {
                let jj = pinv[j];
                if jj == NONE {
                    continue;
                }
                let xj = x[j];
                let end = if jj + 1 < l_ptr.len() { l_ptr[jj + 1] } else { l_idx.len() };
                for p in l_ptr[jj] + 1..end {
                    x[l_idx[p]] -= l_val[p] * xj;
                }
            }

            let mut ipiv = NONE;
            let mut amax = T::zero();
            for &i in pattern {
                if pinv[i] == NONE {
                    let t = x[i].abs();
                    if t > amax || ipiv == NONE {
                        amax = t;
                        ipiv = i;
                    }
                } else {
                    u_idx.push(pinv[i]);
                    u_val.push(x[i]);
                }
            }
            if ipiv == NONE || amax <= tiny || !amax.is_finite() {
                return Err(Error::SingularMatrix { row: col });
            }
            if pinv[col] == NONE && x[col].abs() >= threshold * amax {
                ipiv = col;
            }
            let pivot = x[ipiv];
            u_idx.push(k);
            u_val.push(pivot);
            pinv[ipiv] = k;
            l_idx.push(ipiv);
            l_val.push(T::one());
            for &i in pattern {
                if pinv[i] == NONE {
                    l_idx.push(i);
                    l_val.push(x[i] / pivot);
                }
                x[i] = T::zero();
            }
        }
        l_ptr.push(l_idx.len());
        u_ptr.push(u_idx.len());
        for i in &mut l_idx {
            *i = pinv[*i];
        }
        Ok(Self { n, l_ptr, l_idx, l_val, u_ptr, u_idx, u_val, pinv, q })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Column elimination order.
    pub fn column_order(&self) -> &[usize] {
        &self.q
    }

    /// Number of stored entries in `L + U`.
    pub fn fill(&self) -> usize {
        self.l_idx.len() + self.u_idx.len()
    }

    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x)?;
        Ok(x)
    }

    pub fn solve_in_place(&self, b: &mut [T]) -> Result<()> {
        if b.len() != self.n {
            return Err(Error::DimensionMismatch(format!("rhs length {} for system of size {}", b.len(), self.n)));
        }
        let mut y = vec![T::zero(); self.n];
        for (i, &v) in b.iter().enumerate() {
            y[self.pinv[i]] = v;
        }
        for j in 0..self.n {
            let yj = y[j];
            if yj == T::zero() {
                continue;
            }
            for p in self.l_ptr[j] + 1..self.l_ptr[j + 1] {
                y[self.l_idx[p]] -= self.l_val[p] * yj;
            }
        }
        for j in (0..self.n).rev() {
            let last = self.u_ptr[j + 1] - 1;
            y[j] /= self.u_val[last];
            let yj = y[j];
            if yj == T::zero() {
                continue;
            }
            for p in self.u_ptr[j]..last {
                y[self.u_idx[p]] -= self.u_val[p] * yj;
            }
        }
        for (k, &col) in self.q.iter().enumerate() {
            b[col] = y[k];
        }
        Ok(())
    }
}

/// Convenience: factor and solve once.
pub fn factor_solve<T: Real>(a: &CsrMatrix<T>, b: &[T]) -> Result<Vec<T>> {
    if b.len() != a.n_rows() {
        return Err(Error::DimensionMismatch(format!("rhs length {} for {} rows", b.len(), a.n_rows())));
    }
    SparseLu::factor(a)?.solve(b)
}

/// Depth-first reachability in the graph of the partial `L`, producing the
/// nonzero pattern of a column in topological order.
struct Reach {
    mark: Vec<usize>,
    stamp: usize,
    out: Vec<usize>,
    stack: Vec<(usize, usize, usize)>,
}

impl Reach {
    fn new(n: usize) -> Self {
        Self { mark: vec![NONE; n], stamp: 0, out: vec![0; n], stack: Vec::new() }
    }

    fn compute<T: Real>(&mut self, col: usize, at: &CsrMatrix<T>, l_ptr: &[usize], l_idx: &[usize], pinv: &[usize]) -> &[usize] {
        self.stamp += 1;
        let n = self.out.len();
        let mut top = n;
        let col_range = |jj: usize| -> (usize, usize) {
            let end = if jj + 1 < l_ptr.len() { l_ptr[jj + 1] } else { l_idx.len() };
            (l_ptr[jj] + 1, end)
        };
        for (start, _) in at.row(col) {
            if self.mark[start] == self.stamp {
                continue;
            }
            self.mark[start] = self.stamp;
            let (lo, hi) = if pinv[start] == NONE { (0, 0) } else { col_range(pinv[start]) };
            self.stack.push((start, lo, hi));
            while let Some(frame) = self.stack.last_mut() {
                let (node, ref mut p, hi) = *frame;
                let mut child = NONE;
                while *p < hi {
                    let i = l_idx[*p];
                    *p += 1;
                    if self.mark[i] != self.stamp {
                        child = i;
                        break;
                    }
                }
                if child == NONE {
                    self.stack.pop();
                    top -= 1;
                    self.out[top] = node;
                } else {
                    self.mark[child] = self.stamp;
                    let (clo, chi) = if pinv[child] == NONE { (0, 0) } else { col_range(pinv[child]) };
                    self.stack.push((child, clo, chi));
                }
            }
        }
        &self.out[top..]
    }
}
