use crate::error::{Error, Result};
use crate::scalar::Real;

use super::CsrMatrix;

/// A 2×2 grid of sparse blocks with conforming dimensions.
#[derive(Debug, Clone)]
pub struct BlockSystem<T> {
    blocks: [[CsrMatrix<T>; 2]; 2],
}

impl<T: Real> BlockSystem<T> {
    pub fn new(blocks: [[CsrMatrix<T>; 2]; 2]) -> Result<Self> {
        check_dims(&blocks)?;
        Ok(Self { blocks })
    }

    pub fn block(&self, i: usize, j: usize) -> &CsrMatrix<T> {
        &self.blocks[i][j]
    }

    /// Row counts of the two block rows.
    pub fn row_sizes(&self) -> [usize; 2] {
        [self.blocks[0][0].n_rows(), self.blocks[1][0].n_rows()]
    }

    pub fn col_sizes(&self) -> [usize; 2] {
        [self.blocks[0][0].n_cols(), self.blocks[0][1].n_cols()]
    }

    pub fn to_monolithic(&self) -> CsrMatrix<T> {
        let [[a, b], [c, d]] = &self.blocks;
        stack(a, b, c, d)
    }
}

fn check_dims<T: Real>(blocks: &[[CsrMatrix<T>; 2]; 2]) -> Result<()> {
    let [[a, b], [c, d]] = blocks;
    let ok = a.n_rows() == b.n_rows() && c.n_rows() == d.n_rows() && a.n_cols() == c.n_cols() && b.n_cols() == d.n_cols();
    if ok {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!(
            "blocks {}x{} {}x{} / {}x{} {}x{} do not conform",
            a.n_rows(),
            a.n_cols(),
            b.n_rows(),
            b.n_cols(),
            c.n_rows(),
            c.n_cols(),
            d.n_rows(),
            d.n_cols()
        )))
    }
}

/// Stacks `[[a, b], [c, d]]` into one compressed-row matrix whose entries
/// equal the block entries exactly. Empty blocks contribute no structure.
pub fn compose_block<T: Real>(blocks: [[&CsrMatrix<T>; 2]; 2]) -> Result<CsrMatrix<T>> {
    let [[a, b], [c, d]] = blocks;
    let ok = a.n_rows() == b.n_rows() && c.n_rows() == d.n_rows() && a.n_cols() == c.n_cols() && b.n_cols() == d.n_cols();
    if !ok {
        return Err(Error::DimensionMismatch("2x2 block sizes do not conform".into()));
    }
    Ok(stack(a, b, c, d))
}

fn stack<T: Real>(a: &CsrMatrix<T>, b: &CsrMatrix<T>, c: &CsrMatrix<T>, d: &CsrMatrix<T>) -> CsrMatrix<T> {
    let shift = a.n_cols();
    let n_rows = a.n_rows() + c.n_rows();
    let n_cols = a.n_cols() + b.n_cols();
    let mut row_ptr = Vec::with_capacity(n_rows + 1);
    let mut col_idx = Vec::with_capacity(a.nnz() + b.nnz() + c.nnz() + d.nnz());
    let mut values = Vec::with_capacity(col_idx.capacity());
    row_ptr.push(0);
    for (left, right) in [(a, b), (c, d)] {
        for r in 0..left.n_rows() {
            for (col, v) in left.row(r) {
                col_idx.push(col);
                values.push(v);
            }
            for (col, v) in right.row(r) {
                col_idx.push(col + shift);
                values.push(v);
            }
            row_ptr.push(col_idx.len());
        }
    }
    CsrMatrix::new(n_rows, n_cols, row_ptr, col_idx, values).expect("stacked blocks keep CSR invariants")
}
