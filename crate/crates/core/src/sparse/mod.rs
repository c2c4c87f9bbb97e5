//! Compressed-row matrices, 2×2 block composition and the direct solver
//! behind every linear solve.

mod block;
mod csr;
mod lu;
mod ordering;

pub use block::{compose_block, BlockSystem};
pub use csr::CsrMatrix;
pub use lu::{factor_solve, Ordering, SparseLu};
pub use ordering::{nested_dissection, symmetric_graph};
