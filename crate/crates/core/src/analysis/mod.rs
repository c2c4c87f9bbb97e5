//! Error norms against exact solutions, observed orders and convergence tables.

mod norms;
mod study;

pub use norms::{error_norms, observed_order, p_error_l2, ErrorReport};
pub use study::{convergence_study, ConvergenceRow, ConvergenceTable, RefinementAxis, StudyLevel, CSV_HEADER};
