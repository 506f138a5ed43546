//! Infinite-dimensional content: a rule calculus for the noncompactness
//! rates of operator expressions, and the shift model on `l^2(C)`.

mod expr;
mod mnc;
mod shift;

pub use expr::{Atom, OperatorExpr};
pub use mnc::{mnc_bounds, RateBounds, RateInterval};
pub use shift::{
    eigvec_norm_sq, shift_bifurcation_scan, shift_index, shift_model_report, shift_residual,
    truncated_shift_min, xi_equation_solvable, ShiftModelReport, ShiftPerturbation,
    ShiftResidual, ShiftScan, ShiftScanPoint, TruncatedMin, XiSolution, DEFAULT_SHIFT_TOL,
    SHIFT_EXPR,
};
