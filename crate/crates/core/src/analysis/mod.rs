//! Pointwise and scanned diagnostics built on a metric: signature checks,
//! radial null curves, singularity scans, t-slices and Killing residuals.

mod killing;
mod null;
mod scan;
mod signature;
mod slice;

use thiserror::Error;

use crate::expr::EvalError;
use crate::tensor::{Point, TensorError};

pub use killing::{killing_residual, KillingReport};
pub use null::{
    integrate_null_curve, null_residual, null_slopes, Branch, NullCurve, NullSlopes, Termination,
};
pub use scan::{
    approach_sequence, classify_approach, fit_power_law, scan_point, scan_singularity, Approach,
    Axis, AxisError, LocusReport, PowerFit, ScanGrid, ScanReport, ScanRow, Spacing,
};
pub use signature::{signature_at, Classification, SignatureReport};
pub use slice::{slice_coefficients, slice_metric};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("g00 vanishes at {0:?}; the null condition is not a quadratic in dt/dr")]
    DegenerateQuadratic(Point),
    #[error("no real null directions at {point:?} (discriminant {discriminant:e})")]
    ComplexSlopes { point: Point, discriminant: f64 },
    #[error("{0:?} is outside the regular domain")]
    OutsideDomain(Point),
    #[error("t = {0} is a degenerate slice")]
    DegenerateSlice(f64),
    #[error("invalid integration setup: {0}")]
    InvalidSetup(String),
}
