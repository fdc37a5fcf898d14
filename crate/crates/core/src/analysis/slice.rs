use crate::expr::Expr;
use crate::tensor::{MetricSpec, Point};

use super::AnalysisError;

/// The `(x¹, x²)` block of the metric with the time coordinate frozen at
/// `t0`. Fails when `t0` is outside the time interval of the regular domain
/// or inside a guard band that depends on time alone.
pub fn slice_metric(spec: &MetricSpec, t0: f64) -> Result<[[Expr; 2]; 2], AnalysisError> {
    let time = &spec.coords()[0];
    let domain = spec.domain();
    let (lo, hi) = domain.intervals[0];
    if !(t0 > lo && t0 < hi) || !t0.is_finite() {
        return Err(AnalysisError::DegenerateSlice(t0));
    }
    let mut b = spec.params().clone();
    b.insert(time, t0);
    for guard in &domain.guards {
        let spatial = spec.coords()[1..].iter().any(|c| guard.expr.depends_on(c));
        if !spatial && guard.expr.eval(&b).map_or(true, |v| v.abs() <= guard.band) {
            return Err(AnalysisError::DegenerateSlice(t0));
        }
    }
    let t = Expr::constant(t0);
    Ok(std::array::from_fn(|i| {
        std::array::from_fn(|j| spec.entry(i + 1, j + 1).substitute(time, &t))
    }))
}

/// [`slice_metric`] evaluated at the spatial coordinates of `p`.
pub fn slice_coefficients(spec: &MetricSpec, t0: f64, p: &Point) -> Result<[[f64; 2]; 2], AnalysisError> {
    let block = slice_metric(spec, t0)?;
    let b = spec.bindings(&[t0, p[1], p[2], p[3]]);
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = block[i][j].eval(&b)?;
        }
    }
    Ok(out)
}
