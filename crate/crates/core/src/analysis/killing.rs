use crate::expr::Expr;
use crate::tensor::{linalg, MetricSpec, Point, TensorError};

use super::AnalysisError;

#[derive(Debug, Clone, PartialEq)]
pub struct KillingReport {
    /// `K_μν = ∂_μ ξ_ν + ∂_ν ξ_μ − 2 Γ^λ_μν ξ_λ`.
    pub residual: [[f64; 4]; 4],
    /// Largest magnitude among the terms that make up each entry.
    pub scale: f64,
}

impl KillingReport {
    pub fn max_abs(&self) -> f64 {
        self.residual.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// `max |K_μν| / max(1, scale)`.
    pub fn normalized(&self) -> f64 {
        self.max_abs() / self.scale.max(1.0)
    }
}

/// Symmetrized covariant derivative of the lowered field `ξ_ν = g_νλ ξ^λ`.
/// Uses `Γ^λ_μν ξ_λ = Γ_λμν ξ^λ`, so no inverse metric is needed.
pub fn killing_residual(spec: &MetricSpec, xi: &[Expr; 4], p: &Point) -> Result<KillingReport, AnalysisError> {
    let g = spec.eval_metric(p)?;
    let det = linalg::det4(&g);
    if !det.is_finite() || det.abs() <= linalg::SINGULAR_DET {
        return Err(TensorError::Degenerate { point: *p, det }.into());
    }
    let coords = spec.coords();
    let b = spec.bindings(p);
    let lowered: Vec<Expr> = (0..4)
        .map(|n| {
            (0..4).fold(Expr::zero(), |acc, l| acc.add(spec.entry(n, l).clone().mul(xi[l].clone())))
        })
        .collect();
    let mut d_low = [[0.0; 4]; 4];
    let mut dg = [[[0.0; 4]; 4]; 4];
    for (m, c) in coords.iter().enumerate() {
        for n in 0..4 {
            d_low[m][n] = lowered[n].diff(c).eval(&b)?;
            for k in n..4 {
                let v = spec.entry(n, k).diff(c).eval(&b)?;
                dg[m][n][k] = v;
                dg[m][k][n] = v;
            }
        }
    }
    let up: Vec<f64> = xi.iter().map(|e| e.eval(&b)).collect::<Result<_, _>>()?;
    let mut residual = [[0.0; 4]; 4];
    let mut scale = 0.0f64;
    for m in 0..4 {
        for n in 0..4 {
            let conn: f64 = (0..4)
                .map(|l| 0.5 * (dg[m][l][n] + dg[n][l][m] - dg[l][m][n]) * up[l])
                .sum();
            residual[m][n] = d_low[m][n] + d_low[n][m] - 2.0 * conn;
            scale = scale.max(d_low[m][n].abs()).max(d_low[n][m].abs()).max(2.0 * conn.abs());
        }
    }
    Ok(KillingReport { residual, scale })
}
