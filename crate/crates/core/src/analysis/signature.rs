use crate::tensor::{linalg, MetricSpec, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    /// Minor signs `(+, −, +, −)`: the first coordinate is timelike and the
    /// metric has Lorentzian signature.
    TimeCoordinateOk,
    /// The metric fails to evaluate, or some minor is zero or non-finite.
    Degenerate,
    Other,
}

impl Classification {
    pub fn label(self) -> &'static str {
        match self {
            Classification::TimeCoordinateOk => "time_coordinate_ok",
            Classification::Degenerate => "degenerate",
            Classification::Other => "other",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignatureReport {
    pub point: Point,
    /// Leading principal minors of orders 1–4; NaN where the metric does
    /// not evaluate.
    pub minors: [f64; 4],
    pub classification: Classification,
}

pub fn signature_at(spec: &MetricSpec, p: &Point) -> SignatureReport {
    let Ok(g) = spec.eval_metric(p) else {
        return SignatureReport {
            point: *p,
            minors: [f64::NAN; 4],
            classification: Classification::Degenerate,
        };
    };
    let minors = linalg::leading_minors(&g);
    let classification = if minors.iter().any(|m| !m.is_finite() || *m == 0.0) {
        Classification::Degenerate
    } else if minors[0] > 0.0 && minors[1] < 0.0 && minors[2] > 0.0 && minors[3] < 0.0 {
        Classification::TimeCoordinateOk
    } else {
        Classification::Other
    };
    SignatureReport {
        point: *p,
        minors,
        classification,
    }
}
