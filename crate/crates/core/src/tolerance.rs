//! Numeric comparison policy shared by every check.

/// Mixed absolute/relative closeness: `|x - y| <= atol + rtol * max(|x|, |y|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub atol: f64,
    pub rtol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            atol: 1e-9,
            rtol: 1e-7,
        }
    }
}

impl Tolerance {
    pub const fn new(atol: f64, rtol: f64) -> Self {
        Tolerance { atol, rtol }
    }

    /// Pure relative comparison.
    pub const fn relative(rtol: f64) -> Self {
        Tolerance { atol: 0.0, rtol }
    }

    pub fn close(&self, x: f64, y: f64) -> bool {
        (x - y).abs() <= self.atol + self.rtol * x.abs().max(y.abs())
    }
}

/// Relative threshold for asserting a tensor vanishes: a value counts as zero
/// when `|x| <= ZERO_SCALE * (1 + scale)` for the local curvature scale.
pub const ZERO_SCALE: f64 = 1e-8;

pub fn is_zero_at_scale(x: f64, scale: f64) -> bool {
    x.abs() <= ZERO_SCALE * (1.0 + scale)
}

/// Relative difference `|x - y| / max(|x|, |y|)`, zero when both vanish.
pub fn rel_diff(x: f64, y: f64) -> f64 {
    let m = x.abs().max(y.abs());
    if m == 0.0 {
        0.0
    } else {
        (x - y).abs() / m
    }
}
