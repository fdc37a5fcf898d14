//! Published closed forms for the time-periodic solution, written directly
//! in `f64` so they stay independent of the expression engine.
//!
//! Throughout, `s = sin t`, `c = cos t`, `f = 1 + s`.

/// The eight printed lowered Riemann components, in their printed index
/// order. Every other component is either related to these by symmetry or
/// vanishes.
pub const PRINTED_RIEMANN: [[usize; 4]; 8] = [
    [2, 1, 2, 1],
    [0, 1, 0, 1],
    [0, 2, 2, 1],
    [0, 3, 0, 1],
    [0, 3, 0, 3],
    [0, 2, 3, 2],
    [0, 2, 0, 2],
    [0, 1, 3, 1],
];

fn trig(t: f64) -> (f64, f64, f64) {
    let s = t.sin();
    let c = t.cos();
    (s, c, 1.0 + s)
}

/// Metric entries `η_μν`.
pub fn metric(t: f64, r: f64) -> [[f64; 4]; 4] {
    let (s, c, f) = trig(t);
    let mut g = [[0.0; 4]; 4];
    g[0][0] = 16.0 * r.powf(1.5) * (1.0 + s + c * c) / f.powi(8);
    g[0][3] = r / f.powi(4);
    g[3][0] = g[0][3];
    g[1][1] = -1.0 / (r.sqrt() * f.powi(6));
    g[2][2] = -f * f / r.sqrt();
    g
}

/// Printed closed form for `R_{idx}`; `None` for index orders that were not
/// printed.
pub fn riemann_closed_form(idx: [usize; 4], t: f64, r: f64) -> Option<f64> {
    let (s, c, f) = trig(t);
    let sr = r.sqrt();
    let v = match idx {
        [2, 1, 2, 1] => f * f / (4.0 * r.powf(2.5)),
        [0, 1, 0, 1] => (2.0 * f * s - 2.0 * c * c) / (sr * f.powi(8)),
        [0, 2, 2, 1] => 3.0 * f * c / (2.0 * r.powf(1.5)),
        [0, 3, 0, 1] => 3.0 * c / (2.0 * f.powi(5)),
        [0, 3, 0, 3] => -sr / (4.0 * f * f),
        [0, 2, 3, 2] => f.powi(4) / (8.0 * r),
        [0, 2, 0, 2] => (2.0 * f * s + 10.0 * c * c) / sr,
        [0, 1, 3, 1] => 1.0 / (8.0 * r * f.powi(4)),
        _ => return None,
    };
    Some(v)
}

/// `R^{αβγδ} R_{αβγδ} = 3 (1 + sin t)^12 / (4 r³)`.
pub fn kretschmann(t: f64, r: f64) -> f64 {
    let (_, _, f) = trig(t);
    3.0 * f.powi(12) / (4.0 * r.powi(3))
}

/// `det η = −r / (1 + sin t)^12`.
pub fn det(t: f64, r: f64) -> f64 {
    let (_, _, f) = trig(t);
    -r / f.powi(12)
}

/// Leading principal minors of orders 1–4.
pub fn minors(t: f64, r: f64) -> [f64; 4] {
    let (s, c, f) = trig(t);
    let x = 1.0 + s + c * c;
    [
        16.0 * r.powf(1.5) * x / f.powi(8),
        -16.0 * r * x / f.powi(14),
        16.0 * r.sqrt() * x / f.powi(12),
        -r / f.powi(12),
    ]
}

/// Positive root of the radial null condition, `dt/dr = √(1+sin t)/(4r√(2−sin t))`.
pub fn null_slope(t: f64, r: f64) -> f64 {
    let (s, _, f) = trig(t);
    f.sqrt() / (4.0 * r * (2.0 - s).sqrt())
}

/// Coefficients `(dr², dθ²)` of the t-slice metric as published:
/// `−1/(√r (1+sin t)²) [dr² + (1+sin t)⁸ dθ²]`.
pub fn slice_published(t: f64, r: f64) -> (f64, f64) {
    let (_, _, f) = trig(t);
    let pre = -1.0 / (r.sqrt() * f * f);
    (pre, pre * f.powi(8))
}

/// Parameter functions of the family member that reproduces the metric:
/// `f = 1 + sin t`, `c = f^{-4}`.
pub fn h(t: f64) -> f64 {
    let (s, c, f) = trig(t);
    // H = (8 f_t² − 4 f f_tt) / f⁸ with f_t = cos t, f_tt = −sin t
    (8.0 * c * c + 4.0 * f * s) / f.powi(8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn spot_values() {
        assert_eq!(metric(0.0, 1.0)[0][0], 32.0);
        assert_eq!(kretschmann(0.0, 1.0), 0.75);
        assert_eq!(kretschmann(FRAC_PI_2, 1.0), 3072.0);
        assert_eq!(det(0.0, 4.0), -4.0);
        assert_eq!(minors(0.0, 1.0), [32.0, -32.0, 32.0, -1.0]);
        assert_eq!(riemann_closed_form([2, 1, 2, 1], FRAC_PI_2, 1.0), Some(1.0));
        assert_eq!(riemann_closed_form([0, 3, 0, 3], 0.0, 4.0), Some(-0.5));
        assert_eq!(riemann_closed_form([0, 1, 3, 1], 0.0, 1.0), Some(0.125));
        assert!((null_slope(0.0, 1.0) - 0.1767766953).abs() < 1e-10);
        assert!((null_slope(0.0, 2.0) - 0.0883883476).abs() < 1e-10);
        assert_eq!(slice_published(0.0, 4.0), (-0.5, -0.5));
        assert_eq!(slice_published(FRAC_PI_2, 1.0).1, -64.0);
        assert_eq!(h(0.0), 8.0);
    }

    #[test]
    fn eta00_is_four_h_r_three_halves() {
        for &(t, r) in &[(0.3, 2.0), (2.0, 0.4), (-1.0, 7.0)] {
            let lhs = metric(t, r)[0][0];
            let rhs = 4.0 * h(t) * r.powf(1.5);
            assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs());
        }
    }
}
