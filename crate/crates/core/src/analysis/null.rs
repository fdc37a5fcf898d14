use crate::tensor::{MetricSpec, Point};

use super::AnalysisError;

/// The two roots of the radial null condition
/// `g00 (dt)² + 2 g01 dt dr + g11 (dr)² = 0`, as `dt/dr`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullSlopes {
    pub plus: f64,
    pub minus: f64,
}

impl NullSlopes {
    pub fn get(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Plus => self.plus,
            Branch::Minus => self.minus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn label(self) -> &'static str {
        match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        }
    }
}

/// `dt/dr = (−g01 ± √(g01² − g00 g11)) / g00` at `p`.
pub fn null_slopes(spec: &MetricSpec, p: &Point) -> Result<NullSlopes, AnalysisError> {
    let g = spec.eval_metric(p)?;
    let (g00, g01, g11) = (g[0][0], g[0][1], g[1][1]);
    if g00 == 0.0 || !g00.is_finite() {
        return Err(AnalysisError::DegenerateQuadratic(*p));
    }
    let disc = g01 * g01 - g00 * g11;
    if disc.is_nan() || disc < 0.0 {
        return Err(AnalysisError::ComplexSlopes {
            point: *p,
            discriminant: disc,
        });
    }
    let root = disc.sqrt();
    Ok(NullSlopes {
        plus: (-g01 + root) / g00,
        minus: (-g01 - root) / g00,
    })
}

/// `|g00 s² + 2 g01 s + g11|` divided by the sum of the term magnitudes.
pub fn null_residual(spec: &MetricSpec, p: &Point, slope: f64) -> Result<f64, AnalysisError> {
    let g = spec.eval_metric(p)?;
    let terms = [g[0][0] * slope * slope, 2.0 * g[0][1] * slope, g[1][1]];
    let scale: f64 = terms.iter().map(|x| x.abs()).sum();
    let sum: f64 = terms.iter().sum();
    Ok(if scale == 0.0 { 0.0 } else { sum.abs() / scale })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Termination {
    ReachedEnd,
    /// No step, however small, stays inside the regular domain.
    DomainBoundary { t: f64, r: f64 },
    /// An inward curve reached the smallest allowed radius.
    RadiusLimit { r: f64 },
}

impl Termination {
    pub fn label(&self) -> &'static str {
        match self {
            Termination::ReachedEnd => "reached_end",
            Termination::DomainBoundary { .. } => "domain_boundary",
            Termination::RadiusLimit { .. } => "radius_limit",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NullCurve {
    pub branch: Branch,
    /// `(t, r)` samples in integration order; the angles stay fixed.
    pub samples: Vec<(f64, f64)>,
    pub null_residual: Vec<f64>,
    pub step_size: f64,
    pub termination: Termination,
}

/// Number of times a step may be halved before the curve is stopped.
const MAX_HALVINGS: u32 = 30;

/// RK4 in `r` for `dt/dr = slope_branch(t, r)` at fixed angles, from
/// `start` toward `r_end` with nominal step `step`. A step that leaves the
/// regular domain is halved until it fits; inward curves stop at `r_min`.
pub fn integrate_null_curve(
    spec: &MetricSpec,
    start: Point,
    branch: Branch,
    r_end: f64,
    step: f64,
    r_min: f64,
) -> Result<NullCurve, AnalysisError> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(AnalysisError::InvalidSetup(format!("step must be positive, got {step}")));
    }
    if !(r_end > 0.0 && r_end.is_finite()) {
        return Err(AnalysisError::InvalidSetup(format!("r_end must be positive, got {r_end}")));
    }
    if !spec.is_regular(&start) || start[1] < r_min {
        return Err(AnalysisError::OutsideDomain(start));
    }
    let at = |t: f64, r: f64| -> Point { [t, r, start[2], start[3]] };
    let slope = |t: f64, r: f64| -> Option<f64> {
        let p = at(t, r);
        if !spec.is_regular(&p) {
            return None;
        }
        null_slopes(spec, &p).ok().map(|s| s.get(branch))
    };
    let rk4 = |t: f64, r: f64, h: f64| -> Option<f64> {
        let k1 = slope(t, r)?;
        let k2 = slope(t + 0.5 * h * k1, r + 0.5 * h)?;
        let k3 = slope(t + 0.5 * h * k2, r + 0.5 * h)?;
        let k4 = slope(t + h * k3, r + h)?;
        let next = t + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
        (next.is_finite() && spec.is_regular(&at(next, r + h))).then_some(next)
    };

    let dir = if r_end >= start[1] { 1.0 } else { -1.0 };
    let (mut t, mut r) = (start[0], start[1]);
    let mut samples = vec![(t, r)];
    let mut residuals = vec![null_residual(spec, &start, slope(t, r).unwrap_or(f64::NAN))?];
    let termination = loop {
        let remaining = (r_end - r) * dir;
        if remaining <= 1e-12 * r_end.abs().max(1.0) {
            break Termination::ReachedEnd;
        }
        if dir < 0.0 && r <= r_min {
            break Termination::RadiusLimit { r };
        }
        let mut h = dir * step.min(remaining);
        if r + h < r_min {
            h = r_min - r;
        }
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            if let Some(next) = rk4(t, r, h) {
                accepted = Some(next);
                break;
            }
            h *= 0.5;
        }
        let Some(next) = accepted else {
            break Termination::DomainBoundary { t, r };
        };
        t = next;
        r = if (r_end - (r + h)) * dir <= 1e-12 * r_end.abs().max(1.0) {
            r_end
        } else {
            r + h
        };
        let s = slope(t, r).unwrap_or(f64::NAN);
        samples.push((t, r));
        residuals.push(null_residual(spec, &at(t, r), s)?);
    };
    Ok(NullCurve {
        branch,
        samples,
        null_residual: residuals,
        step_size: step,
        termination,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, reference};

    #[test]
    fn theorem2_slopes_match_closed_form() {
        let spec = catalog::theorem2();
        let s = null_slopes(&spec, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        assert!((s.plus - 0.1767766953).abs() < 1e-10);
        assert!((s.minus + 0.1767766953).abs() < 1e-10);
        let s = null_slopes(&spec, &[0.0, 2.0, 1.0, 0.0]).unwrap();
        assert!((s.plus - 0.0883883476).abs() < 1e-10);
        for &(t, r) in &[(0.7, 0.3), (2.5, 11.0), (-1.0, 0.06)] {
            let s = null_slopes(&spec, &[t, r, 1.0, 0.0]).unwrap();
            let want = reference::null_slope(t, r);
            assert!((s.plus - want).abs() <= 1e-12 * want);
        }
    }

    #[test]
    fn minkowski_light_cone() {
        let s = null_slopes(&catalog::minkowski(), &[0.0; 4]).unwrap();
        assert_eq!((s.plus, s.minus), (1.0, -1.0));
    }

    #[test]
    fn spacelike_time_has_complex_slopes() {
        let spec = MetricSpec::new(
            "flipped",
            catalog::COORDS,
            [((0, 0), crate::Expr::one()), ((1, 1), crate::Expr::one())],
            crate::Bindings::new(),
        )
        .unwrap();
        let err = null_slopes(&spec, &[0.0; 4]).unwrap_err();
        assert!(matches!(err, AnalysisError::ComplexSlopes { .. }));
        let spec = MetricSpec::new("null", catalog::COORDS, [], crate::Bindings::new()).unwrap();
        assert!(matches!(
            null_slopes(&spec, &[0.0; 4]),
            Err(AnalysisError::DegenerateQuadratic(_))
        ));
    }

    #[test]
    fn minkowski_curve_is_straight() {
        let c = integrate_null_curve(
            &catalog::minkowski(),
            [0.0, 1.0, 0.0, 0.0],
            Branch::Plus,
            3.0,
            0.1,
            catalog::R_MIN,
        )
        .unwrap();
        assert_eq!(c.termination, Termination::ReachedEnd);
        let &(t, r) = c.samples.last().unwrap();
        assert_eq!(r, 3.0);
        assert!((t - 2.0).abs() < 1e-12);
    }

    #[test]
    fn inward_curve_stops_at_radius_limit() {
        let c = integrate_null_curve(
            &catalog::theorem2(),
            [0.5, 1.0, 1.0, 0.0],
            Branch::Plus,
            1e-6,
            0.05,
            1e-3,
        )
        .unwrap();
        assert!(matches!(c.termination, Termination::RadiusLimit { .. }));
        assert!(c.samples.iter().all(|&(_, r)| r >= 1e-3));
    }

    #[test]
    fn rejects_degenerate_start() {
        let err = integrate_null_curve(
            &catalog::theorem2(),
            [-std::f64::consts::FRAC_PI_2, 1.0, 1.0, 0.0],
            Branch::Plus,
            10.0,
            0.1,
            catalog::R_MIN,
        )
        .unwrap_err();
        assert!(matches!(err, AnalysisError::OutsideDomain(_)));
    }
}
