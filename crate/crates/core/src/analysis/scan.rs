use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::tensor::{DerivedMetric, MetricSpec, Point};

use super::AnalysisError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// `n` values from `lo` to `hi` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    pub spacing: Spacing,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxisError {
    #[error("axis `{0}` must look like lo:hi:n or lo:hi:nlog")]
    Format(String),
    #[error("axis `{0}`: log spacing needs 0 < lo and 0 < hi")]
    NonPositiveLog(String),
    #[error("axis `{0}`: need at least one point")]
    Empty(String),
}

impl Axis {
    pub fn linear(lo: f64, hi: f64, n: usize) -> Self {
        Axis {
            lo,
            hi,
            n,
            spacing: Spacing::Linear,
        }
    }

    pub fn log(lo: f64, hi: f64, n: usize) -> Self {
        Axis {
            lo,
            hi,
            n,
            spacing: Spacing::Log,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        let last = (self.n - 1) as f64;
        (0..self.n)
            .map(|i| {
                let s = i as f64 / last;
                if i + 1 == self.n {
                    return self.hi;
                }
                match self.spacing {
                    Spacing::Linear => self.lo + (self.hi - self.lo) * s,
                    Spacing::Log => (self.lo.ln() + (self.hi.ln() - self.lo.ln()) * s).exp(),
                }
            })
            .collect()
    }
}

impl FromStr for Axis {
    type Err = AxisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || AxisError::Format(s.to_string());
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let [lo, hi, n] = parts[..] else {
            return Err(bad());
        };
        let lo: f64 = lo.parse().map_err(|_| bad())?;
        let hi: f64 = hi.parse().map_err(|_| bad())?;
        let (n, spacing) = match n.strip_suffix("log") {
            Some(n) => (n, Spacing::Log),
            None => (n, Spacing::Linear),
        };
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(bad());
        }
        if n == 0 {
            return Err(AxisError::Empty(s.to_string()));
        }
        if spacing == Spacing::Log && !(lo > 0.0 && hi > 0.0) {
            return Err(AxisError::NonPositiveLog(s.to_string()));
        }
        Ok(Axis { lo, hi, n, spacing })
    }
}

/// Curvature and metric size at one point. Fields are NaN where the metric
/// or its curvature cannot be evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub point: Point,
    pub kretschmann: f64,
    pub det: f64,
    pub max_metric_component: f64,
}

pub fn scan_point(derived: &DerivedMetric, p: &Point) -> ScanRow {
    let spec = derived.spec();
    let (det, max_metric_component) = match spec.eval_metric(p) {
        Ok(g) => (
            crate::tensor::linalg::det4(&g),
            g.iter().flatten().fold(0.0, |m: f64, x| m.max(x.abs())),
        ),
        Err(_) => (f64::NAN, f64::NAN),
    };
    let kretschmann = derived.kretschmann(p).unwrap_or(f64::NAN);
    ScanRow {
        point: *p,
        kretschmann,
        det,
        max_metric_component,
    }
}

/// Ordinary least squares fit of `ln y = slope · ln x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerFit {
    pub slope: f64,
    pub intercept: f64,
    pub n: usize,
    /// Largest absolute residual in `ln y`.
    pub max_residual: f64,
}

/// Fits a power law through the points with positive, finite coordinates.
/// Needs at least two such points with distinct `x`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Option<PowerFit> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| x.is_finite() && y.is_finite() && *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let n = logs.len();
    if n < 2 {
        return None;
    }
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n as f64;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n as f64;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = logs
        .iter()
        .map(|(x, y)| (y - (slope * x + intercept)).abs())
        .fold(0.0, f64::max);
    Some(PowerFit {
        slope,
        intercept,
        n,
        max_residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Approach {
    /// The Kretschmann scalar grows without bound.
    Essential,
    /// Metric components blow up while the Kretschmann scalar does not grow.
    NonEssential,
    Regular,
}

impl Approach {
    pub fn label(self) -> &'static str {
        match self {
            Approach::Essential => "essential",
            Approach::NonEssential => "non_essential",
            Approach::Regular => "regular",
        }
    }
}

/// Growth across a sequence that counts as "without bound": the last value
/// must exceed `BLOWUP_RATIO · max(first, 1)`, so that growth among tiny
/// values does not register.
const BLOWUP_RATIO: f64 = 100.0;

fn blows_up(xs: &[f64]) -> bool {
    let (first, last) = (xs[0], xs[xs.len() - 1]);
    last >= BLOWUP_RATIO * first.max(1.0) && monotone_increasing(xs)
}

fn monotone_increasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] >= w[0])
}

/// Classifies rows ordered toward a candidate singular locus.
pub fn classify_approach(rows: &[ScanRow]) -> Approach {
    let rows: Vec<&ScanRow> = rows
        .iter()
        .filter(|r| r.kretschmann.is_finite() && r.max_metric_component.is_finite())
        .collect();
    if rows.len() < 2 {
        return Approach::Regular;
    }
    let k: Vec<f64> = rows.iter().map(|r| r.kretschmann.abs()).collect();
    let m: Vec<f64> = rows.iter().map(|r| r.max_metric_component).collect();
    if blows_up(&k) {
        Approach::Essential
    } else if blows_up(&m) && k[k.len() - 1] <= k[0] {
        Approach::NonEssential
    } else {
        Approach::Regular
    }
}

/// Rows at `base` with coordinate `coord` set to `target + offset` for each
/// offset, in the given order.
pub fn approach_sequence(
    derived: &DerivedMetric,
    base: Point,
    coord: usize,
    target: f64,
    offsets: &[f64],
) -> Vec<ScanRow> {
    offsets
        .iter()
        .map(|&d| {
            let mut p = base;
            p[coord] = target + d;
            scan_point(derived, &p)
        })
        .collect()
}

/// A `t × r` grid at fixed angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanGrid {
    pub t: Axis,
    pub r: Axis,
    pub theta: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocusReport {
    /// Coordinate index varied along the approach.
    pub coordinate: usize,
    /// Value of the other grid coordinate, held fixed.
    pub fixed: f64,
    /// Value of the varied coordinate at the end of the approach.
    pub toward: f64,
    pub kind: Approach,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    /// Row-major in `t`, then `r`.
    pub rows: Vec<ScanRow>,
    /// Power-law fit of K against r for each `t`.
    pub fits: Vec<(f64, PowerFit)>,
    /// Non-regular approaches: toward the small-`r` end of every `t` line,
    /// and from the middle of every `r` column toward both `t` ends.
    pub loci: Vec<LocusReport>,
}

pub fn scan_singularity(spec: &MetricSpec, grid: &ScanGrid) -> Result<ScanReport, AnalysisError> {
    let derived = DerivedMetric::new(spec)?;
    let ts = grid.t.values();
    let rs = grid.r.values();
    let points: Vec<Point> = ts
        .iter()
        .flat_map(|&t| rs.iter().map(move |&r| [t, r, grid.theta, grid.phi]))
        .collect();
    let rows: Vec<ScanRow> = points.par_iter().map(|p| scan_point(&derived, p)).collect();
    let at = |i: usize, j: usize| rows[i * rs.len() + j];

    let mut fits = Vec::new();
    let mut loci = Vec::new();
    for (i, &t) in ts.iter().enumerate() {
        let line: Vec<(f64, f64)> = (0..rs.len()).map(|j| (rs[j], at(i, j).kretschmann)).collect();
        if let Some(fit) = fit_power_law(&line) {
            fits.push((t, fit));
        }
        let mut seq: Vec<ScanRow> = (0..rs.len()).map(|j| at(i, j)).collect();
        seq.sort_by(|a, b| b.point[1].total_cmp(&a.point[1]));
        push_locus(&mut loci, &seq, 1, t);
    }
    let mid = ts.len() / 2;
    for (j, &r) in rs.iter().enumerate() {
        let down: Vec<ScanRow> = (0..=mid).rev().map(|i| at(i, j)).collect();
        let up: Vec<ScanRow> = (mid..ts.len()).map(|i| at(i, j)).collect();
        push_locus(&mut loci, &down, 0, r);
        push_locus(&mut loci, &up, 0, r);
    }
    Ok(ScanReport { rows, fits, loci })
}

fn push_locus(loci: &mut Vec<LocusReport>, seq: &[ScanRow], coordinate: usize, fixed: f64) {
    let Some(last) = seq.last() else { return };
    let kind = classify_approach(seq);
    if kind != Approach::Regular {
        loci.push(LocusReport {
            coordinate,
            fixed,
            toward: last.point[coordinate],
            kind,
        });
    }
}
