//! Metrics and the pointwise curvature pipeline.
//!
//! Metric partials are exact symbolic derivatives; everything from the
//! Christoffel symbols onward is assembled numerically at each point.

mod curvature;
mod derived;
pub mod linalg;
pub mod scalar;

use std::fmt;

use thiserror::Error;

use crate::expr::{Bindings, EvalError, Expr, Tape};

pub use curvature::{
    canonical_index, BianchiReport, CurvatureBundle, RiemannSign, SymmetryResiduals,
};
pub use derived::{DerivedMetric, MetricJet};

/// Coordinate values in metric order (x⁰..x³).
pub type Point = [f64; 4];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TensorError {
    #[error("degenerate metric at {point:?}: det = {det:e}")]
    Degenerate { point: Point, det: f64 },
    #[error("evaluation failed at {point:?}: {source}")]
    Eval {
        point: Point,
        #[source]
        source: EvalError,
    },
    #[error("metric expression uses symbol `{0}` that is neither a coordinate nor a parameter")]
    UnknownSymbol(String),
    #[error("invalid metric: {0}")]
    Invalid(String),
}

/// An excluded locus `|expr| <= band`.
#[derive(Debug, Clone)]
pub struct Guard {
    pub expr: Expr,
    pub band: f64,
}

/// Open coordinate intervals plus excluded loci.
#[derive(Debug, Clone)]
pub struct RegularDomain {
    pub intervals: [(f64, f64); 4],
    pub guards: Vec<Guard>,
}

impl Default for RegularDomain {
    fn default() -> Self {
        RegularDomain {
            intervals: [(f64::NEG_INFINITY, f64::INFINITY); 4],
            guards: Vec::new(),
        }
    }
}

impl RegularDomain {
    pub fn with_interval(mut self, coord: usize, lo: f64, hi: f64) -> Self {
        self.intervals[coord] = (lo, hi);
        self
    }

    pub fn with_guard(mut self, expr: Expr, band: f64) -> Self {
        self.guards.push(Guard { expr, band });
        self
    }
}

/// A symmetric 4×4 metric of expressions over four named coordinates and
/// optional named parameters.
#[derive(Clone)]
pub struct MetricSpec {
    name: String,
    coords: [String; 4],
    g: [[Expr; 4]; 4],
    params: Bindings,
    domain: RegularDomain,
    tape: Tape,
}

impl fmt::Debug for MetricSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricSpec")
            .field("name", &self.name)
            .field("coords", &self.coords)
            .field("g", &self.g)
            .finish_non_exhaustive()
    }
}

impl MetricSpec {
    /// Builds a metric from its upper-triangle entries; omitted entries are
    /// zero and the lower triangle mirrors the upper one.
    pub fn new(
        name: &str,
        coords: [&str; 4],
        upper: impl IntoIterator<Item = ((usize, usize), Expr)>,
        params: Bindings,
    ) -> Result<Self, TensorError> {
        for i in 0..4 {
            for j in 0..i {
                if coords[i] == coords[j] {
                    return Err(TensorError::Invalid(format!(
                        "duplicate coordinate `{}`",
                        coords[i]
                    )));
                }
            }
            if params.get(coords[i]).is_some() {
                return Err(TensorError::Invalid(format!(
                    "`{}` is both a coordinate and a parameter",
                    coords[i]
                )));
            }
        }
        let mut g: [[Expr; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| Expr::zero()));
        for ((i, j), e) in upper {
            if i > 3 || j > 3 {
                return Err(TensorError::Invalid(format!("index ({i},{j}) out of range")));
            }
            let (i, j) = (i.min(j), i.max(j));
            g[i][j] = e.clone();
            g[j][i] = e;
        }
        let coords = coords.map(str::to_string);
        let tape = compile(&flatten(&g), &coords, &params)?;
        Ok(MetricSpec {
            name: name.to_string(),
            coords,
            g,
            params,
            domain: RegularDomain::default(),
            tape,
        })
    }

    pub fn with_domain(mut self, domain: RegularDomain) -> Self {
        self.domain = domain;
        self
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn coords(&self) -> &[String; 4] {
        &self.coords
    }

    pub fn coord_index(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c == name)
    }

    pub fn entry(&self, i: usize, j: usize) -> &Expr {
        &self.g[i][j]
    }

    pub fn entries(&self) -> &[[Expr; 4]; 4] {
        &self.g
    }

    pub fn params(&self) -> &Bindings {
        &self.params
    }

    pub fn domain(&self) -> &RegularDomain {
        &self.domain
    }

    /// Input symbol order for compiled tapes: coordinates, then parameters.
    pub(crate) fn inputs(&self, p: &Point) -> Vec<f64> {
        p.iter().copied().chain(self.params.iter().map(|(_, v)| v)).collect()
    }

    pub fn bindings(&self, p: &Point) -> Bindings {
        let mut b = self.params.clone();
        for (name, v) in self.coords.iter().zip(p) {
            b.insert(name, *v);
        }
        b
    }

    pub fn eval_metric(&self, p: &Point) -> Result<[[f64; 4]; 4], TensorError> {
        let flat = self
            .tape
            .eval(&self.inputs(p))
            .map_err(|source| TensorError::Eval { point: *p, source })?;
        Ok(std::array::from_fn(|i| std::array::from_fn(|j| flat[4 * i + j])))
    }

    /// Determinant of the metric value matrix. Works at degenerate points.
    pub fn det_at(&self, p: &Point) -> Result<f64, TensorError> {
        Ok(linalg::det4(&self.eval_metric(p)?))
    }

    /// True when `p` lies in every open interval, clears every guard band
    /// and the metric evaluates there.
    pub fn is_regular(&self, p: &Point) -> bool {
        let in_intervals = self
            .domain
            .intervals
            .iter()
            .zip(p)
            .all(|(&(lo, hi), &x)| x > lo && x < hi);
        if !in_intervals {
            return false;
        }
        let b = self.bindings(p);
        let guards_clear = self
            .domain
            .guards
            .iter()
            .all(|g| g.expr.eval(&b).is_ok_and(|v| v.abs() > g.band));
        guards_clear && self.eval_metric(p).is_ok()
    }

    /// `g[i][j]` is the same expression as `g[j][i]` for all pairs.
    pub fn is_symmetric(&self) -> bool {
        (0..4).all(|i| (0..4).all(|j| self.g[i][j] == self.g[j][i]))
    }
}

pub(crate) fn flatten(g: &[[Expr; 4]; 4]) -> Vec<Expr> {
    g.iter().flatten().cloned().collect()
}

pub(crate) fn input_symbols(coords: &[String; 4], params: &Bindings) -> Vec<String> {
    coords
        .iter()
        .cloned()
        .chain(params.iter().map(|(k, _)| k.to_string()))
        .collect()
}

pub(crate) fn compile(
    exprs: &[Expr],
    coords: &[String; 4],
    params: &Bindings,
) -> Result<Tape, TensorError> {
    Tape::compile(exprs, &input_symbols(coords, params)).map_err(|e| match e {
        EvalError::Unbound(s) => TensorError::UnknownSymbol(s),
        other => TensorError::Invalid(other.to_string()),
    })
}
