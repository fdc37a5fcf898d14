//! Metric constructors: the ansatz family, the Ricci-flat family built from
//! five free functions of `t`, the fixed time-periodic solution, and
//! Minkowski/Schwarzschild references.

mod derivation;
pub mod random;
pub mod reference;

use std::f64::consts::PI;

use thiserror::Error;

use crate::expr::{parse, Bindings, EvalError, Expr};
use crate::tensor::{DerivedMetric, MetricSpec, RegularDomain, RiemannSign, TensorError};

pub use derivation::{derivation_residuals, Residual, Stage, StageReport, CLOSED_FORM_SIGN};

/// Coordinate names, in metric order.
pub const COORDS: [&str; 4] = ["t", "r", "theta", "phi"];

/// Half-width in `t` of the excluded band around `t = 2kπ − π/2`.
pub const T_GUARD: f64 = 1e-3;

/// Smallest `r` a null curve may reach.
pub const R_MIN: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("`{0}` must be a function of t only but depends on r")]
    RDependence(&'static str),
    #[error("`{name}` vanishes near t = {t}")]
    Vanishing { name: &'static str, t: f64 },
    #[error("Schwarzschild mass must be positive and finite, got {0}")]
    InvalidMass(f64),
    #[error("stage {stage:?} precondition violated: {reason}")]
    StagePrecondition { stage: Stage, reason: String },
}

fn p(text: &str) -> Expr {
    parse(text).expect("built-in expression parses")
}

fn sym(name: &str) -> Expr {
    Expr::symbol(name)
}

/// The guard `1 + sin t` with a band equivalent to `|t − (2kπ − π/2)| > T_GUARD`.
fn periodic_guard() -> (Expr, f64) {
    (p("1+sin(t)"), 1.0 - T_GUARD.cos())
}

pub fn minkowski() -> MetricSpec {
    MetricSpec::new(
        "minkowski",
        COORDS,
        [
            ((0, 0), Expr::one()),
            ((1, 1), Expr::constant(-1.0)),
            ((2, 2), Expr::constant(-1.0)),
            ((3, 3), Expr::constant(-1.0)),
        ],
        Bindings::new(),
    )
    .expect("minkowski metric")
}

/// Schwarzschild in Schwarzschild coordinates, signature (+,−,−,−),
/// regular for `r > 2M` and `0 < θ < π`.
pub fn schwarzschild(mass: f64) -> Result<MetricSpec, CatalogError> {
    if !(mass.is_finite() && mass > 0.0) {
        return Err(CatalogError::InvalidMass(mass));
    }
    let spec = MetricSpec::new(
        "schwarzschild",
        COORDS,
        [
            ((0, 0), p("1-2*M/r")),
            ((1, 1), p("-1/(1-2*M/r)")),
            ((2, 2), p("-r^2")),
            ((3, 3), p("-r^2*sin(theta)^2")),
        ],
        Bindings::new().with("M", mass),
    )?;
    Ok(spec.with_domain(
        RegularDomain::default()
            .with_interval(1, 2.0 * mass, f64::INFINITY)
            .with_interval(2, 0.0, PI),
    ))
}

/// Free functions of the ansatz
/// `ds² = u²dt² + 2q dt dr + 2v dt dφ − a²b² dr² − a² dθ²`.
#[derive(Debug, Clone)]
pub struct AnsatzFunctions {
    pub u: Expr,
    pub v: Expr,
    pub a: Expr,
    pub b: Expr,
    pub q: Expr,
}

impl AnsatzFunctions {
    pub fn parse(u: &str, v: &str, a: &str, b: &str, q: &str) -> Result<Self, crate::ParseError> {
        Ok(AnsatzFunctions {
            u: parse(u)?,
            v: parse(v)?,
            a: parse(a)?,
            b: parse(b)?,
            q: parse(q)?,
        })
    }
}

pub fn build_ansatz(fns: &AnsatzFunctions) -> Result<MetricSpec, CatalogError> {
    if fns.b.depends_on("r") {
        return Err(CatalogError::RDependence("b"));
    }
    if fns.q.depends_on("r") {
        return Err(CatalogError::RDependence("q"));
    }
    let a2 = fns.a.clone().powf(2.0);
    let spec = MetricSpec::new(
        "ansatz",
        COORDS,
        [
            ((0, 0), fns.u.clone().powf(2.0)),
            ((0, 1), fns.q.clone()),
            ((0, 3), fns.v.clone()),
            ((1, 1), a2.clone().mul(fns.b.clone().powf(2.0)).neg()),
            ((2, 2), a2.neg()),
        ],
        Bindings::new(),
    )?;
    Ok(spec.with_domain(RegularDomain::default().with_interval(1, 0.0, f64::INFINITY)))
}

/// The free functions of `t` that pick one member of the Ricci-flat family.
#[derive(Debug, Clone)]
pub struct SolutionParams {
    pub f: Expr,
    pub c: Expr,
    pub q: Expr,
    pub h0: Expr,
    pub h1: Expr,
}

impl SolutionParams {
    pub fn parse(f: &str, c: &str, q: &str, h0: &str, h1: &str) -> Result<Self, crate::ParseError> {
        Ok(SolutionParams {
            f: parse(f)?,
            c: parse(c)?,
            q: parse(q)?,
            h0: parse(h0)?,
            h1: parse(h1)?,
        })
    }

    /// `H0 = H1 = 0`, `c = 1/f⁴`, `f = 1 + sin t`, `q = 0`.
    pub fn periodic() -> Self {
        SolutionParams {
            f: p("1+sin(t)"),
            c: p("(1+sin(t))^(-4)"),
            q: Expr::zero(),
            h0: Expr::zero(),
            h1: Expr::zero(),
        }
    }

    fn check_time_only(&self) -> Result<(), CatalogError> {
        for (name, e) in [
            ("f", &self.f),
            ("c", &self.c),
            ("q", &self.q),
            ("H0", &self.h0),
            ("H1", &self.h1),
        ] {
            if e.depends_on("r") {
                return Err(CatalogError::RDependence(name));
            }
        }
        Ok(())
    }

    /// Fails when `f` or `c` evaluates to (near) zero anywhere on a dense
    /// grid of `[t_lo, t_hi]`.
    pub fn check_nonvanishing(&self, t_lo: f64, t_hi: f64) -> Result<(), CatalogError> {
        const SAMPLES: usize = 512;
        for (name, e) in [("f", &self.f), ("c", &self.c)] {
            let mut prev: Option<f64> = None;
            for i in 0..=SAMPLES {
                let t = t_lo + (t_hi - t_lo) * i as f64 / SAMPLES as f64;
                match e.eval(&Bindings::new().with("t", t)) {
                    Ok(v) if v.abs() > 1e-12 && prev.is_none_or(|p| p.signum() == v.signum()) => {
                        prev = Some(v);
                    }
                    _ => return Err(CatalogError::Vanishing { name, t }),
                }
            }
        }
        Ok(())
    }
}

/// `H = (24 c f_t² + 4 c_t f f_t − 4 c f f_tt) / (f⁸ c)`, built by
/// differentiating `f` and `c`.
#[allow(non_snake_case)]
pub fn H_of(params: &SolutionParams) -> Expr {
    let f = params.f.clone();
    let c = params.c.clone();
    let f_t = f.diff("t");
    let f_tt = f_t.diff("t");
    let c_t = c.diff("t");
    let num = c
        .clone()
        .mul(f_t.clone().powf(2.0))
        .scale(24.0)
        .add(c_t.mul(f.clone()).mul(f_t).scale(4.0))
        .sub(c.clone().mul(f.clone()).mul(f_tt).scale(4.0));
    num.div(f.powf(8.0).mul(c))
}

/// Default `t` window over which `f` and `c` must not vanish.
pub const T_WINDOW: (f64, f64) = (-1.2, 4.4);

/// The Ricci-flat family:
/// `g00 = 4H r^{3/2} + H0 r ln r + H1 r`, `g01 = q`, `g03 = c r`,
/// `g11 = −1/(f⁶ √r)`, `g22 = −f²/√r`, all other entries zero.
pub fn build_theorem1(params: &SolutionParams) -> Result<MetricSpec, CatalogError> {
    params.check_time_only()?;
    params.check_nonvanishing(T_WINDOW.0, T_WINDOW.1)?;
    let r = sym("r");
    let sqrt_r = r.clone().sqrt();
    let g00 = H_of(params)
        .mul(r.clone().powf(1.5))
        .scale(4.0)
        .add(params.h0.clone().mul(r.clone()).mul(r.clone().ln()))
        .add(params.h1.clone().mul(r.clone()));
    let g11 = Expr::one()
        .div(params.f.clone().powf(6.0).mul(sqrt_r.clone()))
        .neg();
    let g22 = params.f.clone().powf(2.0).div(sqrt_r).neg();
    let spec = MetricSpec::new(
        "theorem1",
        COORDS,
        [
            ((0, 0), g00),
            ((0, 1), params.q.clone()),
            ((0, 3), params.c.clone().mul(r)),
            ((1, 1), g11),
            ((2, 2), g22),
        ],
        Bindings::new(),
    )?;
    Ok(spec.with_domain(RegularDomain::default().with_interval(1, 0.0, f64::INFINITY)))
}

/// The time-periodic solution with the closed-form entries
/// `η00 = 16 r^{3/2}(1 + sin t + cos²t)/(1 + sin t)⁸`, `η03 = r/(1 + sin t)⁴`,
/// `η11 = −1/(√r (1 + sin t)⁶)`, `η22 = −(1 + sin t)²/√r`.
///
/// Regular for `r > 0` away from `t = 2kπ − π/2`.
pub fn theorem2() -> MetricSpec {
    let (guard, band) = periodic_guard();
    MetricSpec::new(
        "theorem2",
        COORDS,
        [
            ((0, 0), p("16*r^(3/2)*(1+sin(t)+cos(t)^2)/(1+sin(t))^8")),
            ((0, 3), p("r/(1+sin(t))^4")),
            ((1, 1), p("-1/(sqrt(r)*(1+sin(t))^6)")),
            ((2, 2), p("-(1+sin(t))^2/sqrt(r)")),
        ],
        Bindings::new(),
    )
    .expect("theorem2 metric")
    .with_domain(
        RegularDomain::default()
            .with_interval(1, 0.0, f64::INFINITY)
            .with_guard(guard, band),
    )
}

/// Picks the global Riemann sign so that `R_{2121}` of the periodic
/// solution has the sign of its closed form `(1 + sin t)²/(4 r^{5/2})`.
pub fn calibrated_sign() -> RiemannSign {
    let point = [0.3, 1.7, 0.0, 0.0];
    let derived = DerivedMetric::new(&theorem2()).expect("theorem2 derives");
    let engine = derived
        .curvature(&point)
        .expect("regular reference point")
        .riemann([2, 1, 2, 1]);
    let expected = reference::riemann_closed_form([2, 1, 2, 1], point[0], point[1])
        .expect("printed component");
    if engine.signum() == expected.signum() {
        RiemannSign::Standard
    } else {
        RiemannSign::Flipped
    }
}

/// Named metrics addressable from the command line.
pub fn builtin(name: &str, mass: Option<f64>) -> Result<Option<MetricSpec>, CatalogError> {
    Ok(match name {
        "minkowski" => Some(minkowski()),
        "schwarzschild" => Some(schwarzschild(mass.unwrap_or(1.0))?),
        "theorem2" => Some(theorem2()),
        "theorem1" => Some(build_theorem1(&SolutionParams::periodic())?),
        _ => None,
    })
}
