//! Staged Ricci closed forms for the ansatz, compared against the engine.
//!
//! Each stage imposes one more restriction on the ansatz functions and adds
//! the closed forms that hold from then on:
//!
//! * `RawAnsatz`: `R02 = R12 = R13 = R23 = R33 = 0` and `R03 = −v_rr/(2a²b²)`.
//! * `LinearV` (`v = c r`): `R11 = −(a² + 2r a a_r − 2r² a a_rr + 2r² a_r²)/(2r²a²)`
//!   and `R22 = (a a_r + r a a_rr − r a_r²)/(r a² b²)`.
//! * `PowerA` (`a = f r^{−1/4}`): `R01 = −(4b f_t + f b_t)/(r f b)`.
//! * `ConformalB` (`b = 1/f⁴`): `R00 = −A/(2r³ c f²)` with
//!   `A = r^{3/2}f⁸c u² − 2r^{5/2}f⁸c u u_r + 2r^{7/2}f⁸c u_r² + 2r^{7/2}f⁸c u u_rr
//!        + 4r³f f_tt c − 4r³f f_t c_t − 24r³f_t² c`.
//!
//! These closed forms carry the opposite overall sign to the engine's
//! `R_μν = R^λ_{μλν}`, so comparisons multiply them by [`CLOSED_FORM_SIGN`].

use crate::expr::{Bindings, Expr};
use crate::tensor::{DerivedMetric, Point};
use crate::tolerance::{is_zero_at_scale, rel_diff};

use super::{build_ansatz, AnsatzFunctions, CatalogError};

/// Factor taking the staged closed forms into the engine's Ricci convention.
pub const CLOSED_FORM_SIGN: f64 = -1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    RawAnsatz,
    LinearV,
    PowerA,
    ConformalB,
}

impl Stage {
    pub const ALL: [Stage; 4] = [
        Stage::RawAnsatz,
        Stage::LinearV,
        Stage::PowerA,
        Stage::ConformalB,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Stage::RawAnsatz => "A",
            Stage::LinearV => "B",
            Stage::PowerA => "C",
            Stage::ConformalB => "D",
        }
    }
}

/// One Ricci component: the engine value and, when a closed form applies
/// at this stage, its value as written (before [`CLOSED_FORM_SIGN`]).
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub component: (usize, usize),
    pub engine: f64,
    pub closed_form: Option<f64>,
}

impl Residual {
    /// The closed form in the engine's convention.
    pub fn expected(&self) -> Option<f64> {
        self.closed_form.map(|v| CLOSED_FORM_SIGN * v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageReport {
    pub stage: Stage,
    pub point: Point,
    /// All ten independent components, upper triangle in row order.
    pub rows: Vec<Residual>,
    /// Local curvature scale `sqrt|K|`.
    pub curvature_scale: f64,
}

impl StageReport {
    pub fn row(&self, m: usize, n: usize) -> &Residual {
        let key = (m.min(n), m.max(n));
        self.rows
            .iter()
            .find(|r| r.component == key)
            .expect("all ten components are present")
    }

    /// Largest relative disagreement among rows with a nonzero closed form,
    /// and largest zero-scaled engine value among rows whose closed form
    /// vanishes at the local curvature scale.
    pub fn worst(&self) -> (f64, f64) {
        let mut rel = 0.0f64;
        let mut zero = 0.0f64;
        for row in &self.rows {
            match row.expected() {
                Some(cf) if is_zero_at_scale(cf, self.curvature_scale) => {
                    zero = zero.max(row.engine.abs() / (1.0 + self.curvature_scale));
                }
                Some(cf) => {
                    rel = rel.max(rel_diff(row.engine, cf));
                }
                None => {}
            }
        }
        (rel, zero)
    }
}

struct Probe<'a> {
    b: Bindings,
    point: &'a Point,
}

impl Probe<'_> {
    fn at(&self, e: &Expr) -> Result<f64, CatalogError> {
        Ok(e.eval(&self.b)?)
    }

    fn with_r(&self, r: f64) -> Probe<'_> {
        let mut b = self.b.clone();
        b.insert("r", r);
        Probe {
            b,
            point: self.point,
        }
    }
}

fn precondition(stage: Stage, ok: bool, reason: &str) -> Result<(), CatalogError> {
    if ok {
        Ok(())
    } else {
        Err(CatalogError::StagePrecondition {
            stage,
            reason: reason.to_string(),
        })
    }
}

fn near(x: f64, y: f64, scale: f64) -> bool {
    (x - y).abs() <= 1e-9 * (1.0 + scale)
}

/// Checks the stage restrictions on `fns` at `p` and a few other radii.
fn check_stage(fns: &AnsatzFunctions, stage: Stage, probe: &Probe<'_>) -> Result<(), CatalogError> {
    let r0 = probe.point[1];
    let radii = [r0, 0.5 * r0, 1.7 * r0];
    if stage >= Stage::LinearV {
        let v_r = fns.v.diff("r");
        let v_rr = v_r.diff("r");
        for &r in &radii {
            let pr = probe.with_r(r);
            let (v, vr, vrr) = (pr.at(&fns.v)?, pr.at(&v_r)?, pr.at(&v_rr)?);
            precondition(
                stage,
                near(vrr, 0.0, vr.abs()) && near(v, r * vr, v.abs()),
                "v is not of the form c(t)·r",
            )?;
        }
    }
    if stage >= Stage::PowerA {
        let a_r = fns.a.diff("r");
        for &r in &radii {
            let pr = probe.with_r(r);
            let (a, ar) = (pr.at(&fns.a)?, pr.at(&a_r)?);
            precondition(
                stage,
                near(r * ar, -0.25 * a, a.abs()),
                "a is not of the form f(t)·r^(-1/4)",
            )?;
        }
    }
    if stage >= Stage::ConformalB {
        let f = f_of(fns);
        let (b, fv) = (probe.at(&fns.b)?, probe.at(&f)?);
        precondition(
            stage,
            near(b * fv.powi(4), 1.0, 1.0),
            "b is not 1/f^4",
        )?;
    }
    Ok(())
}

/// `f = a r^{1/4}`, a function of `t` alone once `a = f r^{−1/4}`.
fn f_of(fns: &AnsatzFunctions) -> Expr {
    fns.a.clone().mul(Expr::symbol("r").powf(0.25))
}

pub fn derivation_residuals(
    fns: &AnsatzFunctions,
    stage: Stage,
    p: &Point,
) -> Result<StageReport, CatalogError> {
    let spec = build_ansatz(fns)?;
    let probe = Probe {
        b: spec.bindings(p),
        point: p,
    };
    check_stage(fns, stage, &probe)?;

    let bundle = DerivedMetric::new(&spec)?.curvature(p)?;
    let r = p[1];
    let mut closed: [[Option<f64>; 4]; 4] = [[None; 4]; 4];

    for (m, n) in [(0, 2), (1, 2), (1, 3), (2, 3), (3, 3)] {
        closed[m][n] = Some(0.0);
    }
    let a = probe.at(&fns.a)?;
    let b = probe.at(&fns.b)?;
    let v_rr = probe.at(&fns.v.diff("r").diff("r"))?;
    closed[0][3] = Some(-v_rr / (2.0 * a * a * b * b));

    if stage >= Stage::LinearV {
        let a_r_e = fns.a.diff("r");
        let a_r = probe.at(&a_r_e)?;
        let a_rr = probe.at(&a_r_e.diff("r"))?;
        closed[1][1] = Some(
            -(a * a + 2.0 * r * a * a_r - 2.0 * r * r * a * a_rr + 2.0 * r * r * a_r * a_r)
                / (2.0 * r * r * a * a),
        );
        closed[2][2] = Some((a * a_r + r * a * a_rr - r * a_r * a_r) / (r * a * a * b * b));
    }

    if stage >= Stage::PowerA {
        let f_e = f_of(fns);
        let f = probe.at(&f_e)?;
        let f_t = probe.at(&f_e.diff("t"))?;
        let b_t = probe.at(&fns.b.diff("t"))?;
        closed[0][1] = Some(-(4.0 * b * f_t + f * b_t) / (r * f * b));
    }

    if stage >= Stage::ConformalB {
        let f_e = f_of(fns);
        let f_t_e = f_e.diff("t");
        let f = probe.at(&f_e)?;
        let f_t = probe.at(&f_t_e)?;
        let f_tt = probe.at(&f_t_e.diff("t"))?;
        let c_e = fns.v.clone().div(Expr::symbol("r"));
        let c = probe.at(&c_e)?;
        let c_t = probe.at(&c_e.diff("t"))?;
        let u_r_e = fns.u.diff("r");
        let u = probe.at(&fns.u)?;
        let u_r = probe.at(&u_r_e)?;
        let u_rr = probe.at(&u_r_e.diff("r"))?;
        let f8c = f.powi(8) * c;
        let big_a = r.powf(1.5) * f8c * u * u - 2.0 * r.powf(2.5) * f8c * u * u_r
            + 2.0 * r.powf(3.5) * f8c * u_r * u_r
            + 2.0 * r.powf(3.5) * f8c * u * u_rr
            + 4.0 * r.powi(3) * f * f_tt * c
            - 4.0 * r.powi(3) * f * f_t * c_t
            - 24.0 * r.powi(3) * f_t * f_t * c;
        closed[0][0] = Some(-big_a / (2.0 * r.powi(3) * c * f * f));
    }

    let mut rows = Vec::with_capacity(10);
    for m in 0..4 {
        for n in m..4 {
            rows.push(Residual {
                component: (m, n),
                engine: bundle.ricci[m][n],
                closed_form: closed[m][n],
            });
        }
    }
    Ok(StageReport {
        stage,
        point: *p,
        rows,
        curvature_scale: bundle.curvature_scale(),
    })
}
