//! One function per subcommand. Each returns a report and, for the data
//! commands, the CSV or metric-file text it produced.

use rayon::prelude::*;
use serde_json::json;
use tpgr::analysis::{self, Branch, ScanGrid};
use tpgr::catalog::{self, random, reference, R_MIN};
use tpgr::tensor::{canonical_index, linalg};
use tpgr::{parse, DerivedMetric, Expr, MetricSpec, Point, RiemannSign, TensorError};

use crate::args::{BranchArg, Command, Common};
use crate::metric_file::emit_metric_file;
use crate::report::{Check, RunReport, TolerancePolicy};
use crate::resolve::{parse_point, resolve_metric, same_metric, schwarzschild_mass};
use crate::CliError;

/// Text produced alongside the report.
#[derive(Debug, Clone, PartialEq)]
pub enum Artifact {
    Csv(String),
    MetricFile(String),
}

#[derive(Debug)]
pub struct Outcome {
    pub report: RunReport,
    pub artifact: Option<Artifact>,
}

impl Outcome {
    fn report(report: RunReport) -> Self {
        Outcome { report, artifact: None }
    }
}

const COORD_LABELS: [&str; 4] = ["0", "1", "2", "3"];

fn idx_label(prefix: &str, idx: &[usize]) -> String {
    let digits: String = idx.iter().map(|&i| COORD_LABELS[i]).collect();
    format!("{prefix}_{digits}")
}

fn tolerance(common: &Common, atol: f64, rtol: f64) -> TolerancePolicy {
    TolerancePolicy {
        atol: common.atol.unwrap_or(atol),
        rtol: common.rtol.unwrap_or(rtol),
    }
}

/// 17 significant digits, `.` separator.
pub fn csv_number(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("CSV output is ASCII"))
}

pub fn run(command: &Command) -> Result<Outcome, CliError> {
    let common = command.common();
    let spec = resolve_metric(common)?;
    let sign = catalog::calibrated_sign();
    let started = std::time::Instant::now();
    let mut outcome = match command {
        Command::Verify {
            t, r, theta, phi, samples, ..
        } => {
            let mut points: Vec<Point> = Vec::new();
            for &tv in &t.values() {
                for &rv in &r.values() {
                    points.push([tv, rv, *theta, *phi]);
                }
            }
            let corners = [
                (t.lo, r.lo),
                (t.lo, r.values()[r.n - 1]),
                (t.values()[t.n - 1], r.lo),
                (t.values()[t.n - 1], r.values()[r.n - 1]),
            ];
            let mut rng = random::rng(common.seed);
            points.extend(random::SamplingWindow::default().samples(&mut rng, *samples));
            verify(&spec, sign, common, &points, &corners, *theta, *phi)?
        }
        Command::Curvature { at, .. } => curvature(&spec, sign, common, &parse_point(&spec, at.as_deref())?)?,
        Command::Nullcurves {
            t0,
            r0,
            branch,
            r_end,
            step,
            theta,
            ..
        } => {
            let branches: &[Branch] = match branch {
                BranchArg::Plus => &[Branch::Plus],
                BranchArg::Minus => &[Branch::Minus],
                BranchArg::Both => &[Branch::Plus, Branch::Minus],
            };
            let seeds: Vec<Point> = t0
                .iter()
                .flat_map(|&t| r0.iter().map(move |&r| [t, r, *theta, 0.0]))
                .collect();
            nullcurves(&spec, sign, common, &seeds, branches, *r_end, *step)?
        }
        Command::Scan { t, r, theta, phi, .. } => {
            let grid = ScanGrid {
                t: *t,
                r: *r,
                theta: *theta,
                phi: *phi,
            };
            scan(&spec, sign, common, &grid)?
        }
        Command::Slice { t0, r, theta, .. } => slice(&spec, sign, common, *t0, r, *theta)?,
        Command::Killing { xi, at, .. } => {
            let parts: Vec<&str> = xi.split(',').collect();
            let [a, b, c, d] = parts[..] else {
                return Err(CliError::Usage(format!(
                    "--xi needs four comma-separated components, got {}",
                    parts.len()
                )));
            };
            let xi = [parse(a)?, parse(b)?, parse(c)?, parse(d)?];
            killing(&spec, sign, common, &xi, &parse_point(&spec, at.as_deref())?)?
        }
        Command::Catalog { .. } => {
            let text = emit_metric_file(&spec);
            let mut report = RunReport::new("catalog", &spec, sign, tolerance(common, 0.0, 0.0));
            report.data = json!({ "text": text });
            Outcome {
                report,
                artifact: Some(Artifact::MetricFile(text)),
            }
        }
    };
    outcome.report.command = command.name().to_string();
    outcome.report.seed = Some(common.seed);
    outcome.report.wall_time_s = started.elapsed().as_secs_f64();
    Ok(outcome)
}

struct PointSummary {
    zero_ricci: f64,
    symmetry: f64,
    inverse: f64,
    det: f64,
}

fn summarize(derived: &DerivedMetric, p: &Point) -> Result<PointSummary, TensorError> {
    let b = derived.curvature(p)?;
    Ok(PointSummary {
        zero_ricci: b.zero_scaled_ricci(),
        symmetry: b.symmetry_residuals().max(),
        inverse: b.inverse_residual(),
        det: b.det,
    })
}

fn fmt_point(p: &Point) -> String {
    format!("({}, {}, {}, {})", p[0], p[1], p[2], p[3])
}

pub fn verify(
    spec: &MetricSpec,
    sign: RiemannSign,
    common: &Common,
    points: &[Point],
    corners: &[(f64, f64)],
    theta: f64,
    phi: f64,
) -> Result<Outcome, CliError> {
    let tol = tolerance(common, 1e-7, 1e-6);
    let derived = DerivedMetric::new(spec)?.with_sign(sign);
    let regular: Vec<Point> = points.iter().copied().filter(|p| spec.is_regular(p)).collect();
    let results: Vec<Result<PointSummary, TensorError>> =
        regular.par_iter().map(|p| summarize(&derived, p)).collect();

    let mut report = RunReport::new("verify", spec, sign, tol);
    report.push(Check::info("points_evaluated", regular.len() as f64));
    report.push(Check::info("points_skipped", (points.len() - regular.len()) as f64));
    report.push(Check::flag(
        "grid_nonempty",
        !regular.is_empty(),
        "at least one regular grid point",
    ));

    let mut failures = Vec::new();
    let (mut worst, mut worst_at) = (0.0f64, None);
    let (mut sym, mut inv) = (0.0f64, 0.0f64);
    let mut nondegenerate = true;
    for (p, res) in regular.iter().zip(&results) {
        match res {
            Ok(s) => {
                if s.zero_ricci.is_nan() || (!worst.is_nan() && s.zero_ricci > worst) {
                    worst = s.zero_ricci;
                    worst_at = Some(*p);
                }
                sym = sym.max(s.symmetry);
                inv = inv.max(s.inverse);
                nondegenerate &= s.det.is_finite() && s.det != 0.0;
            }
            Err(e) => failures.push(format!("{}: {e}", fmt_point(p))),
        }
    }
    let mut ricci = Check::at_most("max_zero_scaled_ricci", worst, tol.atol);
    if let Some(p) = worst_at {
        ricci = ricci.with_detail(format!("at {}", fmt_point(&p)));
    }
    report.push(ricci);
    report.push(Check::at_most("max_symmetry_residual", sym, 1e-10));
    report.push(Check::at_most("max_inverse_residual", inv, 1e-10));
    report.push(Check::flag("nondegenerate", nondegenerate, "det finite and nonzero"));
    report.push(
        Check::at_most("evaluation_failures", failures.len() as f64, 0.0)
            .with_detail(failures.first().cloned().unwrap_or_default()),
    );
    for &(t, r) in corners {
        let p = [t, r, theta, phi];
        if !spec.is_regular(&p) {
            continue;
        }
        let g = spec.eval_metric(&p)?;
        let m = linalg::leading_minors(&g);
        report.push(Check::info(format!("det(t={t}, r={r})"), m[3]).with_detail(format!(
            "minors {:.6e} {:.6e} {:.6e} {:.6e}",
            m[0], m[1], m[2], m[3]
        )));
    }
    report.data = json!({ "worst_point": worst_at });
    Ok(Outcome::report(report))
}

pub fn curvature(spec: &MetricSpec, sign: RiemannSign, common: &Common, p: &Point) -> Result<Outcome, CliError> {
    let tol = tolerance(common, 1e-7, 1e-6);
    if !spec.is_regular(p) {
        return Err(analysis::AnalysisError::OutsideDomain(*p).into());
    }
    let b = DerivedMetric::new(spec)?.with_sign(sign).curvature(p)?;
    let is_theorem2 = same_metric(spec, &catalog::theorem2());
    let mut report = RunReport::new("curvature", spec, sign, tol);
    let (t, r) = (p[0], p[1]);

    for idx in reference::PRINTED_RIEMANN {
        let name = idx_label("R", &idx);
        let v = b.riemann(idx);
        match is_theorem2.then(|| reference::riemann_closed_form(idx, t, r)).flatten() {
            Some(want) => report.push(Check::close(name, v, want, tol.rtol)),
            None => report.push(Check::info(name, v)),
        }
    }
    if is_theorem2 {
        // Every other independent class must vanish.
        let printed: Vec<[usize; 4]> = reference::PRINTED_RIEMANN
            .iter()
            .filter_map(|&i| canonical_index(i).map(|(_, c)| c))
            .collect();
        let zero_limit = 1e-8 * (1.0 + b.max_abs_riemann());
        let mut other = 0.0f64;
        for a in 0..4 {
            for bb in a + 1..4 {
                for c in a..4 {
                    for d in c + 1..4 {
                        if (a, bb) > (c, d) || printed.contains(&[a, bb, c, d]) {
                            continue;
                        }
                        other = other.max(b.riemann([a, bb, c, d]).abs());
                    }
                }
            }
        }
        report.push(Check::at_most("max_other_riemann", other, zero_limit));
    }

    let ricci_limit = tol.atol * (1.0 + b.curvature_scale());
    for m in 0..4 {
        for n in m..4 {
            report.push(Check::at_most(idx_label("Ric", &[m, n]), b.ricci[m][n].abs(), ricci_limit));
        }
    }
    let kretschmann_ref = if is_theorem2 {
        Some(reference::kretschmann(t, r))
    } else if let Some(m) = schwarzschild_mass(spec) {
        Some(48.0 * m * m / r.powi(6))
    } else if same_metric(spec, &catalog::minkowski()) {
        Some(0.0)
    } else {
        None
    };
    match kretschmann_ref {
        Some(k) => report.push(Check::close("K", b.kretschmann, k, tol.rtol)),
        None => report.push(Check::info("K", b.kretschmann)),
    }
    report.push(Check::info("scalar", b.scalar));
    report.push(Check::info("det", b.det));
    report.data = json!({ "point": p });
    Ok(Outcome::report(report))
}

pub fn nullcurves(
    spec: &MetricSpec,
    sign: RiemannSign,
    common: &Common,
    seeds: &[Point],
    branches: &[Branch],
    r_end: f64,
    step: f64,
) -> Result<Outcome, CliError> {
    let tol = tolerance(common, 1e-6, 1e-6);
    let mut report = RunReport::new("nullcurves", spec, sign, tol);
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    let mut id = 0usize;
    for seed in seeds {
        for &branch in branches {
            let curve = analysis::integrate_null_curve(spec, *seed, branch, r_end, step, R_MIN)?;
            let worst = curve.null_residual.iter().fold(0.0f64, |m, &x| m.max(x));
            let &(t_last, r_last) = curve.samples.last().expect("curve has its seed");
            report.push(
                Check::at_most(format!("curve {id} ({}) null residual", branch.label()), worst, tol.atol)
                    .with_detail(format!("t0={} r0={} {}", seed[0], seed[1], curve.termination.label())),
            );
            for (&(t, r), &res) in curve.samples.iter().zip(&curve.null_residual) {
                rows.push(vec![
                    id.to_string(),
                    branch.label().to_string(),
                    csv_number(r),
                    csv_number(t),
                    csv_number(res),
                ]);
            }
            summary.push(json!({
                "curve_id": id,
                "branch": branch.label(),
                "t0": seed[0],
                "r0": seed[1],
                "samples": curve.samples.len(),
                "termination": curve.termination.label(),
                "t_last": t_last,
                "r_last": r_last,
            }));
            id += 1;
        }
    }
    report.data = json!({ "curves": summary });
    let csv = csv_text(&["curve_id", "branch", "r", "t", "residual"], rows)?;
    Ok(Outcome {
        report,
        artifact: Some(Artifact::Csv(csv)),
    })
}

pub fn scan(spec: &MetricSpec, sign: RiemannSign, common: &Common, grid: &ScanGrid) -> Result<Outcome, CliError> {
    let tol = tolerance(common, 0.0, 0.0);
    let rep = analysis::scan_singularity(spec, grid)?;
    let mut report = RunReport::new("scan", spec, sign, tol);
    let coords = spec.coords();
    let mut fits = Vec::new();
    for (t, fit) in &rep.fits {
        report.push(
            Check::info(format!("slope(t={t})"), fit.slope)
                .with_detail(format!("{} points, max residual {:.3e}", fit.n, fit.max_residual)),
        );
        fits.push(json!({
            "t": t,
            "slope": fit.slope,
            "intercept": fit.intercept,
            "n": fit.n,
            "max_residual": fit.max_residual,
        }));
    }
    let mut loci = Vec::new();
    for l in &rep.loci {
        let fixed_name = if l.coordinate == 0 { &coords[1] } else { &coords[0] };
        loci.push(json!({
            "coordinate": coords[l.coordinate],
            "fixed": { fixed_name.as_str(): l.fixed },
            "toward": l.toward,
            "kind": l.kind.label(),
        }));
    }
    let essential = rep.loci.iter().filter(|l| l.kind == analysis::Approach::Essential).count();
    let non_essential = rep.loci.iter().filter(|l| l.kind == analysis::Approach::NonEssential).count();
    report.push(Check::info("essential_approaches", essential as f64));
    report.push(Check::info("non_essential_approaches", non_essential as f64));
    report.data = json!({ "fits": fits, "loci": loci });
    let rows = rep.rows.iter().map(|row| {
        vec![
            csv_number(row.point[0]),
            csv_number(row.point[1]),
            csv_number(row.kretschmann),
            csv_number(row.det),
            csv_number(row.max_metric_component),
        ]
    });
    let csv = csv_text(&["t", "r", "kretschmann", "det", "max_component"], rows)?;
    Ok(Outcome {
        report,
        artifact: Some(Artifact::Csv(csv)),
    })
}

pub fn slice(
    spec: &MetricSpec,
    sign: RiemannSign,
    common: &Common,
    t0: f64,
    radii: &[f64],
    theta: f64,
) -> Result<Outcome, CliError> {
    let tol = tolerance(common, 0.0, 1e-9);
    let is_theorem2 = same_metric(spec, &catalog::theorem2());
    let mut report = RunReport::new("slice", spec, sign, tol);
    let block = analysis::slice_metric(spec, t0)?;
    let names = [&spec.coords()[1], &spec.coords()[2]];
    for &r in radii {
        let c = analysis::slice_coefficients(spec, t0, &[t0, r, theta, 0.0])?;
        let published = is_theorem2.then(|| reference::slice_published(t0, r));
        for (k, (i, j)) in [(0, 0), (1, 1)].into_iter().enumerate() {
            let name = format!("d{}^2 (r={r})", names[k]);
            match published {
                Some(p) => report.push(Check::close(name, c[i][j], [p.0, p.1][k], tol.rtol)),
                None => report.push(Check::info(name, c[i][j])),
            }
        }
        report.push(Check::info(format!("d{} d{} (r={r})", names[0], names[1]), c[0][1]));
    }
    report.data = json!({
        "t0": t0,
        "block": block.iter().map(|row| row.iter().map(|e| e.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
    });
    Ok(Outcome::report(report))
}

pub fn killing(
    spec: &MetricSpec,
    sign: RiemannSign,
    common: &Common,
    xi: &[Expr; 4],
    p: &Point,
) -> Result<Outcome, CliError> {
    let tol = tolerance(common, 1e-9, 0.0);
    if !spec.is_regular(p) {
        return Err(analysis::AnalysisError::OutsideDomain(*p).into());
    }
    let rep = analysis::killing_residual(spec, xi, p)?;
    let mut report = RunReport::new("killing", spec, sign, tol);
    report.push(
        Check::at_most("normalized_residual", rep.normalized(), tol.atol)
            .with_detail(format!("max {:.6e}, scale {:.6e}", rep.max_abs(), rep.scale)),
    );
    for m in 0..4 {
        for n in m..4 {
            report.push(Check::info(idx_label("K", &[m, n]), rep.residual[m][n]));
        }
    }
    report.data = json!({
        "xi": xi.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        "point": p,
    });
    Ok(Outcome::report(report))
}
