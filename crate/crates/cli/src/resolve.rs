//! Turning `--metric` and `--at` into engine inputs.

use std::f64::consts::FRAC_PI_2;
use std::path::Path;

use tpgr::catalog::{self, random, AnsatzFunctions, SolutionParams};
use tpgr::{MetricSpec, Point};

use crate::args::Common;
use crate::metric_file::{emit_metric_file, parse_metric_file};
use crate::CliError;

fn or<'a>(v: &'a Option<String>, default: &'a str) -> &'a str {
    v.as_deref().unwrap_or(default)
}

pub fn resolve_metric(common: &Common) -> Result<MetricSpec, CliError> {
    match common.metric.as_str() {
        "theorem2" => Ok(catalog::theorem2()),
        "minkowski" => Ok(catalog::minkowski()),
        "schwarzschild" => Ok(catalog::schwarzschild(common.mass.unwrap_or(1.0))?),
        "theorem1" => {
            let params = if common.random {
                random::ParamDraw::random(&mut random::rng(common.seed)).params()
            } else {
                SolutionParams::parse(
                    or(&common.f, "1+sin(t)"),
                    or(&common.c, "(1+sin(t))^(-4)"),
                    or(&common.q, "0"),
                    or(&common.h0, "0"),
                    or(&common.h1, "0"),
                )?
            };
            Ok(catalog::build_theorem1(&params)?)
        }
        "ansatz" => {
            let fns = if common.random {
                random::random_ansatz(&mut random::rng(common.seed))
            } else {
                AnsatzFunctions::parse(
                    or(&common.u, "1"),
                    or(&common.v, "1"),
                    or(&common.a, "1"),
                    or(&common.b, "1"),
                    or(&common.q, "0"),
                )?
            };
            Ok(catalog::build_ansatz(&fns)?)
        }
        path => {
            let p = Path::new(path);
            if !p.exists() {
                return Err(CliError::Usage(format!(
                    "`{path}` is neither a catalog metric nor an existing file"
                )));
            }
            let text = std::fs::read_to_string(p).map_err(|source| CliError::Io {
                path: p.to_path_buf(),
                source,
            })?;
            let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or("metric");
            Ok(parse_metric_file(&text, stem)?)
        }
    }
}

/// True when `spec` is the built-in `reference` up to its name.
pub fn same_metric(spec: &MetricSpec, reference: &MetricSpec) -> bool {
    emit_metric_file(&spec.clone().with_name(reference.name())) == emit_metric_file(reference)
}

/// The Schwarzschild mass of `spec` if it is the catalog Schwarzschild metric.
pub fn schwarzschild_mass(spec: &MetricSpec) -> Option<f64> {
    let m = spec.params().get("M")?;
    let reference = catalog::schwarzschild(m).ok()?;
    same_metric(spec, &reference).then_some(m)
}

/// Parses `name=value` pairs over the coordinates of `spec`; missing
/// coordinates default to `(0, 1, π/2, 0)`.
pub fn parse_point(spec: &MetricSpec, text: Option<&str>) -> Result<Point, CliError> {
    let mut p = [0.0, 1.0, FRAC_PI_2, 0.0];
    let Some(text) = text else {
        return Ok(p);
    };
    for pair in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let bad = || CliError::Usage(format!("`{pair}` is not of the form coordinate=value"));
        let (name, value) = pair.split_once('=').ok_or_else(bad)?;
        let idx = spec.coord_index(name.trim()).ok_or_else(|| {
            CliError::Usage(format!(
                "`{}` is not a coordinate (expected one of {})",
                name.trim(),
                spec.coords().join(", ")
            ))
        })?;
        p[idx] = value.trim().parse().map_err(|_| bad())?;
    }
    Ok(p)
}
