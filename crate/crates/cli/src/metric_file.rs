//! Plain-text metric definitions.
//!
//! One declaration per line; `#` starts a comment.
//!
//! ```text
//! name = perturbed
//! coords = t, r, theta, phi
//! param M = 1
//! g[0][0] = 16*r^(3/2)*(1+sin(t)+cos(t)^2)/(1+sin(t))^8
//! g[1][1] = -1/(sqrt(r)*(1+sin(t))^6)
//! interval r = 0, inf
//! exclude 1+sin(t) band 5e-7
//! ```
//!
//! Omitted entries are zero. `interval` declares an open coordinate range and
//! `exclude` a locus `|expr| <= band` (band defaults to 0) that is not regular.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;
use tpgr::expr::Bindings;
use tpgr::tensor::RegularDomain;
use tpgr::{parse, Expr, MetricSpec, ParseError, TensorError};

#[derive(Debug, Error)]
pub enum MetricFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Expr {
        line: usize,
        #[source]
        source: ParseError,
    },
    #[error("missing `coords` declaration")]
    MissingCoords,
    #[error(transparent)]
    Metric(#[from] TensorError),
}

fn syntax(line: usize, message: impl Into<String>) -> MetricFileError {
    MetricFileError::Syntax {
        line,
        message: message.into(),
    }
}

fn number(line: usize, text: &str) -> Result<f64, MetricFileError> {
    let t = text.trim();
    match t {
        "inf" | "+inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        _ => t
            .parse::<f64>()
            .ok()
            .filter(|v| !v.is_nan())
            .ok_or_else(|| syntax(line, format!("`{t}` is not a number"))),
    }
}

fn expr(line: usize, text: &str) -> Result<Expr, MetricFileError> {
    parse(text).map_err(|source| MetricFileError::Expr { line, source })
}

/// `g[i][j]` → `(i, j)`.
fn entry_index(key: &str) -> Option<(usize, usize)> {
    let rest = key.strip_prefix("g[")?;
    let (i, rest) = rest.split_once("][")?;
    let j = rest.strip_suffix(']')?;
    let (i, j) = (i.trim().parse().ok()?, j.trim().parse().ok()?);
    (i < 4 && j < 4).then_some((i, j))
}

pub fn parse_metric_file(text: &str, default_name: &str) -> Result<MetricSpec, MetricFileError> {
    let mut name = default_name.to_string();
    let mut coords: Option<[String; 4]> = None;
    let mut params = Bindings::new();
    let mut entries: BTreeMap<(usize, usize), Expr> = BTreeMap::new();
    let mut intervals: Vec<(usize, String, f64, f64)> = Vec::new();
    let mut guards: Vec<(Expr, f64)> = Vec::new();

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("exclude ") {
            let (e, band) = match rest.rsplit_once(" band ") {
                Some((e, b)) => (e, number(line, b)?),
                None => (rest, 0.0),
            };
            if !(band >= 0.0 && band.is_finite()) {
                return Err(syntax(line, "band must be a finite non-negative number"));
            }
            guards.push((expr(line, e)?, band));
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(syntax(line, format!("expected `key = value`, got `{content}`")));
        };
        let (key, value) = (key.trim(), value.trim());
        if key == "name" {
            name = value.to_string();
        } else if key == "coords" {
            let names: Vec<String> = value.split(',').map(|s| s.trim().to_string()).collect();
            let Ok(arr) = <[String; 4]>::try_from(names) else {
                return Err(syntax(line, "coords needs exactly four names"));
            };
            if arr.iter().any(|n| n.is_empty() || parse(n).map(|e| e.to_string() != *n).unwrap_or(true)) {
                return Err(syntax(line, "coordinate names must be plain identifiers"));
            }
            coords = Some(arr);
        } else if let Some(p) = key.strip_prefix("param ") {
            let p = p.trim();
            if params.get(p).is_some() {
                return Err(syntax(line, format!("parameter `{p}` declared twice")));
            }
            params.insert(p, number(line, value)?);
        } else if let Some(c) = key.strip_prefix("interval ") {
            let Some((lo, hi)) = value.split_once(',') else {
                return Err(syntax(line, "interval needs `lo, hi`"));
            };
            intervals.push((line, c.trim().to_string(), number(line, lo)?, number(line, hi)?));
        } else if let Some((i, j)) = entry_index(key) {
            let slot = (i.min(j), i.max(j));
            if entries.contains_key(&slot) {
                return Err(syntax(line, format!("entry g[{}][{}] given twice", slot.0, slot.1)));
            }
            entries.insert(slot, expr(line, value)?);
        } else {
            return Err(syntax(line, format!("unknown key `{key}`")));
        }
    }

    let coords = coords.ok_or(MetricFileError::MissingCoords)?;
    let coord_refs: [&str; 4] = std::array::from_fn(|i| coords[i].as_str());
    let spec = MetricSpec::new(&name, coord_refs, entries, params)?;
    let mut domain = RegularDomain::default();
    for (line, c, lo, hi) in intervals {
        let idx = spec
            .coord_index(&c)
            .ok_or_else(|| syntax(line, format!("`{c}` is not a coordinate")))?;
        domain = domain.with_interval(idx, lo, hi);
    }
    for (e, band) in guards {
        domain = domain.with_guard(e, band);
    }
    Ok(spec.with_domain(domain))
}

fn fmt_bound(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v:e}")
    }
}

/// Canonical text for `spec`; parsing it back gives an equivalent metric.
pub fn emit_metric_file(spec: &MetricSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "name = {}", spec.name());
    let _ = writeln!(out, "coords = {}", spec.coords().join(", "));
    for (k, v) in spec.params().iter() {
        let _ = writeln!(out, "param {k} = {v:e}");
    }
    for i in 0..4 {
        for j in i..4 {
            let e = spec.entry(i, j);
            if !e.is_zero() {
                let _ = writeln!(out, "g[{i}][{j}] = {e}");
            }
        }
    }
    let domain = spec.domain();
    for (c, &(lo, hi)) in spec.coords().iter().zip(&domain.intervals) {
        if lo != f64::NEG_INFINITY || hi != f64::INFINITY {
            let _ = writeln!(out, "interval {c} = {}, {}", fmt_bound(lo), fmt_bound(hi));
        }
    }
    for g in &domain.guards {
        let _ = writeln!(out, "exclude {} band {:e}", g.expr, g.band);
    }
    out
}
