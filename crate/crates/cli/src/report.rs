//! Machine-readable run reports.

use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};
use tpgr::tolerance::rel_diff;
use tpgr::{MetricSpec, RiemannSign};

use crate::metric_file::emit_metric_file;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

/// One line of a report. Non-finite values serialize as `null`.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub value: Option<f64>,
    pub expected: Option<f64>,
    pub limit: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    /// Passes when `value <= limit`; NaN fails.
    pub fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Check {
            name: name.into(),
            status: if value <= limit { Status::Pass } else { Status::Fail },
            value: Some(value),
            expected: None,
            limit: Some(limit),
            detail: None,
        }
    }

    /// Compares `value` with a reference; `limit` bounds the relative difference.
    pub fn close(name: impl Into<String>, value: f64, expected: f64, rtol: f64) -> Self {
        let ok = rel_diff(value, expected) <= rtol;
        Check {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            value: Some(value),
            expected: Some(expected),
            limit: Some(rtol),
            detail: None,
        }
    }

    pub fn flag(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            value: None,
            expected: None,
            limit: None,
            detail: Some(detail.into()),
        }
    }

    pub fn info(name: impl Into<String>, value: f64) -> Self {
        Check {
            name: name.into(),
            status: Status::Info,
            value: Some(value),
            expected: None,
            limit: None,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MetricInfo {
    pub name: String,
    /// SHA-256 of the canonical metric-file text.
    pub hash: String,
}

impl MetricInfo {
    pub fn of(spec: &MetricSpec) -> Self {
        let digest = Sha256::digest(emit_metric_file(spec).as_bytes());
        let mut hash = String::with_capacity(64);
        for byte in digest {
            let _ = write!(hash, "{byte:02x}");
        }
        MetricInfo {
            name: spec.name().to_string(),
            hash,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TolerancePolicy {
    pub atol: f64,
    pub rtol: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub metric: MetricInfo,
    pub sign_convention: &'static str,
    pub tolerance: TolerancePolicy,
    pub seed: Option<u64>,
    pub checks: Vec<Check>,
    pub data: serde_json::Value,
    pub wall_time_s: f64,
}

impl RunReport {
    pub fn new(command: &str, spec: &MetricSpec, sign: RiemannSign, tolerance: TolerancePolicy) -> Self {
        RunReport {
            command: command.to_string(),
            metric: MetricInfo::of(spec),
            sign_convention: sign.label(),
            tolerance,
            seed: None,
            checks: Vec::new(),
            data: serde_json::Value::Null,
            wall_time_s: 0.0,
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Fixed-width table for terminals.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} on {} ({}), sign convention {}",
            self.command,
            self.metric.name,
            &self.metric.hash[..12],
            self.sign_convention
        );
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed {seed}");
        }
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0).max(5);
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Info => "info",
            };
            let num = |x: Option<f64>| x.map_or(String::new(), |v| format!("{v:.10e}"));
            let limit = c.limit.map_or(String::new(), |v| format!("<= {v:.1e}"));
            let _ = write!(
                out,
                "{:width$}  {status}  {:>18}  {:>18}  {limit}",
                c.name,
                num(c.value),
                num(c.expected)
            );
            if let Some(d) = &c.detail {
                let _ = write!(out, "  {d}");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "{:.3}s", self.wall_time_s);
        out
    }
}
