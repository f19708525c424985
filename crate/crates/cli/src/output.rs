//! Report rendering: plain text, JSON lines and CSV.
//!
//! JSON records are flat structs with a fixed field order, so that a
//! serialize/parse/serialize cycle is byte-identical. Exact quantities
//! always render as decimal strings; only log-domain measurements and
//! residuals are floats. CSV fields are decimal or identifier tokens
//! (parameter maps collapse to `name=value` pairs joined by `;`), so no
//! quoting is ever needed.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use rencontres::bounds::{BellAsymptotics, BoundReport};
use rencontres::identities::IdentityReport;
use rencontres::Params;

use crate::sweep::RunSummary;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Plain,
    Json,
    Csv,
}

/// Wire form of one identity evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JsonIdentityReport {
    pub identity: String,
    pub mode: String,
    pub params: BTreeMap<String, i64>,
    pub lhs: String,
    pub rhs: String,
    pub equal: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub residual: Option<f64>,
    pub elapsed_ms: u64,
}

impl From<&IdentityReport> for JsonIdentityReport {
    fn from(report: &IdentityReport) -> Self {
        JsonIdentityReport {
            identity: report.id.to_string(),
            mode: report.mode.to_string(),
            params: report.params.clone(),
            lhs: report.lhs.render(),
            rhs: report.rhs.render(),
            equal: report.equal,
            residual: report.residual,
            elapsed_ms: report.elapsed_ms,
        }
    }
}

/// Wire form of one bound check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JsonBoundReport {
    pub bound: String,
    pub params: BTreeMap<String, i64>,
    pub log_exact: Option<f64>,
    pub log_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub log_lower: Option<f64>,
    pub satisfied: bool,
    pub slack: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub slack_lower: Option<f64>,
}

impl From<&BoundReport> for JsonBoundReport {
    fn from(report: &BoundReport) -> Self {
        JsonBoundReport {
            bound: report.id.as_str().to_string(),
            params: report.params.clone(),
            log_exact: report.log_exact,
            log_bound: report.log_bound,
            log_lower: report.log_lower,
            satisfied: report.satisfied,
            slack: report.slack,
            slack_lower: report.slack_lower,
        }
    }
}

/// Wire form of one asymptotics row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JsonAsymptoticsRow {
    pub n: u64,
    pub log_exact: f64,
    pub log_debruijn: f64,
    pub log_odlyzko: f64,
    pub rel_err_debruijn: f64,
    pub rel_err_odlyzko: f64,
}

impl From<&BellAsymptotics> for JsonAsymptoticsRow {
    fn from(row: &BellAsymptotics) -> Self {
        JsonAsymptoticsRow {
            n: row.n,
            log_exact: row.log_exact,
            log_debruijn: row.log_debruijn,
            log_odlyzko: row.log_odlyzko,
            rel_err_debruijn: row.rel_err_debruijn,
            rel_err_odlyzko: row.rel_err_odlyzko,
        }
    }
}

/// Wire form of the closing summary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JsonSummary {
    pub total: u64,
    pub passes: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
    pub wall_ms: u64,
}

impl From<&RunSummary> for JsonSummary {
    fn from(summary: &RunSummary) -> Self {
        JsonSummary {
            total: summary.total,
            passes: summary.passes,
            failures: summary.failures,
            first_failure: summary.first_failure.clone(),
            wall_ms: summary.wall_ms,
        }
    }
}

/// `name=value` pairs joined by `;`: the comma-free token form of a
/// parameter map used in plain and CSV output.
pub fn params_token(params: &Params) -> String {
    if params.is_empty() {
        return "-".to_string();
    }
    params
        .iter()
        .map(|(name, v)| format!("{name}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

fn params_spaced(params: &Params) -> String {
    params
        .iter()
        .map(|(name, v)| format!("{name}={v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// `None` slack means the bound holds with infinite room.
fn slack_token(v: Option<f64>) -> String {
    match v {
        Some(v) => format!("{v:?}"),
        None => "inf".to_string(),
    }
}

/// `None` exact value means the exact quantity is zero; its log is -inf.
fn log_exact_token(v: Option<f64>) -> String {
    match v {
        Some(v) => format!("{v:?}"),
        None => "-inf".to_string(),
    }
}

/// Status token: exact comparisons are `ok`/`FAIL`, diagnostics `diag`.
fn status_token(equal: Option<bool>) -> &'static str {
    match equal {
        Some(true) => "ok",
        Some(false) => "FAIL",
        None => "diag",
    }
}

pub fn identity_plain(report: &IdentityReport) -> String {
    let mut line = format!(
        "{} {} {} {} lhs={} rhs={}",
        status_token(report.equal),
        report.id,
        report.mode,
        params_spaced(&report.params),
        report.lhs.render(),
        report.rhs.render(),
    );
    if let Some(residual) = report.residual {
        line.push_str(&format!(" residual={residual:?}"));
    }
    line.push_str(&format!(" elapsed_ms={}", report.elapsed_ms));
    line
}

pub fn identity_csv_header() -> &'static str {
    "identity,mode,params,lhs,rhs,equal,elapsed_ms"
}

pub fn identity_csv(report: &IdentityReport) -> String {
    let equal = match report.equal {
        Some(true) => "true",
        Some(false) => "false",
        None => "diagnostic",
    };
    format!(
        "{},{},{},{},{},{},{}",
        report.id,
        report.mode,
        params_token(&report.params),
        report.lhs.render(),
        report.rhs.render(),
        equal,
        report.elapsed_ms,
    )
}

pub fn bound_plain(report: &BoundReport) -> String {
    let status = if report.satisfied { "ok" } else { "FAIL" };
    let mut line = format!(
        "{status} {} {} log_exact={} log_bound={:?}",
        report.id.as_str(),
        params_spaced(&report.params),
        log_exact_token(report.log_exact),
        report.log_bound,
    );
    if let Some(lower) = report.log_lower {
        line.push_str(&format!(" log_lower={lower:?}"));
    }
    line.push_str(&format!(" slack={}", slack_token(report.slack)));
    if let Some(slack_lower) = report.slack_lower {
        line.push_str(&format!(" slack_lower={slack_lower:?}"));
    }
    line
}

pub fn bound_csv_header() -> &'static str {
    "bound,params,log_exact,log_bound,log_lower,satisfied,slack,slack_lower"
}

pub fn bound_csv(report: &BoundReport) -> String {
    format!(
        "{},{},{},{:?},{},{},{},{}",
        report.id.as_str(),
        params_token(&report.params),
        log_exact_token(report.log_exact),
        report.log_bound,
        report.log_lower.map_or("-".to_string(), |v| format!("{v:?}")),
        report.satisfied,
        slack_token(report.slack),
        report.slack_lower.map_or("-".to_string(), |v| format!("{v:?}")),
    )
}

pub fn asymptotics_plain(row: &BellAsymptotics) -> String {
    format!(
        "n={} log_exact={:?} log_debruijn={:?} log_odlyzko={:?} rel_err_debruijn={:?} rel_err_odlyzko={:?}",
        row.n, row.log_exact, row.log_debruijn, row.log_odlyzko, row.rel_err_debruijn, row.rel_err_odlyzko,
    )
}

pub fn asymptotics_csv_header() -> &'static str {
    "n,log_exact,log_debruijn,log_odlyzko,rel_err_debruijn,rel_err_odlyzko"
}

pub fn asymptotics_csv(row: &BellAsymptotics) -> String {
    format!(
        "{},{:?},{:?},{:?},{:?},{:?}",
        row.n, row.log_exact, row.log_debruijn, row.log_odlyzko, row.rel_err_debruijn, row.rel_err_odlyzko,
    )
}

pub fn summary_plain(summary: &RunSummary) -> String {
    let mut line = format!(
        "summary: total={} passes={} failures={} wall_ms={}",
        summary.total, summary.passes, summary.failures, summary.wall_ms
    );
    if let Some(first) = &summary.first_failure {
        line.push_str(&format!("\nfirst failure: {first}"));
    }
    line
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("report serialization cannot fail")
}
