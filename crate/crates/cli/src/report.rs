//! Report rows, tolerance gating and the CSV/JSON writers.
//!
//! CSV schema (fixed): experiment, model, dim, param_name, param_value,
//! measured, reference, tolerance, metric, status, runtime_ms — one row per
//! check, UTF-8, LF line endings, '.' decimal separator, 17 significant
//! digits. Row order is canonical (sorted by parameter tuple) regardless of
//! execution order.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    /// pass iff |measured - reference| <= tolerance
    Abs,
    /// pass iff |measured - reference| <= tolerance * |reference|
    Rel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Flagged,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub experiment: String,
    pub model: String,
    pub dim: usize,
    pub param_name: String,
    pub param_value: f64,
    pub measured: f64,
    pub reference: f64,
    pub tolerance: f64,
    pub metric: Metric,
    pub status: Status,
    pub runtime_ms: u128,
}

impl ReportRow {
    /// Build a row with the pass/fail status derived from its metric.
    #[allow(clippy::too_many_arguments)]
    pub fn checked(
        experiment: &str,
        model: &str,
        dim: usize,
        param_name: &str,
        param_value: f64,
        measured: f64,
        reference: f64,
        tolerance: f64,
        metric: Metric,
        runtime_ms: u128,
    ) -> Self {
        let dev = (measured - reference).abs();
        let limit = match metric {
            Metric::Abs => tolerance,
            Metric::Rel => tolerance * reference.abs(),
        };
        let status = if dev <= limit {
            Status::Pass
        } else {
            Status::Fail
        };
        ReportRow {
            experiment: experiment.to_string(),
            model: model.to_string(),
            dim,
            param_name: param_name.to_string(),
            param_value,
            measured,
            reference,
            tolerance,
            metric,
            status,
            runtime_ms,
        }
    }

    /// A row recording a numerical failure (surfaced, never hidden).
    pub fn flagged(
        experiment: &str,
        model: &str,
        dim: usize,
        param_name: &str,
        param_value: f64,
        runtime_ms: u128,
    ) -> Self {
        ReportRow {
            experiment: experiment.to_string(),
            model: model.to_string(),
            dim,
            param_name: param_name.to_string(),
            param_value,
            measured: f64::NAN,
            reference: f64::NAN,
            tolerance: 0.0,
            metric: Metric::Abs,
            status: Status::Flagged,
            runtime_ms,
        }
    }
}

/// Canonical row order: by parameter tuple (name, then value).
pub fn sort_rows(rows: &mut [ReportRow]) {
    rows.sort_by(|a, b| {
        a.param_name
            .cmp(&b.param_name)
            .then(a.param_value.total_cmp(&b.param_value))
    });
}

fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.16e}")
    }
}

pub fn to_csv(rows: &[ReportRow]) -> String {
    let mut out = String::from(
        "experiment,model,dim,param_name,param_value,measured,reference,tolerance,metric,status,runtime_ms\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.experiment,
            r.model,
            r.dim,
            r.param_name,
            fmt_f64(r.param_value),
            fmt_f64(r.measured),
            fmt_f64(r.reference),
            fmt_f64(r.tolerance),
            match r.metric {
                Metric::Abs => "abs",
                Metric::Rel => "rel",
            },
            match r.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
                Status::Flagged => "flagged",
            },
            r.runtime_ms
        ));
    }
    out
}

pub fn to_json(rows: &[ReportRow]) -> String {
    serde_json::to_string_pretty(rows).expect("report serialization cannot fail")
}

/// Exit status from the gate: 0 all pass, 1 verification failure,
/// 3 numerical failure (flagged rows present).
pub fn gate(rows: &[ReportRow]) -> i32 {
    if rows.iter().any(|r| r.status == Status::Flagged) {
        3
    } else if rows.iter().any(|r| r.status == Status::Fail) {
        1
    } else {
        0
    }
}
