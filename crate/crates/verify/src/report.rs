//! JSON and CSV reports.

use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::spec::{CheckResult, VResult, VerifyError};

pub const REPORT_VERSION: &str = "1";

/// Timestamp written when a byte-stable report is requested.
pub const FIXED_TIMESTAMP: &str = "1970-01-01T00:00:00Z";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = VerifyError;

    fn from_str(s: &str) -> VResult<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(VerifyError::Report(format!(
                "unknown format `{other}` (json or csv)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub package: String,
    pub version: String,
    pub os: String,
    pub arch: String,
}

impl Environment {
    pub fn current() -> Self {
        Self {
            package: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            os: std::env::consts::OS.into(),
            arch: std::env::consts::ARCH.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub timestamp: String,
    pub environment: Environment,
    pub results: Vec<CheckResult>,
}

impl Report {
    /// With `fixed` set the timestamp is constant and runtimes are zeroed, so
    /// identical inputs give identical bytes.
    pub fn new(mut results: Vec<CheckResult>, fixed: bool) -> Self {
        let timestamp = if fixed {
            for r in &mut results {
                r.runtime_ms = 0;
            }
            FIXED_TIMESTAMP.to_string()
        } else {
            chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
        };
        Self {
            version: REPORT_VERSION.into(),
            timestamp,
            environment: Environment::current(),
            results,
        }
    }

    pub fn to_json(&self) -> VResult<String> {
        serde_json::to_string_pretty(self).map_err(|e| VerifyError::Report(e.to_string()))
    }

    pub fn from_json(text: &str) -> VResult<Self> {
        serde_json::from_str(text).map_err(|e| VerifyError::Report(e.to_string()))
    }

    pub fn to_csv(&self) -> VResult<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| VerifyError::Report(e.to_string());
        w.write_record(CSV_HEADER).map_err(err)?;
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.results {
            w.write_record([
                r.id.clone(),
                r.group.clone(),
                r.young.clone(),
                r.measure.clone(),
                r.status.to_string(),
                r.lhs.to_string(),
                r.rhs.to_string(),
                r.residual.to_string(),
                r.tol.to_string(),
                r.runtime_ms.to_string(),
                opt(r.constants.c0),
                opt(r.constants.phi_inv_one),
                opt(r.constants.psi_inv_one),
                r.witnesses.join(" | "),
                r.note.clone().unwrap_or_default(),
            ])
            .map_err(err)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| VerifyError::Report(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| VerifyError::Report(e.to_string()))
    }

    pub fn render(&self, format: Format) -> VResult<String> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }
}

pub const CSV_HEADER: [&str; 15] = [
    "id",
    "group",
    "young",
    "measure",
    "status",
    "lhs",
    "rhs",
    "residual",
    "tol",
    "runtime_ms",
    "c0",
    "phi_inv_one",
    "psi_inv_one",
    "witnesses",
    "note",
];

/// Writes the report to `path`, or to stdout when `path` is `-`.
pub fn emit_report(report: &Report, format: Format, path: &Path) -> VResult<()> {
    let text = report.render(format)?;
    if path.as_os_str() == "-" {
        std::io::stdout().write_all(text.as_bytes())?;
    } else {
        std::fs::write(path, text)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::{Constants, Status};

    fn result(id: &str, status: Status) -> CheckResult {
        CheckResult {
            id: id.into(),
            group: "cyclic:6".into(),
            young: "power:2".into(),
            measure: "random".into(),
            status,
            lhs: 0.1 + 0.2,
            rhs: 1.0 / 3.0,
            residual: 1e-17,
            tol: 1e-10,
            witnesses: vec!["A=[0, 2]".into()],
            runtime_ms: 17,
            constants: Constants {
                c0: Some(1.0),
                phi_inv_one: Some(1.0),
                psi_inv_one: None,
            },
            note: Some("with, a comma".into()),
        }
    }

    #[test]
    fn json_has_pass_status() {
        let json = Report::new(vec![result("C-VAR-FT", Status::Pass)], true)
            .to_json()
            .unwrap();
        assert!(json.contains("\"status\": \"pass\""));
        assert!(json.contains(FIXED_TIMESTAMP));
    }

    #[test]
    fn json_round_trip() {
        let report = Report::new(
            vec![
                result("C-EO", Status::Pass),
                result("C-ORBIT", Status::Fail),
            ],
            false,
        );
        let back = Report::from_json(&report.to_json().unwrap()).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn csv_has_header_plus_rows() {
        let rows = vec![
            result("C-EO", Status::Pass),
            result("C-ORBIT", Status::Skip),
            result("C-L1SUP", Status::Fail),
        ];
        let csv = Report::new(rows, true).to_csv().unwrap();
        assert_eq!(csv.lines().count(), 4);
        let mut reader = csv::Reader::from_reader(csv.as_bytes());
        let records: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
        assert_eq!(records[0].get(14), Some("with, a comma"));
    }

    #[test]
    fn fixed_reports_are_byte_stable() {
        let a = Report::new(vec![result("C-EO", Status::Pass)], true);
        let mut r = result("C-EO", Status::Pass);
        r.runtime_ms = 99;
        let b = Report::new(vec![r], true);
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        assert_eq!(a.to_csv().unwrap(), b.to_csv().unwrap());
    }

    #[test]
    fn unknown_format_rejected() {
        assert!("xml".parse::<Format>().is_err());
    }
}
