//! Machine-readable check records: JSONL on stdout (and optionally a file),
//! a human-readable table on stderr.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use sumfold::Verdict;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Unstable,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check: String,
    #[serde(flatten)]
    pub params: BTreeMap<String, serde_json::Value>,
    pub status: Status,
    pub fail_index: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub elapsed_ms: u64,
    pub artifact_version: String,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Runs one check body, stamping elapsed time and translating its outcome.
pub fn run_cell<F>(check: &str, params: BTreeMap<String, serde_json::Value>, body: F) -> CheckReport
where
    F: FnOnce() -> Result<Verdict, sumfold::Error>,
{
    let start = Instant::now();
    let outcome = body();
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let (status, fail_index, detail) = match outcome {
        Ok(Verdict::Pass) => (Status::Pass, None, None),
        Ok(Verdict::Fail { index, detail }) => (Status::Fail, Some(index), Some(detail)),
        Err(e) => (Status::Error, None, Some(e.to_string())),
    };
    CheckReport {
        check: check.to_string(),
        params,
        status,
        fail_index,
        detail,
        elapsed_ms,
        artifact_version: ARTIFACT_VERSION.to_string(),
    }
}

pub fn params(pairs: &[(&str, serde_json::Value)]) -> BTreeMap<String, serde_json::Value> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

/// Writes records as JSONL to stdout and optionally to `out`; prints a table
/// to stderr. Returns an error exit code when writing fails.
pub fn emit(reports: &[CheckReport], out: Option<&Path>) -> Result<(), String> {
    let mut file = match out {
        Some(path) => Some(BufWriter::new(
            File::create(path).map_err(|e| format!("cannot create {}: {e}", path.display()))?,
        )),
        None => None,
    };
    let stdout = std::io::stdout();
    let mut stdout = stdout.lock();
    for report in reports {
        let line = serde_json::to_string(report).map_err(|e| e.to_string())?;
        writeln!(stdout, "{line}").map_err(|e| e.to_string())?;
        if let Some(f) = file.as_mut() {
            writeln!(f, "{line}").map_err(|e| e.to_string())?;
        }
    }
    let stderr = std::io::stderr();
    let mut stderr = stderr.lock();
    let _ = writeln!(
        stderr,
        "{:<14} {:>3} {:>9} {:<8} {:>10} {:>8}",
        "check", "k", "n", "status", "fail_idx", "ms"
    );
    for r in reports {
        let k = r
            .params
            .get("k")
            .map(|v| v.to_string())
            .unwrap_or_else(|| "-".into());
        let n = r
            .params
            .get("N")
            .map(|v| v.to_string())
            .unwrap_or_else(|| "-".into());
        let status = match r.status {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Unstable => "unstable",
            Status::Error => "error",
        };
        let idx = r
            .fail_index
            .map(|i| i.to_string())
            .unwrap_or_else(|| "-".into());
        let _ = writeln!(
            stderr,
            "{:<14} {:>3} {:>9} {:<8} {:>10} {:>8}",
            r.check, k, n, status, idx, r.elapsed_ms
        );
    }
    Ok(())
}
