//! Check records, suite reports and their byte-stable emission.
//!
//! Every verified inequality becomes one [`CheckRecord`] carrying the two
//! sides, a normalized margin and a verdict. `info` rows are report-only
//! diagnostics (empirical lower bounds, decay tables) that never gate the
//! exit code.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::numeric::{leq_with_slack, margin};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Info,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Pass => f.write_str("pass"),
            Verdict::Fail => f.write_str("fail"),
            Verdict::Info => f.write_str("info"),
        }
    }
}

/// One checked inequality instance. `statement` is a stable identifier of
/// the mathematical statement being instantiated, so a failing row is
/// traceable; `name` localizes the instance (witness point, cube, sample).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub statement: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub verdict: Verdict,
}

impl CheckRecord {
    /// Record for the inequality `lhs <= rhs` with relative slack.
    pub fn leq(name: impl Into<String>, statement: &str, lhs: f64, rhs: f64, rel: f64) -> Self {
        let ok = lhs.is_finite() && rhs.is_finite() && leq_with_slack(lhs, rhs, rel);
        CheckRecord {
            name: name.into(),
            statement: statement.to_string(),
            lhs,
            rhs,
            margin: margin(lhs, rhs),
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        }
    }

    /// Record for `lhs == rhs` up to relative slack.
    pub fn eq(name: impl Into<String>, statement: &str, lhs: f64, rhs: f64, rel: f64) -> Self {
        let ok = lhs.is_finite() && rhs.is_finite() && crate::numeric::close_rel(lhs, rhs, rel);
        CheckRecord {
            name: name.into(),
            statement: statement.to_string(),
            lhs,
            rhs,
            margin: -margin(lhs, rhs).abs(),
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        }
    }

    /// Boolean check; lhs/rhs carry context values for the report.
    pub fn bool(name: impl Into<String>, statement: &str, ok: bool, lhs: f64, rhs: f64) -> Self {
        CheckRecord {
            name: name.into(),
            statement: statement.to_string(),
            lhs,
            rhs,
            margin: margin(lhs, rhs),
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        }
    }

    /// Report-only diagnostic row.
    pub fn info(name: impl Into<String>, statement: &str, lhs: f64, rhs: f64) -> Self {
        CheckRecord {
            name: name.into(),
            statement: statement.to_string(),
            lhs,
            rhs,
            margin: margin(lhs, rhs),
            verdict: Verdict::Info,
        }
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }
}

/// Run provenance: enough to reproduce the report byte-for-byte.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Provenance {
    pub library_version: String,
    pub config_hash: String,
    pub seed: u64,
    pub space: String,
    pub system: String,
    pub lattice: String,
    pub constants: BTreeMap<String, f64>,
}

/// A structured record of every checked inequality instance.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SuiteReport {
    pub provenance: Provenance,
    pub records: Vec<CheckRecord>,
}

impl SuiteReport {
    pub fn new(provenance: Provenance) -> Self {
        SuiteReport {
            provenance,
            records: Vec::new(),
        }
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.records.push(record);
    }

    pub fn extend(&mut self, records: impl IntoIterator<Item = CheckRecord>) {
        self.records.extend(records);
    }

    /// Aggregate verdict: fails iff any record fails.
    pub fn passed(&self) -> bool {
        !self.records.iter().any(CheckRecord::failed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| r.failed())
    }

    /// The machine section: pretty JSON with deterministic field order.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| crate::error::Error::Usage(format!("bad report: {e}")))
    }

    /// The tabular section: fixed column order, shortest round-trip float
    /// formatting, LF line endings. Byte-stable for a fixed run.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,statement,lhs,rhs,margin,verdict\n");
        for r in &self.records {
            out.push_str(&csv_field(&r.name));
            out.push(',');
            out.push_str(&csv_field(&r.statement));
            out.push(',');
            out.push_str(&format!("{},{},{},{}\n", r.lhs, r.rhs, r.margin, r.verdict));
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Worst-point record for a pointwise inequality `lhs[x] <= rhs[x]`: the
/// verdict covers every point, the stored sides come from the point with
/// the smallest margin.
pub fn pointwise_leq_record(
    name: &str,
    statement: &str,
    lhs: &[f64],
    rhs: &[f64],
    rel: f64,
) -> CheckRecord {
    let mut worst = 0usize;
    let mut worst_margin = f64::INFINITY;
    for (x, (&l, &r)) in lhs.iter().zip(rhs).enumerate() {
        let m = margin(l, r);
        if m < worst_margin {
            worst_margin = m;
            worst = x;
        }
    }
    let ok = lhs
        .iter()
        .zip(rhs)
        .all(|(&l, &r)| l.is_finite() && r.is_finite() && leq_with_slack(l, r, rel));
    CheckRecord::bool(
        format!("{name}[x={worst}]"),
        statement,
        ok,
        lhs[worst],
        rhs[worst],
    )
}

/// A two-column plot table (x, y) written as CSV.
pub fn plot_csv(x_name: &str, y_name: &str, rows: &[(f64, f64)]) -> String {
    let mut out = format!("{x_name},{y_name}\n");
    for (x, y) in rows {
        out.push_str(&format!("{x},{y}\n"));
    }
    out
}

/// Writes the machine and tabular sections under `dir`.
pub fn emit_report(report: &SuiteReport, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    write_atomic(&dir.join("report.json"), report.to_json().as_bytes())?;
    write_atomic(&dir.join("report.csv"), report.to_csv().as_bytes())?;
    Ok(())
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(bytes)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts_and_aggregate() {
        let mut report = SuiteReport::default();
        report.push(CheckRecord::leq("a", "stmt", 1.0, 2.0, 1e-12));
        report.push(CheckRecord::info("b", "stmt", 3.0, 1.0));
        assert!(report.passed());
        report.push(CheckRecord::leq("c", "stmt", 2.0, 1.0, 1e-12));
        assert!(!report.passed());
        assert_eq!(report.failures().count(), 1);
    }

    #[test]
    fn csv_shape_and_roundtrip() {
        let mut report = SuiteReport::default();
        report.push(CheckRecord::leq("x[1]", "s", 0.5, 1.0 / 3.0, 1e-10));
        let csv = report.to_csv();
        assert_eq!(csv.lines().count(), 2);
        assert!(csv.ends_with('\n'));
        assert!(!csv.contains('\r'));

        let json = report.to_json();
        let back = SuiteReport::from_json(&json).unwrap();
        assert_eq!(back.records.len(), 1);
        assert_eq!(back.records[0].lhs, 0.5);
    }
}
