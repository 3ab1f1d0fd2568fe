//! Side-by-side comparison of two telemetry logs (typically a run with
//! adaptation against the same scenario without it).

use crate::runner::Verdict;
use crate::telemetry::{TelemetryError, TelemetryLog};
use serde::Serialize;
use std::path::Path;

/// Error-norm difference that counts as divergence, m.
const DIVERGENCE_EPS: f64 = 0.01;

/// How a run looks from its artifacts.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub enum RunStatus {
    /// Verdict taken from the sibling summary JSON.
    Reported(Verdict),
    /// No summary found; verdict inferred from the rows.
    Inferred { stable: bool, reason: String },
}

impl RunStatus {
    pub fn is_stable(&self) -> bool {
        match self {
            RunStatus::Reported(v) => v.is_stable(),
            RunStatus::Inferred { stable, .. } => *stable,
        }
    }

    fn describe(&self) -> String {
        match self {
            RunStatus::Reported(Verdict::Completed) => "completed".into(),
            RunStatus::Reported(Verdict::Instability { time, reason }) => {
                format!("instability at t={time:.3} s ({reason})")
            }
            RunStatus::Inferred { stable, reason } => {
                if *stable {
                    format!("completed (inferred: {reason})")
                } else {
                    format!("instability (inferred: {reason})")
                }
            }
        }
    }
}

/// One side of the comparison.
#[derive(Clone, Debug, Serialize)]
pub struct RunDigest {
    pub path: String,
    pub rows: usize,
    pub end_time: f64,
    pub status: RunStatus,
    pub final_position_error: f64,
    pub max_position_error: f64,
    pub min_com_height: f64,
}

/// The comparison result.
#[derive(Clone, Debug, Serialize)]
pub struct ComparisonReport {
    pub a: RunDigest,
    pub b: RunDigest,
    /// First time the position-error norms differ by more than 1 cm.
    pub divergence_time: Option<f64>,
    /// Rows compared (the shorter of the two logs).
    pub aligned_rows: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum CompareError {
    #[error(transparent)]
    Telemetry(#[from] TelemetryError),
    #[error("schema mismatch: column sets differ")]
    SchemaMismatch,
}

fn digest(path: &Path, log: &TelemetryLog) -> Result<RunDigest, TelemetryError> {
    let t = log.col("t")?;
    let ep = log.norm_of(&["e_p_x", "e_p_y", "e_p_z"])?;
    let z = log.col("p_c_z")?;
    let rows = log.len();
    let end_time = t.last().copied().unwrap_or(0.0);
    let max_ep = ep.iter().copied().fold(0.0, f64::max);
    let min_z = z.iter().copied().fold(f64::INFINITY, f64::min);

    let status = match read_sibling_summary(path) {
        Some(summary) => RunStatus::Reported(summary.verdict),
        None => {
            let z0 = z.first().copied().unwrap_or(0.0);
            if min_z < 0.5 * z0 {
                RunStatus::Inferred {
                    stable: false,
                    reason: format!("CoM fell to {min_z:.3} m"),
                }
            } else if max_ep > 0.5 {
                RunStatus::Inferred {
                    stable: false,
                    reason: format!("position error reached {max_ep:.3} m"),
                }
            } else {
                RunStatus::Inferred {
                    stable: true,
                    reason: "rows within bounds".into(),
                }
            }
        }
    };

    Ok(RunDigest {
        path: path.display().to_string(),
        rows,
        end_time,
        status,
        final_position_error: ep.last().copied().unwrap_or(0.0),
        max_position_error: max_ep,
        min_com_height: min_z,
    })
}

fn read_sibling_summary(csv_path: &Path) -> Option<crate::runner::RunSummary> {
    let sibling = csv_path.with_extension("summary.json");
    let text = std::fs::read_to_string(sibling).ok()?;
    serde_json::from_str(&text).ok()
}

/// Compares two telemetry logs row by row.
pub fn compare_runs(path_a: &Path, path_b: &Path) -> Result<ComparisonReport, CompareError> {
    let log_a = TelemetryLog::read(path_a)?;
    let log_b = TelemetryLog::read(path_b)?;
    if log_a.columns != log_b.columns {
        return Err(CompareError::SchemaMismatch);
    }

    let ep_a = log_a.norm_of(&["e_p_x", "e_p_y", "e_p_z"])?;
    let ep_b = log_b.norm_of(&["e_p_x", "e_p_y", "e_p_z"])?;
    let t = log_a.col("t")?;
    let aligned = ep_a.len().min(ep_b.len());
    let divergence_time = (0..aligned)
        .find(|&i| (ep_a[i] - ep_b[i]).abs() > DIVERGENCE_EPS)
        .map(|i| t[i]);

    Ok(ComparisonReport {
        a: digest(path_a, &log_a)?,
        b: digest(path_b, &log_b)?,
        divergence_time,
        aligned_rows: aligned,
    })
}

impl ComparisonReport {
    /// Plain-text summary table.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "run A: {}\nrun B: {}\n\n",
            self.a.path, self.b.path
        ));
        out.push_str(&format!(
            "{:<24} {:>18} {:>18}\n",
            "metric", "A", "B"
        ));
        let line = |name: &str, a: String, b: String| format!("{name:<24} {a:>18} {b:>18}\n");
        out.push_str(&line(
            "rows",
            self.a.rows.to_string(),
            self.b.rows.to_string(),
        ));
        out.push_str(&line(
            "end time [s]",
            format!("{:.3}", self.a.end_time),
            format!("{:.3}", self.b.end_time),
        ));
        out.push_str(&line(
            "final |e_p| [m]",
            format!("{:.6}", self.a.final_position_error),
            format!("{:.6}", self.b.final_position_error),
        ));
        out.push_str(&line(
            "max |e_p| [m]",
            format!("{:.6}", self.a.max_position_error),
            format!("{:.6}", self.b.max_position_error),
        ));
        out.push_str(&line(
            "min CoM height [m]",
            format!("{:.4}", self.a.min_com_height),
            format!("{:.4}", self.b.min_com_height),
        ));
        out.push('\n');
        out.push_str(&format!("status A: {}\n", self.a.status.describe()));
        out.push_str(&format!("status B: {}\n", self.b.status.describe()));
        match self.divergence_time {
            Some(t) => out.push_str(&format!(
                "error traces diverge (>1 cm) at t = {t:.3} s\n"
            )),
            None => out.push_str("no divergence: error traces agree within 1 cm\n"),
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::telemetry::{Row, TelemetryWriter};

    fn write_log(path: &Path, eps: &[f64]) {
        let mut w = TelemetryWriter::create(path).unwrap();
        for (k, &e) in eps.iter().enumerate() {
            let mut row = Row::default();
            row.t = (k + 1) as f64 * 0.002;
            row.e_p = [e, 0.0, 0.0];
            row.p_c = [0.0, 0.0, 0.3];
            row.beta = 1.0;
            w.write_row(&row).unwrap();
        }
        w.finish().unwrap();
    }

    #[test]
    fn identical_logs_report_zero_divergence() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.csv");
        write_log(&a, &[0.001, 0.002, 0.001]);
        write_log(&b, &[0.001, 0.002, 0.001]);
        let report = compare_runs(&a, &b).unwrap();
        assert!(report.divergence_time.is_none());
        assert!(report.a.status.is_stable());
    }

    #[test]
    fn diverging_logs_get_a_timestamp() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.csv");
        write_log(&a, &[0.001, 0.002, 0.001, 0.002]);
        write_log(&b, &[0.001, 0.002, 0.10, 0.60]);
        let report = compare_runs(&a, &b).unwrap();
        assert_eq!(report.divergence_time, Some(0.006));
        assert!(!report.b.status.is_stable());
        assert!(report.render_text().contains("diverge"));
    }

    #[test]
    fn schema_mismatch_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.csv");
        write_log(&a, &[0.001]);
        std::fs::write(&b, "t,x\n0.002,1.0\n").unwrap();
        assert!(matches!(
            compare_runs(&a, &b),
            Err(CompareError::SchemaMismatch)
        ));
    }
}
