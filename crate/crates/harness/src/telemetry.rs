//! Telemetry CSV: one row per control cycle, fixed column order, 9
//! significant digits. Identical runs produce identical bytes, so logs double
//! as golden files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

/// Bumped whenever the column set changes.
pub const SCHEMA_VERSION: u32 = 1;

/// Per-cycle record written to the log.
#[derive(Clone, Debug, Default)]
pub struct Row {
    pub t: f64,
    pub t_v: f64,
    pub beta: f64,
    pub e_p: [f64; 3],
    pub e_o: [f64; 3],
    pub e_v: [f64; 6],
    pub lyapunov: f64,
    pub p_c: [f64; 3],
    pub p_d: [f64; 3],
    /// Tangential weights w_{i,1}.
    pub w: [f64; 4],
    /// Stable-contact probabilities.
    pub p_stable: [f64; 4],
    /// 1 − P_i.
    pub slip_prob: [f64; 4],
    /// Deadbanded slippage probability driving the adaptation.
    pub slip_drive: [f64; 4],
    /// Commanded foot forces, leg-major.
    pub forces: [f64; 12],
    /// μ_s·f_n − ‖f_t‖ of the commanded force against the true terrain.
    pub cone_margin: [f64; 4],
    /// 0 = stick, 1 = slip, 2 = airborne.
    pub mode: [u8; 4],
}

/// Column names in on-disk order.
pub fn column_names() -> Vec<String> {
    let mut cols: Vec<String> = vec!["t", "t_v", "beta"].into_iter().map(String::from).collect();
    for axis in ["x", "y", "z"] {
        cols.push(format!("e_p_{axis}"));
    }
    for axis in ["x", "y", "z"] {
        cols.push(format!("e_o_{axis}"));
    }
    for axis in ["lin_x", "lin_y", "lin_z", "ang_x", "ang_y", "ang_z"] {
        cols.push(format!("e_v_{axis}"));
    }
    cols.push("lyapunov".into());
    for axis in ["x", "y", "z"] {
        cols.push(format!("p_c_{axis}"));
    }
    for axis in ["x", "y", "z"] {
        cols.push(format!("p_d_{axis}"));
    }
    for i in 1..=4 {
        cols.push(format!("w_{i}"));
    }
    for i in 1..=4 {
        cols.push(format!("P_{i}"));
    }
    for i in 1..=4 {
        cols.push(format!("slip_prob_{i}"));
    }
    for i in 1..=4 {
        cols.push(format!("slip_drive_{i}"));
    }
    for i in 1..=4 {
        for axis in ["x", "y", "z"] {
            cols.push(format!("f_{i}_{axis}"));
        }
    }
    for i in 1..=4 {
        cols.push(format!("cone_margin_{i}"));
    }
    for i in 1..=4 {
        cols.push(format!("mode_{i}"));
    }
    cols
}

fn fmt(value: f64) -> String {
    // 9 significant digits, exponent notation: diff-able and lossless enough
    // for every acceptance tolerance.
    format!("{value:.8e}")
}

/// Streaming CSV writer.
pub struct TelemetryWriter {
    out: BufWriter<File>,
    rows: usize,
}

impl TelemetryWriter {
    pub fn create(path: &Path) -> std::io::Result<Self> {
        let mut out = BufWriter::new(File::create(path)?);
        writeln!(out, "{}", column_names().join(","))?;
        Ok(TelemetryWriter { out, rows: 0 })
    }

    pub fn write_row(&mut self, row: &Row) -> std::io::Result<()> {
        let mut fields: Vec<String> = Vec::with_capacity(64);
        fields.push(fmt(row.t));
        fields.push(fmt(row.t_v));
        fields.push(fmt(row.beta));
        fields.extend(row.e_p.iter().map(|v| fmt(*v)));
        fields.extend(row.e_o.iter().map(|v| fmt(*v)));
        fields.extend(row.e_v.iter().map(|v| fmt(*v)));
        fields.push(fmt(row.lyapunov));
        fields.extend(row.p_c.iter().map(|v| fmt(*v)));
        fields.extend(row.p_d.iter().map(|v| fmt(*v)));
        fields.extend(row.w.iter().map(|v| fmt(*v)));
        fields.extend(row.p_stable.iter().map(|v| fmt(*v)));
        fields.extend(row.slip_prob.iter().map(|v| fmt(*v)));
        fields.extend(row.slip_drive.iter().map(|v| fmt(*v)));
        fields.extend(row.forces.iter().map(|v| fmt(*v)));
        fields.extend(row.cone_margin.iter().map(|v| fmt(*v)));
        fields.extend(row.mode.iter().map(|m| m.to_string()));
        writeln!(self.out, "{}", fields.join(","))?;
        self.rows += 1;
        Ok(())
    }

    pub fn rows_written(&self) -> usize {
        self.rows
    }

    pub fn finish(mut self) -> std::io::Result<()> {
        self.out.flush()
    }
}

/// A fully loaded telemetry log, column-major.
#[derive(Clone, Debug)]
pub struct TelemetryLog {
    pub columns: Vec<String>,
    data: Vec<Vec<f64>>,
}

#[derive(Debug, thiserror::Error)]
pub enum TelemetryError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed csv in {path}: {detail}")]
    Malformed { path: String, detail: String },
    #[error("logs have different schemas: {0} vs {1} columns")]
    SchemaMismatch(usize, usize),
    #[error("column {0} missing from log")]
    MissingColumn(String),
}

impl TelemetryLog {
    pub fn read(path: &Path) -> Result<Self, TelemetryError> {
        let text = std::fs::read_to_string(path).map_err(|source| TelemetryError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| TelemetryError::Malformed {
            path: path.display().to_string(),
            detail: "empty file".into(),
        })?;
        let columns: Vec<String> = header.split(',').map(String::from).collect();
        let mut data = vec![Vec::new(); columns.len()];
        for (lineno, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let mut count = 0;
            for (i, field) in line.split(',').enumerate() {
                if i >= columns.len() {
                    return Err(TelemetryError::Malformed {
                        path: path.display().to_string(),
                        detail: format!("row {} has extra fields", lineno + 2),
                    });
                }
                let value = field.parse::<f64>().map_err(|_| TelemetryError::Malformed {
                    path: path.display().to_string(),
                    detail: format!("row {} field {i}: {field:?}", lineno + 2),
                })?;
                data[i].push(value);
                count += 1;
            }
            if count != columns.len() {
                return Err(TelemetryError::Malformed {
                    path: path.display().to_string(),
                    detail: format!("row {} has {count} fields", lineno + 2),
                });
            }
        }
        Ok(TelemetryLog { columns, data })
    }

    pub fn len(&self) -> usize {
        self.data.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn col(&self, name: &str) -> Result<&[f64], TelemetryError> {
        self.columns
            .iter()
            .position(|c| c == name)
            .map(|i| self.data[i].as_slice())
            .ok_or_else(|| TelemetryError::MissingColumn(name.to_string()))
    }

    /// Euclidean norm across a set of columns, per row.
    pub fn norm_of(&self, names: &[&str]) -> Result<Vec<f64>, TelemetryError> {
        let cols: Vec<&[f64]> = names
            .iter()
            .map(|n| self.col(n))
            .collect::<Result<_, _>>()?;
        Ok((0..self.len())
            .map(|r| cols.iter().map(|c| c[r] * c[r]).sum::<f64>().sqrt())
            .collect())
    }
}
