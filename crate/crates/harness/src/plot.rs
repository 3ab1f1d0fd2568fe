//! Static SVG renderings of a telemetry log: tracked position against the
//! reference, error norms, weights with slip probabilities, and the
//! time-scaling trace. Output is deterministic: the same log renders to the
//! same bytes.

use crate::telemetry::{TelemetryError, TelemetryLog};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 340.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_TOP: f64 = 34.0;
const MARGIN_BOTTOM: f64 = 42.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#e377c2",
];

#[derive(Debug, thiserror::Error)]
pub enum PlotError {
    #[error(transparent)]
    Telemetry(#[from] TelemetryError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

struct Series {
    label: String,
    color: &'static str,
    dashed: bool,
    ys: Vec<f64>,
}

fn finite_min_max(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        if v.is_finite() {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    if !lo.is_finite() || !hi.is_finite() {
        (0.0, 1.0)
    } else if (hi - lo).abs() < 1e-12 {
        (lo - 1.0, hi + 1.0)
    } else {
        (lo, hi)
    }
}

/// Renders one chart panel into `out` at the given vertical offset.
fn panel(
    out: &mut String,
    y_offset: f64,
    title: &str,
    y_label: &str,
    xs: &[f64],
    series: &[Series],
) {
    let (x_lo, x_hi) = finite_min_max(xs.iter().copied());
    let (y_lo, y_hi) = finite_min_max(series.iter().flat_map(|s| s.ys.iter().copied()));
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let map_x = |v: f64| MARGIN_LEFT + (v - x_lo) / (x_hi - x_lo) * plot_w;
    let map_y = |v: f64| y_offset + MARGIN_TOP + (1.0 - (v - y_lo) / (y_hi - y_lo)) * plot_h;

    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-size="15" font-family="sans-serif" font-weight="bold">{}</text>"#,
        MARGIN_LEFT,
        y_offset + 18.0,
        title
    );

    // Frame and grid.
    let _ = writeln!(
        out,
        r##"<rect x="{MARGIN_LEFT:.1}" y="{:.1}" width="{plot_w:.1}" height="{plot_h:.1}" fill="none" stroke="#444" stroke-width="1"/>"##,
        y_offset + MARGIN_TOP
    );
    for k in 0..=5 {
        let fx = x_lo + (x_hi - x_lo) * k as f64 / 5.0;
        let px = map_x(fx);
        let _ = writeln!(
            out,
            r##"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="#ddd" stroke-width="0.5"/>"##,
            y_offset + MARGIN_TOP,
            y_offset + MARGIN_TOP + plot_h
        );
        let _ = writeln!(
            out,
            r#"<text x="{px:.2}" y="{:.2}" font-size="11" font-family="sans-serif" text-anchor="middle">{fx:.2}</text>"#,
            y_offset + MARGIN_TOP + plot_h + 16.0
        );
        let fy = y_lo + (y_hi - y_lo) * k as f64 / 5.0;
        let py = map_y(fy);
        let _ = writeln!(
            out,
            r##"<line x1="{MARGIN_LEFT:.1}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#ddd" stroke-width="0.5"/>"##,
            MARGIN_LEFT + plot_w
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{py:.2}" font-size="11" font-family="sans-serif" text-anchor="end" dominant-baseline="middle">{fy:.4}</text>"#,
            MARGIN_LEFT - 6.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-size="12" font-family="sans-serif" text-anchor="middle">t [s]</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        y_offset + HEIGHT - 8.0
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.1}" font-size="12" font-family="sans-serif" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        y_offset + MARGIN_TOP + plot_h / 2.0,
        y_offset + MARGIN_TOP + plot_h / 2.0,
        y_label
    );

    // Series, decimated to at most ~2000 points per line.
    let stride = (xs.len() / 2000).max(1);
    for (i, s) in series.iter().enumerate() {
        let mut points = String::new();
        for (k, (&x, &y)) in xs.iter().zip(s.ys.iter()).enumerate() {
            if k % stride != 0 && k != xs.len() - 1 {
                continue;
            }
            let _ = write!(points, "{:.2},{:.2} ", map_x(x), map_y(y));
        }
        let dash = if s.dashed {
            r#" stroke-dasharray="6 3""#
        } else {
            ""
        };
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.4"{dash}/>"#,
            points.trim_end(),
            s.color
        );
        let ly = y_offset + MARGIN_TOP + 14.0 * i as f64 + 8.0;
        let lx = MARGIN_LEFT + plot_w + 10.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{}" stroke-width="2"{dash}/>"#,
            lx + 18.0,
            s.color
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="11" font-family="sans-serif" dominant-baseline="middle">{}</text>"#,
            lx + 24.0,
            ly,
            s.label
        );
    }
}

fn svg_document(panels: usize, body: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH:.0}\" height=\"{:.0}\" viewBox=\"0 0 {WIDTH:.0} {:.0}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{body}</svg>\n",
        HEIGHT * panels as f64,
        HEIGHT * panels as f64
    )
}

fn col_series(
    log: &TelemetryLog,
    specs: &[(&str, &str, bool)],
) -> Result<Vec<Series>, TelemetryError> {
    specs
        .iter()
        .enumerate()
        .map(|(i, (col, label, dashed))| {
            Ok(Series {
                label: label.to_string(),
                color: PALETTE[i % PALETTE.len()],
                dashed: *dashed,
                ys: log.col(col)?.to_vec(),
            })
        })
        .collect()
}

/// Renders the four standard charts for a log. Returns the written paths;
/// an empty log produces no files.
pub fn emit_plots(log_path: &Path, out_dir: &Path) -> Result<Vec<PathBuf>, PlotError> {
    let log = TelemetryLog::read(log_path)?;
    if log.is_empty() {
        return Ok(Vec::new());
    }
    std::fs::create_dir_all(out_dir)?;
    let stem = log_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "log".into());
    let t = log.col("t")?.to_vec();
    let mut written = Vec::new();

    // Position vs reference.
    {
        let series = col_series(
            &log,
            &[
                ("p_c_x", "x", false),
                ("p_c_y", "y", false),
                ("p_c_z", "z", false),
                ("p_d_x", "x ref", true),
                ("p_d_y", "y ref", true),
                ("p_d_z", "z ref", true),
            ],
        )?;
        let mut body = String::new();
        panel(&mut body, 0.0, "CoM position and reference", "position [m]", &t, &series);
        let path = out_dir.join(format!("{stem}_position.svg"));
        std::fs::write(&path, svg_document(1, &body))?;
        written.push(path);
    }

    // Error norms.
    {
        let ep = log.norm_of(&["e_p_x", "e_p_y", "e_p_z"])?;
        let eo = log.norm_of(&["e_o_x", "e_o_y", "e_o_z"])?;
        let series = vec![
            Series {
                label: "|e_p| [m]".into(),
                color: PALETTE[0],
                dashed: false,
                ys: ep,
            },
            Series {
                label: "|e_o| [rad]".into(),
                color: PALETTE[1],
                dashed: false,
                ys: eo,
            },
        ];
        let mut body = String::new();
        panel(&mut body, 0.0, "Tracking error norms", "error", &t, &series);
        let path = out_dir.join(format!("{stem}_errors.svg"));
        std::fs::write(&path, svg_document(1, &body))?;
        written.push(path);
    }

    // Weights and slip probabilities, stacked panels.
    {
        let weights = col_series(
            &log,
            &[
                ("w_1", "w_1 (FL)", false),
                ("w_2", "w_2 (FR)", false),
                ("w_3", "w_3 (RR)", false),
                ("w_4", "w_4 (RL)", false),
            ],
        )?;
        let slips = col_series(
            &log,
            &[
                ("slip_prob_1", "1-P_1 (FL)", false),
                ("slip_prob_2", "1-P_2 (FR)", false),
                ("slip_prob_3", "1-P_3 (RR)", false),
                ("slip_prob_4", "1-P_4 (RL)", false),
            ],
        )?;
        let mut body = String::new();
        panel(&mut body, 0.0, "Tangential distribution weights", "w_i", &t, &weights);
        panel(&mut body, HEIGHT, "Slippage probability", "1 - P_i", &t, &slips);
        let path = out_dir.join(format!("{stem}_weights.svg"));
        std::fs::write(&path, svg_document(2, &body))?;
        written.push(path);
    }

    // Time-scaling trace.
    {
        let series = col_series(&log, &[("beta", "beta", false)])?;
        let mut body = String::new();
        panel(&mut body, 0.0, "Time-scaling coefficient", "beta", &t, &series);
        let path = out_dir.join(format!("{stem}_beta.svg"));
        std::fs::write(&path, svg_document(1, &body))?;
        written.push(path);
    }

    Ok(written)
}
