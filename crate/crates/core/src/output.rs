//! Run outputs: the trajectory record, CSV and SVG writers, and the
//! JSON-style run summary. All writers emit plain strings; file placement is
//! the caller's business.

use crate::chebyshev::SpectralGrid;
use crate::config::SimConfig;
use crate::stepper::Trajectory;
use std::fmt::Write as _;

/// One recorded snapshot.
#[derive(Debug, Clone)]
pub struct SnapshotRecord {
    pub t: f64,
    pub theta: Vec<f64>,
}

/// Summary diagnostics of a run.
#[derive(Debug, Clone)]
pub struct RunDiagnostics {
    pub steps: u64,
    pub clamp_count: u64,
    pub theta_min: f64,
    pub theta_max: f64,
    pub final_rhs_norm: f64,
    pub completed: bool,
    /// Present when the run aborted.
    pub failure: Option<String>,
}

/// Everything a scenario run leaves behind: a config echo, the nodal
/// coordinates, the snapshots and summary diagnostics.
#[derive(Debug, Clone)]
pub struct TrajectoryRecord {
    pub label: String,
    pub version: &'static str,
    pub config_echo: String,
    /// Physical coordinates in node order (strictly monotone).
    pub z_phys: Vec<f64>,
    pub snapshots: Vec<SnapshotRecord>,
    pub diagnostics: RunDiagnostics,
}

impl TrajectoryRecord {
    pub fn from_trajectory(
        config: &SimConfig,
        grid: &SpectralGrid,
        traj: &Trajectory,
        failure: Option<String>,
    ) -> Self {
        let snapshots: Vec<SnapshotRecord> = traj
            .snapshots
            .iter()
            .map(|s| SnapshotRecord {
                t: s.t,
                theta: s.theta.values().to_vec(),
            })
            .collect();
        let mut theta_min = f64::INFINITY;
        let mut theta_max = f64::NEG_INFINITY;
        for s in &traj.snapshots {
            theta_min = theta_min.min(s.diagnostics.theta_min);
            theta_max = theta_max.max(s.diagnostics.theta_max);
        }
        let last = traj.snapshots.last();
        TrajectoryRecord {
            label: config.label.clone(),
            version: env!("CARGO_PKG_VERSION"),
            config_echo: crate::config::serialize_config(config),
            z_phys: grid.physical_nodes(),
            snapshots,
            diagnostics: RunDiagnostics {
                steps: traj.steps_taken,
                clamp_count: last.map(|s| s.diagnostics.clamp_count).unwrap_or(0),
                theta_min,
                theta_max,
                final_rhs_norm: last.map(|s| s.diagnostics.rhs_norm).unwrap_or(0.0),
                completed: failure.is_none(),
                failure,
            },
        }
    }
}

/// CSV with the fixed header `t_s,z_cm,theta`, one row per node per
/// snapshot.
pub fn to_csv(record: &TrajectoryRecord) -> String {
    let mut out = String::from("t_s,z_cm,theta\n");
    for snap in &record.snapshots {
        for (z, theta) in record.z_phys.iter().zip(&snap.theta) {
            let _ = writeln!(out, "{},{},{}", snap.t, z, theta);
        }
    }
    out
}

/// JSON-style run summary.
pub fn to_summary(record: &TrajectoryRecord) -> String {
    let d = &record.diagnostics;
    let failure = match &d.failure {
        Some(f) => format!("\"{}\"", f.replace('"', "'")),
        None => "null".to_string(),
    };
    format!(
        "{{\n  \"label\": \"{}\",\n  \"version\": \"{}\",\n  \"steps\": {},\n  \"snapshots\": {},\n  \"nodes\": {},\n  \"clamp_count\": {},\n  \"theta_min\": {},\n  \"theta_max\": {},\n  \"final_rhs_norm\": {:e},\n  \"completed\": {},\n  \"failure\": {}\n}}\n",
        record.label,
        record.version,
        d.steps,
        record.snapshots.len(),
        record.z_phys.len(),
        d.clamp_count,
        d.theta_min,
        d.theta_max,
        d.final_rhs_norm,
        d.completed,
        failure
    )
}

const SVG_WIDTH: f64 = 640.0;
const SVG_HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 50.0;

fn color(i: usize, n: usize) -> String {
    // blue -> red sweep across snapshots
    let f = if n <= 1 {
        0.0
    } else {
        i as f64 / (n - 1) as f64
    };
    let hue = 240.0 - 240.0 * f;
    format!("hsl({hue:.0}, 70%, 45%)")
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let a = v.abs();
    if (1e-3..1e4).contains(&a) {
        let s = format!("{v:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.').to_string();
        if s.is_empty() {
            "0".to_string()
        } else {
            s
        }
    } else {
        format!("{v:.2e}")
    }
}

/// Moisture profile plot: one polyline per snapshot, moisture on the
/// horizontal axis, depth on the vertical axis increasing downward
/// (hydrological convention).
pub fn to_svg(record: &TrajectoryRecord) -> String {
    let mut th_lo = f64::INFINITY;
    let mut th_hi = f64::NEG_INFINITY;
    for s in &record.snapshots {
        for &v in &s.theta {
            th_lo = th_lo.min(v);
            th_hi = th_hi.max(v);
        }
    }
    if !th_lo.is_finite() || !th_hi.is_finite() {
        th_lo = 0.0;
        th_hi = 1.0;
    }
    if th_hi - th_lo < 1e-12 {
        th_lo -= 0.5e-3;
        th_hi += 0.5e-3;
    }
    let pad = 0.05 * (th_hi - th_lo);
    th_lo -= pad;
    th_hi += pad;

    let z_lo = record.z_phys.iter().cloned().fold(f64::INFINITY, f64::min);
    let z_hi = record
        .z_phys
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);

    let plot_w = SVG_WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = SVG_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x_of = |theta: f64| MARGIN_LEFT + (theta - th_lo) / (th_hi - th_lo) * plot_w;
    let y_of = |z: f64| MARGIN_TOP + (z - z_lo) / (z_hi - z_lo) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {SVG_WIDTH} {SVG_HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(
        s,
        "<rect x=\"0\" y=\"0\" width=\"{SVG_WIDTH}\" height=\"{SVG_HEIGHT}\" fill=\"white\"/>"
    );
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{}</text>",
        MARGIN_LEFT + plot_w / 2.0,
        record.label
    );

    // axes
    let _ = writeln!(
        s,
        "<rect x=\"{MARGIN_LEFT}\" y=\"{MARGIN_TOP}\" width=\"{plot_w}\" height=\"{plot_h}\" fill=\"none\" stroke=\"black\"/>"
    );
    for i in 0..=4 {
        let theta = th_lo + (th_hi - th_lo) * i as f64 / 4.0;
        let x = x_of(theta);
        let _ = writeln!(
            s,
            "<line x1=\"{x}\" y1=\"{}\" x2=\"{x}\" y2=\"{}\" stroke=\"black\"/>",
            MARGIN_TOP + plot_h,
            MARGIN_TOP + plot_h + 5.0
        );
        let _ = writeln!(
            s,
            "<text x=\"{x}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
            MARGIN_TOP + plot_h + 20.0,
            fmt_tick(theta)
        );
        let z = z_lo + (z_hi - z_lo) * i as f64 / 4.0;
        let y = y_of(z);
        let _ = writeln!(
            s,
            "<line x1=\"{}\" y1=\"{y}\" x2=\"{MARGIN_LEFT}\" y2=\"{y}\" stroke=\"black\"/>",
            MARGIN_LEFT - 5.0
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>",
            MARGIN_LEFT - 8.0,
            y + 4.0,
            fmt_tick(z)
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">theta (-)</text>",
        MARGIN_LEFT + plot_w / 2.0,
        SVG_HEIGHT - 12.0
    );
    let _ = writeln!(
        s,
        "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">z (cm)</text>",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    );

    // profiles, depth drawn downward
    let n = record.snapshots.len();
    for (i, snap) in record.snapshots.iter().enumerate() {
        let mut points = String::new();
        for (z, &theta) in record.z_phys.iter().zip(&snap.theta) {
            let _ = write!(points, "{:.2},{:.2} ", x_of(theta), y_of(*z));
        }
        let _ = writeln!(
            s,
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>",
            color(i, n),
            points.trim_end()
        );
        // legend
        let ly = MARGIN_TOP + 14.0 * i as f64;
        let lx = SVG_WIDTH - MARGIN_RIGHT + 12.0;
        let _ = writeln!(
            s,
            "<line x1=\"{lx}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"2\"/>",
            ly - 4.0,
            lx + 18.0,
            ly - 4.0,
            color(i, n)
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\">t = {} s</text>",
            lx + 24.0,
            ly,
            fmt_tick(snap.t)
        );
    }
    let _ = writeln!(s, "</svg>");
    s
}

/// Generic log-scale decay plot used by the verification harness and the
/// browser demo: series of `(x, y)` points drawn on log10 axes.
pub fn decay_plot_svg(title: &str, series: &[(String, Vec<(f64, f64)>)]) -> String {
    let mut x_lo = f64::INFINITY;
    let mut x_hi = f64::NEG_INFINITY;
    let mut y_lo = f64::INFINITY;
    let mut y_hi = f64::NEG_INFINITY;
    for (_, pts) in series {
        for &(x, y) in pts {
            if x > 0.0 && y > 0.0 {
                x_lo = x_lo.min(x.log10());
                x_hi = x_hi.max(x.log10());
                y_lo = y_lo.min(y.log10());
                y_hi = y_hi.max(y.log10());
            }
        }
    }
    if !x_lo.is_finite() {
        x_lo = 0.0;
        x_hi = 1.0;
        y_lo = -1.0;
        y_hi = 0.0;
    }
    if x_hi - x_lo < 1e-9 {
        x_hi = x_lo + 1.0;
    }
    if y_hi - y_lo < 1e-9 {
        y_hi = y_lo + 1.0;
    }
    let plot_w = SVG_WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = SVG_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x_of = |x: f64| MARGIN_LEFT + (x.log10() - x_lo) / (x_hi - x_lo) * plot_w;
    let y_of = |y: f64| MARGIN_TOP + (y_hi - y.log10()) / (y_hi - y_lo) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {SVG_WIDTH} {SVG_HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(
        s,
        "<rect x=\"0\" y=\"0\" width=\"{SVG_WIDTH}\" height=\"{SVG_HEIGHT}\" fill=\"white\"/>"
    );
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{title}</text>",
        MARGIN_LEFT + plot_w / 2.0
    );
    let _ = writeln!(
        s,
        "<rect x=\"{MARGIN_LEFT}\" y=\"{MARGIN_TOP}\" width=\"{plot_w}\" height=\"{plot_h}\" fill=\"none\" stroke=\"black\"/>"
    );
    // decade ticks on y
    let mut dec = y_lo.ceil() as i64;
    while (dec as f64) <= y_hi {
        let y = MARGIN_TOP + (y_hi - dec as f64) / (y_hi - y_lo) * plot_h;
        let _ = writeln!(
            s,
            "<line x1=\"{MARGIN_LEFT}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"#ddd\"/>",
            MARGIN_LEFT + plot_w
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">1e{dec}</text>",
            MARGIN_LEFT - 8.0,
            y + 4.0
        );
        dec += 1;
    }
    for (i, (name, pts)) in series.iter().enumerate() {
        let col = color(i, series.len().max(2));
        let mut path = String::new();
        for &(x, y) in pts {
            if x > 0.0 && y > 0.0 {
                let _ = write!(path, "{:.2},{:.2} ", x_of(x), y_of(y));
            }
        }
        let _ = writeln!(
            s,
            "<polyline fill=\"none\" stroke=\"{col}\" stroke-width=\"1.5\" points=\"{}\"/>",
            path.trim_end()
        );
        for &(x, y) in pts {
            if x > 0.0 && y > 0.0 {
                let _ = writeln!(
                    s,
                    "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{col}\"/>",
                    x_of(x),
                    y_of(y)
                );
            }
        }
        let ly = MARGIN_TOP + 14.0 * i as f64;
        let lx = SVG_WIDTH - MARGIN_RIGHT + 12.0;
        let _ = writeln!(
            s,
            "<line x1=\"{lx}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{col}\" stroke-width=\"2\"/>",
            ly - 4.0,
            lx + 18.0,
            ly - 4.0
        );
        let _ = writeln!(s, "<text x=\"{}\" y=\"{ly}\">{name}</text>", lx + 24.0);
    }
    let _ = writeln!(s, "</svg>");
    s
}

/// Plot of plain `(x, y)` curves on linear axes (kernel shapes in the demo).
pub fn curves_svg(title: &str, x_label: &str, series: &[(String, Vec<(f64, f64)>)]) -> String {
    let mut x_lo = f64::INFINITY;
    let mut x_hi = f64::NEG_INFINITY;
    let mut y_lo = f64::INFINITY;
    let mut y_hi = f64::NEG_INFINITY;
    for (_, pts) in series {
        for &(x, y) in pts {
            x_lo = x_lo.min(x);
            x_hi = x_hi.max(x);
            y_lo = y_lo.min(y);
            y_hi = y_hi.max(y);
        }
    }
    if !x_lo.is_finite() {
        x_lo = 0.0;
        x_hi = 1.0;
        y_lo = 0.0;
        y_hi = 1.0;
    }
    if y_hi - y_lo < 1e-12 {
        y_hi = y_lo + 1.0;
    }
    let pad = 0.05 * (y_hi - y_lo);
    y_lo -= pad;
    y_hi += pad;
    let plot_w = SVG_WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = SVG_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x_of = |x: f64| MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let y_of = |y: f64| MARGIN_TOP + (y_hi - y) / (y_hi - y_lo) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {SVG_WIDTH} {SVG_HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(
        s,
        "<rect x=\"0\" y=\"0\" width=\"{SVG_WIDTH}\" height=\"{SVG_HEIGHT}\" fill=\"white\"/>"
    );
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{title}</text>",
        MARGIN_LEFT + plot_w / 2.0
    );
    let _ = writeln!(
        s,
        "<rect x=\"{MARGIN_LEFT}\" y=\"{MARGIN_TOP}\" width=\"{plot_w}\" height=\"{plot_h}\" fill=\"none\" stroke=\"black\"/>"
    );
    for i in 0..=4 {
        let x = x_lo + (x_hi - x_lo) * i as f64 / 4.0;
        let px = x_of(x);
        let _ = writeln!(
            s,
            "<text x=\"{px}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
            MARGIN_TOP + plot_h + 20.0,
            fmt_tick(x)
        );
        let y = y_lo + (y_hi - y_lo) * i as f64 / 4.0;
        let py = y_of(y);
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>",
            MARGIN_LEFT - 8.0,
            py + 4.0,
            fmt_tick(y)
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{x_label}</text>",
        MARGIN_LEFT + plot_w / 2.0,
        SVG_HEIGHT - 12.0
    );
    for (i, (name, pts)) in series.iter().enumerate() {
        let col = color(i, series.len().max(2));
        let mut path = String::new();
        for &(x, y) in pts {
            let _ = write!(path, "{:.2},{:.2} ", x_of(x), y_of(y));
        }
        let _ = writeln!(
            s,
            "<polyline fill=\"none\" stroke=\"{col}\" stroke-width=\"1.5\" points=\"{}\"/>",
            path.trim_end()
        );
        let ly = MARGIN_TOP + 14.0 * i as f64;
        let lx = SVG_WIDTH - MARGIN_RIGHT + 12.0;
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{ly}\" fill=\"{col}\">{name}</text>",
            lx
        );
    }
    let _ = writeln!(s, "</svg>");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chebyshev::Orientation;
    use crate::config::preset;
    use crate::kernel::KernelFamily;
    use crate::operator::RhsWorkspace;
    use crate::stepper::{run, BoundaryConditions, BoundaryFunction};

    fn small_record() -> TrajectoryRecord {
        let config = preset("example-4.1").unwrap();
        let grid = SpectralGrid::new(8, 0.0, 30.0, Orientation::LowAtPlusOne).unwrap();
        let w = RhsWorkspace::new(&grid, KernelFamily::Distributed, 0.15).unwrap();
        let bc = BoundaryConditions {
            top: BoundaryFunction::Constant(0.2),
            bottom: BoundaryFunction::Constant(0.15),
        };
        let traj = run(|_| 0.18, &w, &config.soil, &bc, 1.0, 0.1, 2).unwrap();
        TrajectoryRecord::from_trajectory(&config, &grid, &traj, None)
    }

    #[test]
    fn csv_schema() {
        let record = small_record();
        let csv = to_csv(&record);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "t_s,z_cm,theta");
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), record.snapshots.len() * record.z_phys.len());
        for row in rows {
            assert_eq!(row.split(',').count(), 3);
        }
    }

    #[test]
    fn z_column_strictly_monotone() {
        let record = small_record();
        for w in record.z_phys.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn svg_has_one_polyline_per_snapshot() {
        let record = small_record();
        let svg = to_svg(&record);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        let count = svg.matches("<polyline").count();
        assert_eq!(count, record.snapshots.len());
    }

    #[test]
    fn summary_fields() {
        let record = small_record();
        let summary = to_summary(&record);
        assert!(summary.contains("\"label\": \"example-4.1\""));
        assert!(summary.contains("\"completed\": true"));
        assert!(summary.contains("\"clamp_count\": 0"));
    }
}
