//! Output files: JSON records and CSV grids, both embedding the resolved
//! configuration and library version for provenance, plus a small
//! self-contained SVG heatmap writer.

use std::io::Write;
use std::path::PathBuf;

use crate::config::{OutputConfig, RunConfig};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Scalar-style JSON record: {value, errorBound, verdict, diagnostics, ...}.
pub fn json_record(
    cfg: &RunConfig,
    value: Option<f64>,
    error_bound: Option<f64>,
    verdict: &str,
    diagnostics: &[String],
    extra: serde_json::Value,
) -> String {
    let mut record = serde_json::json!({
        "value": value,
        "errorBound": error_bound,
        "verdict": verdict,
        "diagnostics": diagnostics,
        "version": VERSION,
        "config": serde_json::to_value(cfg).expect("config serializes"),
    });
    if let (Some(obj), Some(ex)) = (record.as_object_mut(), extra.as_object()) {
        for (k, v) in ex {
            obj.insert(k.clone(), v.clone());
        }
    }
    let mut text = serde_json::to_string_pretty(&record).expect("record serializes");
    text.push('\n');
    text
}

/// CSV with '#' provenance header lines and a schema line.
pub fn csv_grid(cfg: &RunConfig, columns: &str, rows: &[String], notes: &[String]) -> String {
    let mut out = String::new();
    out.push_str(&format!("# qcondense {VERSION}\n"));
    out.push_str(&format!(
        "# config: {}\n",
        serde_json::to_string(cfg).expect("config serializes")
    ));
    for n in notes {
        out.push_str(&format!("# {n}\n"));
    }
    out.push_str(&format!("# columns: {columns}\n"));
    out.push_str(columns);
    out.push('\n');
    for r in rows {
        out.push_str(r);
        out.push('\n');
    }
    out
}

/// Resolves the target path against QCONDENSE_OUT_DIR for relative paths.
pub fn resolve_path(output: &OutputConfig) -> Option<PathBuf> {
    let path = output.path.as_ref()?;
    let p = PathBuf::from(path);
    if p.is_relative() {
        if let Ok(dir) = std::env::var("QCONDENSE_OUT_DIR") {
            return Some(PathBuf::from(dir).join(p));
        }
    }
    Some(p)
}

/// Writes to the configured file, or stdout when no path is set.
pub fn emit(output: &OutputConfig, content: &str) -> std::io::Result<()> {
    match resolve_path(output) {
        Some(p) => std::fs::write(p, content),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())
        }
    }
}

fn color(t: f64) -> (u8, u8, u8) {
    // Dark blue -> teal -> yellow ramp.
    let stops = [
        (0.0, (13, 8, 135)),
        (0.5, (33, 145, 140)),
        (1.0, (240, 249, 33)),
    ];
    let t = t.clamp(0.0, 1.0);
    for w in stops.windows(2) {
        let (t0, c0) = w[0];
        let (t1, c1) = w[1];
        if t <= t1 {
            let u = if t1 > t0 { (t - t0) / (t1 - t0) } else { 0.0 };
            let lerp = |a: i32, b: i32| (a as f64 + u * (b - a) as f64).round() as u8;
            return (lerp(c0.0, c1.0), lerp(c0.1, c1.1), lerp(c0.2, c1.2));
        }
    }
    (240, 249, 33)
}

/// Self-contained vector-graphics heatmap of an n x n field over
/// [-extent, extent]^2.
pub fn svg_heatmap(n: usize, extent: f64, values: &[f64], title: &str) -> String {
    assert_eq!(values.len(), n * n);
    let cell = 600.0 / n as f64;
    let max = values.iter().cloned().fold(0.0_f64, f64::max).max(1e-300);
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"660\" height=\"700\" \
         viewBox=\"0 0 660 700\">\n<rect width=\"660\" height=\"700\" fill=\"white\"/>\n\
         <text x=\"330\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"16\">{title}</text>\n"
    ));
    for iy in 0..n {
        for ix in 0..n {
            let v = values[iy * n + ix] / max;
            let (r, g, b) = color(v);
            let x = 30.0 + ix as f64 * cell;
            // SVG y grows downward; flip so k2 grows upward.
            let y = 40.0 + (n - 1 - iy) as f64 * cell;
            svg.push_str(&format!(
                "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{w:.2}\" height=\"{w:.2}\" \
                 fill=\"rgb({r},{g},{b})\"/>\n",
                w = cell + 0.5
            ));
        }
    }
    svg.push_str(&format!(
        "<rect x=\"30\" y=\"40\" width=\"600\" height=\"600\" fill=\"none\" stroke=\"black\"/>\n\
         <text x=\"30\" y=\"665\" font-family=\"sans-serif\" font-size=\"12\">k1 in [-{e}, {e}], \
         k2 in [-{e}, {e}], peak value {max:.6e}</text>\n</svg>\n",
        e = extent
    ));
    svg
}
