//! Minimal SVG rendering for the sweep CSVs: polyline charts for curves
//! and a color-mapped cell grid for surfaces. No external plotting
//! dependency; the output is meant for quick visual inspection.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};

const W: f64 = 640.0;
const H: f64 = 480.0;
const MARGIN: f64 = 56.0;

fn finite_range(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values.filter(|v| v.is_finite()) {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (lo <= hi).then_some(if lo == hi { (lo - 0.5, hi + 0.5) } else { (lo, hi) })
}

fn x_px(v: f64, lo: f64, hi: f64) -> f64 {
    MARGIN + (v - lo) / (hi - lo) * (W - 2.0 * MARGIN)
}

fn y_px(v: f64, lo: f64, hi: f64) -> f64 {
    H - MARGIN - (v - lo) / (hi - lo) * (H - 2.0 * MARGIN)
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// One named series of an XY chart.
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// Render a polyline chart of the given series to `path`.
pub fn write_line_chart(
    path: &Path,
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[Series],
) -> Result<()> {
    let (x_lo, x_hi) = finite_range(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)))
        .unwrap_or((0.0, 1.0));
    let (y_lo, y_hi) = finite_range(series.iter().flat_map(|s| s.points.iter().map(|p| p.1)))
        .unwrap_or((0.0, 1.0));
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    out.push_str(&format!(
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">{}</text>\n",
        W / 2.0,
        title
    ));
    // axes
    out.push_str(&format!(
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n<line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>\n",
        m = MARGIN,
        b = H - MARGIN,
        r = W - MARGIN,
        t = MARGIN
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
        W / 2.0,
        H - 16.0,
        x_label
    ));
    out.push_str(&format!(
        "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 {})\">{}</text>\n",
        H / 2.0,
        H / 2.0,
        y_label
    ));
    for (lo, hi, vertical) in [(x_lo, x_hi, false), (y_lo, y_hi, true)] {
        for k in 0..=4 {
            let v = lo + (hi - lo) * k as f64 / 4.0;
            let label = format!("{v:.3}");
            if vertical {
                out.push_str(&format!(
                    "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">{}</text>\n",
                    MARGIN - 6.0,
                    y_px(v, lo, hi) + 3.0,
                    label
                ));
            } else {
                out.push_str(&format!(
                    "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">{}</text>\n",
                    x_px(v, lo, hi),
                    H - MARGIN + 16.0,
                    label
                ));
            }
        }
    }
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .filter(|p| p.0.is_finite() && p.1.is_finite())
            .map(|p| format!("{:.2},{:.2}", x_px(p.0, x_lo, x_hi), y_px(p.1, y_lo, y_hi)))
            .collect();
        out.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            pts.join(" ")
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" fill=\"{color}\">{}</text>\n",
            W - MARGIN + 4.0,
            MARGIN + 14.0 * i as f64,
            s.label
        ));
    }
    out.push_str("</svg>\n");
    write_file(path, &out)
}

/// Render a value grid as colored cells (row-major, `cols` per row).
pub fn write_heatmap(path: &Path, title: &str, values: &[f64], cols: usize) -> Result<()> {
    let rows = values.len().div_ceil(cols.max(1));
    let (lo, hi) = finite_range(values.iter().copied()).unwrap_or((0.0, 1.0));
    let cw = (W - 2.0 * MARGIN) / cols.max(1) as f64;
    let ch = (H - 2.0 * MARGIN) / rows.max(1) as f64;
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    out.push_str(&format!(
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">{}</text>\n",
        W / 2.0,
        title
    ));
    for (idx, &v) in values.iter().enumerate() {
        if !v.is_finite() {
            continue;
        }
        let r = idx / cols;
        let c = idx % cols;
        let t = (v - lo) / (hi - lo);
        // blue (cold) to red (hot)
        let red = (255.0 * t) as u8;
        let blue = (255.0 * (1.0 - t)) as u8;
        out.push_str(&format!(
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"rgb({red},64,{blue})\"/>\n",
            MARGIN + c as f64 * cw,
            H - MARGIN - (r + 1) as f64 * ch,
            cw + 0.5,
            ch + 0.5
        ));
    }
    out.push_str("</svg>\n");
    write_file(path, &out)
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
        }
    }
    fs::write(path, content).with_context(|| format!("writing {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_chart_contains_polyline() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("chart.svg");
        let series = [Series {
            label: "rate".into(),
            points: vec![(0.0, 1.0), (0.5, 0.7), (1.0, 0.2)],
        }];
        write_line_chart(&path, "test", "x", "y", &series).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.contains("<polyline"));
        assert!(text.contains("</svg>"));
    }

    #[test]
    fn heatmap_draws_cells() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("map.svg");
        write_heatmap(&path, "test", &[0.0, 0.5, 1.0, 0.25], 2).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.matches("<rect").count() >= 5);
    }
}
