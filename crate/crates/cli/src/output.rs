//! Deterministic emitters: CSV bodies, JSON metadata sidecars, and minimal
//! SVG line plots. Floats are written with the shortest round-trip
//! formatting, so identical runs produce byte-identical files.

use std::fmt::Write as _;
use std::path::Path;

use spdcsim::interference::PatternGrid;

/// Pattern CSV with the frozen schema `tau_fs,V,R_over_R0`.
pub fn pattern_csv(pattern: &PatternGrid) -> String {
    let mut out = String::from("tau_fs,V,R_over_R0\n");
    for i in 0..pattern.tau_fs.len() {
        writeln!(
            out,
            "{},{},{}",
            pattern.tau_fs[i], pattern.visibility[i], pattern.r_normalized[i]
        )
        .expect("string write");
    }
    out
}

/// Thickness-sweep CSV: `L_mm,V`.
pub fn sweep_csv(rows: &[(f64, f64)]) -> String {
    let mut out = String::from("L_mm,V\n");
    for (l, v) in rows {
        writeln!(out, "{l},{v}").expect("string write");
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> std::io::Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, text)
}

/// Minimal SVG polyline plot of R/R0 against tau.
pub fn pattern_svg(pattern: &PatternGrid, title: &str) -> String {
    svg_polyline(
        &pattern.tau_fs,
        &pattern.r_normalized,
        title,
        "tau (fs)",
        "R / R0",
    )
}

/// Minimal SVG polyline plot of a thickness sweep.
pub fn sweep_svg(rows: &[(f64, f64)], title: &str) -> String {
    let xs: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.1).collect();
    svg_polyline(&xs, &ys, title, "L (mm)", "V(LD/2)")
}

fn svg_polyline(xs: &[f64], ys: &[f64], title: &str, x_label: &str, y_label: &str) -> String {
    const W: f64 = 640.0;
    const H: f64 = 420.0;
    const M: f64 = 56.0; // margin

    let (x_lo, x_hi) = bounds(xs);
    let (mut y_lo, mut y_hi) = bounds(ys);
    if (y_hi - y_lo).abs() < 1e-12 {
        y_lo -= 0.5;
        y_hi += 0.5;
    }
    let sx = (W - 2.0 * M) / (x_hi - x_lo);
    let sy = (H - 2.0 * M) / (y_hi - y_lo);
    let map = |x: f64, y: f64| (M + (x - x_lo) * sx, H - M - (y - y_lo) * sy);

    let mut points = String::new();
    for (&x, &y) in xs.iter().zip(ys) {
        let (px, py) = map(x, y);
        write!(points, "{px:.2},{py:.2} ").expect("string write");
    }

    let mut svg = String::new();
    write!(
        svg,
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" ",
            "viewBox=\"0 0 {w} {h}\">\n",
            "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n",
            "<text x=\"{tx}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{title}</text>\n",
            "<line x1=\"{m}\" y1=\"{ybase}\" x2=\"{xend}\" y2=\"{ybase}\" stroke=\"black\"/>\n",
            "<line x1=\"{m}\" y1=\"{m}\" x2=\"{m}\" y2=\"{ybase}\" stroke=\"black\"/>\n",
            "<text x=\"{tx}\" y=\"{xlab_y}\" text-anchor=\"middle\" font-size=\"12\">{xl}</text>\n",
            "<text x=\"16\" y=\"{ty}\" text-anchor=\"middle\" font-size=\"12\" ",
            "transform=\"rotate(-90 16 {ty})\">{yl}</text>\n",
            "<text x=\"{m}\" y=\"{tick_y}\" text-anchor=\"middle\" font-size=\"10\">{x0}</text>\n",
            "<text x=\"{xend}\" y=\"{tick_y}\" text-anchor=\"middle\" font-size=\"10\">{x1}</text>\n",
            "<text x=\"{ylab_x}\" y=\"{ybase}\" text-anchor=\"end\" font-size=\"10\">{y0}</text>\n",
            "<text x=\"{ylab_x}\" y=\"{ytop}\" text-anchor=\"end\" font-size=\"10\">{y1}</text>\n",
            "<polyline points=\"{points}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n",
            "</svg>\n"
        ),
        w = W,
        h = H,
        m = M,
        tx = W / 2.0,
        ty = H / 2.0,
        ybase = H - M,
        xend = W - M,
        xlab_y = H - 16.0,
        tick_y = H - M + 16.0,
        ylab_x = M - 6.0,
        ytop = M + 4.0,
        title = title,
        xl = x_label,
        yl = y_label,
        x0 = trim(x_lo),
        x1 = trim(x_hi),
        y0 = trim(y_lo),
        y1 = trim(y_hi),
        points = points,
    )
    .expect("string write");
    svg
}

fn bounds(v: &[f64]) -> (f64, f64) {
    let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

fn trim(x: f64) -> String {
    format!("{x:.3}")
}
