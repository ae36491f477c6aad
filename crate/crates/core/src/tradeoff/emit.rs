//! CSV and SVG output of the tradeoff curves.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::{cutset_breakpoints, cutset_bound, pda_lower_bound, table1_curve, Scheme, TradeoffError};
use crate::rational::{frac, int, to_decimal, to_f64, Rational};

/// Samples of the curved PDA converse on `[1, N]`.
const PDA_BOUND_SAMPLES: i64 = 64;

/// One `(M, R)` point of a named series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveRow {
    pub series: String,
    pub m: Rational,
    pub r: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmitReport {
    pub csv: PathBuf,
    pub svg: PathBuf,
    /// Rows coming from scheme corners.
    pub scheme_rows: usize,
    /// Rows coming from the two converse bounds.
    pub bound_rows: usize,
}

/// Scheme corners in the given order, then the PDA converse and the cut-set
/// bound on `[1, N]`.
pub fn curve_rows(n: usize, k: usize, schemes: &[Scheme]) -> Result<(Vec<CurveRow>, usize), TradeoffError> {
    let mut rows = Vec::new();
    for &s in schemes {
        for p in table1_curve(s, n, k)?.corners() {
            rows.push(CurveRow { series: s.tag().to_string(), m: p.m.clone(), r: p.r.clone() });
        }
    }
    let scheme_rows = rows.len();
    if n >= 2 {
        let span = int(n as i64 - 1);
        for j in 0..=PDA_BOUND_SAMPLES {
            let m = int(1) + &span * frac(j, PDA_BOUND_SAMPLES);
            let r = pda_lower_bound(n, k, &m)?;
            rows.push(CurveRow { series: "pda_lower_bound".into(), m, r });
        }
        for m in cutset_breakpoints(n, k) {
            let r = cutset_bound(n, k, &m)?;
            rows.push(CurveRow { series: "cutset_bound".into(), m, r });
        }
    }
    Ok((rows, scheme_rows))
}

const COLORS: [&str; 9] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#555555", "#17becf"];

/// Standalone SVG line chart of the rows, one polyline per series.
pub fn render_svg(n: usize, k: usize, rows: &[CurveRow]) -> String {
    let (w, h, pad) = (720.0, 480.0, 60.0);
    let x_max = n as f64;
    let y_max = rows.iter().map(|r| to_f64(&r.r)).fold(1.0f64, f64::max);
    let sx = |m: f64| pad + m / x_max * (w - 2.0 * pad);
    let sy = |r: f64| h - pad - r / y_max * (h - 2.0 * pad);

    let mut series: Vec<&str> = Vec::new();
    for r in rows {
        if !series.contains(&r.series.as_str()) {
            series.push(&r.series);
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">Memory-load tradeoff, N={n}, K={k}</text>"#,
        w / 2.0
    );
    let _ = writeln!(
        out,
        r#"<path d="M{:.1} {:.1} L{:.1} {:.1} L{:.1} {:.1}" stroke="black" fill="none"/>"#,
        sx(0.0),
        sy(y_max),
        sx(0.0),
        sy(0.0),
        sx(x_max),
        sy(0.0)
    );
    for i in 0..=4 {
        let (xv, yv) = (x_max * i as f64 / 4.0, y_max * i as f64 / 4.0);
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="middle">{xv:.2}</text>"#,
            sx(xv),
            sy(0.0) + 16.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="end">{yv:.2}</text>"#,
            sx(0.0) - 6.0,
            sy(yv) + 4.0
        );
    }
    let _ = writeln!(out, r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle">M</text>"#, w / 2.0, h - 16.0);
    let _ = writeln!(out, r#"<text x="16" y="{:.1}" font-family="sans-serif" font-size="13">R</text>"#, h / 2.0);
    for (i, name) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let dash = if name.ends_with("_bound") { r#" stroke-dasharray="6 4""# } else { "" };
        let pts: Vec<String> = rows
            .iter()
            .filter(|r| r.series == *name)
            .map(|r| format!("{:.2},{:.2}", sx(to_f64(&r.m)), sy(to_f64(&r.r))))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.8"{dash}/>"#,
            pts.join(" ")
        );
        let ly = pad + 16.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"{dash}/><text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11">{name}</text>"#,
            w - pad - 150.0,
            w - pad - 126.0,
            w - pad - 120.0,
            ly + 4.0
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Writes `curves_N<n>_K<k>.csv` and `.svg` into `out_dir`.
pub fn emit_curves(n: usize, k: usize, schemes: &[Scheme], out_dir: &Path) -> Result<EmitReport, TradeoffError> {
    let (rows, scheme_rows) = curve_rows(n, k, schemes)?;
    fs::create_dir_all(out_dir)?;
    let stem = format!("curves_N{n}_K{k}");
    let csv_path = out_dir.join(format!("{stem}.csv"));
    let svg_path = out_dir.join(format!("{stem}.svg"));

    let mut wtr = csv::Writer::from_path(&csv_path)?;
    wtr.write_record(["scheme", "M", "R", "M_exact", "R_exact"])?;
    for r in &rows {
        wtr.write_record([
            r.series.clone(),
            to_decimal(&r.m, 12),
            to_decimal(&r.r, 12),
            r.m.to_string(),
            r.r.to_string(),
        ])?;
    }
    wtr.flush()?;
    fs::write(&svg_path, render_svg(n, k, &rows))?;
    Ok(EmitReport { csv: csv_path, svg: svg_path, scheme_rows, bound_rows: rows.len() - scheme_rows })
}
