//! Self-contained SVG 1.1 line plots (fixed 800x600 viewBox, no external
//! dependencies) so CI artifacts render identically everywhere.

use super::series::Series;
use crate::error::{Error, Result};
use std::fmt::Write as _;

const W: f64 = 800.0;
const H: f64 = 600.0;
const MARGIN: f64 = 64.0;

#[derive(Debug, Clone, Copy, Default)]
pub struct PlotOptions {
    pub log_x: bool,
    pub log_y: bool,
}

fn axis_ticks(lo: f64, hi: f64) -> Vec<f64> {
    (0..=4).map(|i| lo + (hi - lo) * i as f64 / 4.0).collect()
}

fn fmt_tick(v: f64, log: bool) -> String {
    let val = if log { 10f64.powf(v) } else { v };
    format!("{val:.3e}")
}

/// Render one (x, y) polyline from named series columns.
pub fn render_plot(
    series: &Series,
    x: &str,
    y: &str,
    title: &str,
    opts: PlotOptions,
) -> Result<String> {
    let mut pairs = series.xy(x, y)?;
    if opts.log_x {
        pairs.retain(|(a, _)| *a > 0.0);
    }
    if opts.log_y {
        pairs.retain(|(_, b)| *b > 0.0);
    }
    if pairs.is_empty() {
        return Err(Error::ValidationError(format!(
            "no plottable points for ({x}, {y})"
        )));
    }
    let map = |v: f64, log: bool| if log { v.log10() } else { v };
    let xs: Vec<f64> = pairs.iter().map(|(a, _)| map(*a, opts.log_x)).collect();
    let ys: Vec<f64> = pairs.iter().map(|(_, b)| map(*b, opts.log_y)).collect();
    let (x_lo, x_hi) = bounds(&xs);
    let (y_lo, y_hi) = bounds(&ys);
    let px = |v: f64| MARGIN + (v - x_lo) / (x_hi - x_lo) * (W - 2.0 * MARGIN);
    let py = |v: f64| H - MARGIN - (v - y_lo) / (y_hi - y_lo) * (H - 2.0 * MARGIN);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="28" font-family="monospace" font-size="18" text-anchor="middle">{}</text>"#,
        W / 2.0,
        xml_escape(title)
    );
    // axes
    let _ = writeln!(
        svg,
        r#"<line x1="{m}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/><line x1="{m}" y1="{t}" x2="{m}" y2="{b}" stroke="black"/>"#,
        m = MARGIN,
        b = H - MARGIN,
        r = W - MARGIN,
        t = MARGIN,
    );
    for tick in axis_ticks(x_lo, x_hi) {
        let xp = px(tick);
        let _ = writeln!(
            svg,
            r#"<line x1="{xp:.2}" y1="{b:.2}" x2="{xp:.2}" y2="{b2:.2}" stroke="black"/><text x="{xp:.2}" y="{ty:.2}" font-family="monospace" font-size="11" text-anchor="middle">{label}</text>"#,
            b = H - MARGIN,
            b2 = H - MARGIN + 6.0,
            ty = H - MARGIN + 20.0,
            label = fmt_tick(tick, opts.log_x),
        );
    }
    for tick in axis_ticks(y_lo, y_hi) {
        let yp = py(tick);
        let _ = writeln!(
            svg,
            r#"<line x1="{m2:.2}" y1="{yp:.2}" x2="{m:.2}" y2="{yp:.2}" stroke="black"/><text x="{tx:.2}" y="{ty:.2}" font-family="monospace" font-size="11" text-anchor="end">{label}</text>"#,
            m = MARGIN,
            m2 = MARGIN - 6.0,
            tx = MARGIN - 9.0,
            ty = yp + 4.0,
            label = fmt_tick(tick, opts.log_y),
        );
    }
    // axis labels
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-family="monospace" font-size="14" text-anchor="middle">{}</text>"#,
        W / 2.0,
        H - 16.0,
        xml_escape(&axis_label(x, opts.log_x)),
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.2}" font-family="monospace" font-size="14" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
        H / 2.0,
        H / 2.0,
        xml_escape(&axis_label(y, opts.log_y)),
    );
    let points: Vec<String> = pairs
        .iter()
        .map(|(a, b)| format!("{:.2},{:.2}", px(map(*a, opts.log_x)), py(map(*b, opts.log_y))))
        .collect();
    let _ = writeln!(
        svg,
        r##"<polyline fill="none" stroke="#1f6fb2" stroke-width="1.5" points="{}"/>"##,
        points.join(" ")
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn axis_label(name: &str, log: bool) -> String {
    if log {
        format!("log10 scale: {name}")
    } else {
        name.to_string()
    }
}

fn bounds(vals: &[f64]) -> (f64, f64) {
    let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn demo_series() -> Series {
        Series {
            headers: vec!["time".into(), "dist_S".into()],
            rows: (0..50)
                .map(|k| {
                    let t = k as f64 * 0.1;
                    vec![Some(t), Some((-t).exp())]
                })
                .collect(),
        }
    }

    #[test]
    fn renders_svg_with_title_and_polyline() {
        let svg = render_plot(&demo_series(), "time", "dist_S", "demo", PlotOptions::default())
            .unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("polyline"));
        assert!(svg.contains("demo"));
        assert!(svg.contains(r#"viewBox="0 0 800 600""#));
    }

    #[test]
    fn unknown_column_rejected() {
        assert!(matches!(
            render_plot(&demo_series(), "time", "energy", "demo", PlotOptions::default()),
            Err(Error::UnknownColumn(_))
        ));
    }

    #[test]
    fn log_scale_drops_nonpositive_points() {
        let mut s = demo_series();
        s.rows.push(vec![Some(5.1), Some(-1.0)]);
        let svg =
            render_plot(&s, "time", "dist_S", "demo", PlotOptions { log_x: false, log_y: true })
                .unwrap();
        assert!(svg.contains("log10 scale: dist_S"));
    }
}
