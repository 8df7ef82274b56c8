//! SVG scatter plots of embeddings in one or two dimensions.

use std::fmt::Write;

use loometric::rational::to_f64;
use loometric::{Embedding, FiniteMetricSpace};

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 48.0;

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// One circle and one label per point. Axes are scaled independently to
/// fill the viewport; a 1-dimensional embedding is drawn on a horizontal line.
pub fn scatter(space: &FiniteMetricSpace, emb: &Embedding) -> Option<String> {
    if emb.dim > 2 {
        return None;
    }
    let points: Vec<(f64, f64)> = emb
        .coords
        .iter()
        .map(|c| {
            let x = c.first().map_or(0.0, to_f64);
            let y = c.get(1).map_or(0.0, to_f64);
            (x, y)
        })
        .collect();
    let span = |f: fn(&(f64, f64)) -> f64| {
        let lo = points.iter().map(f).fold(f64::INFINITY, f64::min);
        let hi = points.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
        if lo.is_finite() && hi > lo {
            (lo, hi - lo)
        } else {
            (lo.min(0.0), 0.0)
        }
    };
    let (x0, xw) = span(|p| p.0);
    let (y0, yw) = span(|p| p.1);
    let place = |v: f64, lo: f64, w: f64, extent: f64| {
        if w == 0.0 {
            extent / 2.0
        } else {
            MARGIN + (v - lo) / w * (extent - 2.0 * MARGIN)
        }
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if emb.dim < 2 {
        let _ = writeln!(
            out,
            r##"<line x1="{MARGIN}" y1="{y}" x2="{x2}" y2="{y}" stroke="#bbb"/>"##,
            y = HEIGHT / 2.0,
            x2 = WIDTH - MARGIN
        );
    }
    for (i, &(x, y)) in points.iter().enumerate() {
        let px = place(x, x0, xw, WIDTH);
        // SVG y grows downwards.
        let py = HEIGHT - place(y, y0, yw, HEIGHT);
        let _ = writeln!(
            out,
            r##"<circle class="point" cx="{px:.2}" cy="{py:.2}" r="4" fill="#1f5fa8"/>"##
        );
        let _ = writeln!(
            out,
            r#"<text class="label" x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12">{}</text>"#,
            px + 6.0,
            py - 6.0,
            escape(space.label(i))
        );
    }
    out.push_str("</svg>\n");
    Some(out)
}
