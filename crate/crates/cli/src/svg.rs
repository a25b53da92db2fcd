//! Self-contained SVG 1.1 contour plot of a sweep.

use std::fmt::Write as _;

use crase_core::contour::ContourLevel;
use crase_core::sweep::fmt9;

/// Iso-levels drawn on the Duan-sum map. The colours run from dark (strongly
/// entangled) to light (near the separability bound).
pub const CONTOUR_LEVELS: [f64; 5] = [0.1, 0.25, 0.5, 0.75, 0.9];
const COLOURS: [&str; 5] = ["#1b2a6b", "#2c6fb0", "#3fa08a", "#c9a227", "#d4502c"];

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 130.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;
const TICKS: usize = 5;

/// Renders iso-lines over the rectangle `x_range` by `y_range`. Coordinates
/// are printed with fixed precision so identical inputs give identical bytes.
pub fn render_contours(
    contours: &[ContourLevel],
    x_range: (f64, f64),
    y_range: (f64, f64),
    x_label: &str,
    y_label: &str,
) -> String {
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + (x - x_range.0) / (x_range.1 - x_range.0) * plot_w;
    let py = |y: f64| TOP + plot_h - (y - y_range.0) / (y_range.1 - y_range.0) * plot_h;

    let mut s = String::new();
    writeln!(
        s,
        r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#
    )
    .unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(
        s,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    )
    .unwrap();
    writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    )
    .unwrap();

    for k in 0..=TICKS {
        let f = k as f64 / TICKS as f64;
        let xv = x_range.0 + f * (x_range.1 - x_range.0);
        let yv = y_range.0 + f * (y_range.1 - y_range.0);
        let (x, y) = (px(xv), py(yv));
        let base = TOP + plot_h;
        writeln!(
            s,
            r#"<line x1="{x:.3}" y1="{base:.3}" x2="{x:.3}" y2="{:.3}" stroke="black"/><text x="{x:.3}" y="{:.3}" text-anchor="middle">{}</text>"#,
            base + 5.0,
            base + 20.0,
            tick_label(xv)
        )
        .unwrap();
        writeln!(
            s,
            r#"<line x1="{:.3}" y1="{y:.3}" x2="{LEFT:.3}" y2="{y:.3}" stroke="black"/><text x="{:.3}" y="{:.3}" text-anchor="end">{}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            y + 4.0,
            tick_label(yv)
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0,
        escape(x_label)
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="20" y="{:.3}" text-anchor="middle" transform="rotate(-90 20 {:.3})">{}</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0,
        escape(y_label)
    )
    .unwrap();

    for (i, level) in contours.iter().enumerate() {
        let colour = COLOURS[i % COLOURS.len()];
        let mut d = String::new();
        for &((x0, y0), (x1, y1)) in &level.segments {
            write!(
                d,
                "M{:.3} {:.3}L{:.3} {:.3}",
                px(x0),
                py(y0),
                px(x1),
                py(y1)
            )
            .unwrap();
        }
        writeln!(
            s,
            r#"<path data-level="{}" d="{d}" fill="none" stroke="{colour}" stroke-width="1.5"/>"#,
            fmt9(level.level)
        )
        .unwrap();
        let ly = TOP + 10.0 + 20.0 * i as f64;
        let lx = WIDTH - RIGHT + 15.0;
        writeln!(
            s,
            r#"<line x1="{lx:.3}" y1="{ly:.3}" x2="{:.3}" y2="{ly:.3}" stroke="{colour}" stroke-width="2"/><text x="{:.3}" y="{:.3}">{}</text>"#,
            lx + 25.0,
            lx + 32.0,
            ly + 4.0,
            fmt9(level.level)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

fn tick_label(v: f64) -> String {
    let r = (v * 1000.0).round() / 1000.0;
    if r == 0.0 {
        "0".to_string()
    } else {
        r.to_string()
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
