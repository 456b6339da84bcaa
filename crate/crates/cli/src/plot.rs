//! Semilog BER plots rendered straight to SVG.

use std::fmt::Write as _;

use crate::table::Row;

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 520.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;
const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];
const MARKERS: usize = 4;

pub struct Series {
    pub label: String,
    pub rows: Vec<Row>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn superscript(n: i32) -> String {
    let digits = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    let mut s = String::new();
    if n < 0 {
        s.push('⁻');
    }
    for c in n.unsigned_abs().to_string().chars() {
        s.push(digits[c.to_digit(10).unwrap_or(0) as usize]);
    }
    s
}

fn marker(out: &mut String, kind: usize, x: f64, y: f64, color: &str) {
    let r = 4.0;
    let _ = match kind % MARKERS {
        0 => writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="{r}" fill="none" stroke="{color}" stroke-width="1.5"/>"#),
        1 => writeln!(
            out,
            r#"<rect x="{:.2}" y="{:.2}" width="{}" height="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            x - r,
            y - r,
            2.0 * r,
            2.0 * r
        ),
        2 => writeln!(
            out,
            r#"<path d="M{:.2},{:.2} L{:.2},{:.2} L{:.2},{:.2} Z" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            x,
            y - r,
            x + r,
            y + r,
            x - r,
            y + r
        ),
        _ => writeln!(
            out,
            r#"<path d="M{:.2},{:.2} L{:.2},{:.2} M{:.2},{:.2} L{:.2},{:.2}" stroke="{color}" stroke-width="1.5"/>"#,
            x - r,
            y - r,
            x + r,
            y + r,
            x - r,
            y + r,
            x + r,
            y - r
        ),
    };
}

/// Renders BER against Eb/N0. The y axis spans at least 10^0 down to 10^-6.
pub fn render(series: &[Series], title: &str) -> String {
    let points = series.iter().flat_map(|s| s.rows.iter());
    let (mut xmin, mut xmax) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut lowest = -6i32;
    for r in points {
        xmin = xmin.min(r.ebn0_db);
        xmax = xmax.max(r.ebn0_db);
        if r.ber > 0.0 {
            let lo = (r.ber - r.ci95()).max(r.ber * 0.1);
            lowest = lowest.min(lo.log10().floor() as i32);
        }
    }
    if !xmin.is_finite() {
        xmin = 0.0;
        xmax = 1.0;
    }
    xmin = xmin.floor();
    xmax = xmax.ceil();
    if xmax <= xmin {
        xmax = xmin + 1.0;
    }
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let decades = -lowest as f64;
    let sx = |x: f64| LEFT + (x - xmin) / (xmax - xmin) * pw;
    let sy = |b: f64| TOP + (-b.log10()).clamp(0.0, decades) / decades * ph;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{}" y="18" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, escape(title));

    // Grid and decade labels.
    for d in 0..=(-lowest) {
        let y = sy(10f64.powi(-d));
        let _ = writeln!(
            out,
            r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#cccccc"/>"##,
            LEFT + pw
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end" class="ytick">10{}</text>"#,
            LEFT - 6.0,
            y + 4.0,
            superscript(-d)
        );
        if d < -lowest {
            for m in 2..10 {
                let ym = sy(m as f64 * 10f64.powi(-d - 1));
                let _ = writeln!(
                    out,
                    r##"<line x1="{LEFT}" y1="{ym:.2}" x2="{:.2}" y2="{ym:.2}" stroke="#eeeeee"/>"##,
                    LEFT + pw
                );
            }
        }
    }
    let span = xmax - xmin;
    let step = if span > 20.0 { 5.0 } else if span > 8.0 { 2.0 } else { 1.0 };
    let mut x = xmin;
    while x <= xmax + 1e-9 {
        let px = sx(x);
        let _ = writeln!(
            out,
            r##"<line x1="{px:.2}" y1="{TOP}" x2="{px:.2}" y2="{:.2}" stroke="#cccccc"/>"##,
            TOP + ph
        );
        let _ = writeln!(out, r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{x}</text>"#, TOP + ph + 18.0);
        x += step;
    }
    let _ = writeln!(out, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">Eb/N0 (dB)</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        out,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">BER</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    );

    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let mut rows: Vec<&Row> = s.rows.iter().filter(|r| r.ber > 0.0).collect();
        rows.sort_by(|a, b| a.ebn0_db.total_cmp(&b.ebn0_db));
        let _ = writeln!(out, r#"<g class="series" data-label="{}">"#, escape(&s.label));
        if rows.len() > 1 {
            let path: Vec<String> = rows.iter().map(|r| format!("{:.2},{:.2}", sx(r.ebn0_db), sy(r.ber))).collect();
            let _ = writeln!(
                out,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                path.join(" ")
            );
        }
        for r in &rows {
            let (px, py) = (sx(r.ebn0_db), sy(r.ber));
            let ci = r.ci95();
            if ci > 0.0 {
                let hi = sy((r.ber + ci).min(1.0));
                let lo = sy((r.ber - ci).max(r.ber * 0.1));
                let _ = writeln!(
                    out,
                    r#"<path class="whisker" d="M{px:.2},{hi:.2} L{px:.2},{lo:.2} M{:.2},{hi:.2} L{:.2},{hi:.2} M{:.2},{lo:.2} L{:.2},{lo:.2}" stroke="{color}" stroke-width="1"/>"#,
                    px - 3.0,
                    px + 3.0,
                    px - 3.0,
                    px + 3.0
                );
            }
            marker(&mut out, i, px, py, color);
        }
        let _ = writeln!(out, "</g>");
    }

    // Legend, top right inside the plot area.
    let lw = 12.0 + series.iter().map(|s| s.label.chars().count()).max().unwrap_or(0) as f64 * 7.0 + 40.0;
    let lx = LEFT + pw - lw - 10.0;
    let ly = TOP + 10.0;
    let _ = writeln!(
        out,
        r#"<g class="legend"><rect x="{lx:.2}" y="{ly:.2}" width="{lw:.2}" height="{:.2}" fill="white" stroke="black"/>"#,
        series.len() as f64 * 18.0 + 8.0
    );
    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let y = ly + 14.0 + i as f64 * 18.0;
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="1.5"/>"#,
            lx + 6.0,
            lx + 30.0
        );
        marker(&mut out, i, lx + 18.0, y, color);
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, lx + 36.0, y + 4.0, escape(&s.label));
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    out
}
