//! Minimal static SVG plots: CDF curves and polar beam patterns.

use std::fmt::Write;

use crate::model::BeamPattern;

const W: f64 = 640.0;
const H: f64 = 420.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// "Nice" tick positions covering `[lo, hi]`.
fn ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let span = (hi - lo).max(1e-12);
    let raw = span / target as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| span / s <= target as f64)
        .unwrap_or(10.0 * mag);
    let start = (lo / step).ceil() as i64;
    let end = (hi / step).floor() as i64;
    (start..=end).map(|k| k as f64 * step).collect()
}

/// Step-free polyline CDF plot of one or more labeled series.
pub fn cdf_plot(title: &str, x_label: &str, series: &[(&str, &[(f64, f64)])]) -> String {
    let xs = series
        .iter()
        .flat_map(|s| s.1.iter().map(|p| p.0))
        .filter(|x| x.is_finite());
    let (mut lo, mut hi) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    if !lo.is_finite() {
        (lo, hi) = (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        lo -= 0.5;
        hi += 0.5;
    }
    let pw = W - 2.0 * MARGIN;
    let ph = H - 2.0 * MARGIN;
    let sx = |x: f64| MARGIN + (x - lo) / (hi - lo) * pw;
    let sy = |p: f64| H - MARGIN - p * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        W / 2.0,
        escape(title)
    );
    let _ = writeln!(
        s,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>"##
    );
    for t in ticks(lo, hi, 8) {
        let x = sx(t);
        let _ = writeln!(
            s,
            r##"<line x1="{x:.2}" y1="{MARGIN}" x2="{x:.2}" y2="{:.2}" stroke="#ddd"/>"##,
            H - MARGIN
        );
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            H - MARGIN + 16.0,
            fmt_tick(t)
        );
    }
    for k in 0..=5 {
        let p = k as f64 / 5.0;
        let y = sy(p);
        let _ = writeln!(
            s,
            r##"<line x1="{MARGIN}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/>"##,
            W - MARGIN
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{p:.1}</text>"#,
            MARGIN - 6.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        W / 2.0,
        H - 18.0,
        escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">CDF</text>"#,
        H / 2.0,
        H / 2.0
    );
    for (i, (label, pts)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let mut d = String::new();
        for (x, p) in pts.iter().filter(|p| p.0.is_finite()) {
            let _ = write!(d, "{:.2},{:.2} ", sx(*x), sy(*p));
        }
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            d.trim_end()
        );
        let ly = MARGIN + 16.0 + 16.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{ly:.2}" fill="{color}">{}</text>"#,
            MARGIN + 8.0,
            escape(label)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn fmt_tick(t: f64) -> String {
    if t.fract().abs() < 1e-9 {
        format!("{}", t.round() as i64)
    } else {
        format!("{t:.2}")
    }
}

/// Polar plot of `B1` in dB, 0° pointing right and angles counter-clockwise.
/// The radius spans from the lowest floor to the highest peak.
pub fn polar_pattern(title: &str, series: &[(&str, &BeamPattern)]) -> String {
    let samples: Vec<Vec<f64>> = series
        .iter()
        .map(|(_, p)| (0..=720).map(|k| p.eval_db(k as f64 * 0.5)).collect())
        .collect();
    let mut lo = samples.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    let mut hi = samples.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
    lo = (lo - 1.0).floor();
    hi = (hi + 1.0).ceil();
    if hi - lo < 2.0 {
        lo -= 1.0;
        hi += 1.0;
    }
    let size = 440.0;
    let c = size / 2.0;
    let rmax = c - 50.0;
    let r_of = |db: f64| (db - lo) / (hi - lo) * rmax;
    let pt = |deg: f64, r: f64| (c + r * deg.to_radians().cos(), c - r * deg.to_radians().sin());

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{c}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        escape(title)
    );
    for t in ticks(lo, hi, 5) {
        let _ = writeln!(
            s,
            r##"<circle cx="{c}" cy="{c}" r="{:.2}" fill="none" stroke="#ddd"/>"##,
            r_of(t)
        );
        let _ = writeln!(
            s,
            r##"<text x="{:.2}" y="{:.2}" fill="#777">{} dB</text>"##,
            c + 3.0,
            c - r_of(t) - 2.0,
            fmt_tick(t)
        );
    }
    for k in 0..12 {
        let a = k as f64 * 30.0;
        let (x, y) = pt(a, rmax);
        let _ = writeln!(
            s,
            r##"<line x1="{c}" y1="{c}" x2="{x:.2}" y2="{y:.2}" stroke="#eee"/>"##
        );
        let (lx, ly) = pt(a, rmax + 14.0);
        let _ = writeln!(
            s,
            r#"<text x="{lx:.2}" y="{:.2}" text-anchor="middle">{a}°</text>"#,
            ly + 4.0
        );
    }
    for (i, ((label, _), vals)) in series.iter().zip(&samples).enumerate() {
        let color = COLORS[i % COLORS.len()];
        let mut d = String::new();
        for (k, v) in vals.iter().enumerate() {
            let (x, y) = pt(k as f64 * 0.5, r_of(*v));
            let _ = write!(d, "{x:.2},{y:.2} ");
        }
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            d.trim_end()
        );
        let _ = writeln!(
            s,
            r#"<text x="10" y="{:.2}" fill="{color}">{}</text>"#,
            size - 10.0 - 14.0 * i as f64,
            escape(label)
        );
    }
    s.push_str("</svg>\n");
    s
}
