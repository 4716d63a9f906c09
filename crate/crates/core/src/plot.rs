//! Minimal SVG charts: the frontier scatter and actual-vs-predicted price paths.

use std::fmt::Write as _;

use chrono::NaiveDate;

use crate::frontier::FrontierResult;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 560.0;
const MARGIN: f64 = 60.0;

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn new(xs: impl Iterator<Item = f64> + Clone, ys: impl Iterator<Item = f64> + Clone) -> Self {
        let (x0, x1) = padded_range(xs);
        let (y0, y1) = padded_range(ys);
        Self { x0, x1, y0, y1 }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let span = hi - lo;
    let pad = if span > 0.0 { span * 0.05 } else { lo.abs().max(1.0) * 0.05 };
    (lo - pad, hi + pad)
}

fn header(out: &mut String, title: &str, x_label: &str, y_label: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{}" y="30" text-anchor="middle" font-size="16">{}</text>"#, WIDTH / 2.0, escape(title));
    let _ = writeln!(
        out,
        r#"<line x1="{MARGIN}" y1="{0}" x2="{1}" y2="{0}" stroke="black"/>"#,
        HEIGHT - MARGIN,
        WIDTH - MARGIN
    );
    let _ = writeln!(out, r#"<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{}" stroke="black"/>"#, HEIGHT - MARGIN);
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle" font-size="13">{}</text>"#, WIDTH / 2.0, HEIGHT - 15.0, escape(x_label));
    let _ = writeln!(
        out,
        r#"<text x="18" y="{0}" text-anchor="middle" font-size="13" transform="rotate(-90 18 {0})">{1}</text>"#,
        HEIGHT / 2.0,
        escape(y_label)
    );
}

fn ticks(out: &mut String, f: &Frame, x_fmt: impl Fn(f64) -> String, y_fmt: impl Fn(f64) -> String) {
    for k in 0..=4 {
        let t = k as f64 / 4.0;
        let x = f.x0 + t * (f.x1 - f.x0);
        let y = f.y0 + t * (f.y1 - f.y0);
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="10">{}</text>"#,
            f.px(x),
            HEIGHT - MARGIN + 15.0,
            escape(&x_fmt(x))
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-size="10">{}</text>"#,
            MARGIN - 5.0,
            f.py(y) + 3.0,
            escape(&y_fmt(y))
        );
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Risk (x) against return (y) for every sample, with the minimum-variance
/// portfolio as a red star and the maximum-Sharpe portfolio as a green star.
pub fn frontier_svg(result: &FrontierResult, contour: &[(f64, f64)], title: &str) -> String {
    let f = Frame::new(
        result.samples.iter().map(|s| s.ann_volatility),
        result.samples.iter().map(|s| s.ann_return),
    );
    let mut out = String::new();
    header(&mut out, title, "Volatility (annual)", "Return (annual)");
    ticks(&mut out, &f, |v| format!("{v:.3}"), |v| format!("{v:.3}"));
    let _ = writeln!(out, r#"<g class="samples" fill="steelblue" fill-opacity="0.35">"#);
    for s in &result.samples {
        let _ = writeln!(
            out,
            r#"<circle class="sample" cx="{:.2}" cy="{:.2}" r="1.5"/>"#,
            f.px(s.ann_volatility),
            f.py(s.ann_return)
        );
    }
    let _ = writeln!(out, "</g>");
    if contour.len() > 1 {
        let pts: Vec<String> = contour
            .iter()
            .map(|(x, y)| format!("{:.2},{:.2}", f.px(*x), f.py(*y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline class="frontier" points="{}" fill="none" stroke="black" stroke-width="1"/>"#,
            pts.join(" ")
        );
    }
    for (class, colour, s) in [
        ("min-variance", "red", result.min_variance_sample()),
        ("max-sharpe", "green", result.max_sharpe_sample()),
    ] {
        let _ = writeln!(
            out,
            r#"<path class="{class}" d="{}" fill="{colour}" stroke="black" stroke-width="0.5"/>"#,
            star(f.px(s.ann_volatility), f.py(s.ann_return), 10.0)
        );
    }
    let _ = writeln!(out, "</svg>");
    out
}

fn star(cx: f64, cy: f64, r: f64) -> String {
    let mut d = String::new();
    for k in 0..10 {
        let radius = if k % 2 == 0 { r } else { r * 0.45 };
        let angle = std::f64::consts::PI * (k as f64 / 5.0) - std::f64::consts::FRAC_PI_2;
        let cmd = if k == 0 { 'M' } else { 'L' };
        let _ = write!(d, "{cmd}{:.2},{:.2} ", cx + radius * angle.cos(), cy + radius * angle.sin());
    }
    d.push('Z');
    d
}

/// Actual (blue) and predicted (orange) price paths over time.
pub fn prediction_svg(dates: &[NaiveDate], actual: &[f64], predicted: &[f64], title: &str) -> String {
    let xs = (0..dates.len()).map(|i| i as f64);
    let f = Frame::new(xs, actual.iter().chain(predicted).copied());
    let mut out = String::new();
    header(&mut out, title, "Date", "Close price");
    let label = |x: f64| {
        let i = x.round().clamp(0.0, dates.len().saturating_sub(1) as f64) as usize;
        dates.get(i).map(|d| d.to_string()).unwrap_or_default()
    };
    ticks(&mut out, &f, label, |v| format!("{v:.1}"));
    for (class, colour, series) in [("actual", "steelblue", actual), ("predicted", "darkorange", predicted)] {
        let pts: Vec<String> = series
            .iter()
            .enumerate()
            .map(|(i, y)| format!("{:.2},{:.2}", f.px(i as f64), f.py(*y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline class="{class}" points="{}" fill="none" stroke="{colour}" stroke-width="1.5"/>"#,
            pts.join(" ")
        );
    }
    let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="12" fill="steelblue">actual</text>"#, WIDTH - MARGIN - 80.0, MARGIN);
    let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="12" fill="darkorange">predicted</text>"#, WIDTH - MARGIN - 80.0, MARGIN + 16.0);
    let _ = writeln!(out, "</svg>");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontier::build_frontier;
    use crate::portfolio::{ReturnStats, RiskFree};
    use ndarray::array;

    #[test]
    fn scatter_has_one_circle_per_sample_and_two_markers() {
        let stats = ReturnStats::new(array![0.1, 0.2], array![[0.04, 0.0], [0.0, 0.09]]).unwrap();
        let f = build_frontier(&stats, 300, 1, RiskFree::default()).unwrap();
        let svg = frontier_svg(&f, &[(0.2, 0.1), (0.25, 0.15)], "A & B");
        assert_eq!(svg.matches(r#"class="sample""#).count(), 300);
        assert_eq!(svg.matches(r#"class="min-variance""#).count(), 1);
        assert_eq!(svg.matches(r#"class="max-sharpe""#).count(), 1);
        assert!(svg.contains("fill=\"red\"") && svg.contains("fill=\"green\""));
        assert!(svg.contains("A &amp; B"));
    }

    #[test]
    fn degenerate_scatter_is_finite() {
        let stats = ReturnStats::new(array![0.1], array![[0.04]]).unwrap();
        let f = build_frontier(&stats, 5, 1, RiskFree::default()).unwrap();
        let svg = frontier_svg(&f, &[], "single");
        assert!(!svg.contains("NaN"));
    }

    #[test]
    fn prediction_chart_has_two_paths() {
        let d0 = NaiveDate::from_ymd_opt(2021, 1, 1).unwrap();
        let dates: Vec<_> = (0..5).map(|i| d0 + chrono::Days::new(i)).collect();
        let svg = prediction_svg(&dates, &[1.0, 2.0, 3.0, 2.0, 1.0], &[1.1, 1.9, 2.8, 2.1, 1.2], "x");
        assert!(svg.contains(r#"class="actual""#));
        assert!(svg.contains(r#"class="predicted""#));
    }
}
