//! Minimal self-contained SVG line plots.

use std::fmt::Write;

const SIZE: f64 = 800.0;
const MARGIN: f64 = 40.0;
const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

pub struct Series {
    pub label: String,
    pub points: Vec<[f64; 2]>,
}

pub struct Plot<'a> {
    pub title: &'a str,
    pub x_label: &'a str,
    pub y_label: &'a str,
    /// Same scale on both axes, centred on the origin.
    pub equal_aspect: bool,
    pub series: Vec<Series>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn finite_points(series: &[Series]) -> impl Iterator<Item = [f64; 2]> + '_ {
    series
        .iter()
        .flat_map(|s| s.points.iter().copied())
        .filter(|p| p[0].is_finite() && p[1].is_finite())
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn map(&self, [x, y]: [f64; 2]) -> (f64, f64) {
        let w = SIZE - 2.0 * MARGIN;
        (
            MARGIN + (x - self.x0) / (self.x1 - self.x0) * w,
            SIZE - MARGIN - (y - self.y0) / (self.y1 - self.y0) * w,
        )
    }
}

fn frame(plot: &Plot) -> Frame {
    if plot.equal_aspect {
        let half =
            finite_points(&plot.series).fold(0.0_f64, |m, [x, y]| m.max(x.abs()).max(y.abs()));
        let half = if half > 0.0 { 1.05 * half } else { 1.0 };
        return Frame {
            x0: -half,
            x1: half,
            y0: -half,
            y1: half,
        };
    }
    let (mut x0, mut x1, mut y0, mut y1) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for [x, y] in finite_points(&plot.series) {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        return Frame {
            x0: -1.0,
            x1: 1.0,
            y0: -1.0,
            y1: 1.0,
        };
    }
    let pad = |lo: f64, hi: f64| {
        let d = if hi > lo {
            0.05 * (hi - lo)
        } else {
            0.5 * lo.abs().max(1.0)
        };
        (lo - d, hi + d)
    };
    let (x0, x1) = pad(x0, x1);
    let (y0, y1) = pad(y0, y1);
    Frame { x0, x1, y0, y1 }
}

pub fn render(plot: &Plot) -> String {
    let f = frame(plot);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, "<title>{}</title>", escape(plot.title));
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>"#
    );

    // axes through the origin when it is in view, else along the frame
    let ox = if f.x0 <= 0.0 && f.x1 >= 0.0 {
        0.0
    } else {
        f.x0
    };
    let oy = if f.y0 <= 0.0 && f.y1 >= 0.0 {
        0.0
    } else {
        f.y0
    };
    let (ax0, ay) = f.map([f.x0, oy]);
    let (ax1, _) = f.map([f.x1, oy]);
    let (ax, ay0) = f.map([ox, f.y0]);
    let (_, ay1) = f.map([ox, f.y1]);
    let _ = writeln!(
        out,
        r##"<line x1="{ax0:.3}" y1="{ay:.3}" x2="{ax1:.3}" y2="{ay:.3}" stroke="#888888" stroke-width="1"/>"##
    );
    let _ = writeln!(
        out,
        r##"<line x1="{ax:.3}" y1="{ay0:.3}" x2="{ax:.3}" y2="{ay1:.3}" stroke="#888888" stroke-width="1"/>"##
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="14" text-anchor="end">{}</text>"#,
        SIZE - MARGIN,
        ay - 6.0,
        escape(plot.x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="14">{}</text>"#,
        ax + 6.0,
        MARGIN + 4.0,
        escape(plot.y_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN}" y="24" font-family="sans-serif" font-size="16">{}</text>"#,
        escape(plot.title)
    );

    for (k, s) in plot.series.iter().enumerate() {
        let mut pts = String::new();
        for p in s
            .points
            .iter()
            .filter(|p| p[0].is_finite() && p[1].is_finite())
        {
            let (u, v) = f.map(*p);
            let _ = write!(pts, "{u:.3},{v:.3} ");
        }
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{}" stroke-width="1" points="{}"><title>{}</title></polyline>"#,
            COLORS[k % COLORS.len()],
            pts.trim_end(),
            escape(&s.label)
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_polyline_per_series() {
        let plot = Plot {
            title: "a < b & c",
            x_label: "x",
            y_label: "y",
            equal_aspect: true,
            series: vec![
                Series {
                    label: "one".into(),
                    points: vec![[0.0, 0.0], [1.0, 2.0]],
                },
                Series {
                    label: "two".into(),
                    points: vec![[f64::NAN, 0.0], [-1.0, 0.5]],
                },
            ],
        };
        let svg = render(&plot);
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains(r#"viewBox="0 0 800 800""#));
        assert!(svg.contains("a &lt; b &amp; c"));
        assert!(!svg.contains("NaN"));
    }

    #[test]
    fn equal_aspect_is_centred() {
        let plot = Plot {
            title: "",
            x_label: "x",
            y_label: "y",
            equal_aspect: true,
            series: vec![Series {
                label: String::new(),
                points: vec![[2.0, 0.5]],
            }],
        };
        let f = frame(&plot);
        assert_eq!((f.x0, f.x1), (f.y0, f.y1));
        assert_eq!(f.map([0.0, 0.0]), (400.0, 400.0));
    }
}
