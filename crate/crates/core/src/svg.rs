//! Minimal SVG writer: scatter points, polylines, circles and axes.

use std::fmt::Write;

use crate::geometry::Point;

#[derive(Debug, Clone, Copy)]
pub struct Bounds {
    pub min: Point,
    pub max: Point,
}

impl Bounds {
    pub fn from_points(points: impl IntoIterator<Item = Point>) -> Self {
        let mut min = Point::new(f64::INFINITY, f64::INFINITY);
        let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            if !(p.x.is_finite() && p.y.is_finite()) {
                continue;
            }
            min = Point::new(min.x.min(p.x), min.y.min(p.y));
            max = Point::new(max.x.max(p.x), max.y.max(p.y));
        }
        if min.x > max.x {
            return Self { min: Point::new(0.0, 0.0), max: Point::new(1.0, 1.0) };
        }
        let mut b = Self { min, max };
        // degenerate extents still need a drawable box
        if b.max.x - b.min.x < 1e-12 {
            b.min.x -= 0.5;
            b.max.x += 0.5;
        }
        if b.max.y - b.min.y < 1e-12 {
            b.min.y -= 0.5;
            b.max.y += 0.5;
        }
        b
    }

    pub fn pad(&mut self, by: f64) {
        self.min = Point::new(self.min.x - by, self.min.y - by);
        self.max = Point::new(self.max.x + by, self.max.y + by);
    }
}

pub struct SvgDoc {
    width: f64,
    height: f64,
    margin: f64,
    bounds: Bounds,
    body: String,
}

impl SvgDoc {
    pub fn new(width: f64, height: f64, bounds: Bounds) -> Self {
        Self { width, height, margin: 40.0, bounds, body: String::new() }
    }

    fn scale(&self) -> (f64, f64) {
        let sx = (self.width - 2.0 * self.margin) / (self.bounds.max.x - self.bounds.min.x);
        let sy = (self.height - 2.0 * self.margin) / (self.bounds.max.y - self.bounds.min.y);
        (sx, sy)
    }

    fn map(&self, p: Point) -> (f64, f64) {
        let (sx, sy) = self.scale();
        let x = self.margin + (p.x - self.bounds.min.x) * sx;
        let y = self.height - self.margin - (p.y - self.bounds.min.y) * sy;
        (x, y)
    }

    pub fn dot(&mut self, p: Point, r: f64, fill: &str) {
        let (x, y) = self.map(p);
        let _ = writeln!(self.body, r#"<circle cx="{x:.2}" cy="{y:.2}" r="{r}" fill="{fill}"/>"#);
    }

    /// Circle with a radius in data units (uses the x scale).
    pub fn circle(&mut self, c: Point, radius: f64, fill: &str, stroke: &str) {
        let (x, y) = self.map(c);
        let r = radius * self.scale().0;
        let _ = writeln!(self.body, r#"<circle cx="{x:.2}" cy="{y:.2}" r="{r:.2}" fill="{fill}" stroke="{stroke}"/>"#);
    }

    pub fn polyline(&mut self, pts: &[Point], stroke: &str, width: f64) {
        if pts.is_empty() {
            return;
        }
        let coords: Vec<String> = pts
            .iter()
            .map(|&p| {
                let (x, y) = self.map(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="{width}"/>"#,
            coords.join(" ")
        );
    }

    pub fn text(&mut self, x: f64, y: f64, s: &str, anchor: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{x:.2}" y="{y:.2}" font-size="12" font-family="sans-serif" text-anchor="{anchor}">{}</text>"#,
            escape(s)
        );
    }

    /// Frame plus min/max tick labels and axis titles.
    pub fn axes(&mut self, x_label: &str, y_label: &str) {
        let (x0, y0) = self.map(self.bounds.min);
        let (x1, y1) = self.map(self.bounds.max);
        let _ = writeln!(
            self.body,
            r##"<rect x="{x0:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#333"/>"##,
            x1 - x0,
            y0 - y1
        );
        let b = self.bounds;
        self.text(x0, y0 + 16.0, &fmt_tick(b.min.x), "start");
        self.text(x1, y0 + 16.0, &fmt_tick(b.max.x), "end");
        self.text(x0 - 4.0, y0, &fmt_tick(b.min.y), "end");
        self.text(x0 - 4.0, y1 + 10.0, &fmt_tick(b.max.y), "end");
        self.text(0.5 * (x0 + x1), self.height - 6.0, x_label, "middle");
        self.text(12.0, 0.5 * (y0 + y1), y_label, "start");
    }

    pub fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
             <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{body}</svg>\n",
            w = self.width,
            h = self.height,
            body = self.body
        )
    }
}

fn fmt_tick(v: f64) -> String {
    if v.abs() >= 1e4 || (v != 0.0 && v.abs() < 1e-2) {
        format!("{v:.2e}")
    } else {
        format!("{v:.2}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// One labelled series for [`scatter_plot`].
pub struct Series<'a> {
    pub label: &'a str,
    pub color: &'a str,
    pub points: Vec<Point>,
    pub connect: bool,
}

/// Scatter/line chart of several series on shared axes.
pub fn scatter_plot(series: &[Series<'_>], x_label: &str, y_label: &str) -> String {
    let mut bounds = Bounds::from_points(series.iter().flat_map(|s| s.points.iter().copied()));
    let span = (bounds.max.x - bounds.min.x).max(bounds.max.y - bounds.min.y);
    bounds.pad(0.02 * span);
    let mut doc = SvgDoc::new(720.0, 480.0, bounds);
    doc.axes(x_label, y_label);
    for (i, s) in series.iter().enumerate() {
        let finite: Vec<Point> = s.points.iter().copied().filter(|p| p.x.is_finite() && p.y.is_finite()).collect();
        if s.connect {
            doc.polyline(&finite, s.color, 1.5);
        }
        for &p in &finite {
            doc.dot(p, 3.0, s.color);
        }
        doc.text(60.0, 20.0 + 14.0 * i as f64, s.label, "start");
        let _ = writeln!(
            doc.body,
            r#"<rect x="48" y="{:.1}" width="8" height="8" fill="{}"/>"#,
            12.0 + 14.0 * i as f64,
            s.color
        );
    }
    doc.finish()
}
