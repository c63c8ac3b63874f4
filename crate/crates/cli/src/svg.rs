use std::fmt::Write;

use inversive_core::Point2;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 40.0;

enum Shape {
    Closed(Vec<Point2>),
    /// Polyline with gaps at `None`.
    Open(Vec<Option<Point2>>),
    Dots(Vec<Point2>),
}

struct Layer {
    label: String,
    color: &'static str,
    shape: Shape,
}

/// A plot in model coordinates with the origin at the center of the view.
pub struct Scene {
    title: String,
    layers: Vec<Layer>,
}

pub const PALETTE: [&str; 8] = [
    "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

impl Scene {
    pub fn new(title: impl Into<String>) -> Scene {
        Scene {
            title: title.into(),
            layers: Vec::new(),
        }
    }

    pub fn closed(&mut self, label: impl Into<String>, color: &'static str, pts: Vec<Point2>) {
        self.push(label, color, Shape::Closed(pts));
    }

    pub fn open(&mut self, label: impl Into<String>, color: &'static str, pts: Vec<Option<Point2>>) {
        self.push(label, color, Shape::Open(pts));
    }

    pub fn dots(&mut self, label: impl Into<String>, color: &'static str, pts: Vec<Point2>) {
        self.push(label, color, Shape::Dots(pts));
    }

    fn push(&mut self, label: impl Into<String>, color: &'static str, shape: Shape) {
        self.layers.push(Layer {
            label: label.into(),
            color,
            shape,
        });
    }

    fn extent(&self) -> (f64, f64) {
        let mut w = 0.0f64;
        let mut h = 0.0f64;
        let mut see = |p: &Point2| {
            if p.is_finite() {
                w = w.max(p.x.abs());
                h = h.max(p.y.abs());
            }
        };
        for l in &self.layers {
            match &l.shape {
                Shape::Closed(v) | Shape::Dots(v) => v.iter().for_each(&mut see),
                Shape::Open(v) => v.iter().flatten().for_each(&mut see),
            }
        }
        (w.max(1e-9), h.max(1e-9))
    }

    pub fn render(&self) -> String {
        let (w, h) = self.extent();
        let s = ((WIDTH / 2.0 - MARGIN) / w).min((HEIGHT / 2.0 - MARGIN) / h);
        let px = |p: Point2| (WIDTH / 2.0 + s * p.x, HEIGHT / 2.0 - s * p.y);
        let path = |pts: &mut dyn Iterator<Item = Point2>| {
            let mut d = String::new();
            for (i, p) in pts.enumerate() {
                let (x, y) = px(p);
                let _ = write!(d, "{}{x:.3},{y:.3}", if i == 0 { "M" } else { " L" });
            }
            d
        };

        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="600" viewBox="0 0 800 600">"#
        );
        let _ = writeln!(out, r#"<rect width="800" height="600" fill="white"/>"#);
        let _ = writeln!(
            out,
            r##"<line x1="0" y1="300" x2="800" y2="300" stroke="#ccc"/><line x1="400" y1="0" x2="400" y2="600" stroke="#ccc"/>"##
        );
        for l in &self.layers {
            match &l.shape {
                Shape::Closed(v) if !v.is_empty() => {
                    let _ = writeln!(
                        out,
                        r#"<path d="{} Z" fill="none" stroke="{}" stroke-width="1.2"/>"#,
                        path(&mut v.iter().copied()),
                        l.color
                    );
                }
                Shape::Open(v) => {
                    for run in v.split(|p| p.is_none()).filter(|r| r.len() > 1) {
                        let _ = writeln!(
                            out,
                            r#"<path d="{}" fill="none" stroke="{}" stroke-width="1"/>"#,
                            path(&mut run.iter().flatten().copied()),
                            l.color
                        );
                    }
                }
                Shape::Dots(v) => {
                    for &p in v {
                        let (x, y) = px(p);
                        let _ = writeln!(
                            out,
                            r#"<circle cx="{x:.3}" cy="{y:.3}" r="2" fill="{}"/>"#,
                            l.color
                        );
                    }
                }
                Shape::Closed(_) => {}
            }
        }
        let _ = writeln!(
            out,
            r#"<text x="12" y="22" font-family="monospace" font-size="14">{}</text>"#,
            escape(&self.title)
        );
        for (i, l) in self.layers.iter().enumerate() {
            let y = 42.0 + 16.0 * i as f64;
            let _ = writeln!(
                out,
                r#"<rect x="12" y="{:.0}" width="10" height="10" fill="{}"/><text x="28" y="{:.0}" font-family="monospace" font-size="12">{}</text>"#,
                y - 9.0,
                l.color,
                y,
                escape(&l.label)
            );
        }
        let bar = nice_length(120.0 / s);
        let _ = writeln!(
            out,
            r#"<line x1="20" y1="580" x2="{:.3}" y2="580" stroke="black" stroke-width="2"/><text x="20" y="572" font-family="monospace" font-size="12">{bar} unit (1 unit = {s:.2} px)</text>"#,
            20.0 + bar * s
        );
        out.push_str("</svg>\n");
        out
    }
}

/// Largest of 1, 2, 5 times a power of ten not exceeding `x`.
fn nice_length(x: f64) -> f64 {
    let p = 10f64.powf(x.log10().floor());
    [5.0, 2.0, 1.0]
        .into_iter()
        .map(|m| m * p)
        .find(|&v| v <= x)
        .unwrap_or(p)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
