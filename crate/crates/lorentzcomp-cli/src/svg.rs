use std::fmt::Write as _;

use lorentzcomp::model::{Branch, CurvatureGauge, ModelPoint};

use crate::config::f17;

const SIZE: f64 = 600.0;
const MARGIN: f64 = 40.0;

/// Chart projection used for drawing: `(horizontal, vertical)` with time upwards.
pub fn project(g: &CurvatureGauge, p: &ModelPoint) -> (f64, f64) {
    match g.branch() {
        Branch::Flat => (p.c[1], p.c[0]),
        Branch::Positive => (p.c[2], p.c[0]),
        Branch::Negative => (p.c[2], p.c[1]),
    }
}

pub fn projection_note(g: &CurvatureGauge) -> &'static str {
    match g.branch() {
        Branch::Flat => "chart (x, t)",
        Branch::Positive => "drop X1; horizontal X2, vertical X0",
        Branch::Negative => "drop X0; horizontal X2, vertical X1",
    }
}

enum Item {
    Line(String, Vec<(f64, f64)>),
    Dot((f64, f64)),
    Label((f64, f64), String),
}

pub struct Svg {
    gauge: CurvatureGauge,
    items: Vec<Item>,
}

impl Svg {
    pub fn new(g: &CurvatureGauge) -> Self {
        Svg {
            gauge: *g,
            items: Vec::new(),
        }
    }

    pub fn polyline(&mut self, class: &str, pts: &[ModelPoint]) {
        let g = self.gauge;
        self.items.push(Item::Line(
            class.into(),
            pts.iter().map(|p| project(&g, p)).collect(),
        ));
    }

    pub fn dot(&mut self, p: &ModelPoint) {
        self.items.push(Item::Dot(project(&self.gauge, p)));
    }

    pub fn label(&mut self, p: &ModelPoint, text: &str) {
        self.items
            .push(Item::Label(project(&self.gauge, p), text.into()));
    }

    pub fn finish(&self, header: &str) -> String {
        let mut lo = (f64::INFINITY, f64::INFINITY);
        let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut grow = |p: &(f64, f64)| {
            lo = (lo.0.min(p.0), lo.1.min(p.1));
            hi = (hi.0.max(p.0), hi.1.max(p.1));
        };
        for it in &self.items {
            match it {
                Item::Line(_, ps) => ps.iter().for_each(&mut grow),
                Item::Dot(p) | Item::Label(p, _) => grow(p),
            }
        }
        if !lo.0.is_finite() {
            lo = (0.0, 0.0);
            hi = (1.0, 1.0);
        }
        let span = (hi.0 - lo.0).max(hi.1 - lo.1).max(1e-12);
        let scale = (SIZE - 2.0 * MARGIN) / span;
        let map = |p: &(f64, f64)| {
            (
                MARGIN + (p.0 - lo.0) * scale,
                SIZE - MARGIN - (p.1 - lo.1) * scale,
            )
        };
        let mut out = String::new();
        let _ = writeln!(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
        let _ = writeln!(out, "<!--");
        out.push_str(header);
        let _ = writeln!(out, "projection: {}", projection_note(&self.gauge));
        let _ = writeln!(out, "-->");
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">"
        );
        let _ = writeln!(
            out,
            "<style>polyline{{fill:none;stroke:#222;stroke-width:1.5}} .input{{stroke:#888;stroke-dasharray:4 3}} .arc{{stroke:#b33}} .region{{stroke:#36c;stroke-width:0.8}} circle{{fill:#222}} text{{font:12px sans-serif}}</style>"
        );
        for it in &self.items {
            match it {
                Item::Line(class, ps) => {
                    let pts: Vec<String> = ps
                        .iter()
                        .map(|p| {
                            let (x, y) = map(p);
                            format!("{},{}", f17(x), f17(y))
                        })
                        .collect();
                    let _ = writeln!(
                        out,
                        "<polyline class=\"{class}\" points=\"{}\"/>",
                        pts.join(" ")
                    );
                }
                Item::Dot(p) => {
                    let (x, y) = map(p);
                    let _ = writeln!(out, "<circle cx=\"{}\" cy=\"{}\" r=\"2\"/>", f17(x), f17(y));
                }
                Item::Label(p, text) => {
                    let (x, y) = map(p);
                    let _ = writeln!(
                        out,
                        "<text x=\"{}\" y=\"{}\">{text}</text>",
                        f17(x + 4.0),
                        f17(y - 4.0)
                    );
                }
            }
        }
        out.push_str("</svg>\n");
        out
    }
}
