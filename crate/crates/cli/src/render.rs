//! Static SVG 1.1 figures of the base, its fractional points and one
//! tropical triangle. Chart coordinates `(eta, xi)` map to `(x, -y)`.

use std::fmt::Write;

use affine_floer::affine_base::{boundary_cycle, ClassPManifold, RationalPoint};
use affine_floer::rational::to_f64;
use affine_floer::tropical::TropicalTriangle;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 40.0;

struct Frame {
    eta0: f64,
    xi1: f64,
    scale: f64,
    width: f64,
    height: f64,
}

impl Frame {
    fn new(polygon: &[RationalPoint]) -> Self {
        let etas: Vec<f64> = polygon.iter().map(|p| to_f64(&p.eta)).collect();
        let xis: Vec<f64> = polygon.iter().map(|p| to_f64(&p.xi)).collect();
        let fold = |v: &[f64]| {
            v.iter()
                .fold((f64::MAX, f64::MIN), |(lo, hi), &x| (lo.min(x), hi.max(x)))
        };
        let (eta0, eta1) = fold(&etas);
        let (xi0, xi1) = fold(&xis);
        let scale = SIZE / (eta1 - eta0).max(xi1 - xi0).max(1e-9);
        Self {
            eta0,
            xi1,
            scale,
            width: (eta1 - eta0) * scale + 2.0 * MARGIN,
            height: (xi1 - xi0) * scale + 2.0 * MARGIN,
        }
    }

    fn map(&self, p: &RationalPoint) -> (f64, f64) {
        (
            MARGIN + (to_f64(&p.eta) - self.eta0) * self.scale,
            MARGIN + (self.xi1 - to_f64(&p.xi)) * self.scale,
        )
    }
}

fn polyline(frame: &Frame, pts: &[RationalPoint]) -> String {
    pts.iter()
        .map(|p| {
            let (x, y) = frame.map(p);
            format!("{x:.2},{y:.2}")
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Counts of what was drawn, for the report.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct Drawn {
    pub points: usize,
    pub singularities: usize,
    pub legs: usize,
    pub disks: usize,
}

pub fn render_svg(
    m: &ClassPManifold,
    points: &[RationalPoint],
    triangle: Option<&TropicalTriangle>,
) -> (String, Drawn) {
    let polygon = boundary_cycle(m);
    let frame = Frame::new(&polygon);
    let mut drawn = Drawn::default();
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#
    );
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.2} {h:.2}">"#,
        w = frame.width,
        h = frame.height
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r##"<polygon class="base" points="{}" fill="#f3f1ea" stroke="#333" stroke-width="1.5"/>"##,
        polyline(&frame, &polygon)
    );

    for sing in &m.singularities {
        let at = RationalPoint::new(sing.eta.clone(), sing.xi.clone());
        if let Some(floor) = m.bottom.value_at(&sing.eta) {
            let foot = RationalPoint::new(sing.eta.clone(), floor);
            let ((x0, y0), (x1, y1)) = (frame.map(&at), frame.map(&foot));
            let _ = writeln!(
                s,
                r##"<line class="cut" x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y1:.2}" stroke="#999" stroke-dasharray="6 4"/>"##
            );
        }
        let (x, y) = frame.map(&at);
        let _ = writeln!(
            s,
            r##"<path class="singularity" d="M {a:.2} {b:.2} L {c:.2} {d:.2} M {a:.2} {d:.2} L {c:.2} {b:.2}" stroke="#c00" stroke-width="2"/>"##,
            a = x - 5.0,
            b = y - 5.0,
            c = x + 5.0,
            d = y + 5.0
        );
        drawn.singularities += 1;
    }

    for p in points {
        let (x, y) = frame.map(p);
        let _ = writeln!(
            s,
            r##"<circle class="point" cx="{x:.2}" cy="{y:.2}" r="3.5" fill="#1f4e9c"><title>{p}</title></circle>"##
        );
        drawn.points += 1;
    }

    if let Some(t) = triangle {
        for leg in &t.legs {
            let _ = writeln!(
                s,
                r##"<polyline class="leg" points="{}" fill="none" stroke="#127a3a" stroke-width="{:.1}"/>"##,
                polyline(&frame, &leg.vertices()),
                1.0 + leg.weight as f64 * 0.5
            );
            drawn.legs += 1;
        }
        for disk in &t.disks {
            let ((x0, y0), (x1, y1)) = (frame.map(&t.singularity), frame.map(&disk.point));
            let _ = writeln!(
                s,
                r##"<line class="disk" x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y1:.2}" stroke="#d47500" stroke-width="2"><title>{} disk(s)</title></line>"##,
                disk.count
            );
            drawn.disks += 1;
        }
        if let Some(b) = &t.bend {
            let (x, y) = frame.map(b);
            let _ = writeln!(
                s,
                r##"<circle class="bend" cx="{x:.2}" cy="{y:.2}" r="4" fill="none" stroke="#d47500" stroke-width="2"><title>bend {b}</title></circle>"##
            );
        }
        let (x, y) = frame.map(&t.root);
        let _ = writeln!(
            s,
            r##"<rect class="root" x="{:.2}" y="{:.2}" width="8" height="8" fill="#127a3a"><title>output {}</title></rect>"##,
            x - 4.0,
            y - 4.0,
            t.output
        );
    }
    s.push_str("</svg>\n");
    (s, drawn)
}
