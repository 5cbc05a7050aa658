//! Deterministic SVG drawings of configurations.

use anglekit::report::CensusReport;
use svg::node::element::path::Data;
use svg::node::element::{Circle, Path, Rectangle, Text};
use svg::Document;

pub const CANVAS: f64 = 600.0;
const MARGIN: f64 = 0.1 * CANVAS;
const POINT_RADIUS: f64 = 5.0;
const ARC_RADIUS: f64 = 30.0;
const PALETTE: [&str; 6] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Rounds to hundredths so the output does not depend on the last bits of
/// a float computation.
fn r2(x: f64) -> f64 {
    let y = (x * 100.0).round() / 100.0;
    if y == 0.0 {
        0.0
    } else {
        y
    }
}

/// Maps plane coordinates onto the canvas, y up, keeping the aspect ratio.
struct Frame {
    scale: f64,
    mid: (f64, f64),
}

impl Frame {
    fn fit(points: &[(f64, f64)]) -> Frame {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in points {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        let span = (x1 - x0).max(y1 - y0);
        let scale = if span > 0.0 { (CANVAS - 2.0 * MARGIN) / span } else { 1.0 };
        Frame { scale, mid: ((x0 + x1) / 2.0, (y0 + y1) / 2.0) }
    }

    fn map(&self, p: (f64, f64)) -> (f64, f64) {
        (
            r2(CANVAS / 2.0 + (p.0 - self.mid.0) * self.scale),
            r2(CANVAS / 2.0 - (p.1 - self.mid.1) * self.scale),
        )
    }
}

fn unit(from: (f64, f64), to: (f64, f64)) -> (f64, f64) {
    let (dx, dy) = (to.0 - from.0, to.1 - from.1);
    let len = dx.hypot(dy);
    (dx / len, dy / len)
}

/// An arc at `b` from ray `ba` to ray `bc`, with its label.
fn annotation(a: (f64, f64), b: (f64, f64), c: (f64, f64), radius: f64, label: &str, color: &str) -> (Path, Text) {
    let (ua, uc) = (unit(b, a), unit(b, c));
    let start = (r2(b.0 + radius * ua.0), r2(b.1 + radius * ua.1));
    let end = (r2(b.0 + radius * uc.0), r2(b.1 + radius * uc.1));
    // Screen y points down, so a positive cross product is a clockwise turn.
    let sweep = i32::from(ua.0 * uc.1 - ua.1 * uc.0 > 0.0);
    let data = Data::new()
        .move_to(start)
        .elliptical_arc_to((radius, radius, 0, 0, sweep, end.0, end.1));
    let path = Path::new().set("d", data).set("fill", "none").set("stroke", color).set("stroke-width", 2);
    let (mx, my) = (ua.0 + uc.0, ua.1 + uc.1);
    let len = mx.hypot(my);
    let dir = if len > 1e-9 { (mx / len, my / len) } else { (-ua.1, ua.0) };
    let text = Text::new(label)
        .set("x", r2(b.0 + (radius + 14.0) * dir.0))
        .set("y", r2(b.1 + (radius + 14.0) * dir.1 + 5.0))
        .set("fill", color)
        .set("font-family", "sans-serif")
        .set("font-size", 14)
        .set("text-anchor", "middle");
    (path, text)
}

/// The configuration as a 600×600 SVG document. With a census, one
/// witness angle per distinct value is drawn and labelled.
pub fn render(points: &[(f64, f64)], census: Option<&CensusReport>) -> String {
    let frame = Frame::fit(points);
    let screen: Vec<(f64, f64)> = points.iter().map(|&p| frame.map(p)).collect();
    let mut doc = Document::new()
        .set("version", "1.1")
        .set("width", CANVAS)
        .set("height", CANVAS)
        .set("viewBox", (0, 0, CANVAS, CANVAS))
        .add(Rectangle::new().set("width", CANVAS).set("height", CANVAS).set("fill", "white"));
    if let Some(r) = census {
        for (i, (value, w)) in r.values.iter().zip(&r.witnesses).enumerate() {
            if value.is_zero() {
                continue;
            }
            let color = PALETTE[i % PALETTE.len()];
            // Witnesses often share a vertex; nest their arcs.
            let radius = ARC_RADIUS + 18.0 * i as f64;
            let (arc, text) = annotation(screen[w[0]], screen[w[1]], screen[w[2]], radius, &value.display(6), color);
            doc = doc.add(arc).add(text);
        }
    }
    for &(x, y) in &screen {
        doc = doc.add(Circle::new().set("cx", x).set("cy", y).set("r", POINT_RADIUS).set("fill", "black"));
    }
    let mut out = doc.to_string();
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fits_inside_the_margin() {
        let svg = render(&[(0.0, 0.0), (2.0, 0.0), (1.0, 3f64.sqrt())], None);
        assert_eq!(svg.matches("<circle").count(), 3);
        assert!(svg.contains(r#"cx="60""#) && svg.contains(r#"cx="540""#));
    }
}
