//! Static SVG figures of a collection, optionally with colors and pillars.

use std::fmt::Write;

use lchroma_core::geometry::LCollection;

use crate::format::{PillarDump, TopJson};

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 560.0;
const MARGIN: f64 = 30.0;

/// A pillar as drawn: polyline corners and whether it ends in a ray.
#[derive(Clone, Debug, PartialEq)]
pub struct PillarPath {
    pub corners: Vec<(f64, f64)>,
    pub ray: bool,
    pub color: u32,
}

pub fn pillar_paths(dump: &PillarDump) -> Result<Vec<PillarPath>, String> {
    let mut out = Vec::new();
    for class in &dump.classes {
        for p in &class.pillars {
            let mut corners = Vec::with_capacity(p.corners.len());
            for [x, y] in &p.corners {
                corners.push((x.to_coord()?.to_f64(), y.to_coord()?.to_f64()));
            }
            out.push(PillarPath {
                corners,
                ray: p.top == TopJson::Infinite,
                color: p.color,
            });
        }
    }
    Ok(out)
}

fn hue(color: u32) -> f64 {
    (color as f64 * 137.508) % 360.0
}

struct Frame {
    x0: f64,
    x1: f64,
    top: f64,
}

impl Frame {
    fn x(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN)
    }

    fn y(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - y / self.top * (HEIGHT - 2.0 * MARGIN)
    }
}

pub fn render(collection: &LCollection, colors: Option<&[u32]>, pillars: &[PillarPath]) -> String {
    let shapes = collection.shapes();
    let mut xs: Vec<f64> = shapes.iter().flat_map(|s| [s.left.to_f64(), s.right.to_f64()]).collect();
    xs.extend(pillars.iter().flat_map(|p| p.corners.iter().map(|c| c.0)));
    let mut top = shapes.iter().map(|s| s.height.to_f64()).fold(1.0, f64::max);
    top = pillars.iter().flat_map(|p| p.corners.iter().map(|c| c.1)).fold(top, f64::max) * 1.08;
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (x0, x1) = if lo.is_finite() && hi > lo { (lo, hi) } else { (0.0, 1.0) };
    let pad = (x1 - x0) * 0.02;
    let f = Frame {
        x0: x0 - pad,
        x1: x1 + pad,
        top,
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let axis = f.y(0.0);
    let _ = writeln!(
        out,
        r#"<line x1="{:.2}" y1="{axis:.2}" x2="{:.2}" y2="{axis:.2}" stroke="black" stroke-width="1.5"/>"#,
        MARGIN / 2.0,
        WIDTH - MARGIN / 2.0
    );
    for p in pillars {
        let mut pts: Vec<String> = p.corners.iter().map(|&(x, y)| format!("{:.2},{:.2}", f.x(x), f.y(y))).collect();
        if p.ray {
            if let Some(&(x, _)) = p.corners.last() {
                pts.push(format!("{:.2},{:.2}", f.x(x), MARGIN / 2.0));
            }
        }
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="hsl({:.1},60%,55%)" stroke-width="3" stroke-dasharray="6 4" opacity="0.7"/>"#,
            pts.join(" "),
            hue(p.color)
        );
    }
    for (i, s) in shapes.iter().enumerate() {
        let stroke = match colors {
            Some(c) => format!("hsl({:.1},70%,38%)", hue(c[i])),
            None => String::from("black"),
        };
        let (l, r, h) = (f.x(s.left.to_f64()), f.x(s.right.to_f64()), f.y(s.height.to_f64()));
        let label = match colors {
            Some(c) => format!("{} (color {})", s.id, c[i]),
            None => s.id.clone(),
        };
        let _ = writeln!(
            out,
            r#"<polyline points="{l:.2},{axis:.2} {l:.2},{h:.2} {r:.2},{h:.2}" fill="none" stroke="{stroke}" stroke-width="2"><title>{}</title></polyline>"#,
            escape(&label)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use lchroma_core::geometry::{validate_collection, LShape};

    #[test]
    fn one_polyline_per_shape() {
        let c = validate_collection(vec![LShape::int("a", 0, 4, 1), LShape::int("<b>", 1, 5, 2)]).unwrap();
        let svg = render(&c, Some(&[1, 2]), &[]);
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("&lt;b&gt; (color 2)"));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn empty_collection_still_renders() {
        let svg = render(&LCollection::empty(), None, &[]);
        assert!(svg.starts_with("<svg"));
    }
}
