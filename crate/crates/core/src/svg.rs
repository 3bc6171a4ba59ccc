//! Tiny SVG emitter for shape overlays.
//!
//! Every shape becomes exactly one `path` element, so consumers can count
//! paths to check what a file contains; the legend and scale bar use `line`
//! and `text` elements only. The y-axis is flipped into screen coordinates
//! and the shared viewBox is the union bounding box padded by 5% of its
//! larger side.

use crate::geometry::Point2;

#[derive(Debug, Clone)]
pub struct SvgShape {
    pub points: Vec<Point2>,
    pub closed: bool,
    pub dashed: bool,
    pub label: String,
}

impl SvgShape {
    pub fn closed(label: impl Into<String>, points: Vec<Point2>) -> SvgShape {
        SvgShape { points, closed: true, dashed: false, label: label.into() }
    }

    pub fn open(label: impl Into<String>, points: Vec<Point2>) -> SvgShape {
        SvgShape { points, closed: false, dashed: false, label: label.into() }
    }

    pub fn dashed(mut self) -> SvgShape {
        self.dashed = true;
        self
    }
}

const PALETTE: [&str; 6] =
    ["#888888", "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() || s == "-" { "0".into() } else { s.into() }
}

/// Renders the shapes into one standalone SVG document. Shape k takes the
/// k-th palette color; dashed shapes get a dash pattern scaled to the image.
pub fn overlay_svg(shapes: &[SvgShape]) -> String {
    let pts: Vec<Point2> = shapes.iter().flat_map(|s| s.points.iter().copied()).collect();
    let (mut lo, mut hi) = (Point2::new(0.0, 0.0), Point2::new(1.0, 1.0));
    if let Some(first) = pts.first() {
        lo = *first;
        hi = *first;
        for p in &pts {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
    }
    let side = (hi.x - lo.x).max(hi.y - lo.y);
    let side = if side > 0.0 { side } else { 1.0 };
    let margin = 0.05 * side;
    let (vx, vy) = (lo.x - margin, -hi.y - margin);
    let (vw, vh) = (hi.x - lo.x + 2.0 * margin, hi.y - lo.y + 2.0 * margin);
    let stroke = 0.006 * side;
    let font = 0.04 * side;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
        num(vx),
        num(vy),
        num(vw),
        num(vh)
    ));
    for (k, shape) in shapes.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let mut d = String::new();
        for (i, p) in shape.points.iter().enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            d.push_str(&format!("{cmd}{} {} ", num(p.x), num(-p.y)));
        }
        if shape.closed {
            d.push('Z');
        }
        let dash = if shape.dashed {
            format!(" stroke-dasharray=\"{} {}\"", num(3.0 * stroke), num(3.0 * stroke))
        } else {
            String::new()
        };
        out.push_str(&format!(
            "  <path d=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{}\"{dash}/>\n",
            d.trim_end(),
            num(stroke)
        ));
    }

    // Legend: one swatch line + label per shape, inside the top-left corner.
    for (k, shape) in shapes.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let y = vy + (1.5 + 1.4 * k as f64) * font;
        let dash = if shape.dashed {
            format!(" stroke-dasharray=\"{} {}\"", num(3.0 * stroke), num(3.0 * stroke))
        } else {
            String::new()
        };
        out.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"{}\"{dash}/>\n",
            num(vx + font),
            num(y),
            num(vx + 3.0 * font),
            num(y),
            num(stroke)
        ));
        out.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"{}\" fill=\"#444444\">{}</text>\n",
            num(vx + 3.5 * font),
            num(y + 0.35 * font),
            num(font),
            esc(&shape.label)
        ));
    }

    // Scale bar: a round-number length near a fifth of the image width.
    let bar = 10f64.powf((0.2 * vw).log10().floor());
    let bar = if (0.2 * vw) / bar >= 5.0 { 5.0 * bar } else if (0.2 * vw) / bar >= 2.0 { 2.0 * bar } else { bar };
    let by = vy + vh - 1.2 * font;
    out.push_str(&format!(
        "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#444444\" stroke-width=\"{}\"/>\n",
        num(vx + font),
        num(by),
        num(vx + font + bar),
        num(by),
        num(stroke)
    ));
    out.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"{}\" fill=\"#444444\">{}</text>\n",
        num(vx + font),
        num(by - 0.5 * font),
        num(font),
        num(bar)
    ));
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Vec<Point2> {
        vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ]
    }

    #[test]
    fn one_path_per_shape_with_dashes_and_legend() {
        let svg = overlay_svg(&[
            SvgShape::closed("target", square()).dashed(),
            SvgShape::closed("fit", square()),
        ]);
        assert_eq!(svg.matches("<path").count(), 2);
        let dashed_paths =
            svg.lines().filter(|l| l.contains("<path") && l.contains("dasharray")).count();
        assert_eq!(dashed_paths, 1);
        assert!(svg.contains(">target<") && svg.contains(">fit<"));
        assert!(svg.matches("<line").count() >= 3, "legend swatches and scale bar");
    }

    #[test]
    fn viewbox_pads_the_union_bounding_box_by_five_percent() {
        let svg = overlay_svg(&[SvgShape::closed("s", square())]);
        let vb = svg.split("viewBox=\"").nth(1).unwrap().split('"').next().unwrap();
        let nums: Vec<f64> = vb.split(' ').map(|v| v.parse().unwrap()).collect();
        let want = [-0.05, -1.05, 1.1, 1.1];
        for (g, w) in nums.iter().zip(want) {
            assert!((g - w).abs() < 1e-9, "viewBox {vb}");
        }
    }

    #[test]
    fn open_polylines_stay_open_and_labels_escape() {
        let svg = overlay_svg(&[SvgShape::open(
            "a<b&c",
            vec![Point2::new(0.0, 0.0), Point2::new(1.0, 2.0)],
        )]);
        let path_line = svg.lines().find(|l| l.contains("<path")).unwrap();
        assert!(!path_line.contains('Z'));
        assert!(svg.contains("a&lt;b&amp;c"));
    }
}
