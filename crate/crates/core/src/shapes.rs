//! Dense polyline samplers for the benchmark shape families.

use std::f64::consts::TAU;

use crate::geometry::{Point2, Polygon, PolygonError};

/// Regular n-gon inscribed in a circle, first vertex at angle `phase`.
pub fn regular_ngon(n: usize, circumradius: f64, phase: f64) -> Result<Polygon, PolygonError> {
    let pts = (0..n)
        .map(|k| {
            let t = phase + TAU * k as f64 / n as f64;
            Point2::new(circumradius * t.cos(), circumradius * t.sin())
        })
        .collect();
    Polygon::new(pts)
}

pub fn circle_polyline(radius: f64, n: usize) -> Result<Polygon, PolygonError> {
    regular_ngon(n, radius, 0.0)
}

pub fn ellipse_polyline(a: f64, b: f64, n: usize) -> Result<Polygon, PolygonError> {
    let pts = (0..n)
        .map(|k| {
            let t = TAU * k as f64 / n as f64;
            Point2::new(a * t.cos(), b * t.sin())
        })
        .collect();
    Polygon::new(pts)
}

/// Lobed star r(t) = base + amplitude * cos(lobes * t), sampled uniformly in t.
pub fn star_polyline(
    base_radius: f64,
    amplitude: f64,
    lobes: usize,
    n: usize,
) -> Result<Polygon, PolygonError> {
    let pts = (0..n)
        .map(|k| {
            let t = TAU * k as f64 / n as f64;
            let rad = base_radius + amplitude * (lobes as f64 * t).cos();
            Point2::new(rad * t.cos(), rad * t.sin())
        })
        .collect();
    Polygon::new(pts)
}

/// Axis-aligned rectangle with circular corner fillets, centered at the
/// origin, sampled uniformly in arc length (n points).
pub fn rounded_rect_polyline(
    width: f64,
    height: f64,
    corner_radius: f64,
    n: usize,
) -> Result<Polygon, PolygonError> {
    assert!(
        corner_radius >= 0.0 && 2.0 * corner_radius <= width.min(height),
        "corner radius must fit the rectangle"
    );
    let (w, h, c) = (width, height, corner_radius);
    let perim = 2.0 * (w - 2.0 * c) + 2.0 * (h - 2.0 * c) + TAU * c;

    // Walk counterclockwise from the start of the bottom edge at (c, 0),
    // in coordinates with the rectangle corner at the origin; shift to
    // center at the end.
    let arc = |cx: f64, cy: f64, phi0: f64, u: f64| {
        let phi = phi0 + u / c;
        Point2::new(cx + c * phi.cos(), cy + c * phi.sin())
    };
    let segs: Vec<(f64, Box<dyn Fn(f64) -> Point2>)> = vec![
        (w - 2.0 * c, Box::new(move |u| Point2::new(c + u, 0.0))),
        (TAU / 4.0 * c, Box::new(move |u| arc(w - c, c, -TAU / 4.0, u))),
        (h - 2.0 * c, Box::new(move |u| Point2::new(w, c + u))),
        (TAU / 4.0 * c, Box::new(move |u| arc(w - c, h - c, 0.0, u))),
        (w - 2.0 * c, Box::new(move |u| Point2::new(w - c - u, h))),
        (TAU / 4.0 * c, Box::new(move |u| arc(c, h - c, TAU / 4.0, u))),
        (h - 2.0 * c, Box::new(move |u| Point2::new(0.0, h - c - u))),
        (TAU / 4.0 * c, Box::new(move |u| arc(c, c, TAU / 2.0, u))),
    ];
    let segs: Vec<(f64, Box<dyn Fn(f64) -> Point2>)> =
        segs.into_iter().filter(|(len, _)| *len > 0.0).collect();
    let shift = Point2::new(-w / 2.0, -h / 2.0);
    let pts = (0..n)
        .map(|k| {
            let mut u = perim * k as f64 / n as f64;
            for (len, f) in &segs {
                if u <= *len {
                    return f(u) + shift;
                }
                u -= len;
            }
            let (len, f) = segs.last().unwrap();
            f(*len) + shift
        })
        .collect();
    Polygon::new(pts)
}

pub fn rounded_square_polyline(
    side: f64,
    corner_radius: f64,
    n: usize,
) -> Result<Polygon, PolygonError> {
    rounded_rect_polyline(side, side, corner_radius, n)
}

/// A shape family with its parameters, resolvable to a dense polyline.
#[derive(Debug, Clone)]
pub enum ShapeSpec {
    Circle { radius: f64 },
    Ellipse { a: f64, b: f64 },
    Star { base_radius: f64, amplitude: f64, lobes: usize },
    RoundedSquare { side: f64, corner_radius: f64 },
    RegularNgon { n: usize, circumradius: f64, phase: f64 },
}

impl ShapeSpec {
    /// Samples the shape as a polygon with `resolution` vertices (regular
    /// polygons keep their own vertex count).
    pub fn to_polyline(&self, resolution: usize) -> Result<Polygon, PolygonError> {
        match *self {
            ShapeSpec::Circle { radius } => circle_polyline(radius, resolution),
            ShapeSpec::Ellipse { a, b } => ellipse_polyline(a, b, resolution),
            ShapeSpec::Star { base_radius, amplitude, lobes } => {
                star_polyline(base_radius, amplitude, lobes, resolution)
            }
            ShapeSpec::RoundedSquare { side, corner_radius } => {
                rounded_square_polyline(side, corner_radius, resolution)
            }
            ShapeSpec::RegularNgon { n, circumradius, phase } => {
                regular_ngon(n, circumradius, phase)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn circle_polyline_area_converges() {
        let p = circle_polyline(2.0, 4096).unwrap();
        assert!((p.area() - PI * 4.0).abs() < 1e-4);
        assert!((p.total_length() - TAU * 2.0).abs() < 1e-4);
    }

    #[test]
    fn star_with_zero_amplitude_is_circle() {
        let s = star_polyline(1.5, 0.0, 4, 256).unwrap();
        let c = circle_polyline(1.5, 256).unwrap();
        for (a, b) in s.vertices().iter().zip(c.vertices()) {
            assert!((*a - *b).norm() < 1e-12);
        }
    }

    #[test]
    fn star_radius_range() {
        let s = star_polyline(1.0, 0.35, 4, 1024).unwrap();
        for v in s.vertices() {
            let rad = v.norm();
            assert!(rad > 0.65 - 1e-9 && rad < 1.35 + 1e-9);
        }
    }

    #[test]
    fn rounded_rect_has_expected_perimeter_and_extents() {
        let p = rounded_rect_polyline(8.0, 2.0, 0.5, 4096).unwrap();
        let want = 2.0 * 7.0 + 2.0 * 1.0 + TAU * 0.5;
        assert!((p.total_length() - want).abs() < 1e-3, "{}", p.total_length());
        let (lo, hi) = p.bbox();
        assert!((lo.x + 4.0).abs() < 1e-9 && (hi.x - 4.0).abs() < 1e-9);
        assert!((lo.y + 1.0).abs() < 1e-9 && (hi.y - 1.0).abs() < 1e-9);
        // Corners are rounded: no vertex reaches the rectangle corner.
        for v in p.vertices() {
            assert!((v.x.abs() - 4.0).hypot(v.y.abs() - 1.0) > 0.1);
        }
    }

    #[test]
    fn regular_ngon_vertices() {
        let p = regular_ngon(5, 1.0, 0.3).unwrap();
        assert_eq!(p.n_vertices(), 5);
        for v in p.vertices() {
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
        assert!(regular_ngon(2, 1.0, 0.0).is_err());
    }
}
