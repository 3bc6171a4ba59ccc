//! Curvature recovery from the area map.
//!
//! Two independent routes. The small-radius route reads the curvature at the
//! probe center from the limit slope of g(s, r) / (pi r^2): the normalized
//! area starts at 1/2 and falls off linearly with slope -kappa / (3 pi), so
//! differentiating in r at a few radii and extrapolating the slope to r = 0
//! recovers kappa without any frame information. The exit-point route works
//! at a fixed radius: second derivatives of g determine the contact angles
//! nu1, nu2 between the boundary and the probe circle at the exit and entry
//! points, and third derivatives determine their radial rates, which combine
//! into the curvature at those two points rather than at the center.
//!
//! Contact angle conventions: tan(nu1) = r dtheta1/dr and
//! tan(nu2) = -r dtheta2/dr. The entry-side angle carries the opposite
//! orientation so that both angles are positive when the boundary curves
//! away from the probe circle, and on a disk of radius R both equal
//! arcsin(r / 2R).

use std::f64::consts::PI;

use thiserror::Error;

use crate::geometry::Polygon;
use crate::invariant::TGLFrame;
use crate::smooth::{self, SmoothRegion};

/// Relative step for second-order finite differences of the area map.
const STEP2: f64 = 1e-4;
/// Relative step for third-order finite differences. Wider than the
/// second-order step because the h^3 denominator amplifies rounding noise in
/// the area evaluations by three orders of magnitude more.
const STEP3: f64 = 1e-3;
/// Minimum |cos(theta1) - cos(theta2)| for the contact-angle solve.
const SINGULAR_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum CurvatureError {
    #[error("s = {s} is a polygon vertex; the small-radius limit needs a smooth point")]
    VertexPoint { s: f64 },
    #[error("need at least three strictly descending positive radii")]
    BadRadii,
    #[error("entry/exit system is singular: |cos(theta1) - cos(theta2)| = {gap:.3e}")]
    SingularSystem { gap: f64 },
    #[error("frame carries no contact angles; run recover_nu first")]
    MissingContactAngles,
}

/// How an estimate was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    SmallRLimit,
    ExitPoint,
}

/// Which boundary point the estimate refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WhichPoint {
    /// The probe center gamma(s).
    Center,
    /// The exit crossing gamma(s_plus).
    SPlus,
    /// The entry crossing gamma(s_minus).
    SMinus,
}

/// Intermediate quantities kept for inspection.
#[derive(Debug, Clone)]
pub enum Diagnostics {
    /// Small-radius route: per-radius slopes of g / (pi r^2) and the
    /// extrapolation table (column k removes the r^(2k) error term; the last
    /// column holds the accepted limit).
    Extrapolation { slopes: Vec<(f64, f64)>, table: Vec<Vec<f64>> },
    /// Exit-point route: the third-order inputs and the contact-angle data
    /// they were combined with.
    Partials {
        g_rrr: f64,
        g_rrs: f64,
        nu1: f64,
        nu2: f64,
        nu1_prime: f64,
        nu2_prime: f64,
    },
}

/// A curvature value tied to a boundary point, with provenance.
#[derive(Debug, Clone)]
pub struct CurvatureEstimate {
    pub s: f64,
    pub kappa: f64,
    pub method: Method,
    pub which_point: WhichPoint,
    pub diagnostics: Diagnostics,
}

/// Polynomial extrapolation of (x_i, y_i) to x = 0, one Neville column per
/// elimination stage. Column 0 is the input; each later column is one entry
/// shorter and the final column holds the single extrapolated value.
fn neville_to_zero(xs: &[f64], ys: &[f64]) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut cols = vec![ys.to_vec()];
    for k in 1..n {
        let prev = &cols[k - 1];
        let mut col = Vec::with_capacity(n - k);
        for i in 0..n - k {
            col.push((xs[i + k] * prev[i] - xs[i] * prev[i + 1]) / (xs[i + k] - xs[i]));
        }
        cols.push(col);
    }
    cols
}

fn small_r_core(
    g_of_r: impl Fn(f64) -> f64,
    s: f64,
    radii: &[f64],
) -> Result<CurvatureEstimate, CurvatureError> {
    if radii.len() < 3
        || radii.iter().any(|&r| !(r > 0.0))
        || radii.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(CurvatureError::BadRadii);
    }
    let psi = |r: f64| g_of_r(r) / (PI * r * r);
    let slopes: Vec<(f64, f64)> = radii
        .iter()
        .map(|&r| {
            let h = r / 20.0;
            (r, (psi(r + h) - psi(r - h)) / (2.0 * h))
        })
        .collect();
    // The slope's error expands in even powers of r, so extrapolate in r^2.
    let xs: Vec<f64> = slopes.iter().map(|&(r, _)| r * r).collect();
    let ys: Vec<f64> = slopes.iter().map(|&(_, d)| d).collect();
    let table = neville_to_zero(&xs, &ys);
    let kappa = -3.0 * PI * table.last().unwrap()[0];
    Ok(CurvatureEstimate {
        s,
        kappa,
        method: Method::SmallRLimit,
        which_point: WhichPoint::Center,
        diagnostics: Diagnostics::Extrapolation { slopes, table },
    })
}

/// Curvature at gamma(s) of a polygonal boundary from the small-radius limit
/// of the normalized disk area. `radii` must be strictly descending and is
/// probed with a central difference of relative width 1/20 at each entry.
/// Vertices are rejected: the normalized area does not converge to 1/2 there
/// and the limit slope carries no curvature.
pub fn curvature_small_r(
    poly: &Polygon,
    s: f64,
    radii: &[f64],
) -> Result<CurvatureEstimate, CurvatureError> {
    let bp = poly.point_at(s);
    if bp.is_vertex() {
        return Err(CurvatureError::VertexPoint { s: bp.s });
    }
    small_r_core(|r| poly.disk_area(bp.position, r), bp.s, radii)
}

/// Small-radius curvature limit for a smooth region.
pub fn curvature_small_r_smooth<S: SmoothRegion + ?Sized>(
    shape: &S,
    s: f64,
    radii: &[f64],
) -> Result<CurvatureEstimate, CurvatureError> {
    let center = shape.point(shape.t_of_s(s));
    small_r_core(|r| smooth::disk_area(shape, center, r), s, radii)
}

/// Second and third partial derivatives of the area map at (s, r), by
/// centered finite differences of an exact evaluator.
#[derive(Debug, Clone, Copy)]
pub struct AreaPartials {
    pub g_rr: f64,
    pub g_rs: f64,
    pub g_rrr: f64,
    pub g_rrs: f64,
}

/// Differentiates `g` at (s, r) with 5-point stencils: relative step 1e-4
/// for the second-order partials, 1e-3 for the third-order ones.
pub fn area_partials(g: impl Fn(f64, f64) -> f64, s: f64, r: f64) -> AreaPartials {
    let second = |f: &dyn Fn(f64) -> f64, x: f64, h: f64| {
        (-f(x - 2.0 * h) + 16.0 * f(x - h) - 30.0 * f(x) + 16.0 * f(x + h) - f(x + 2.0 * h))
            / (12.0 * h * h)
    };
    let h2 = STEP2 * r;
    let g_rr = second(&|rr| g(s, rr), r, h2);
    let g_rs = (g(s + h2, r + h2) - g(s + h2, r - h2) - g(s - h2, r + h2) + g(s - h2, r - h2))
        / (4.0 * h2 * h2);
    let h3 = STEP3 * r;
    let g_rrr = (-g(s, r - 2.0 * h3) + 2.0 * g(s, r - h3) - 2.0 * g(s, r + h3)
        + g(s, r + 2.0 * h3))
        / (2.0 * h3 * h3 * h3);
    let grr_at = |ss: f64| second(&|rr| g(ss, rr), r, h3);
    let g_rrs = (grr_at(s + h3) - grr_at(s - h3)) / (2.0 * h3);
    AreaPartials { g_rr, g_rs, g_rrr, g_rrs }
}

/// Solves [[-1, -1], [-cos(theta1), -cos(theta2)]] x = b.
fn solve_pair(
    b1: f64,
    b2: f64,
    theta1: f64,
    theta2: f64,
) -> Result<(f64, f64), CurvatureError> {
    let (c1, c2) = (theta1.cos(), theta2.cos());
    let det = c2 - c1;
    if det.abs() <= SINGULAR_TOL {
        return Err(CurvatureError::SingularSystem { gap: det.abs() });
    }
    Ok(((b2 - b1 * c2) / det, (b1 * c1 - b2) / det))
}

/// Contact angles (nu1, nu2) at the exit and entry points from the pure and
/// mixed second derivatives of g. Subtracting the frame's first-order parts
/// leaves a 2x2 linear system in the tangents of the contact angles; it is
/// singular when the two crossings sit at mirror heights (cos(theta1) close
/// to cos(theta2)), where the data cannot separate the two angles.
pub fn recover_nu(
    g_rr: f64,
    g_rs: f64,
    frame: &TGLFrame,
) -> Result<(f64, f64), CurvatureError> {
    let (t1, t2) = (frame.theta1, frame.theta2);
    let b1 = g_rr - (t2 - t1);
    let b2 = g_rs - (t2.sin() - t1.sin());
    let (tan1, tan2) = solve_pair(b1, b2, t1, t2)?;
    Ok((tan1.atan(), tan2.atan()))
}

/// Curvature of the boundary at the exit point gamma(s_plus) and the entry
/// point gamma(s_minus), from third derivatives of g and a frame whose
/// contact angles are already recovered. Subtracting the known lower-order
/// terms from g_rrr and g_rrs leaves the same 2x2 system as in `recover_nu`,
/// now for the radial rates nu1', nu2'; each curvature is then
/// cos(nu) (tan(nu) / r + nu').
pub fn exit_point_curvature(
    g_rrr: f64,
    g_rrs: f64,
    frame: &TGLFrame,
    r: f64,
) -> Result<(CurvatureEstimate, CurvatureEstimate), CurvatureError> {
    let (nu1, nu2) = match (frame.nu1, frame.nu2) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(CurvatureError::MissingContactAngles),
    };
    let (th1, th2) = (frame.theta1, frame.theta2);
    let (tn1, tn2) = (nu1.tan(), nu2.tan());
    let c1 = g_rrr + (tn1 + tn2) / r;
    let c2 = g_rrs
        - (-th2.cos() * tn2 - th1.cos() * tn1 - th2.sin() * tn2 * tn2 + th1.sin() * tn1 * tn1)
            / r;
    let (a1, a2) = solve_pair(c1, c2, th1, th2)?;
    let nu1_prime = a1 * nu1.cos().powi(2);
    let nu2_prime = a2 * nu2.cos().powi(2);
    let diag =
        Diagnostics::Partials { g_rrr, g_rrs, nu1, nu2, nu1_prime, nu2_prime };
    let exit = CurvatureEstimate {
        s: frame.s_plus,
        kappa: nu1.cos() * (tn1 / r + nu1_prime),
        method: Method::ExitPoint,
        which_point: WhichPoint::SPlus,
        diagnostics: diag.clone(),
    };
    let entry = CurvatureEstimate {
        s: frame.s_minus,
        kappa: nu2.cos() * (tn2 / r + nu2_prime),
        method: Method::ExitPoint,
        which_point: WhichPoint::SMinus,
        diagnostics: diag,
    };
    Ok((exit, entry))
}

/// Full exit-point pipeline against an area evaluator: differentiate g at
/// (frame.s, frame.r), recover the contact angles, and convert the
/// third-order data into the two crossing-point curvatures.
pub fn exit_point_curvature_fd(
    g: impl Fn(f64, f64) -> f64,
    frame: &TGLFrame,
) -> Result<(CurvatureEstimate, CurvatureEstimate), CurvatureError> {
    let p = area_partials(&g, frame.s, frame.r);
    let (nu1, nu2) = recover_nu(p.g_rr, p.g_rs, frame)?;
    let filled = frame.with_nu(nu1, nu2);
    exit_point_curvature(p.g_rrr, p.g_rrs, &filled, frame.r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point2;
    use crate::invariant::Side;
    use crate::shapes;
    use crate::smooth::{Circle, Ellipse};

    fn circle_estimate(radius: f64, radii: &[f64]) -> CurvatureEstimate {
        let c = Circle { radius };
        curvature_small_r_smooth(&c, 0.3, radii).unwrap()
    }

    #[test]
    fn small_r_limit_on_circles() {
        let est = circle_estimate(1.0, &[0.1, 0.05, 0.025]);
        assert!((est.kappa - 1.0).abs() < 1e-3, "kappa = {}", est.kappa);
        assert_eq!(est.method, Method::SmallRLimit);
        assert_eq!(est.which_point, WhichPoint::Center);

        let est2 = circle_estimate(2.0, &[0.1, 0.05, 0.025]);
        assert!((est2.kappa - 0.5).abs() < 5e-4, "kappa = {}", est2.kappa);
    }

    #[test]
    fn small_r_limit_on_dense_polygon_circle() {
        let poly = shapes::circle_polyline(1.0, 65536).unwrap();
        let s = 0.37 * poly.total_length();
        let est = curvature_small_r(&poly, s, &[0.1, 0.05, 0.025]).unwrap();
        assert!((est.kappa - 1.0).abs() < 1e-3, "kappa = {}", est.kappa);
    }

    #[test]
    fn small_r_limit_on_straight_edge_is_zero() {
        let square = shapes::regular_ngon(4, 2.0 * (2.0f64).sqrt(), PI / 4.0).unwrap();
        let s = 0.5 * square.edge_len(0);
        let est = curvature_small_r(&square, s, &[0.1, 0.05, 0.025]).unwrap();
        assert!(est.kappa.abs() < 1e-6, "kappa = {}", est.kappa);
    }

    #[test]
    fn small_r_limit_rejects_vertices_and_bad_radii() {
        let square = shapes::regular_ngon(4, 1.0, 0.0).unwrap();
        let err = curvature_small_r(&square, 0.0, &[0.1, 0.05, 0.025]).unwrap_err();
        assert!(matches!(err, CurvatureError::VertexPoint { .. }));

        let s = 0.5 * square.edge_len(0);
        for bad in [&[0.1, 0.05][..], &[0.05, 0.1, 0.2][..], &[0.1, 0.05, 0.0][..]] {
            let err = curvature_small_r(&square, s, bad).unwrap_err();
            assert!(matches!(err, CurvatureError::BadRadii));
        }
    }

    #[test]
    fn small_r_limit_is_rigid_motion_invariant() {
        let radii = [0.45, 0.3, 0.2];
        let base = shapes::circle_polyline(1.0, 4096).unwrap();
        let moved = Polygon::new(
            base.vertices()
                .iter()
                .map(|&v| v.rotated(0.83) + Point2::new(-1.3, 0.4))
                .collect(),
        )
        .unwrap();
        let s = 0.21 * base.total_length();
        let a = curvature_small_r(&base, s, &radii).unwrap().kappa;
        let b = curvature_small_r(&moved, s, &radii).unwrap().kappa;
        assert!((a - b).abs() < 1e-12, "a = {a}, b = {b}");
    }

    #[test]
    fn richardson_columns_tighten() {
        let est = circle_estimate(1.0, &[0.2, 0.1, 0.05, 0.025]);
        let Diagnostics::Extrapolation { table, .. } = &est.diagnostics else {
            panic!("small-radius route must carry an extrapolation table");
        };
        assert_eq!(table.len(), 4);
        let heads: Vec<f64> = table.iter().map(|col| col[0]).collect();
        let mut jumps = heads.windows(2).map(|w| (w[1] - w[0]).abs());
        let first = jumps.next().unwrap();
        let rest: Vec<f64> = jumps.collect();
        let mut prev = first;
        for j in rest {
            assert!(j < prev, "column differences must shrink: {heads:?}");
            prev = j;
        }
    }

    fn synthetic_frame(theta1: f64, theta2: f64) -> TGLFrame {
        TGLFrame {
            s: 0.0,
            r: 1.0,
            side: Side::Plus,
            theta1,
            theta2,
            s_minus: -1.0,
            s_plus: 1.0,
            nu1: None,
            nu2: None,
        }
    }

    #[test]
    fn recover_nu_on_disk_matches_half_chord_angle() {
        let circle = Circle { radius: 1.0 };
        let r = 0.5;
        let frame = smooth::frame_at(&circle, 0.7, r).unwrap();
        let g = |s: f64, rr: f64| {
            smooth::disk_area(&circle, circle.point(circle.t_of_s(s)), rr)
        };
        let p = area_partials(g, frame.s, r);
        let (nu1, nu2) = recover_nu(p.g_rr, p.g_rs, &frame).unwrap();
        let expected = (r / 2.0).asin();
        assert!((nu1 - expected).abs() < 1e-6, "nu1 = {nu1}, want {expected}");
        assert!((nu2 - expected).abs() < 1e-6, "nu2 = {nu2}, want {expected}");
    }

    #[test]
    fn recover_nu_straight_boundary_is_zero() {
        let frame = synthetic_frame(0.0, PI);
        let (nu1, nu2) = recover_nu(PI, 0.0, &frame).unwrap();
        assert!(nu1.abs() < 1e-12 && nu2.abs() < 1e-12);
    }

    #[test]
    fn recover_nu_round_trip_on_random_frames() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut unit = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut tried = 0;
        while tried < 500 {
            let theta1 = -1.2 + 2.4 * unit();
            let theta2 = PI / 2.0 + 0.1 + (PI - 0.2) * unit();
            if (theta1.cos() - theta2.cos()).abs() < 0.05 {
                continue;
            }
            tried += 1;
            let (nu1, nu2) = (-1.0 + 2.0 * unit(), -1.0 + 2.0 * unit());
            let g_rr = (theta2 - theta1) - nu1.tan() - nu2.tan();
            let g_rs = (theta2.sin() - theta1.sin())
                - theta1.cos() * nu1.tan()
                - theta2.cos() * nu2.tan();
            let frame = synthetic_frame(theta1, theta2);
            let (r1, r2) = recover_nu(g_rr, g_rs, &frame).unwrap();
            assert!((r1 - nu1).abs() < 1e-10, "nu1: {r1} vs {nu1}");
            assert!((r2 - nu2).abs() < 1e-10, "nu2: {r2} vs {nu2}");
        }
    }

    #[test]
    fn mirror_height_crossings_are_singular() {
        let e = 4e-10;
        let frame = synthetic_frame(PI / 2.0 - e, PI / 2.0 + e);
        let err = recover_nu(1.0, 0.0, &frame).unwrap_err();
        assert!(matches!(err, CurvatureError::SingularSystem { .. }));
    }

    #[test]
    fn area_second_derivative_matches_closed_form_on_circle() {
        let circle = Circle { radius: 1.0 };
        let r = 0.5;
        let frame = smooth::frame_at(&circle, 0.2, r).unwrap();
        let g = |s: f64, rr: f64| {
            smooth::disk_area(&circle, circle.point(circle.t_of_s(s)), rr)
        };
        let p = area_partials(g, frame.s, r);
        let a = (r / 2.0).asin();
        let expected = PI - 2.0 * a - r / a.cos();
        assert!((p.g_rr - expected).abs() < 1e-8, "g_rr = {}, want {expected}", p.g_rr);
        assert!(p.g_rs.abs() < 1e-7, "g_rs = {}", p.g_rs);
    }

    #[test]
    fn exit_point_curvature_on_circles() {
        for (radius, want) in [(1.0, 1.0), (2.0, 0.5)] {
            let circle = Circle { radius };
            let frame = smooth::frame_at(&circle, 1.1, 0.5).unwrap();
            let g = |s: f64, rr: f64| {
                smooth::disk_area(&circle, circle.point(circle.t_of_s(s)), rr)
            };
            let (exit, entry) = exit_point_curvature_fd(g, &frame).unwrap();
            assert!((exit.kappa - want).abs() < 1e-2, "exit kappa = {}", exit.kappa);
            assert!((entry.kappa - want).abs() < 1e-2, "entry kappa = {}", entry.kappa);
            assert_eq!(exit.which_point, WhichPoint::SPlus);
            assert_eq!(entry.which_point, WhichPoint::SMinus);
            assert!((exit.s - frame.s_plus).abs() < 1e-12);
            assert!((entry.s - frame.s_minus).abs() < 1e-12);
        }
    }

    #[test]
    fn exit_point_curvature_on_straight_boundary() {
        let frame = synthetic_frame(0.0, PI).with_nu(0.0, 0.0);
        let (exit, entry) = exit_point_curvature(0.0, 0.0, &frame, 1.0).unwrap();
        assert!(exit.kappa.abs() < 1e-12);
        assert!(entry.kappa.abs() < 1e-12);
    }

    #[test]
    fn exit_point_curvature_on_ellipse_flat_side() {
        let e = Ellipse::new(2.0, 1.0);
        let s_flat = e.s_of_t(PI / 2.0);
        let r = 0.3;
        let frame = smooth::frame_at(&e, s_flat, r).unwrap();
        let g = |s: f64, rr: f64| smooth::disk_area(&e, e.point(e.t_of_s(s)), rr);
        let (exit, entry) = exit_point_curvature_fd(g, &frame).unwrap();
        let want_exit = e.curvature(e.t_of_s(frame.s_plus));
        let want_entry = e.curvature(e.t_of_s(frame.s_minus));
        assert!(
            (exit.kappa - want_exit).abs() < 0.01 * want_exit,
            "exit kappa = {}, want {want_exit}",
            exit.kappa
        );
        assert!(
            (entry.kappa - want_entry).abs() < 0.01 * want_entry,
            "entry kappa = {}, want {want_entry}",
            entry.kappa
        );
    }

    #[test]
    fn exit_point_curvature_requires_contact_angles() {
        let frame = synthetic_frame(0.0, PI);
        let err = exit_point_curvature(0.0, 0.0, &frame, 1.0).unwrap_err();
        assert!(matches!(err, CurvatureError::MissingContactAngles));
    }
}
