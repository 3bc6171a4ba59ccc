//! The disk-area map `g(s, r)` along a polygon boundary and its first
//! derivatives.
//!
//! With the boundary counterclockwise and the probe disk centered at the
//! boundary point `s`, the portion of the probe circle inside the region is
//! a single arc whenever the boundary meets the circle in exactly two
//! transverse points. Measured in the local frame whose x-axis is the
//! (one-sided) tangent at `s` and whose y-axis points into the region, the
//! exit point sits at angle `theta1` and the entry point at `theta2`, and
//!
//! * dg/dr = r (theta2 - theta1), the length of the inside arc;
//! * dg/ds = r sin(theta2) - r sin(theta1), the difference of crossing
//!   heights over the tangent line, one-sided at vertices.

use std::f64::consts::PI;
use std::io::{BufRead, Write};

use thiserror::Error;

use crate::geometry::{Point2, Polygon};
use crate::util::{fmt17, wrap_pi, wrap_tau};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum InvariantError {
    #[error("boundary meets the probe circle at s={s} in {count} points ({transverse} transverse), need exactly 2")]
    TwoArcViolation { s: f64, count: usize, transverse: usize },
    #[error("no entry/exit angles solve the given derivative pair: {0}")]
    NoSolution(String),
}

/// Which one-sided tangent orients the local frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Minus,
    Plus,
}

/// Local geometry of the probe circle at one boundary point: entry/exit
/// angles in the tangent-aligned frame and the arc positions of the two
/// crossings.
#[derive(Debug, Clone, Copy)]
pub struct TGLFrame {
    pub s: f64,
    pub r: f64,
    pub side: Side,
    /// Exit-point angle in the local frame.
    pub theta1: f64,
    /// Entry-point angle; theta2 > theta1 and theta2 - theta1 is the
    /// angular extent of the inside arc of the probe circle.
    pub theta2: f64,
    /// Arc position of the entry crossing (behind s).
    pub s_minus: f64,
    /// Arc position of the exit crossing (ahead of s).
    pub s_plus: f64,
    /// Contact angle at the exit point, recovered from second derivatives of
    /// the area by the curvature module.
    pub nu1: Option<f64>,
    /// Contact angle at the entry point.
    pub nu2: Option<f64>,
}

impl TGLFrame {
    pub fn g_r(&self) -> f64 {
        self.r * (self.theta2 - self.theta1)
    }

    pub fn g_s(&self) -> f64 {
        self.r * (self.theta2.sin() - self.theta1.sin())
    }

    /// Height of the exit point above the tangent line.
    pub fn h1(&self) -> f64 {
        self.r * self.theta1.sin()
    }

    /// Height of the entry point above the tangent line.
    pub fn h2(&self) -> f64 {
        self.r * self.theta2.sin()
    }

    /// Copy of the frame with the contact angles filled in.
    pub fn with_nu(mut self, nu1: f64, nu2: f64) -> TGLFrame {
        self.nu1 = Some(nu1);
        self.nu2 = Some(nu2);
        self
    }
}

fn frames_from_crossings(
    poly: &Polygon,
    s: f64,
    r: f64,
) -> Result<(TGLFrame, TGLFrame), InvariantError> {
    let bp = poly.point_at(s);
    let xs = poly.circle_crossings(bp.position, r);
    let transverse = xs.iter().filter(|c| c.transverse).count();
    if xs.len() != 2 || transverse != 2 {
        return Err(InvariantError::TwoArcViolation { s, count: xs.len(), transverse });
    }
    // The in-disk boundary arc runs entry -> s -> exit in cyclic order.
    let (minus, plus) = if xs[0].s < bp.s && bp.s < xs[1].s {
        (&xs[0], &xs[1])
    } else {
        (&xs[1], &xs[0])
    };
    // Inside arc of the circle: counterclockwise from the exit point to the
    // entry point (the region lies left of the boundary).
    let extent = wrap_tau(minus.angle - plus.angle);
    let extent = if extent == 0.0 { std::f64::consts::TAU } else { extent };

    let make = |side: Side, tangent: Point2| {
        let theta1 = wrap_pi(plus.angle - tangent.angle());
        TGLFrame {
            s: bp.s,
            r,
            side,
            theta1,
            theta2: theta1 + extent,
            s_minus: minus.s,
            s_plus: plus.s,
            nu1: None,
            nu2: None,
        }
    };
    Ok((make(Side::Minus, bp.tangent_in), make(Side::Plus, bp.tangent_out)))
}

/// Local frame at `s` for the chosen one-sided tangent. Requires the probe
/// circle to meet the boundary in exactly two transverse points.
pub fn frame_at(poly: &Polygon, s: f64, r: f64, side: Side) -> Result<TGLFrame, InvariantError> {
    let (m, p) = frames_from_crossings(poly, s, r)?;
    Ok(match side {
        Side::Minus => m,
        Side::Plus => p,
    })
}

/// dg/dr at (s, r): the length of the probe-circle arc inside the region.
pub fn derivative_r(poly: &Polygon, s: f64, r: f64) -> Result<f64, InvariantError> {
    Ok(frame_at(poly, s, r, Side::Plus)?.g_r())
}

/// One-sided dg/ds at (s, r), returned as (minus, plus). Equal away from
/// vertices.
pub fn derivative_s(poly: &Polygon, s: f64, r: f64) -> Result<(f64, f64), InvariantError> {
    let (m, p) = frames_from_crossings(poly, s, r)?;
    Ok((m.g_s(), p.g_s()))
}

/// Recovers (theta1, theta2) from dg/dr and one-sided dg/ds.
///
/// With delta = g_r / r the entry angle is theta1 + delta, and theta1 solves
/// sin(theta1 + delta) - sin(theta1) = g_s / r on the window where
/// theta1 is in [-pi/2, pi/2] and theta2 in [pi/2, 3pi/2]. On that window
/// the left side is strictly decreasing in theta1 (cos(theta2) < cos(theta1)
/// pointwise), so bisection applies. Targets outside the attainable range
/// beyond a small tolerance are rejected.
pub fn solve_entry_exit_angles(g_r: f64, g_s: f64, r: f64) -> Result<(f64, f64), InvariantError> {
    if !(r > 0.0) {
        return Err(InvariantError::NoSolution(format!("nonpositive radius {r}")));
    }
    let delta = g_r / r;
    if !(delta > 0.0 && delta < 2.0 * PI) {
        return Err(InvariantError::NoSolution(format!(
            "arc extent g_r/r = {delta} outside (0, 2pi)"
        )));
    }
    let lo = (-PI / 2.0).max(PI / 2.0 - delta);
    let hi = (PI / 2.0).min(3.0 * PI / 2.0 - delta);
    let f = |t: f64| (t + delta).sin() - t.sin();
    let target = g_s / r;

    let (flo, fhi) = (f(lo), f(hi));
    let range_tol = 1e-9;
    if target > flo + range_tol || target < fhi - range_tol {
        return Err(InvariantError::NoSolution(format!(
            "g_s/r = {target} outside attainable [{fhi}, {flo}] for this g_r"
        )));
    }
    let target = target.clamp(fhi, flo);

    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..200 {
        if hi - lo < 1e-13 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if f(mid) >= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t1 = 0.5 * (lo + hi);
    Ok((t1, t1 + delta))
}

/// One sampled row of a signature. Derivative columns are absent where the
/// two-transverse-crossings precondition fails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigRow {
    pub s: f64,
    pub g: f64,
    pub g_r: Option<f64>,
    pub g_s_minus: Option<f64>,
    pub g_s_plus: Option<f64>,
}

/// Sampled disk-area signature at one fixed probe radius.
#[derive(Debug, Clone)]
pub struct Signature {
    r: f64,
    length: f64,
    rows: Vec<SigRow>,
}

#[derive(Debug, Error)]
pub enum SignatureError {
    #[error("probe radius must be positive, got {0}")]
    BadRadius(f64),
    #[error("boundary length must be positive, got {0}")]
    BadLength(f64),
    #[error("row {0}: s values must be strictly increasing in [0, length)")]
    UnsortedRows(usize),
    #[error("row {0}: g = {1} outside [0, pi r^2]")]
    BadArea(usize, f64),
}

impl Signature {
    pub fn new(r: f64, length: f64, rows: Vec<SigRow>) -> Result<Self, SignatureError> {
        if !(r > 0.0) {
            return Err(SignatureError::BadRadius(r));
        }
        if !(length > 0.0) {
            return Err(SignatureError::BadLength(length));
        }
        let cap = PI * r * r * (1.0 + 1e-9);
        for (i, row) in rows.iter().enumerate() {
            if !(row.s >= 0.0 && row.s < length) {
                return Err(SignatureError::UnsortedRows(i));
            }
            if i > 0 && rows[i - 1].s >= row.s {
                return Err(SignatureError::UnsortedRows(i));
            }
            if !(row.g >= -1e-12 && row.g <= cap) {
                return Err(SignatureError::BadArea(i, row.g));
            }
        }
        Ok(Signature { r, length, rows })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn rows(&self) -> &[SigRow] {
        &self.rows
    }
}

/// One full signature row at `s` (snapped to the boundary parameter range).
/// Derivative fields are filled where the two-arc property holds.
pub fn row_at(poly: &Polygon, r: f64, s: f64) -> SigRow {
    let c = poly.point_at(s);
    let g = poly.disk_area(c.position, r);
    match frames_from_crossings(poly, c.s, r) {
        Ok((m, p)) => SigRow {
            s: c.s,
            g,
            g_r: Some(p.g_r()),
            g_s_minus: Some(m.g_s()),
            g_s_plus: Some(p.g_s()),
        },
        Err(_) => SigRow { s: c.s, g, g_r: None, g_s_minus: None, g_s_plus: None },
    }
}

/// Samples the signature of a polygon at the given arc positions.
/// Derivative columns are filled where the two-arc property holds; at
/// vertices the two one-sided dg/ds values differ.
pub fn signature(poly: &Polygon, r: f64, samples: &[f64]) -> Signature {
    use rayon::prelude::*;
    let l = poly.total_length();
    let mut ss: Vec<f64> = samples.iter().map(|&s| poly.point_at(s).s).collect();
    ss.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ss.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * l);

    let rows: Vec<SigRow> = ss.par_iter().map(|&s| row_at(poly, r, s)).collect();
    Signature::new(r, l, rows).expect("sampled rows satisfy signature invariants")
}

#[derive(Debug, Error)]
pub enum SigIoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {0}: {1}")]
    Parse(usize, String),
    #[error(transparent)]
    Invalid(#[from] SignatureError),
}

pub const SIGNATURE_CSV_HEADER: &str = "s,g,g_r,g_s_minus,g_s_plus";

pub fn write_signature_csv(sig: &Signature, mut w: impl Write) -> std::io::Result<()> {
    writeln!(w, "{}", SIGNATURE_CSV_HEADER)?;
    let opt = |v: Option<f64>| v.map(fmt17).unwrap_or_default();
    for row in sig.rows() {
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt17(row.s),
            fmt17(row.g),
            opt(row.g_r),
            opt(row.g_s_minus),
            opt(row.g_s_plus)
        )?;
    }
    Ok(())
}

pub fn save_signature_csv(sig: &Signature, path: &std::path::Path) -> Result<(), SigIoError> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_signature_csv(sig, &mut f)?;
    Ok(())
}

/// Reads a signature CSV. The format does not carry the probe radius, so the
/// caller supplies it; `length` may be supplied or inferred from the grid
/// (median spacing h, total length s_last + h).
pub fn read_signature_csv(
    r: f64,
    length: Option<f64>,
    reader: impl BufRead,
) -> Result<Signature, SigIoError> {
    let mut rows: Vec<SigRow> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim_end();
        if i == 0 {
            if line != SIGNATURE_CSV_HEADER {
                return Err(SigIoError::Parse(1, format!("expected header '{SIGNATURE_CSV_HEADER}'")));
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(SigIoError::Parse(i + 1, format!("expected 5 fields, got {}", fields.len())));
        }
        let req = |f: &str| -> Result<f64, SigIoError> {
            f.trim().parse().map_err(|_| SigIoError::Parse(i + 1, format!("bad number '{f}'")))
        };
        let opt = |f: &str| -> Result<Option<f64>, SigIoError> {
            let f = f.trim();
            if f.is_empty() {
                Ok(None)
            } else {
                Ok(Some(req(f)?))
            }
        };
        rows.push(SigRow {
            s: req(fields[0])?,
            g: req(fields[1])?,
            g_r: opt(fields[2])?,
            g_s_minus: opt(fields[3])?,
            g_s_plus: opt(fields[4])?,
        });
    }
    let length = match length {
        Some(l) => l,
        None => infer_length(&rows)
            .ok_or_else(|| SigIoError::Parse(0, "cannot infer boundary length from rows".into()))?,
    };
    Ok(Signature::new(r, length, rows)?)
}

fn infer_length(rows: &[SigRow]) -> Option<f64> {
    if rows.len() < 2 {
        return None;
    }
    let mut diffs: Vec<f64> = rows.windows(2).map(|w| w[1].s - w[0].s).collect();
    diffs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let h = diffs[diffs.len() / 2];
    if h <= 0.0 {
        return None;
    }
    Some(rows.last().unwrap().s + h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point2;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn unit_square() -> Polygon {
        Polygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn straight_edge_exact_values() {
        let p = unit_square();
        let (s, r) = (0.5, 0.25);
        let g = p.disk_area(p.point_at(s).position, r);
        assert!((g - PI * r * r / 2.0).abs() < 1e-12);
        let gr = derivative_r(&p, s, r).unwrap();
        assert!((gr - PI * r).abs() < 1e-12);
        let (gm, gp) = derivative_s(&p, s, r).unwrap();
        assert!(gm.abs() < 1e-12);
        assert!(gp.abs() < 1e-12);
    }

    #[test]
    fn corner_adjacent_heights() {
        // Center on the bottom edge, disk reaching around the corner onto
        // the left edge. Entry height is sqrt(r^2 - 0.1^2) above the tangent
        // line, exit height zero.
        let p = unit_square();
        let (s, r) = (0.1, 0.25);
        let (gm, gp) = derivative_s(&p, s, r).unwrap();
        let expect = (r * r - 0.01).sqrt();
        assert!((gm - expect).abs() < 1e-12, "{gm} vs {expect}");
        assert_eq!(gm, gp);
    }

    #[test]
    fn vertex_rows_have_one_sided_jump() {
        let p = unit_square();
        let r = 0.25;
        let (m, pl) = (frame_at(&p, 0.0, r, Side::Minus).unwrap(), frame_at(&p, 0.0, r, Side::Plus).unwrap());
        // Quarter-circle inside arc.
        assert!((m.g_r() - r * FRAC_PI_2).abs() < 1e-12);
        assert!((m.g_s() + r).abs() < 1e-12);
        assert!((pl.g_s() - r).abs() < 1e-12);
        assert!((m.s_plus - 0.25).abs() < 1e-12);
        assert!((m.s_minus - 3.75).abs() < 1e-12);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let shapes: Vec<Polygon> = vec![
            unit_square(),
            Polygon::new(vec![
                Point2::new(0.0, 0.0),
                Point2::new(2.0, 0.3),
                Point2::new(2.4, 1.5),
                Point2::new(1.0, 2.2),
                Point2::new(-0.6, 1.2),
            ])
            .unwrap(),
        ];
        let h = 1e-6;
        let mut checked = 0;
        while checked < 60 {
            let poly = &shapes[rng.gen_range(0..shapes.len())];
            let l = poly.total_length();
            let s = rng.gen_range(0.0..l);
            let r = rng.gen_range(0.05..0.4);
            // Keep clear of vertices so the sample is smooth.
            let near_vertex = (0..poly.n_vertices())
                .any(|i| {
                    let d = (s - poly.vertex_s(i)).abs();
                    d.min(l - d) < 1e-3
                });
            if near_vertex {
                continue;
            }
            let Ok(gr) = derivative_r(poly, s, r) else { continue };
            let Ok((gm, gp)) = derivative_s(poly, s, r) else { continue };
            assert_eq!(gm, gp);

            let c = |s: f64| poly.point_at(s).position;
            let fd_r = (poly.disk_area(c(s), r + h) - poly.disk_area(c(s), r - h)) / (2.0 * h);
            let fd_s = (poly.disk_area(c(s + h), r) - poly.disk_area(c(s - h), r)) / (2.0 * h);
            assert!((gr - fd_r).abs() <= 1e-4 * gr.abs().max(1e-3), "gr {gr} vs fd {fd_r}");
            assert!((gm - fd_s).abs() <= 1e-4 * gm.abs().max(1e-3), "gs {gm} vs fd {fd_s}");
            checked += 1;
        }
    }

    #[test]
    fn solver_inverts_known_angles() {
        let r = 0.7;
        // Straight edge through the center: theta = (0, pi) exactly.
        let (t1, t2) = solve_entry_exit_angles(PI * r, 0.0, r).unwrap();
        assert!(t1.abs() < 1e-12);
        assert!((t2 - PI).abs() < 1e-12);

        // Known worked pair: extent pi, g_s = -r.
        let (t1, t2) = solve_entry_exit_angles(PI * r, -r, r).unwrap();
        assert!((t1 - PI / 6.0).abs() < 1e-12, "{t1}");
        assert!((t2 - 7.0 * PI / 6.0).abs() < 1e-12);

        // Square corner: quarter extent, g_s = -r; boundary-of-window case.
        let (t1, t2) = solve_entry_exit_angles(FRAC_PI_2 * r, -r, r).unwrap();
        assert!((t1 - FRAC_PI_2).abs() < 1e-9);
        assert!((t2 - PI).abs() < 1e-9);
    }

    #[test]
    fn solver_round_trips_random_frames() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..500 {
            let t1 = rng.gen_range(-FRAC_PI_2 + 1e-3..FRAC_PI_2 - 1e-3);
            let t2 = rng.gen_range(FRAC_PI_2 + 1e-3..3.0 * FRAC_PI_2 - 1e-3);
            let r = rng.gen_range(0.1..2.0);
            let g_r = r * (t2 - t1);
            let g_s = r * (t2.sin() - t1.sin());
            let (u1, u2) = solve_entry_exit_angles(g_r, g_s, r).unwrap();
            assert!((u1 - t1).abs() < 1e-10, "{u1} vs {t1}");
            assert!((u2 - t2).abs() < 1e-10);
        }
    }

    #[test]
    fn solver_rejects_unattainable_targets() {
        // A 120-degree turn (equilateral-triangle corner) puts the true exit
        // angle outside the representable window.
        let r = 0.2;
        let g_r = r * PI / 3.0;
        let g_s = r * (PI.sin() - (2.0 * PI / 3.0).sin());
        assert!(matches!(
            solve_entry_exit_angles(g_r, g_s, r),
            Err(InvariantError::NoSolution(_))
        ));
        assert!(matches!(
            solve_entry_exit_angles(-0.1, 0.0, 1.0),
            Err(InvariantError::NoSolution(_))
        ));
    }

    #[test]
    fn two_arc_violation_reported() {
        let p = unit_square();
        // Huge probe: no crossings at all.
        let err = derivative_r(&p, 0.5, 10.0).unwrap_err();
        assert!(matches!(err, InvariantError::TwoArcViolation { count: 0, .. }));
    }

    #[test]
    fn signature_sampling_and_csv_round_trip() {
        let p = unit_square();
        let r = 0.25;
        let samples: Vec<f64> = (0..64).map(|k| 4.0 * k as f64 / 64.0).collect();
        let sig = signature(&p, r, &samples);
        assert_eq!(sig.rows().len(), 64);
        // Corner rows carry distinct one-sided values.
        let corner = &sig.rows()[0];
        assert_eq!(corner.s, 0.0);
        let (m, pl) = (corner.g_s_minus.unwrap(), corner.g_s_plus.unwrap());
        assert!((m + r).abs() < 1e-12);
        assert!((pl - r).abs() < 1e-12);
        assert!((corner.g - PI * r * r / 4.0).abs() < 1e-12);

        let mut buf = Vec::new();
        write_signature_csv(&sig, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(SIGNATURE_CSV_HEADER));
        let back = read_signature_csv(r, Some(sig.length()), text.as_bytes()).unwrap();
        assert_eq!(back.rows().len(), sig.rows().len());
        for (a, b) in back.rows().iter().zip(sig.rows()) {
            assert_eq!(a, b);
        }
        // Length inference from the uniform grid.
        let inferred = read_signature_csv(r, None, text.as_bytes()).unwrap();
        assert!((inferred.length() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn signature_empty_fields_where_two_arc_fails() {
        let p = unit_square();
        // Probe radius larger than the diameter: whole boundary inside.
        let sig = signature(&p, 3.0, &[0.5, 1.5]);
        for row in sig.rows() {
            assert!((row.g - 1.0).abs() < 1e-12);
            assert!(row.g_r.is_none() && row.g_s_minus.is_none() && row.g_s_plus.is_none());
        }
        let mut buf = Vec::new();
        write_signature_csv(&sig, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().nth(1).unwrap().ends_with(",,,"));
        let back = read_signature_csv(3.0, Some(4.0), text.as_bytes()).unwrap();
        assert!(back.rows()[0].g_r.is_none());
    }

    #[test]
    fn regular_64gon_matches_circle_lens() {
        let n = 64;
        let pts: Vec<Point2> = (0..n)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / n as f64;
                Point2::new(t.cos(), t.sin())
            })
            .collect();
        let p = Polygon::new(pts).unwrap();
        let r: f64 = 0.5;
        // Closed-form lens area for two circles with radii 1 and r, centers
        // one unit apart.
        let lens = r * r * (r / 2.0).acos() + (1.0 - r * r / 2.0).acos()
            - 0.5 * r * (4.0 - r * r).sqrt();
        for k in 0..8 {
            let s = p.total_length() * k as f64 / 8.0;
            let g = p.disk_area(p.point_at(s).position, r);
            assert!((g - lens).abs() < 1e-3, "{g} vs {lens}");
        }
    }
}
