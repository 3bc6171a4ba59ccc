//! Checks that a boundary is locally graph-like at probe scale r.
//!
//! At each sampled boundary point the probe circle must meet the boundary in
//! exactly two transverse points, and every in-disk piece of the boundary
//! must be readable as the graph of a function over a common axis. The
//! latter is quantified by a margin: the cosine of the angular span of all
//! in-disk edge directions (with any single piece whose accumulated turning
//! reaches pi, or a direction span of pi or more, forcing -1). A margin of
//! zero is the right-angle boundary case and still passes; anything
//! measurably below zero fails.

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{Point2, Polygon, PolygonError};
use crate::util::wrap_pi;
use std::f64::consts::PI;

pub const MARGIN_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy)]
pub struct SampleCheck {
    pub s: f64,
    pub crossing_count: usize,
    pub all_transverse: bool,
    /// Present only for full graph-likeness checks.
    pub margin: Option<f64>,
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct TCGLReport {
    pub radius: f64,
    pub pass: bool,
    pub samples: Vec<SampleCheck>,
}

impl TCGLReport {
    pub fn failures(&self) -> impl Iterator<Item = &SampleCheck> {
        self.samples.iter().filter(|c| !c.ok)
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Failure {
            s: f64,
            crossing_count: usize,
            margin: Option<f64>,
        }
        #[derive(Serialize)]
        struct Report {
            radius: f64,
            pass: bool,
            failures: Vec<Failure>,
        }
        let rep = Report {
            radius: self.radius,
            pass: self.pass,
            failures: self
                .failures()
                .map(|c| Failure { s: c.s, crossing_count: c.crossing_count, margin: c.margin })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&rep).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Sample positions: every vertex plus `n_fill` uniform points, deduplicated.
fn sample_positions(poly: &Polygon, n_fill: usize) -> Vec<f64> {
    let l = poly.total_length();
    let mut ss: Vec<f64> = (0..poly.n_vertices()).map(|i| poly.vertex_s(i)).collect();
    ss.extend((0..n_fill).map(|k| l * k as f64 / n_fill.max(1) as f64));
    ss.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ss.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * l);
    ss
}

fn edge_of(poly: &Polygon, s: f64) -> usize {
    let n = poly.n_vertices();
    let mut lo = 0;
    let mut hi = n;
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if poly.vertex_s(mid) <= s {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Edge direction angles along the cyclic piece [a, a+len] of the boundary.
fn piece_angles(poly: &Polygon, a: f64, len: f64, out: &mut Vec<f64>) {
    let l = poly.total_length();
    let n = poly.n_vertices();
    let a = a.rem_euclid(l);
    let mut e = edge_of(poly, a);
    out.push(poly.edge_dir(e).angle());
    let mut covered = poly.vertex_s(e) + poly.edge_len(e) - a;
    while covered < len - 1e-9 * l {
        e = (e + 1) % n;
        out.push(poly.edge_dir(e).angle());
        covered += poly.edge_len(e);
    }
}

/// Accumulated-turning spread of a direction sequence (how far the heading
/// wanders, unwrapped).
fn turning_spread(angles: &[f64]) -> f64 {
    let mut cum = 0.0;
    let (mut lo, mut hi) = (0.0_f64, 0.0_f64);
    for w in angles.windows(2) {
        cum += wrap_pi(w[1] - w[0]);
        lo = lo.min(cum);
        hi = hi.max(cum);
    }
    hi - lo
}

/// Angular span of a direction set: 2pi minus the largest gap between
/// consecutive sorted angles.
fn direction_span(angles: &mut Vec<f64>) -> f64 {
    if angles.len() < 2 {
        return 0.0;
    }
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut max_gap = std::f64::consts::TAU - (angles.last().unwrap() - angles[0]);
    for w in angles.windows(2) {
        max_gap = max_gap.max(w[1] - w[0]);
    }
    std::f64::consts::TAU - max_gap
}

/// Graph-likeness margin of the in-disk boundary at one sample: cos of the
/// direction span, or -1 when a piece turns by pi or the span reaches pi.
fn margin_at(poly: &Polygon, s: f64, r: f64, crossings: &[crate::geometry::Crossing]) -> f64 {
    let l = poly.total_length();
    let center = poly.point_at(s).position;
    if crossings.is_empty() {
        // Whole boundary inside the disk: total turning 2pi.
        return -1.0;
    }
    let mut all_angles = Vec::new();
    let mut piece = Vec::new();
    let k = crossings.len();
    for i in 0..k {
        let a = crossings[i].s;
        let b = crossings[(i + 1) % k].s;
        let len = if i + 1 < k { b - a } else { b - a + l };
        if len <= 1e-12 * l {
            continue;
        }
        let mid = poly.point_at((a + 0.5 * len).rem_euclid(l)).position;
        if (mid - center).norm() >= r {
            continue;
        }
        piece.clear();
        piece_angles(poly, a, len, &mut piece);
        if turning_spread(&piece) >= PI - MARGIN_TOLERANCE {
            return -1.0;
        }
        all_angles.extend_from_slice(&piece);
    }
    let span = direction_span(&mut all_angles);
    if span >= PI {
        -1.0
    } else {
        span.cos()
    }
}

fn check_inner(poly: &Polygon, r: f64, n_fill: usize, with_margin: bool) -> TCGLReport {
    use rayon::prelude::*;
    let samples = sample_positions(poly, n_fill);
    let checks: Vec<SampleCheck> = samples
        .par_iter()
        .map(|&s| {
            let center = poly.point_at(s).position;
            let xs = poly.circle_crossings(center, r);
            let crossing_count = xs.len();
            let all_transverse = xs.iter().all(|c| c.transverse);
            let two_arc_ok = crossing_count == 2 && all_transverse;
            let margin = with_margin.then(|| margin_at(poly, s, r, &xs));
            let ok = two_arc_ok && margin.map_or(true, |m| m >= -MARGIN_TOLERANCE);
            SampleCheck { s, crossing_count, all_transverse, margin, ok }
        })
        .collect();
    TCGLReport { radius: r, pass: checks.iter().all(|c| c.ok), samples: checks }
}

/// Two-transverse-crossings check at every vertex plus `n_fill` uniform
/// samples.
pub fn check_two_arc(poly: &Polygon, r: f64, n_fill: usize) -> TCGLReport {
    check_inner(poly, r, n_fill, false)
}

/// Full graph-likeness check: two transverse crossings and the in-disk
/// direction-span margin at every sample.
pub fn check_tcgl(poly: &Polygon, r: f64, n_fill: usize) -> TCGLReport {
    check_inner(poly, r, n_fill, true)
}

#[derive(Debug, Error)]
pub enum ApproxError {
    #[error("epsilon must lie in (0, r), got {0}")]
    BadEpsilon(f64),
    #[error("source boundary is not graph-like at radius {radius} (first failure near s={s})")]
    NotTCGLSource { radius: f64, s: f64 },
    #[error(transparent)]
    Polygon(#[from] PolygonError),
}

/// Resamples a graph-like boundary as a polygon with vertex spacing eps/3,
/// which keeps the polygon within eps/6 of the source boundary.
pub fn tcgl_polygon_approximation(
    source: &Polygon,
    r: f64,
    eps: f64,
) -> Result<Polygon, ApproxError> {
    if !(eps > 0.0 && eps < r) {
        return Err(ApproxError::BadEpsilon(eps));
    }
    let report = check_tcgl(source, r, 512.max(source.n_vertices()));
    if !report.pass {
        let s = report.failures().next().map(|c| c.s).unwrap_or(0.0);
        return Err(ApproxError::NotTCGLSource { radius: r, s });
    }
    let l = source.total_length();
    let n = (3.0 * l / eps).ceil() as usize;
    let pts: Vec<Point2> = (0..n)
        .map(|k| source.point_at(l * k as f64 / n as f64).position)
        .collect();
    Ok(Polygon::new(pts)?)
}
