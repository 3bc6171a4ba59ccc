//! Shape recovery from signature data.
//!
//! Two exact procedures are implemented. Polygons: at a fixed probe radius,
//! the one-sided dg/ds jump locates each vertex, and solving the entry/exit
//! angles on both sides of a vertex gives its exterior angle, so side
//! lengths and angles assemble the polygon by turtle geometry up to rigid
//! motion. Smooth curves: from one radial leg of data (varying r at a fixed
//! boundary point) plus one boundary leg (varying s at the top radius), the
//! curve is marched out point by point, each step placing the probe-circle
//! exit point of the current center.

use std::f64::consts::TAU;
use std::io::{BufRead, Write};

use thiserror::Error;

use crate::geometry::{Point2, Polygon};
use crate::invariant::{
    self, solve_entry_exit_angles, InvariantError, SigRow, Signature,
};
use crate::util::fmt17;

#[derive(Debug, Error)]
pub enum ReconstructError {
    #[error("no vertices detected in the signature")]
    NoVerticesDetected,
    #[error("vertex near s={s} falls between samples; no one-sided row available")]
    MissingVertexRow { s: f64 },
    #[error("signature data unavailable at s={s} (two-arc condition fails there)")]
    DataGap { s: f64 },
    #[error("angle solve failed at s={s}: {source}")]
    AngleSolve { s: f64, source: InvariantError },
    #[error("inconsistent turn at s={s}: the two angle reads disagree by {delta}")]
    InconsistentTurn { s: f64, delta: f64 },
    #[error("marching frame lost at s={s}: reconstructed curve does not cover the query")]
    FrameLoss { s: f64 },
    #[error("invalid input: {0}")]
    BadInput(String),
    #[error("t-data parse: {0}")]
    Parse(String),
}

/// Anything that can answer signature-row queries at arbitrary s, used for
/// refining vertex locations past the sampling grid.
pub trait SignatureSource: Sync {
    fn radius(&self) -> f64;
    fn length(&self) -> f64;
    fn row(&self, s: f64) -> SigRow;
}

pub struct PolygonSource<'a> {
    pub poly: &'a Polygon,
    pub r: f64,
}

impl SignatureSource for PolygonSource<'_> {
    fn radius(&self) -> f64 {
        self.r
    }

    fn length(&self) -> f64 {
        self.poly.total_length()
    }

    fn row(&self, s: f64) -> SigRow {
        invariant::row_at(self.poly, self.r, s)
    }
}

enum Hit {
    /// Vertex exactly on a sampled row (one-sided jump within the row).
    Row(usize),
    /// Vertex strictly between rows i and i+1 (cyclic).
    Interval(usize),
}

/// One-sided dg/ds jumps larger than this multiple of the median sample-to-
/// sample variation flag a vertex.
const JUMP_FACTOR: f64 = 10.0;

/// A sample interval holds a vertex only if the dg/ds change across it
/// dwarfs the total variation over the few intervals on each side. A true
/// jump concentrates in one interval at any grid density, while the steep
/// but continuous ramp where the probe circle starts to overlap a corner
/// (onset at arc distance r before the vertex) spreads comparable
/// variation over the following intervals, so a tail comparison rejects it.
const ISOLATION_FACTOR: f64 = 6.0;

/// Intervals summed on each side for the isolation test.
const ISOLATION_WINDOW: usize = 4;

fn interval_deltas(sig: &Signature) -> Vec<Option<f64>> {
    let rows = sig.rows();
    let n = rows.len();
    (0..n)
        .map(|i| {
            let j = (i + 1) % n;
            match (rows[i].g_s_plus, rows[j].g_s_minus) {
                (Some(a), Some(b)) => Some((b - a).abs()),
                _ => None,
            }
        })
        .collect()
}

fn jump_threshold(sig: &Signature, deltas: &[Option<f64>]) -> f64 {
    let mut ds: Vec<f64> = deltas.iter().flatten().copied().collect();
    if ds.is_empty() {
        return f64::INFINITY;
    }
    ds.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let med = ds[ds.len() / 2];
    // Floor guards the all-exact case (median zero on straight edges).
    (JUMP_FACTOR * med).max(1e-9 * sig.r())
}

fn detect_hits(sig: &Signature) -> Vec<Hit> {
    let rows = sig.rows();
    let n = rows.len();
    let deltas = interval_deltas(sig);
    let threshold = jump_threshold(sig, &deltas);
    let mut hits = Vec::new();
    for i in 0..n {
        if let (Some(m), Some(p)) = (rows[i].g_s_minus, rows[i].g_s_plus) {
            if (p - m).abs() > threshold {
                hits.push(Hit::Row(i));
                continue;
            }
        }
        if let Some(d) = deltas[i] {
            let window = ISOLATION_WINDOW.min(n.saturating_sub(1) / 2);
            let tail = |dir: isize| -> f64 {
                (1..=window as isize)
                    .map(|k| {
                        let j = (i as isize + dir * k).rem_euclid(n as isize) as usize;
                        deltas[j].unwrap_or(0.0)
                    })
                    .sum()
            };
            if d > threshold && d > ISOLATION_FACTOR * tail(-1).max(tail(1)) {
                hits.push(Hit::Interval(i));
            }
        }
    }
    hits
}

/// Vertex locations read off the sampled rows: the position of a row whose
/// own one-sided values jump, or the midpoint of a sample interval across
/// which dg/ds jumps (grid resolution).
pub fn detect_vertices(sig: &Signature) -> Vec<f64> {
    let rows = sig.rows();
    let n = rows.len();
    detect_hits(sig)
        .iter()
        .map(|h| match *h {
            Hit::Row(i) => rows[i].s,
            Hit::Interval(i) => {
                let a = rows[i].s;
                let b = if i + 1 < n { rows[i + 1].s } else { rows[0].s + sig.length() };
                (0.5 * (a + b)).rem_euclid(sig.length())
            }
        })
        .collect()
}

fn smooth_g_s(row: &SigRow) -> Option<f64> {
    match (row.g_s_minus, row.g_s_plus) {
        (Some(m), Some(p)) => Some(0.5 * (m + p)),
        _ => None,
    }
}

/// Bisects a jump interval down to near the evaluator's snapping width: the
/// midpoint's dg/ds is attributed to whichever end it is closer to,
/// shrinking the bracket around the discontinuity. Queries that land within
/// snapping distance of the vertex collapse onto its one-sided row (the
/// midpoint value turns into the two-sided average, so plain bisection
/// stalls there); the final scan picks the query that actually exhibits the
/// jump and returns its snapped position.
fn refine_interval<S: SignatureSource>(
    src: &S,
    mut a: f64,
    mut b: f64,
    mut va: f64,
    mut vb: f64,
) -> Result<f64, ReconstructError> {
    let l = src.length();
    let jump0 = (vb - va).abs();
    let width_goal = 8e-12 * l;
    for _ in 0..80 {
        if b - a <= width_goal {
            break;
        }
        let mid = 0.5 * (a + b);
        let row = src.row(mid.rem_euclid(l));
        let v = smooth_g_s(&row).ok_or(ReconstructError::DataGap { s: mid })?;
        if (v - va).abs() <= (v - vb).abs() {
            a = mid;
            va = v;
        } else {
            b = mid;
            vb = v;
        }
    }
    let mid = 0.5 * (a + b);
    let mut best: Option<(f64, f64)> = None;
    for k in -6..=6 {
        let s = (mid + k as f64 * 0.5e-12 * l).rem_euclid(l);
        let row = src.row(s);
        if let (Some(m), Some(p)) = (row.g_s_minus, row.g_s_plus) {
            let jump = (p - m).abs();
            if best.is_none_or(|(bj, _)| jump > bj) {
                best = Some((jump, row.s));
            }
        }
    }
    match best {
        Some((jump, s)) if jump > 0.25 * jump0 => Ok(s),
        _ => Err(ReconstructError::DataGap { s: mid.rem_euclid(l) }),
    }
}

/// Detects vertices on a uniform grid of `n_samples` rows and refines each
/// location by bisection against `src` to sub-sample precision.
pub fn detect_vertices_refined<S: SignatureSource>(
    src: &S,
    n_samples: usize,
) -> Result<Vec<f64>, ReconstructError> {
    use rayon::prelude::*;
    let l = src.length();
    let r = src.radius();
    let ss: Vec<f64> = (0..n_samples).map(|k| l * k as f64 / n_samples as f64).collect();
    let rows: Vec<SigRow> = ss.par_iter().map(|&s| src.row(s)).collect();
    let sig = Signature::new(r, l, rows)
        .map_err(|e| ReconstructError::BadInput(e.to_string()))?;

    let rows = sig.rows();
    let n = rows.len();
    let mut out = Vec::new();
    for hit in detect_hits(&sig) {
        match hit {
            Hit::Row(i) => out.push(rows[i].s),
            Hit::Interval(i) => {
                let a = rows[i].s;
                let b = if i + 1 < n { rows[i + 1].s } else { rows[0].s + l };
                let va = rows[i].g_s_plus.ok_or(ReconstructError::DataGap { s: a })?;
                let vb = rows[(i + 1) % n]
                    .g_s_minus
                    .ok_or(ReconstructError::DataGap { s: b })?;
                out.push(refine_interval(src, a, b, va, vb)?);
            }
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(out)
}

/// A polygon recovered from signature data: sides and interior angles, plus
/// the assembled vertex loop (first vertex at the origin, first side along
/// +x) and how far the loop misses closing. The residual is reported, never
/// corrected.
#[derive(Debug, Clone)]
pub struct ReconstructedPolygon {
    pub side_lengths: Vec<f64>,
    pub interior_angles: Vec<f64>,
    pub vertices: Vec<Point2>,
    pub closure_residual: f64,
}

impl ReconstructedPolygon {
    pub fn exterior_angle_sum(&self) -> f64 {
        self.interior_angles.iter().map(|a| std::f64::consts::PI - a).sum()
    }
}

/// Exterior angle at a vertex from its one-sided signature row: entry/exit
/// angles are solved in the frame of each one-sided tangent, and the frames
/// differ by exactly the turn.
fn vertex_turn(r: f64, row: &SigRow) -> Result<f64, ReconstructError> {
    let s = row.s;
    let g_r = row.g_r.ok_or(ReconstructError::DataGap { s })?;
    let gsm = row.g_s_minus.ok_or(ReconstructError::DataGap { s })?;
    let gsp = row.g_s_plus.ok_or(ReconstructError::DataGap { s })?;
    let (t1, t2) = solve_entry_exit_angles(g_r, gsm, r)
        .map_err(|source| ReconstructError::AngleSolve { s, source })?;
    let (f1, f2) = solve_entry_exit_angles(g_r, gsp, r)
        .map_err(|source| ReconstructError::AngleSolve { s, source })?;
    let psi = t1 - f1;
    let delta = (t2 - f2) - psi;
    if delta.abs() > 1e-9 {
        return Err(ReconstructError::InconsistentTurn { s, delta });
    }
    Ok(psi)
}

fn assemble(
    vertex_s: &[f64],
    turns: &[f64],
    length: f64,
) -> ReconstructedPolygon {
    let n = vertex_s.len();
    let mut side_lengths = Vec::with_capacity(n);
    for k in 0..n {
        let next = if k + 1 < n { vertex_s[k + 1] } else { vertex_s[0] + length };
        side_lengths.push(next - vertex_s[k]);
    }
    let mut vertices = vec![Point2::new(0.0, 0.0)];
    let mut heading = 0.0_f64;
    let mut pos = Point2::new(0.0, 0.0);
    for k in 0..n {
        pos = pos + Point2::new(heading.cos(), heading.sin()) * side_lengths[k];
        if k + 1 < n {
            heading += turns[k + 1];
            vertices.push(pos);
        }
    }
    ReconstructedPolygon {
        side_lengths,
        interior_angles: turns.iter().map(|t| std::f64::consts::PI - t).collect(),
        vertices,
        closure_residual: pos.norm(),
    }
}

/// Recovers a polygon from a sampled signature alone. Every detected vertex
/// must coincide with a sampled row (so its one-sided data is present);
/// vertices falling between rows are an error for this entry point; use
/// [`reconstruct_polygon_from_source`] when the signature can be queried.
pub fn reconstruct_polygon(sig: &Signature) -> Result<ReconstructedPolygon, ReconstructError> {
    let rows = sig.rows();
    let n = rows.len();
    let mut vertex_rows: Vec<&SigRow> = Vec::new();
    for hit in detect_hits(sig) {
        match hit {
            Hit::Row(i) => vertex_rows.push(&rows[i]),
            Hit::Interval(i) => {
                let a = rows[i].s;
                let b = if i + 1 < n { rows[i + 1].s } else { rows[0].s + sig.length() };
                return Err(ReconstructError::MissingVertexRow {
                    s: (0.5 * (a + b)).rem_euclid(sig.length()),
                });
            }
        }
    }
    if vertex_rows.is_empty() {
        return Err(ReconstructError::NoVerticesDetected);
    }
    let turns = vertex_rows
        .iter()
        .map(|row| vertex_turn(sig.r(), row))
        .collect::<Result<Vec<f64>, _>>()?;
    let vertex_s: Vec<f64> = vertex_rows.iter().map(|row| row.s).collect();
    Ok(assemble(&vertex_s, &turns, sig.length()))
}

/// Recovers a polygon from a queryable signature source: detects vertices on
/// a uniform grid, refines them by bisection, queries one-sided data at the
/// refined locations, and assembles.
pub fn reconstruct_polygon_from_source<S: SignatureSource>(
    src: &S,
    n_samples: usize,
) -> Result<ReconstructedPolygon, ReconstructError> {
    let vertex_s = detect_vertices_refined(src, n_samples)?;
    if vertex_s.is_empty() {
        return Err(ReconstructError::NoVerticesDetected);
    }
    let r = src.radius();
    let turns = vertex_s
        .iter()
        .map(|&s| vertex_turn(r, &src.row(s)))
        .collect::<Result<Vec<f64>, _>>()?;
    Ok(assemble(&vertex_s, &turns, src.length()))
}

/// One row of T-shaped reconstruction data: `coord` is the probe radius on
/// the radial leg and the arc position on the boundary leg.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TRow {
    pub coord: f64,
    pub g: f64,
    pub g_r: f64,
    pub g_s: f64,
}

/// Data along a T: one radial leg (varying radius at one boundary point,
/// ascending to the working radius) and one boundary leg (varying arc
/// position at the working radius).
#[derive(Debug, Clone)]
pub struct TLikeData {
    pub radial: Vec<TRow>,
    pub boundary: Vec<TRow>,
}

impl TLikeData {
    pub fn r_hat(&self) -> f64 {
        self.radial.last().map(|r| r.coord).unwrap_or(f64::NAN)
    }

    /// Boundary length inferred from the boundary grid: last position plus
    /// the median spacing.
    pub fn length(&self) -> Option<f64> {
        if self.boundary.len() < 2 {
            return None;
        }
        let mut d: Vec<f64> =
            self.boundary.windows(2).map(|w| w[1].coord - w[0].coord).collect();
        d.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let h = d[d.len() / 2];
        (h > 0.0).then(|| self.boundary.last().unwrap().coord + h)
    }

    fn validate(&self) -> Result<(), ReconstructError> {
        if self.radial.is_empty() || self.boundary.len() < 2 {
            return Err(ReconstructError::BadInput(
                "need a nonempty radial leg and at least two boundary rows".into(),
            ));
        }
        for leg in [&self.radial, &self.boundary] {
            if leg.windows(2).any(|w| w[0].coord >= w[1].coord) {
                return Err(ReconstructError::BadInput(
                    "leg coordinates must be strictly increasing".into(),
                ));
            }
        }
        if !(self.r_hat() > 0.0) {
            return Err(ReconstructError::BadInput("working radius must be positive".into()));
        }
        Ok(())
    }
}

pub const TLIKE_CSV_HEADER: &str = "leg,coord,g,g_r,g_s";

pub fn write_tlike_csv(data: &TLikeData, mut w: impl Write) -> std::io::Result<()> {
    writeln!(w, "{}", TLIKE_CSV_HEADER)?;
    for (name, leg) in [("radial", &data.radial), ("boundary", &data.boundary)] {
        for row in leg {
            writeln!(
                w,
                "{name},{},{},{},{}",
                fmt17(row.coord),
                fmt17(row.g),
                fmt17(row.g_r),
                fmt17(row.g_s)
            )?;
        }
    }
    Ok(())
}

pub fn read_tlike_csv(reader: impl BufRead) -> Result<TLikeData, ReconstructError> {
    let mut data = TLikeData { radial: Vec::new(), boundary: Vec::new() };
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| ReconstructError::Parse(e.to_string()))?;
        let line = line.trim_end();
        if i == 0 {
            if line != TLIKE_CSV_HEADER {
                return Err(ReconstructError::Parse(format!(
                    "expected header '{TLIKE_CSV_HEADER}'"
                )));
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(ReconstructError::Parse(format!(
                "line {}: expected 5 fields, got {}",
                i + 1,
                fields.len()
            )));
        }
        let num = |f: &str| -> Result<f64, ReconstructError> {
            f.trim()
                .parse()
                .map_err(|_| ReconstructError::Parse(format!("line {}: bad number '{f}'", i + 1)))
        };
        let row = TRow {
            coord: num(fields[1])?,
            g: num(fields[2])?,
            g_r: num(fields[3])?,
            g_s: num(fields[4])?,
        };
        match fields[0].trim() {
            "radial" => data.radial.push(row),
            "boundary" => data.boundary.push(row),
            other => {
                return Err(ReconstructError::Parse(format!(
                    "line {}: unknown leg '{other}'",
                    i + 1
                )))
            }
        }
    }
    data.validate()?;
    Ok(data)
}

/// Growing polyline parameterized by cumulative chord length, carrying a
/// tangent angle (continuous, unwrapped) at each node.
struct MarchLine {
    us: Vec<f64>,
    pts: Vec<Point2>,
    alphas: Vec<f64>,
}

impl MarchLine {
    fn at(&self, u: f64) -> Option<Point2> {
        if u < self.us[0] || u > *self.us.last().unwrap() {
            return None;
        }
        let i = match self.us.binary_search_by(|v| v.partial_cmp(&u).unwrap()) {
            Ok(i) => return Some(self.pts[i]),
            Err(i) => i - 1,
        };
        let (u0, u1) = (self.us[i], self.us[i + 1]);
        let t = (u - u0) / (u1 - u0);
        Some(self.pts[i] + (self.pts[i + 1] - self.pts[i]) * t)
    }

    fn tangent_at(&self, u: f64) -> Option<f64> {
        if u < self.us[0] || u > *self.us.last().unwrap() {
            return None;
        }
        let i = match self.us.binary_search_by(|v| v.partial_cmp(&u).unwrap()) {
            Ok(i) => return Some(self.alphas[i]),
            Err(i) => i - 1,
        };
        let (u0, u1) = (self.us[i], self.us[i + 1]);
        let t = (u - u0) / (u1 - u0);
        Some(self.alphas[i] + t * (self.alphas[i + 1] - self.alphas[i]))
    }

    fn push(&mut self, p: Point2, alpha_raw: f64) {
        let u = self.us.last().unwrap() + (p - *self.pts.last().unwrap()).norm();
        // Unwrap against the previous node to keep the angle continuous.
        let prev = *self.alphas.last().unwrap();
        let alpha = alpha_raw + TAU * ((prev - alpha_raw) / TAU).round();
        self.us.push(u);
        self.pts.push(p);
        self.alphas.push(alpha);
    }
}

/// Marches a smooth boundary out of T-shaped data.
///
/// The radial leg seeds a neighborhood of the starting point (gauge: start
/// at the origin with tangent +x, region on the left): each radius places
/// its exit point ahead and entry point behind, and seed tangents come from
/// centered differences of the seed polyline. The boundary leg is then
/// consumed in arc steps: at each position the entry/exit angles are solved
/// from interpolated (g_r, g_s) and the probe exit point is placed a chord
/// ahead of the current point. The new point's tangent is not differenced
/// out of the polyline (that would amplify placement noise); the backward
/// intersection pins it algebraically: the chord back to the placing center
/// makes angle theta2 with the tangent at the exit, and theta2 there is
/// solved from the same boundary data.
pub fn reconstruct_tlike(
    data: &TLikeData,
    step: f64,
) -> Result<Vec<Point2>, ReconstructError> {
    data.validate()?;
    if !(step > 0.0) {
        return Err(ReconstructError::BadInput(format!("step must be positive, got {step}")));
    }
    let r_hat = data.r_hat();
    let l = data
        .length()
        .ok_or_else(|| ReconstructError::BadInput("cannot infer lap length".into()))?;

    // Seed neighborhood from the radial leg.
    let mut ahead = Vec::with_capacity(data.radial.len());
    let mut behind = Vec::with_capacity(data.radial.len());
    for row in &data.radial {
        let (t1, t2) = solve_entry_exit_angles(row.g_r, row.g_s, row.coord)
            .map_err(|source| ReconstructError::AngleSolve { s: 0.0, source })?;
        ahead.push(Point2::new(row.coord * t1.cos(), row.coord * t1.sin()));
        behind.push(Point2::new(row.coord * t2.cos(), row.coord * t2.sin()));
    }
    let mut pts: Vec<Point2> = behind.iter().rev().cloned().collect();
    pts.push(Point2::new(0.0, 0.0));
    pts.extend(ahead.iter().cloned());
    let mut us = vec![0.0];
    for w in pts.windows(2) {
        us.push(us.last().unwrap() + (w[1] - w[0]).norm());
    }
    let origin_idx = behind.len();
    let seed_u = us[origin_idx];
    for u in &mut us {
        *u -= seed_u;
    }
    // Seed tangents: centered differences, one-sided at the ends, pinned to
    // the gauge (exactly +x) at the origin, unwrapped outward from there.
    let n = pts.len();
    let raw: Vec<f64> = (0..n)
        .map(|i| {
            if i == origin_idx {
                0.0
            } else if i == 0 && n >= 3 {
                // One-sided chords are biased by half a node spacing; the
                // three-point end formula removes the first-order term.
                (pts[1] * 4.0 - pts[0] * 3.0 - pts[2]).angle()
            } else if i == n - 1 && n >= 3 {
                (pts[n - 1] * 3.0 - pts[n - 2] * 4.0 + pts[n - 3]).angle()
            } else {
                let lo = i.saturating_sub(1);
                let hi = (i + 1).min(n - 1);
                (pts[hi] - pts[lo]).angle()
            }
        })
        .collect();
    let mut alphas = vec![0.0; n];
    for i in (origin_idx + 1)..n {
        alphas[i] = raw[i] + TAU * ((alphas[i - 1] - raw[i]) / TAU).round();
    }
    for i in (0..origin_idx).rev() {
        alphas[i] = raw[i] + TAU * ((alphas[i + 1] - raw[i]) / TAU).round();
    }
    let mut line = MarchLine { us, pts, alphas };

    // Cyclic linear interpolation of (g_r, g_s) over the boundary rows.
    let rows = &data.boundary;
    let interp = |s: f64| -> (f64, f64) {
        let s = s.rem_euclid(l);
        let n = rows.len();
        let i = rows.partition_point(|row| row.coord <= s);
        let (a, sa, b, sb) = if i == 0 {
            (rows[n - 1], rows[n - 1].coord - l, rows[0], rows[0].coord)
        } else if i == n {
            (rows[n - 1], rows[n - 1].coord, rows[0], rows[0].coord + l)
        } else {
            (rows[i - 1], rows[i - 1].coord, rows[i], rows[i].coord)
        };
        let t = if sb > sa { (s - sa) / (sb - sa) } else { 0.0 };
        (a.g_r + t * (b.g_r - a.g_r), a.g_s + t * (b.g_s - a.g_s))
    };
    let solve = |s: f64| -> Result<(f64, f64), ReconstructError> {
        let (g_r, g_s) = interp(s);
        solve_entry_exit_angles(g_r, g_s, r_hat)
            .map_err(|source| ReconstructError::AngleSolve { s, source })
    };

    let mut s = step;
    while s <= l {
        let (t1, _) = solve(s)?;
        let (p0, alpha) = match (line.at(s), line.tangent_at(s)) {
            (Some(p), Some(a)) => (p, a),
            _ => return Err(ReconstructError::FrameLoss { s }),
        };
        let exit = p0 + Point2::new((alpha + t1).cos(), (alpha + t1).sin()) * r_hat;
        let u_exit = line.us.last().unwrap() + (exit - *line.pts.last().unwrap()).norm();
        let (_, t2_exit) = solve(u_exit)?;
        let alpha_exit = (p0 - exit).angle() - t2_exit;
        line.push(exit, alpha_exit);
        s += step;
    }
    Ok(line.pts)
}
