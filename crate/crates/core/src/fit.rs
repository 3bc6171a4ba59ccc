//! Signature fitting: search for a simple polygon whose fixed-radius area
//! signature matches a target.
//!
//! Candidate polygons are parameterized by truncated Fourier series for the
//! vertex coordinates, which keeps the search space small and the vertices
//! ordered. The misfit is the sum of squared differences between the
//! candidate's disk areas at its vertices and the target rows, paired by
//! index; coefficient vectors whose polygon fails validation score +inf, so
//! the search never leaves the feasible set (extreme barrier). Minimization
//! is a mesh-adaptive direct search with orthogonal poll directions derived
//! deterministically from a seed, polished coarse-to-fine over the harmonic
//! count with warm starts from the previous level.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::{Point2, Polygon, PolygonError};
use crate::invariant::Signature;
use crate::smooth;

const POLL_INIT: f64 = 0.25;
const POLL_CAP: f64 = 1.0;
const POLL_MIN: f64 = 1e-9;
/// Forcing constant for the sufficient-decrease acceptance rule: a candidate
/// is accepted only if it improves the incumbent by more than this fraction
/// of |value| scaled by the squared poll size. Simple decrease lets the
/// search random-walk across near-flat plateaus on noise-level improvements,
/// which destroys a warm start's geometry before it can be refined.
const SUFFICIENT_DECREASE: f64 = 0.1;
/// Poll candidates evaluated per parallel batch; acceptance scans batches in
/// direction order, so the outcome does not depend on thread scheduling.
const POLL_CHUNK: usize = 16;

#[derive(Debug, Error)]
pub enum FitError {
    #[error("coefficients do not produce a valid simple polygon: {0}")]
    Infeasible(#[from] PolygonError),
    #[error("no circle attains the target mean area {mean}; the map's range is (0, {sup})")]
    NoSolution { mean: f64, sup: f64 },
}

/// Truncated Fourier parameterization of an n-gon. Rows hold the x-cosine,
/// x-sine, y-cosine, and y-sine coefficients; column j drives the j-th
/// harmonic over one period of the closed curve, so column 0 is the fixed
/// offset (the shape center).
#[derive(Debug, Clone, PartialEq)]
pub struct FourierShape {
    pub coeffs: [Vec<f64>; 4],
    pub n: usize,
}

impl FourierShape {
    pub fn zeros(m: usize, n: usize) -> FourierShape {
        assert!(m >= 1 && n >= 3);
        FourierShape { coeffs: std::array::from_fn(|_| vec![0.0; m]), n }
    }

    /// Origin-centered circle: the radius sits in the first-harmonic
    /// x-cosine and y-sine slots.
    pub fn circle(radius: f64, n: usize) -> FourierShape {
        let mut shape = FourierShape::zeros(2, n);
        shape.coeffs[0][1] = radius;
        shape.coeffs[3][1] = radius;
        shape
    }

    /// Number of harmonic columns (the constant column included).
    pub fn m(&self) -> usize {
        self.coeffs[0].len()
    }

    /// Dimension of the coefficient vector seen by the search.
    pub fn dim(&self) -> usize {
        4 * self.m()
    }

    /// Vertex k at curve parameter k/n.
    pub fn vertex(&self, k: usize) -> Point2 {
        let sbar = k as f64 / self.n as f64;
        let (mut x, mut y) = (0.0, 0.0);
        for j in 0..self.m() {
            let phase = TAU * j as f64 * sbar;
            let (sin, cos) = phase.sin_cos();
            x += self.coeffs[0][j] * cos + self.coeffs[1][j] * sin;
            y += self.coeffs[2][j] * cos + self.coeffs[3][j] * sin;
        }
        Point2::new(x, y)
    }

    pub fn flatten(&self) -> Vec<f64> {
        self.coeffs.iter().flat_map(|row| row.iter().copied()).collect()
    }

    pub fn from_flat(n: usize, x: &[f64]) -> FourierShape {
        assert!(x.len() % 4 == 0 && !x.is_empty());
        let m = x.len() / 4;
        FourierShape {
            coeffs: std::array::from_fn(|i| x[i * m..(i + 1) * m].to_vec()),
            n,
        }
    }

    /// Same shape with the coefficient rows extended by zero columns.
    pub fn zero_padded(&self, m: usize) -> FourierShape {
        assert!(m >= self.m());
        let mut out = self.clone();
        for row in &mut out.coeffs {
            row.resize(m, 0.0);
        }
        out
    }
}

/// Materializes the parameterized vertices (k = 1..n) as a validated simple
/// polygon.
pub fn fourier_to_polygon(shape: &FourierShape) -> Result<Polygon, FitError> {
    let pts: Vec<Point2> = (1..=shape.n).map(|k| shape.vertex(k)).collect();
    Ok(Polygon::new(pts)?)
}

/// Sum of squared signature misfits: candidate vertex k against target row
/// k-1, both at the target's probe radius. Infeasible coefficients score
/// +inf so the barrier keeps the search inside the simple polygons.
pub fn objective(shape: &FourierShape, target: &Signature) -> f64 {
    assert_eq!(
        target.rows().len(),
        shape.n,
        "target must carry one row per candidate vertex"
    );
    let Ok(poly) = fourier_to_polygon(shape) else {
        return f64::INFINITY;
    };
    let r = target.r();
    target
        .rows()
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let d = poly.disk_area(shape.vertex(i + 1), r) - row.g;
            d * d
        })
        .sum()
}

/// Radius of the circle whose mean boundary disk area matches the target
/// mean, found by bisection on the monotone map R -> lens(R, r). Returns an
/// origin-centered circle shape with the target's row count.
pub fn best_fit_circle(target: &Signature) -> Result<FourierShape, FitError> {
    let rows = target.rows();
    assert!(!rows.is_empty(), "target signature must be nonempty");
    let mean = rows.iter().map(|row| row.g).sum::<f64>() / rows.len() as f64;
    let r = target.r();
    // A circle through the probe center leaves strictly less than half the
    // probe disk inside, approaching half as the boundary flattens.
    let sup = 0.5 * PI * r * r;
    if !(mean > 0.0 && mean < sup) {
        return Err(FitError::NoSolution { mean, sup });
    }
    let area_on_circle = |radius: f64| smooth::lens_area(radius, r, radius);
    let mut hi = r;
    while area_on_circle(hi) < mean {
        hi *= 2.0;
        if hi > 1e15 {
            return Err(FitError::NoSolution { mean, sup });
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if area_on_circle(mid) < mean {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(FourierShape::circle(0.5 * (lo + hi), rows.len()))
}

/// Search state after a direct-search run.
#[derive(Debug, Clone)]
pub struct MadsState {
    pub incumbent: FourierShape,
    pub incumbent_value: f64,
    pub mesh_size: f64,
    pub poll_size: f64,
    pub evaluation_count: usize,
    /// One row per iteration: (iteration, incumbent value, mesh size).
    pub history: Vec<(usize, f64, f64)>,
}

fn primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut candidate = 2u64;
    while out.len() < count {
        if out.iter().all(|&p| candidate % p != 0) {
            out.push(candidate);
        }
        candidate += 1;
    }
    out
}

fn radical_inverse(base: u64, mut i: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut x = 0.0;
    let mut scale = inv;
    while i > 0 {
        x += (i % base) as f64 * scale;
        i /= base;
        scale *= inv;
    }
    x
}

/// Orthonormal poll frame for one iteration: the columns of the Householder
/// reflector built from a Halton point, so the frame is deterministic in
/// (seed, iteration) and fresh across iterations.
fn poll_directions(dim: usize, seed: u64, iteration: u64) -> Vec<Vec<f64>> {
    let bases = primes(dim);
    let index = seed.wrapping_add(iteration).wrapping_add(1);
    let mut q: Vec<f64> =
        bases.iter().map(|&b| 2.0 * radical_inverse(b, index) - 1.0).collect();
    let norm = q.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm < 1e-12 {
        q = vec![0.0; dim];
        q[0] = 1.0;
    } else {
        for v in &mut q {
            *v /= norm;
        }
    }
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| (if i == j { 1.0 } else { 0.0 }) - 2.0 * q[i] * q[j])
                .collect()
        })
        .collect()
}

struct SearchOutcome {
    x: Vec<f64>,
    value: f64,
    poll_size: f64,
    evaluation_count: usize,
    history: Vec<(usize, f64, f64)>,
}

/// Mesh-adaptive direct search: poll the incumbent along +-poll_size times
/// an orthogonal frame, accept the first improvement in direction order,
/// double the poll size on success (capped) and halve it on failure, and
/// stop at the evaluation budget or when the poll size underflows. The mesh
/// size is tracked as poll_size^2.
fn direct_search(
    f: &(impl Fn(&[f64]) -> f64 + Sync),
    x0: Vec<f64>,
    budget: usize,
    seed: u64,
) -> SearchOutcome {
    assert!(budget > 0, "direct search needs a positive evaluation budget");
    let dim = x0.len();
    let mut x = x0;
    let mut value = f(&x);
    let mut evals = 1;
    let mut poll = POLL_INIT;
    let mut history = vec![(0, value, poll * poll)];
    let mut iteration = 0usize;
    while evals < budget && poll >= POLL_MIN {
        let frame = poll_directions(dim, seed, iteration as u64);
        let candidates: Vec<Vec<f64>> = frame
            .iter()
            .flat_map(|h| {
                let step = |sign: f64| {
                    x.iter().zip(h).map(|(xi, hi)| xi + sign * poll * hi).collect::<Vec<f64>>()
                };
                [step(1.0), step(-1.0)]
            })
            .collect();
        let mut improved = false;
        'poll: for chunk in candidates.chunks(POLL_CHUNK) {
            let take = chunk.len().min(budget - evals);
            if take == 0 {
                break;
            }
            let values: Vec<f64> = chunk[..take].par_iter().map(|c| f(c)).collect();
            evals += take;
            let margin = SUFFICIENT_DECREASE * poll * poll * value.abs();
            for (candidate, &v) in chunk[..take].iter().zip(&values) {
                if v < value - margin {
                    x = candidate.clone();
                    value = v;
                    improved = true;
                    break 'poll;
                }
            }
        }
        poll = if improved { (poll * 2.0).min(POLL_CAP) } else { 0.5 * poll };
        iteration += 1;
        history.push((iteration, value, poll * poll));
    }
    SearchOutcome { x, value, poll_size: poll, evaluation_count: evals, history }
}

/// Minimizes the signature misfit from `start` under the evaluation budget.
/// Deterministic for a fixed seed, including the parallel poll batches.
pub fn mads_solve(
    start: &FourierShape,
    target: &Signature,
    budget: usize,
    seed: u64,
) -> MadsState {
    let n = start.n;
    let f = move |x: &[f64]| objective(&FourierShape::from_flat(n, x), target);
    let out = direct_search(&f, start.flatten(), budget, seed);
    MadsState {
        incumbent: FourierShape::from_flat(n, &out.x),
        incumbent_value: out.value,
        mesh_size: out.poll_size * out.poll_size,
        poll_size: out.poll_size,
        evaluation_count: out.evaluation_count,
        history: out.history,
    }
}

/// Fits with an increasing harmonic count: level 1 starts from the best-fit
/// circle, and each later level warm-starts from the previous incumbent
/// zero-padded by one column. Returns the final state of every level;
/// incumbent values never increase across levels because each warm start
/// reproduces the previous polygon exactly.
pub fn coarse_to_fine_fit(
    target: &Signature,
    m_max: usize,
    budget_per_level: usize,
    seed: u64,
) -> Result<Vec<MadsState>, FitError> {
    assert!(m_max >= 1, "need at least one refinement level");
    let mut current = best_fit_circle(target)?;
    let mut states = Vec::with_capacity(m_max);
    for level in 1..=m_max {
        let start = current.zero_padded(level + 1);
        let state = mads_solve(&start, target, budget_per_level, seed + level as u64);
        current = state.incumbent.clone();
        states.push(state);
    }
    Ok(states)
}
