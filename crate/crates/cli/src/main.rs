//! Command-line surface over the shapesig library: a small shape corpus,
//! signature sampling, graph-likeness checks, both reconstructions,
//! curvature tables, Fourier fits, and rigid alignment.
//!
//! Exit codes are scripting-stable: 0 success (and checks that pass),
//! 1 semantic failure (a check failed, nothing to reconstruct), 2 bad
//! input, 3 I/O or unreadable files. All randomness flows from --seed and
//! parallel evaluation is order-independent, so rerunning a command with
//! the same flags reproduces its CSV/JSON outputs byte for byte.

use std::f64::consts::PI;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use shapesig::curvature::{self, CurvatureError, WhichPoint};
use shapesig::fit;
use shapesig::fmt17;
use shapesig::geometry::{read_polygon_json, rigid_align, PolygonIoError};
use shapesig::graphlike;
use shapesig::invariant::{self, read_signature_csv, write_signature_csv, SigIoError, Signature};
use shapesig::reconstruct::{self, ReconstructError};
use shapesig::shapes::ShapeSpec;
use shapesig::smooth::{self, Circle, Ellipse, SmoothRegion};
use shapesig::svg::{overlay_svg, SvgShape};
use shapesig::{Point2, Polygon};

const EXIT_SEMANTIC: i32 = 1;
const EXIT_BAD_INPUT: i32 = 2;
const EXIT_IO: i32 = 3;

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn semantic(message: impl Into<String>) -> Failure {
        Failure { code: EXIT_SEMANTIC, message: message.into() }
    }

    fn bad_input(message: impl Into<String>) -> Failure {
        Failure { code: EXIT_BAD_INPUT, message: message.into() }
    }

    fn io(message: impl Into<String>) -> Failure {
        Failure { code: EXIT_IO, message: message.into() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::io(e.to_string())
    }
}

impl From<SigIoError> for Failure {
    fn from(e: SigIoError) -> Failure {
        match e {
            SigIoError::Invalid(_) => Failure::bad_input(e.to_string()),
            _ => Failure::io(e.to_string()),
        }
    }
}

impl From<PolygonIoError> for Failure {
    fn from(e: PolygonIoError) -> Failure {
        match e {
            PolygonIoError::Invalid(_) => Failure::bad_input(e.to_string()),
            _ => Failure::io(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

#[derive(Parser)]
#[command(
    name = "shapesig",
    version,
    about = "Disk-area signatures of planar shapes: compute, check, reconstruct, fit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the area signature of a shape at a fixed probe radius
    Signature(SignatureArgs),
    /// Check the two-arc and graph-like conditions at a probe radius
    Check(CheckArgs),
    /// Recover polygon sides and angles from a signature CSV
    ReconstructPoly(ReconstructPolyArgs),
    /// March a smooth boundary out of T-shaped data
    ReconstructTlike(ReconstructTlikeArgs),
    /// Tabulate boundary curvature estimated from area data
    Curvature(CurvatureArgs),
    /// Fit a Fourier-parameterized polygon to a target signature
    Fit(FitArgs),
    /// Print the rigid-alignment residual between two polygons
    Align(AlignArgs),
}

#[derive(Copy, Clone, ValueEnum)]
enum Kind {
    Circle,
    Ellipse,
    Star,
    RoundedSquare,
    RegularNgon,
    PolygonFile,
}

#[derive(Args)]
struct ShapeArgs {
    /// Shape family
    #[arg(long, value_enum)]
    kind: Kind,
    /// Circle radius, or circumradius of a regular n-gon
    #[arg(long, default_value_t = 1.0)]
    radius_param: f64,
    /// Ellipse semi-axis along x
    #[arg(long, default_value_t = 2.0)]
    a: f64,
    /// Ellipse semi-axis along y
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    /// Star base radius
    #[arg(long, default_value_t = 1.0)]
    base_radius: f64,
    /// Star lobe amplitude
    #[arg(long, default_value_t = 0.3)]
    amplitude: f64,
    /// Star lobe count
    #[arg(long, default_value_t = 4)]
    lobes: usize,
    /// Rounded square side length
    #[arg(long, default_value_t = 2.0)]
    side: f64,
    /// Rounded square corner radius
    #[arg(long, default_value_t = 0.3)]
    corner_radius: f64,
    /// Regular n-gon vertex count
    #[arg(long, default_value_t = 6)]
    ngon: usize,
    /// Regular n-gon phase of the first vertex, radians
    #[arg(long, default_value_t = 0.0)]
    phase: f64,
    /// Polygon JSON file, for --kind polygon-file
    #[arg(long)]
    file: Option<PathBuf>,
    /// Polyline density for parametric kinds
    #[arg(long, default_value_t = 4096)]
    resolution: usize,
}

enum SmoothKind {
    Circle(Circle),
    Ellipse(Ellipse),
}

impl SmoothKind {
    fn region(&self) -> &dyn SmoothRegion {
        match self {
            SmoothKind::Circle(c) => c,
            SmoothKind::Ellipse(e) => e,
        }
    }
}

struct LoadedShape {
    poly: Polygon,
    /// Corners are true vertices (polygon files, regular n-gons) rather than
    /// sampling artifacts; signature grids then visit every vertex as well.
    exact_vertices: bool,
    /// Analytic backend where one exists, for curvature estimates that
    /// differentiate the area map.
    smooth: Option<SmoothKind>,
}

impl ShapeArgs {
    fn load(&self) -> Result<LoadedShape, Failure> {
        let spec = match self.kind {
            Kind::Circle => ShapeSpec::Circle { radius: self.radius_param },
            Kind::Ellipse => ShapeSpec::Ellipse { a: self.a, b: self.b },
            Kind::Star => ShapeSpec::Star {
                base_radius: self.base_radius,
                amplitude: self.amplitude,
                lobes: self.lobes,
            },
            Kind::RoundedSquare => {
                ShapeSpec::RoundedSquare { side: self.side, corner_radius: self.corner_radius }
            }
            Kind::RegularNgon => ShapeSpec::RegularNgon {
                n: self.ngon,
                circumradius: self.radius_param,
                phase: self.phase,
            },
            Kind::PolygonFile => {
                let path = self
                    .file
                    .as_ref()
                    .ok_or_else(|| Failure::bad_input("--kind polygon-file needs --file"))?;
                let poly = read_polygon_json(path)?;
                return Ok(LoadedShape { poly, exact_vertices: true, smooth: None });
            }
        };
        let poly = spec
            .to_polyline(self.resolution)
            .map_err(|e| Failure::bad_input(format!("invalid shape: {e}")))?;
        let smooth = match self.kind {
            Kind::Circle => Some(SmoothKind::Circle(Circle { radius: self.radius_param })),
            Kind::Ellipse => Some(SmoothKind::Ellipse(Ellipse::new(self.a, self.b))),
            _ => None,
        };
        let exact_vertices = matches!(self.kind, Kind::RegularNgon);
        Ok(LoadedShape { poly, exact_vertices, smooth })
    }
}

fn require_positive(name: &str, v: f64) -> Result<(), Failure> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Failure::bad_input(format!("{name} must be positive, got {v}")))
    }
}

fn write_or_stdout(out: Option<&Path>, content: &str) -> CmdResult {
    match out {
        Some(path) => Ok(fs::write(path, content)?),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn open_reader(path: &Path) -> Result<BufReader<fs::File>, Failure> {
    Ok(BufReader::new(fs::File::open(path)?))
}

#[derive(Args)]
struct SignatureArgs {
    #[command(flatten)]
    shape: ShapeArgs,
    /// Probe radius
    #[arg(long)]
    r: f64,
    /// Uniform sample count along the boundary
    #[arg(long, default_value_t = 256)]
    n: usize,
    /// Output CSV path (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_signature(a: &SignatureArgs) -> CmdResult {
    require_positive("--r", a.r)?;
    if a.n == 0 {
        return Err(Failure::bad_input("--n must be at least 1"));
    }
    let shape = a.shape.load()?;
    let l = shape.poly.total_length();
    let mut samples: Vec<f64> = (0..a.n).map(|k| l * k as f64 / a.n as f64).collect();
    if shape.exact_vertices {
        samples.extend((0..shape.poly.n_vertices()).map(|i| shape.poly.vertex_s(i)));
    }
    let sig = invariant::signature(&shape.poly, a.r, &samples);
    let mut buf = Vec::new();
    write_signature_csv(&sig, &mut buf)?;
    write_or_stdout(a.out.as_deref(), std::str::from_utf8(&buf).unwrap())
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    shape: ShapeArgs,
    /// Probe radius
    #[arg(long)]
    r: f64,
    /// Fill sample count between vertices
    #[arg(long, default_value_t = 512)]
    n: usize,
    /// Report JSON path (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_check(a: &CheckArgs) -> CmdResult {
    require_positive("--r", a.r)?;
    let shape = a.shape.load()?;
    let report = graphlike::check_tcgl(&shape.poly, a.r, a.n);
    write_or_stdout(a.out.as_deref(), &report.to_json())?;
    if report.pass {
        Ok(())
    } else {
        Err(Failure::semantic(format!(
            "graph-like check failed at {} of {} samples",
            report.failures().count(),
            report.samples.len()
        )))
    }
}

#[derive(Args)]
struct ReconstructPolyArgs {
    /// Signature CSV path
    csv: PathBuf,
    /// Probe radius the table was sampled at (the CSV does not store it)
    #[arg(long)]
    r: f64,
    /// Boundary length (inferred from the sample grid if omitted)
    #[arg(long)]
    length: Option<f64>,
    /// Output JSON path (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional SVG of the recovered polygon
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Serialize)]
struct ReconstructionOut {
    side_lengths: Vec<f64>,
    interior_angles: Vec<f64>,
    exterior_angle_sum: f64,
    closure_residual: f64,
    vertices: Vec<[f64; 2]>,
}

fn cmd_reconstruct_poly(a: &ReconstructPolyArgs) -> CmdResult {
    require_positive("--r", a.r)?;
    let sig = read_signature_csv(a.r, a.length, open_reader(&a.csv)?)?;
    let rec = reconstruct::reconstruct_polygon(&sig)
        .map_err(|e| Failure::semantic(e.to_string()))?;
    let out = ReconstructionOut {
        side_lengths: rec.side_lengths.clone(),
        interior_angles: rec.interior_angles.clone(),
        exterior_angle_sum: rec.exterior_angle_sum(),
        closure_residual: rec.closure_residual,
        vertices: rec.vertices.iter().map(|v| [v.x, v.y]).collect(),
    };
    let json = serde_json::to_string_pretty(&out).expect("serializable") + "\n";
    write_or_stdout(a.out.as_deref(), &json)?;
    if let Some(svg_path) = &a.svg {
        let doc = overlay_svg(&[SvgShape::closed("reconstruction", rec.vertices.clone())]);
        fs::write(svg_path, doc)?;
    }
    Ok(())
}

#[derive(Args)]
struct ReconstructTlikeArgs {
    /// T-data CSV path
    csv: PathBuf,
    /// Arc-length march step
    #[arg(long)]
    step: f64,
    /// Optional SVG of the marched boundary
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Optional CSV of the marched points
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Largest gap between the marched points past one full lap and the start of
/// the curve they should retrace. Chord length along the polyline stands in
/// for arc length, matching the approximation inside the march itself.
fn lap_overlap_deviation(pts: &[Point2], origin_idx: usize, lap: f64) -> Option<f64> {
    let mut us = Vec::with_capacity(pts.len());
    us.push(0.0);
    for w in pts.windows(2) {
        us.push(us.last().unwrap() + (w[1] - w[0]).norm());
    }
    let shift = us[origin_idx];
    for u in &mut us {
        *u -= shift;
    }
    let mut worst: Option<f64> = None;
    for (i, &u) in us.iter().enumerate() {
        if u <= lap {
            continue;
        }
        let target = u - lap;
        let j = us.partition_point(|&v| v <= target).saturating_sub(1);
        if j + 1 >= us.len() {
            break;
        }
        let t = (target - us[j]) / (us[j + 1] - us[j]);
        let p = pts[j] + (pts[j + 1] - pts[j]) * t;
        let d = (pts[i] - p).norm();
        worst = Some(worst.map_or(d, |w: f64| w.max(d)));
    }
    worst
}

fn cmd_reconstruct_tlike(a: &ReconstructTlikeArgs) -> CmdResult {
    if !(a.step > 0.0) {
        return Err(Failure::bad_input(format!("--step must be positive, got {}", a.step)));
    }
    let data = reconstruct::read_tlike_csv(open_reader(&a.csv)?).map_err(|e| match e {
        ReconstructError::Parse(_) => Failure::io(e.to_string()),
        _ => Failure::bad_input(e.to_string()),
    })?;
    let pts = reconstruct::reconstruct_tlike(&data, a.step).map_err(|e| match e {
        ReconstructError::BadInput(_) => Failure::bad_input(e.to_string()),
        _ => Failure::semantic(e.to_string()),
    })?;
    let lap = data.length().expect("validated by the march");
    match lap_overlap_deviation(&pts, data.radial.len(), lap) {
        Some(d) => println!("marched {} points, max deviation {:.6e}", pts.len(), d),
        None => println!("marched {} points, no lap overlap", pts.len()),
    }
    if let Some(out) = &a.out {
        let mut csv = String::from("x,y\n");
        for p in &pts {
            csv.push_str(&format!("{},{}\n", fmt17(p.x), fmt17(p.y)));
        }
        fs::write(out, csv)?;
    }
    if let Some(svg_path) = &a.svg {
        let doc = overlay_svg(&[SvgShape::open("reconstruction", pts.clone())]);
        fs::write(svg_path, doc)?;
    }
    Ok(())
}

#[derive(Copy, Clone, ValueEnum)]
enum MethodArg {
    /// Small-radius limit of the normalized disk area
    SmallR,
    /// Third-order partials of the area map at the probe's crossing points
    ExitPoint,
}

#[derive(Args)]
struct CurvatureArgs {
    #[command(flatten)]
    shape: ShapeArgs,
    /// Arc position to estimate at (repeatable)
    #[arg(long)]
    s: Vec<f64>,
    /// Estimate at every vertex and edge midpoint (uniform --n grid for
    /// analytic shapes)
    #[arg(long)]
    all: bool,
    #[arg(long, value_enum)]
    method: MethodArg,
    /// Probe radius, for the exit-point method
    #[arg(long)]
    r: Option<f64>,
    /// Strictly descending radii for the small-radius limit
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.1, 0.05, 0.025])]
    radii: Vec<f64>,
    /// Sample count for --all on analytic shapes
    #[arg(long, default_value_t = 64)]
    n: usize,
    /// Output CSV path (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn curvature_error_tag(e: &CurvatureError) -> &'static str {
    match e {
        CurvatureError::VertexPoint { .. } => "VertexPoint",
        CurvatureError::BadRadii => "BadRadii",
        CurvatureError::SingularSystem { .. } => "SingularSystem",
        CurvatureError::MissingContactAngles => "MissingContactAngles",
    }
}

fn which_point_tag(w: WhichPoint) -> &'static str {
    match w {
        WhichPoint::Center => "center",
        WhichPoint::SPlus => "s_plus",
        WhichPoint::SMinus => "s_minus",
    }
}

fn cmd_curvature(a: &CurvatureArgs) -> CmdResult {
    let shape = a.shape.load()?;
    let arcs: Vec<f64> = if a.all {
        match &shape.smooth {
            Some(kind) => {
                let l = kind.region().total_length();
                (0..a.n.max(1)).map(|k| l * k as f64 / a.n.max(1) as f64).collect()
            }
            None => {
                let poly = &shape.poly;
                let n = poly.n_vertices();
                let mut arcs = Vec::with_capacity(2 * n);
                for i in 0..n {
                    let s0 = poly.vertex_s(i);
                    let s1 =
                        if i + 1 < n { poly.vertex_s(i + 1) } else { poly.total_length() };
                    arcs.push(s0);
                    arcs.push(0.5 * (s0 + s1));
                }
                arcs
            }
        }
    } else if a.s.is_empty() {
        return Err(Failure::bad_input("give at least one --s position, or --all"));
    } else {
        a.s.clone()
    };

    let mut csv = String::from("s,method,which_point,kappa\n");
    match a.method {
        MethodArg::SmallR => {
            let ok = a.radii.len() >= 3
                && a.radii.iter().all(|&r| r.is_finite() && r > 0.0)
                && a.radii.windows(2).all(|w| w[0] > w[1]);
            if !ok {
                return Err(Failure::bad_input(
                    "--radii needs at least three strictly descending positive values",
                ));
            }
            for &s in &arcs {
                let res = match &shape.smooth {
                    Some(kind) => curvature::curvature_small_r_smooth(kind.region(), s, &a.radii),
                    None => curvature::curvature_small_r(&shape.poly, s, &a.radii),
                };
                match res {
                    Ok(est) => csv.push_str(&format!(
                        "{},small_r_limit,{},{}\n",
                        fmt17(est.s),
                        which_point_tag(est.which_point),
                        fmt17(est.kappa)
                    )),
                    Err(e) => csv.push_str(&format!(
                        "{},small_r_limit,center,{}\n",
                        fmt17(s),
                        curvature_error_tag(&e)
                    )),
                }
            }
        }
        MethodArg::ExitPoint => {
            let Some(kind) = &shape.smooth else {
                return Err(Failure::bad_input(
                    "the exit-point method differentiates an analytic area map; \
                     use --kind circle or --kind ellipse",
                ));
            };
            let r = a.r.ok_or_else(|| Failure::bad_input("--r is required for exit-point"))?;
            require_positive("--r", r)?;
            let region = kind.region();
            let g = |s: f64, rr: f64| smooth::disk_area(region, region.point(region.t_of_s(s)), rr);
            for &s in &arcs {
                let frame = match smooth::frame_at(region, s, r) {
                    Ok(f) => f,
                    Err(_) => {
                        csv.push_str(&format!("{},exit_point,center,TwoArcViolation\n", fmt17(s)));
                        continue;
                    }
                };
                match curvature::exit_point_curvature_fd(g, &frame) {
                    Ok((exit, entry)) => {
                        for est in [exit, entry] {
                            csv.push_str(&format!(
                                "{},exit_point,{},{}\n",
                                fmt17(est.s),
                                which_point_tag(est.which_point),
                                fmt17(est.kappa)
                            ));
                        }
                    }
                    Err(e) => csv.push_str(&format!(
                        "{},exit_point,center,{}\n",
                        fmt17(s),
                        curvature_error_tag(&e)
                    )),
                }
            }
        }
    }
    write_or_stdout(a.out.as_deref(), &csv)
}

#[derive(Args)]
struct FitArgs {
    /// Target signature CSV
    csv: PathBuf,
    /// Fit configuration JSON: {"r": .., "N": .., "m_max": .., "budget_per_level": .., "seed": ..}
    config: PathBuf,
    /// Output directory
    #[arg(long)]
    out_dir: PathBuf,
    /// Optional true target polygon, drawn dashed into a shape overlay
    #[arg(long)]
    target_polygon: Option<PathBuf>,
}

#[derive(Deserialize)]
struct FitConfig {
    r: f64,
    #[serde(rename = "N")]
    n: usize,
    m_max: usize,
    budget_per_level: usize,
    seed: u64,
}

#[derive(Serialize)]
struct LevelOut {
    level: usize,
    m: usize,
    n: usize,
    value: f64,
    evaluations: usize,
    poll_size: f64,
    coeffs: Vec<Vec<f64>>,
}

/// Signature rows as a plot polyline: arc position on x, area scaled to a
/// quarter of the lap length on y so the two axes stay comparable.
fn signature_curve(sig: &Signature, y_scale: f64) -> Vec<Point2> {
    sig.rows().iter().map(|row| Point2::new(row.s, row.g * y_scale)).collect()
}

fn cmd_fit(a: &FitArgs) -> CmdResult {
    let text = fs::read_to_string(&a.config)?;
    let cfg: FitConfig = serde_json::from_str(&text)
        .map_err(|e| Failure::io(format!("unreadable fit config: {e}")))?;
    require_positive("config r", cfg.r)?;
    if cfg.n < 3 {
        return Err(Failure::bad_input(format!("config N must be at least 3, got {}", cfg.n)));
    }
    if cfg.m_max < 1 {
        return Err(Failure::bad_input("config m_max must be at least 1"));
    }
    if cfg.budget_per_level == 0 {
        return Err(Failure::bad_input("config budget_per_level must be positive"));
    }
    let target = read_signature_csv(cfg.r, None, open_reader(&a.csv)?)?;
    if target.rows().len() != cfg.n {
        return Err(Failure::bad_input(format!(
            "config N = {} but the target table has {} rows",
            cfg.n,
            target.rows().len()
        )));
    }
    fs::create_dir_all(&a.out_dir)?;

    let levels = fit::coarse_to_fine_fit(&target, cfg.m_max, cfg.budget_per_level, cfg.seed)
        .map_err(|e| Failure::semantic(e.to_string()))?;
    for (idx, state) in levels.iter().enumerate() {
        let level = idx + 1;
        let out = LevelOut {
            level,
            m: state.incumbent.m(),
            n: state.incumbent.n,
            value: state.incumbent_value,
            evaluations: state.evaluation_count,
            poll_size: state.poll_size,
            coeffs: state.incumbent.coeffs.iter().cloned().collect(),
        };
        let json = serde_json::to_string_pretty(&out).expect("serializable") + "\n";
        fs::write(a.out_dir.join(format!("level_{level:02}_coeffs.json")), json)?;
        println!(
            "level {level} m={} value={:.6e} evaluations={}",
            out.m, out.value, out.evaluations
        );
    }

    let last = levels.last().expect("at least one level");
    let poly = fit::fourier_to_polygon(&last.incumbent)
        .map_err(|e| Failure::semantic(format!("final incumbent is not a polygon: {e}")))?;
    let arcs: Vec<f64> = (0..poly.n_vertices()).map(|i| poly.vertex_s(i)).collect();
    let fit_sig = invariant::signature(&poly, cfg.r, &arcs);
    let mut buf = Vec::new();
    write_signature_csv(&fit_sig, &mut buf)?;
    fs::write(a.out_dir.join("fit_signature.csv"), buf)?;

    let y_scale = 0.25 * target.length() / (PI * cfg.r * cfg.r);
    let doc = overlay_svg(&[
        SvgShape::open("target signature", signature_curve(&target, y_scale)).dashed(),
        SvgShape::open("fit signature", signature_curve(&fit_sig, y_scale)),
    ]);
    fs::write(a.out_dir.join("fit_overlay.svg"), doc)?;

    if let Some(tp) = &a.target_polygon {
        let target_poly = read_polygon_json(tp)?;
        let doc = overlay_svg(&[
            SvgShape::closed("target", target_poly.vertices().to_vec()).dashed(),
            SvgShape::closed("fit", poly.vertices().to_vec()),
        ]);
        fs::write(a.out_dir.join("shape_overlay.svg"), doc)?;
    }

    let rms = (last.incumbent_value / cfg.n as f64).sqrt();
    println!("final objective {:.6e} rms misfit {:.6e}", last.incumbent_value, rms);
    Ok(())
}

#[derive(Args)]
struct AlignArgs {
    /// First polygon JSON
    a: PathBuf,
    /// Second polygon JSON
    b: PathBuf,
}

fn cmd_align(a: &AlignArgs) -> CmdResult {
    let pa = read_polygon_json(&a.a)?;
    let pb = read_polygon_json(&a.b)?;
    let alignment = rigid_align(&pa, &pb).map_err(|e| Failure::bad_input(e.to_string()))?;
    println!("{}", fmt17(alignment.rms));
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Signature(a) => cmd_signature(a),
        Command::Check(a) => cmd_check(a),
        Command::ReconstructPoly(a) => cmd_reconstruct_poly(a),
        Command::ReconstructTlike(a) => cmd_reconstruct_tlike(a),
        Command::Curvature(a) => cmd_curvature(a),
        Command::Fit(a) => cmd_fit(a),
        Command::Align(a) => cmd_align(a),
    };
    if let Err(f) = result {
        eprintln!("error: {}", f.message);
        std::process::exit(f.code);
    }
}
