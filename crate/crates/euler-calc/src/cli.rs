//! The `euler-calc` command line.
//!
//! Every subcommand prints a short human summary, or a JSON document on
//! stdout with `--json`. Exit status is 0 on success, 2 when an argument or
//! input file is invalid and 1 when a computation or output write fails.

use std::ffi::OsString;
use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use euler_calculus::complex::io::{FunctionJson, Raster};
use euler_calculus::complex::{CellComplex, ConstructibleFunction};
use euler_calculus::integrate::{count_targets, integrate_by_excursions, integrate_by_level_sets, integrate_cf};
use euler_calculus::network::{
    delaunay_complex, dual_levels, estimate_network_dual, estimate_triangulated, harmonic_fill, hole_bounds,
    naive_network_estimate, smooth_and_integrate_network, HoleJson, NetworkError,
};
use euler_calculus::realval::{integrate, integrate_by_index, parse_pl_function, Measure};
use euler_calculus::scene::{add_noise, sample_network, simulate_vehicle_counts, NetworkSample, Scene, Trajectory};
use euler_calculus::transforms::{
    bessel_exact_field, bessel_transform, convolve, deconvolve_convex, fourier_exact_field, fourier_field,
    fredholm_transform, radon_invert, wavelet_transform, EvalGrid, FredholmKernel, StepFunction, WaveletWindow,
};

use crate::svg;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

fn invalid(e: impl Display) -> CliError {
    CliError::Invalid(e.to_string())
}

impl From<NetworkError> for CliError {
    fn from(e: NetworkError) -> Self {
        match e {
            NetworkError::NotConverged(_) => CliError::Runtime(e.to_string()),
            e => invalid(e),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "euler-calc",
    version,
    about = "Euler calculus toolkit: integration, estimation and integral transforms"
)]
pub struct Cli {
    /// Print machine-readable JSON on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Euler integral of a constructible function (function JSON or PGM raster).
    Integrate {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = IntegrationMethod::Cells)]
        method: IntegrationMethod,
        /// Also report the target count for supports of this Euler characteristic.
        #[arg(long)]
        support_chi: Option<i64>,
    },
    /// Real-valued integral of a piecewise-linear function.
    Rint {
        input: PathBuf,
        #[arg(long, default_value = "floor")]
        measure: Measure,
        /// Evaluate through the stratified Morse index instead of cell sums.
        #[arg(long)]
        by_index: bool,
    },
    /// Synthesize scenes, network samples and vehicle traces.
    Scene {
        #[command(subcommand)]
        action: SceneCommand,
    },
    /// Estimate the integral from sampled data.
    Estimate {
        #[command(subcommand)]
        action: EstimateCommand,
    },
    /// Integral bounds and harmonic fill over a coverage hole.
    Hole {
        #[command(subcommand)]
        action: HoleCommand,
    },
    /// Kernel-smoothed ⌊dχ⌋ estimate of a network against the naive one.
    Smooth {
        #[arg(long, value_parser = positive_f64)]
        radius: f64,
        network: PathBuf,
    },
    /// Euler integral transforms.
    Transform {
        #[command(subcommand)]
        action: TransformCommand,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IntegrationMethod {
    Cells,
    Levels,
    Excursions,
}

#[derive(Debug, Subcommand)]
pub enum SceneCommand {
    /// Counting function of a scene on a pixel grid.
    Rasterize {
        scene: PathBuf,
        #[arg(long, default_value_t = 512, value_parser = positive_usize)]
        resolution: usize,
        /// Write the pixel counts as a plain PGM.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Random network sample of a scene.
    Sample {
        scene: PathBuf,
        #[arg(long, default_value_t = 2000, value_parser = positive_usize)]
        nodes: usize,
        #[arg(long, value_parser = positive_f64)]
        comm_radius: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fraction of nodes perturbed by ±1.
        #[arg(long)]
        noise: Option<f64>,
        #[arg(long, default_value_t = 1)]
        noise_seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Vehicle-count function of timestamped trajectories and its integral.
    Vehicles {
        /// `{"domain":[x0,y0,x1,y1],"trajectories":[{"path":[[x,y,t],...],"footprint_radius":r},...]}`
        traces: PathBuf,
        #[arg(long, default_value_t = 256, value_parser = positive_usize)]
        resolution: usize,
        #[arg(long, default_value_t = 1e-3, value_parser = positive_f64)]
        dt: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum EstimateCommand {
    /// Planar duality estimator on a network sample.
    Dual {
        network: PathBuf,
        /// Reference field: PGM raster, function JSON or scene JSON.
        #[arg(long)]
        truth: Option<PathBuf>,
        /// Resolution used when the reference is a scene.
        #[arg(long, default_value_t = 512, value_parser = positive_usize)]
        resolution: usize,
    },
    /// Triangulation estimator on a mesh with vertex readings.
    Triangulated {
        /// `{"vertices":[[x,y],...],"triangles":[[a,b,c],...],"readings":[...]}`;
        /// without triangles the vertices are Delaunay-triangulated.
        mesh: PathBuf,
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long, default_value_t = 512, value_parser = positive_usize)]
        resolution: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum HoleCommand {
    /// Lower and upper integrals over fillings without strict extrema.
    Bounds { raster: PathBuf, hole: PathBuf },
    /// ⌊dχ⌋ integral of the harmonic extension over the hole.
    Harmonic {
        raster: PathBuf,
        hole: PathBuf,
        #[arg(long, default_value_t = 1e-10, value_parser = positive_f64)]
        tolerance: f64,
        #[arg(long, default_value_t = 200_000, value_parser = positive_usize)]
        max_iters: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum TransformCommand {
    /// Bessel transform of a scene over an evaluation grid.
    Bessel {
        scene: PathBuf,
        #[arg(long, default_value_t = 64, value_parser = positive_usize)]
        nx: usize,
        #[arg(long, default_value_t = 64, value_parser = positive_usize)]
        ny: usize,
        /// Evaluation rectangle `x0,y0,x1,y1`; defaults to the scene domain.
        #[arg(long, value_delimiter = ',', num_args = 4)]
        bounds: Option<Vec<f64>>,
        /// Radial quadrature step; exact integration when omitted.
        #[arg(long, value_parser = positive_f64)]
        r_step: Option<f64>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Fourier transform of a scene over evenly spaced directions.
    Fourier {
        scene: PathBuf,
        #[arg(long, default_value_t = 360, value_parser = positive_usize)]
        directions: usize,
        #[arg(long, value_parser = positive_f64)]
        r_step: Option<f64>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Euler–Haar wavelet coefficients of a step function.
    Wavelet {
        /// `{"axes":[[b0,b1,...],...],"values":[...]}`
        function: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        min_scale: i32,
        #[arg(long, allow_negative_numbers = true)]
        max_scale: i32,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        lo: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        hi: Vec<f64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Euler convolution of two grid functions, or deconvolution by a box.
    Convolve {
        f: PathBuf,
        g: PathBuf,
        /// Invert convolution by `g`, the indicator of a closed lattice box.
        #[arg(long)]
        deconvolve: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Fredholm transform by a kernel, optionally followed by inversion.
    Radon {
        kernel: PathBuf,
        /// JSON array with one integer per point of the kernel.
        values: PathBuf,
        /// Kernel of the inverting transform.
        #[arg(long, requires_all = ["mu", "lambda"])]
        inverse: Option<PathBuf>,
        #[arg(long, allow_negative_numbers = true)]
        mu: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        lambda: Option<i64>,
    },
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(_) => Err("must be positive and finite".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

/// Result of one command: the human summary and its JSON form.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    pub json: Value,
}

impl Report {
    fn new(text: impl Into<String>, json: Value) -> Self {
        Report { text: text.into(), json }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return e.exit_code();
        }
    };
    let json = cli.json;
    match execute(cli.command) {
        Ok(report) => {
            let written = if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report.json).expect("report serializes"))
            } else {
                writeln!(out, "{}", report.text)
            };
            if written.is_err() {
                return 1;
            }
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: Command) -> Result<Report, CliError> {
    match command {
        Command::Integrate { input, method, support_chi } => integrate_command(&input, method, support_chi),
        Command::Rint { input, measure, by_index } => rint_command(&input, measure, by_index),
        Command::Scene { action } => scene_command(action),
        Command::Estimate { action } => estimate_command(action),
        Command::Hole { action } => hole_command(action),
        Command::Smooth { radius, network } => smooth_command(&network, radius),
        Command::Transform { action } => transform_command(action),
        Command::Serve { port, host } => serve_command(&host, port),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn load_scene(path: &Path) -> Result<Scene, CliError> {
    Scene::from_json(&read(path)?).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn load_network(path: &Path) -> Result<NetworkSample, CliError> {
    NetworkSample::from_json(&read(path)?).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

/// A PGM raster (unit pixels at the origin) or a function JSON.
fn load_function(path: &Path) -> Result<ConstructibleFunction, CliError> {
    let text = read(path)?;
    let context = |e: &dyn Display| CliError::Invalid(format!("{}: {e}", path.display()));
    if text.trim_start().starts_with("P2") {
        let raster = Raster::parse_pgm(&text).map_err(|e| context(&e))?;
        return Ok(raster.to_function(1.0, [0.0, 0.0]));
    }
    serde_json::from_str::<FunctionJson>(&text).map_err(|e| context(&e))?.build().map_err(|e| context(&e))
}

/// A reference field: raster, function JSON, or a scene rasterized at
/// `resolution`.
fn load_truth(path: &Path, resolution: usize) -> Result<i64, CliError> {
    let text = read(path)?;
    if !text.trim_start().starts_with("P2") {
        if let Ok(v) = serde_json::from_str::<Value>(&text) {
            if v.get("domain").is_some() {
                let scene = load_scene(path)?;
                return Ok(integrate_cf(&scene.rasterize_counting_function(resolution)).get());
            }
        }
    }
    Ok(integrate_cf(&load_function(path)?).get())
}

fn integrate_command(input: &Path, method: IntegrationMethod, support_chi: Option<i64>) -> Result<Report, CliError> {
    let h = load_function(input)?;
    let value = match method {
        IntegrationMethod::Cells => integrate_cf(&h),
        IntegrationMethod::Levels => integrate_by_level_sets(&h),
        IntegrationMethod::Excursions => integrate_by_excursions(&h),
    }
    .get();
    let Some(chi) = support_chi else {
        return Ok(Report::new(value.to_string(), json!({ "integral": value })));
    };
    let count = count_targets(&h, chi).map_err(invalid)?;
    let count_text = if *count.denom() == 1 { count.numer().to_string() } else { count.to_string() };
    Ok(Report::new(
        format!("{value}\ntargets: {count_text}"),
        json!({ "integral": value, "support_chi": chi, "targets": [count.numer(), count.denom()] }),
    ))
}

fn rint_command(input: &Path, measure: Measure, by_index: bool) -> Result<Report, CliError> {
    let h = parse_pl_function(&read(input)?).map_err(|e| CliError::Invalid(format!("{}: {e}", input.display())))?;
    let value = if by_index { integrate_by_index(&h, measure) } else { integrate(&h, measure) }.map_err(invalid)?;
    Ok(Report::new(value.to_string(), json!({ "measure": measure, "integral": value })))
}

#[derive(Debug, Deserialize)]
struct VehicleTraces {
    domain: [f64; 4],
    trajectories: Vec<Trajectory>,
}

fn scene_command(action: SceneCommand) -> Result<Report, CliError> {
    match action {
        SceneCommand::Rasterize { scene, resolution, output } => {
            let scene = load_scene(&scene)?;
            let h = scene.rasterize_counting_function(resolution);
            let raster = Raster::from_function(&h).expect("scene raster is a grid");
            if let Some(path) = &output {
                write(path, &raster.to_pgm())?;
            }
            let value = integrate_cf(&h).get();
            Ok(Report::new(
                format!("{value}"),
                json!({ "integral": value, "width": raster.width, "height": raster.height, "shapes": scene.shapes.len() }),
            ))
        }
        SceneCommand::Sample { scene, nodes, comm_radius, seed, noise, noise_seed, output } => {
            let scene = load_scene(&scene)?;
            let mut sample = sample_network(&scene, nodes, comm_radius, seed).map_err(invalid)?;
            if let Some(fraction) = noise {
                sample = add_noise(&sample, fraction, noise_seed).map_err(invalid)?;
            }
            let text = sample.to_json();
            if let Some(path) = &output {
                write(path, &text)?;
            }
            let summary = json!({ "nodes": sample.num_nodes(), "edges": sample.edges.len() });
            Ok(Report::new(
                match output {
                    Some(_) => format!("{} nodes, {} edges", sample.num_nodes(), sample.edges.len()),
                    None => text,
                },
                summary,
            ))
        }
        SceneCommand::Vehicles { traces, resolution, dt, output } => {
            let traces: VehicleTraces = parse_json(&traces)?;
            let h = simulate_vehicle_counts(&traces.trajectories, traces.domain, resolution, dt).map_err(invalid)?;
            if let Some(path) = &output {
                write(path, &Raster::from_function(&h).expect("grid").to_pgm())?;
            }
            let value = integrate_cf(&h).get();
            Ok(Report::new(value.to_string(), json!({ "vehicles": value, "trajectories": traces.trajectories.len() })))
        }
    }
}

#[derive(Debug, Deserialize)]
struct MeshJson {
    vertices: Vec<[f64; 2]>,
    #[serde(default)]
    triangles: Option<Vec<[usize; 3]>>,
    readings: Vec<i64>,
}

fn mesh_complex(mesh: &MeshJson) -> Result<CellComplex, CliError> {
    match &mesh.triangles {
        None => Ok(delaunay_complex(&mesh.vertices)?),
        Some(tris) => {
            let coords = mesh.vertices.iter().map(|p| [p[0], p[1], 0.0]).collect();
            let tops: Vec<Vec<usize>> = tris.iter().map(|t| t.to_vec()).collect();
            CellComplex::simplicial_from_top(Some(coords), &tops).map_err(invalid)
        }
    }
}

fn with_truth(estimate: i64, truth: Option<i64>, label: &str, mut json: Value) -> Report {
    let mut text = format!("{label}: {estimate}");
    if let Some(t) = truth {
        text.push_str(&format!("\ntruth: {t}\nmatch: {}", estimate == t));
        json["truth"] = json!(t);
        json["match"] = json!(estimate == t);
    }
    Report::new(text, json)
}

fn estimate_command(action: EstimateCommand) -> Result<Report, CliError> {
    match action {
        EstimateCommand::Dual { network, truth, resolution } => {
            let sample = load_network(&network)?;
            let levels = dual_levels(&sample)?;
            let estimate = estimate_network_dual(&sample)?.get();
            let truth = truth.map(|p| load_truth(&p, resolution)).transpose()?;
            Ok(with_truth(estimate, truth, "estimate", json!({ "estimate": estimate, "per_level_beta0": levels })))
        }
        EstimateCommand::Triangulated { mesh, truth, resolution } => {
            let mesh: MeshJson = parse_json(&mesh)?;
            let cx = Arc::new(mesh_complex(&mesh)?);
            let estimate = estimate_triangulated(&mesh.readings, &cx)?.get();
            let truth = truth.map(|p| load_truth(&p, resolution)).transpose()?;
            Ok(with_truth(estimate, truth, "estimate", json!({ "estimate": estimate })))
        }
    }
}

fn load_hole(
    raster: &Path,
    hole: &Path,
) -> Result<(ConstructibleFunction, euler_calculus::network::HoleSpec), CliError> {
    let h = load_function(raster)?;
    let spec: HoleJson = parse_json(hole)?;
    let hole = spec.build(h.complex())?;
    Ok((h, hole))
}

fn hole_command(action: HoleCommand) -> Result<Report, CliError> {
    match action {
        HoleCommand::Bounds { raster, hole } => {
            let (h, hole) = load_hole(&raster, &hole)?;
            let b = hole_bounds(&h, &hole)?;
            Ok(Report::new(format!("lower: {}\nupper: {}", b.lower, b.upper), json!(b)))
        }
        HoleCommand::Harmonic { raster, hole, tolerance, max_iters } => {
            let (h, hole) = load_hole(&raster, &hole)?;
            let fill = harmonic_fill(&h, &hole, tolerance, max_iters)?;
            let value = fill.integral_floor();
            let extrema = fill.strict_interior_extrema().len();
            Ok(Report::new(
                format!("integral: {value}\niterations: {}\nstrict interior extrema: {extrema}", fill.iterations),
                json!({ "integral_floor": value, "iterations": fill.iterations, "strict_interior_extrema": extrema }),
            ))
        }
    }
}

fn smooth_command(network: &Path, radius: f64) -> Result<Report, CliError> {
    let sample = load_network(network)?;
    let naive = naive_network_estimate(&sample)?;
    let smoothed = smooth_and_integrate_network(&sample, radius)?;
    Ok(Report::new(
        format!("naive: {naive}\nsmoothed: {smoothed}"),
        json!({ "radius": radius, "naive": naive, "smoothed": smoothed }),
    ))
}

fn transform_command(action: TransformCommand) -> Result<Report, CliError> {
    match action {
        TransformCommand::Bessel { scene, nx, ny, bounds, r_step, csv, svg } => {
            let scene = load_scene(&scene)?;
            let bounds = match bounds {
                Some(b) => [b[0], b[1], b[2], b[3]],
                None => scene.domain,
            };
            let grid = EvalGrid::new(bounds, nx, ny).map_err(invalid)?;
            let field = match r_step {
                Some(step) => bessel_transform(&scene, &grid, step).map_err(invalid)?,
                None => bessel_exact_field(&scene, &grid),
            };
            if let Some(path) = &csv {
                write(path, &field.to_csv())?;
            }
            if let Some(path) = &svg {
                write(path, &svg::heatmap(&field, "Bessel transform"))?;
            }
            let minima: Vec<[f64; 2]> = field.local_minima().into_iter().map(|(ix, iy)| grid.point(ix, iy)).collect();
            let text = if csv.is_none() && svg.is_none() {
                field.to_csv().trim_end().to_string()
            } else {
                format!("{nx}x{ny} field, {} local minima", minima.len())
            };
            Ok(Report::new(text, json!({ "field": field, "local_minima": minima })))
        }
        TransformCommand::Fourier { scene, directions, r_step, csv } => {
            let scene = load_scene(&scene)?;
            let values = match r_step {
                Some(step) => fourier_field(&scene, directions, step).map_err(invalid)?,
                None => fourier_exact_field(&scene, directions).map_err(invalid)?,
            };
            let mut table = String::from("angle,value\n");
            for (a, v) in &values {
                table.push_str(&format!("{a},{v}\n"));
            }
            if let Some(path) = &csv {
                write(path, &table)?;
            }
            let text = match csv {
                Some(_) => format!("{directions} directions"),
                None => table.trim_end().to_string(),
            };
            let rows: Vec<Value> = values.iter().map(|(a, v)| json!({ "angle": a, "value": v })).collect();
            Ok(Report::new(text, json!({ "directions": rows })))
        }
        TransformCommand::Wavelet { function, min_scale, max_scale, lo, hi, output } => {
            let f: StepFunction = parse_json(&function)?;
            let window = WaveletWindow::new(min_scale, max_scale, lo, hi).map_err(invalid)?;
            let coeffs = wavelet_transform(&f, &window).map_err(invalid)?;
            let doc = serde_json::to_value(&coeffs).expect("coefficients serialize");
            if let Some(path) = &output {
                write(path, &doc.to_string())?;
            }
            let mut text = format!("{} nonzero coefficients", coeffs.entries.len());
            for (k, v) in &coeffs.entries {
                text.push_str(&format!("\np={:?} s={:?} t={:?}: {v}", k.p, k.s, k.t));
            }
            Ok(Report::new(text, json!({ "coefficients": doc })))
        }
        TransformCommand::Convolve { f, g, deconvolve, output } => {
            let (f, g) = (load_function(&f)?, load_function(&g)?);
            let result = if deconvolve { deconvolve_convex(&f, &g) } else { convolve(&f, &g) }.map_err(invalid)?;
            let doc = serde_json::to_value(FunctionJson::from_function(&result)).expect("function serializes");
            if let Some(path) = &output {
                write(path, &doc.to_string())?;
            }
            let value = integrate_cf(&result).get();
            Ok(Report::new(
                format!("integral: {value}\ncells: {}", result.values().len()),
                json!({ "integral": value, "function": doc }),
            ))
        }
        TransformCommand::Radon { kernel, values, inverse, mu, lambda } => {
            let kernel = FredholmKernel::from_json(&read(&kernel)?).map_err(invalid)?;
            let h: Vec<i64> = parse_json(&values)?;
            let transformed = fredholm_transform(&h, &kernel).map_err(invalid)?;
            let mut text = format!("transform: {:?}", transformed.values());
            let mut doc = json!({ "transform": transformed.values() });
            if let (Some(path), Some(mu), Some(lambda)) = (inverse, mu, lambda) {
                let inverse = FredholmKernel::from_json(&read(&path)?).map_err(invalid)?;
                let recovered = radon_invert(&transformed, &kernel, &inverse, mu, lambda).map_err(invalid)?;
                text.push_str(&format!("\nrecovered: {recovered:?}\nexact: {}", recovered == h));
                doc["recovered"] = json!(recovered);
                doc["exact"] = json!(recovered == h);
            }
            Ok(Report::new(text, doc))
        }
    }
}

fn serve_command(host: &str, port: u16) -> Result<Report, CliError> {
    let addr: std::net::SocketAddr =
        format!("{host}:{port}").parse().map_err(|e| CliError::Invalid(format!("bad address {host}:{port}: {e}")))?;
    let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::Runtime(e.to_string()))?;
    runtime.block_on(crate::service::serve(addr)).map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok(Report::new("server stopped", json!({ "stopped": true })))
}
