//! The `asd` command-line tool.
//!
//! Every command writes its primary output atomically, then a
//! `<out>.manifest.json` recording the resolved configuration. Passing that
//! manifest back through `--config` replays the run bit for bit.
//!
//! Exit codes: 0 success, 2 validation or configuration error, 3 I/O error,
//! 4 internal invariant breach.

mod args;
mod plot;

use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Parser;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

pub use args::*;

use crate::controlled::{
    deploy_controlled, deploy_controlled_parallel, deploy_sector, sector_densities,
};
use crate::density::{
    asd_pdf_estimate, expected_bin_count, point_extent, sector_density_check, union_bounds,
    DensityReport, HistogramGrid,
};
use crate::deployment::{read_points_csv, Deployment, SectorTag};
use crate::error::Error;
use crate::geometry::{Bounds, Point2D, RingSector, MEMBERSHIP_TOLERANCE};
use crate::plan::load_plan;
use crate::reference::VALIDATION_CASES;
use crate::rng::SeededRng;
use crate::uncontrolled::{deploy_auto, AutoConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::Io(_)) => 3,
            CliError::Core(_) | CliError::Usage(_) => 2,
            CliError::Invariant(_) => 4,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(Error::Io(e))
    }
}

type CliResult<T> = Result<T, CliError>;

/// Prefixes an I/O error with the path involved.
fn with_path(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())).into()
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cmd: Command) -> CliResult<()> {
    match cmd {
        Command::SampleRing(a) => sample_ring(a),
        Command::DeployControlled(a) => deploy_controlled_cmd(a),
        Command::DeployAuto(a) => deploy_auto_cmd(a),
        Command::Density(a) => density_cmd(a),
        Command::Report(a) => report_cmd(a),
        Command::Plot(a) => plot_cmd(a),
    }
}

macro_rules! overlay {
    ($cli:ident, $file:ident; $($field:ident),+ $(,)?) => {
        $( if $cli.$field.is_none() { $cli.$field = $file.$field.take(); } )+
    };
}

/// Reads a config file. A run manifest is accepted too, in which case its
/// `config` object is used.
fn load_config<T: DeserializeOwned + Default>(path: Option<&Path>) -> CliResult<T> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = std::fs::read_to_string(path).map_err(with_path(path))?;
    let mut value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    if value.get("command").is_some() {
        if let Some(cfg) = value.get_mut("config") {
            value = cfg.take();
        }
    }
    serde_json::from_value(value).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn required<T>(v: Option<T>, flag: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::Usage(format!("missing required value --{flag}")))
}

/// `dir/name.ext` -> `dir/name.<suffix>`.
fn sibling(out: &Path, suffix: &str) -> PathBuf {
    out.with_extension(suffix)
}

/// Writes via a temporary file in the destination directory and renames it
/// into place.
fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(with_path(path))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| with_path(path)(e.error))?;
    Ok(())
}

fn write_json(path: &Path, value: &impl Serialize) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    tool_version: &'static str,
    seed: Option<u64>,
    config: Value,
    inputs: Vec<String>,
    outputs: Vec<String>,
    wall_time_s: f64,
}

fn write_manifest(
    out: &Path,
    command: &str,
    seed: Option<u64>,
    config: &impl Serialize,
    inputs: &[&Path],
    outputs: &[&Path],
    started: Instant,
) -> CliResult<()> {
    let m = Manifest {
        command,
        tool_version: env!("CARGO_PKG_VERSION"),
        seed,
        config: serde_json::to_value(config).expect("serializable"),
        inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        wall_time_s: started.elapsed().as_secs_f64(),
    };
    write_json(&sibling(out, "manifest.json"), &m)
}

fn check_membership(dep: &Deployment) -> CliResult<()> {
    let bad = dep.membership_violations(MEMBERSHIP_TOLERANCE);
    if bad.is_empty() {
        Ok(())
    } else {
        Err(CliError::Invariant(format!(
            "{} generated points fall outside their sector (first index {})",
            bad.len(),
            bad[0]
        )))
    }
}

fn sample_ring(mut a: SampleRingArgs) -> CliResult<()> {
    let started = Instant::now();
    let mut file: SampleRingArgs = load_config(a.config.as_deref())?;
    overlay!(a, file; l1, l2, a1, a2, n, seed, out);
    let l1 = *a.l1.get_or_insert(0.0);
    let l2 = required(a.l2, "l2")?;
    let a1 = a.a1.get_or_insert(Angle(0.0)).0;
    let a2 = a.a2.get_or_insert(Angle(std::f64::consts::TAU)).0;
    let n = required(a.n, "n")?;
    let seed = *a.seed.get_or_insert(DEFAULT_SEED);
    let out = required(a.out.clone(), "out")?;
    if n < 1 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let sector = RingSector::new(l1, l2, a1, a2)?;

    let dep = deploy_sector(&sector, n as usize, seed);
    check_membership(&dep)?;
    let mut buf = Vec::new();
    dep.write_csv(&mut buf)?;
    write_atomic(&out, &buf)?;
    write_manifest(&out, "sample-ring", Some(seed), &a, &[], &[&out], started)?;
    println!(
        "wrote {n} points to {} (area {:.6}, density {:.6})",
        out.display(),
        sector.area(),
        n as f64 / sector.area()
    );
    Ok(())
}

fn deploy_controlled_cmd(mut a: DeployControlledArgs) -> CliResult<()> {
    let started = Instant::now();
    let mut file: DeployControlledArgs = load_config(a.config.as_deref())?;
    overlay!(a, file; plan, seed, out, summary, parallel);
    let plan_path = required(a.plan.clone(), "plan")?;
    let seed = *a.seed.get_or_insert(DEFAULT_SEED);
    let out = required(a.out.clone(), "out")?;
    let summary_path = a
        .summary
        .get_or_insert_with(|| sibling(&out, "summary.json"))
        .clone();
    let parallel = *a.parallel.get_or_insert(false);

    let text = std::fs::read_to_string(&plan_path).map_err(with_path(&plan_path))?;
    let plan = load_plan(&text)?;
    for w in plan.warnings() {
        eprintln!("warning: {w}");
    }
    let dep = if parallel {
        deploy_controlled_parallel(&plan, seed)?
    } else {
        deploy_controlled(&plan, seed)?
    };
    if dep.len() as u64 != plan.total_nodes() {
        return Err(CliError::Invariant(format!(
            "generated {} points for a {}-node plan",
            dep.len(),
            plan.total_nodes()
        )));
    }
    check_membership(&dep)?;

    let mut buf = Vec::new();
    dep.write_csv(&mut buf)?;
    write_atomic(&out, &buf)?;

    let densities = sector_densities(&plan)?;
    let sectors: Vec<Value> = dep
        .runs
        .iter()
        .zip(&densities)
        .map(|(r, rho)| {
            json!({
                "layer": r.tag.layer,
                "sector": r.tag.sector,
                "inner_radius": r.geometry.inner_radius(),
                "outer_radius": r.geometry.outer_radius(),
                "angle_lo": r.geometry.angle_lo(),
                "angle_hi": r.geometry.angle_hi(),
                "count": r.len,
                "area": r.geometry.area(),
                "density": rho,
            })
        })
        .collect();
    let summary = json!({
        "plan_hash": plan.identity_hash(),
        "seed": seed,
        "parallel": parallel,
        "total_nodes": dep.len(),
        "layers": plan.layer_count(),
        "total_sectors": plan.total_sectors(),
        "max_sectors_per_layer": plan.max_sectors_per_layer(),
        "widest_layer": plan.widest_layer(),
        "sectors": sectors,
        "warnings": plan.warnings(),
    });
    write_json(&summary_path, &summary)?;
    write_manifest(
        &out,
        "deploy-controlled",
        Some(seed),
        &a,
        &[&plan_path],
        &[&out, &summary_path],
        started,
    )?;
    println!(
        "wrote {} points in {} sectors to {}",
        dep.len(),
        dep.runs.len(),
        out.display()
    );
    Ok(())
}

fn deploy_auto_cmd(mut a: DeployAutoArgs) -> CliResult<()> {
    let started = Instant::now();
    let mut file: DeployAutoArgs = load_config(a.config.as_deref())?;
    overlay!(a, file; radius, max_layers, n, seed, out, summary);
    let radius = *a.radius.get_or_insert(1.0);
    let max_layers = required(a.max_layers, "max-layers")?;
    let n = required(a.n, "n")?;
    let seed = *a.seed.get_or_insert(DEFAULT_SEED);
    let out = required(a.out.clone(), "out")?;
    let summary_path = a
        .summary
        .get_or_insert_with(|| sibling(&out, "summary.json"))
        .clone();

    let cfg = AutoConfig::new(radius, max_layers, n)?;
    for w in cfg.warnings() {
        eprintln!("warning: {w}");
    }
    let real = deploy_auto(&cfg, seed)?;
    if real.deployment.len() as u64 != n {
        return Err(CliError::Invariant(format!(
            "generated {} points, expected {n}",
            real.deployment.len()
        )));
    }
    check_membership(&real.deployment)?;

    let mut buf = Vec::new();
    real.deployment.write_csv(&mut buf)?;
    write_atomic(&out, &buf)?;
    let summary = json!({
        "config": cfg,
        "seed": seed,
        "n_layers": real.layer_count,
        "radii": real.layer_radii,
        "widths": real.layer_widths(),
        "n_in": real.inner_nodes,
        "n_out": real.outer_nodes,
        "layer_counts": real.layer_counts(),
        "layer_densities": real.layer_densities(),
    });
    write_json(&summary_path, &summary)?;
    write_manifest(
        &out,
        "deploy-auto",
        Some(seed),
        &a,
        &[],
        &[&out, &summary_path],
        started,
    )?;
    println!(
        "wrote {n} points in {} layers to {}",
        real.layer_count,
        out.display()
    );
    Ok(())
}

fn density_cmd(mut a: DensityArgs) -> CliResult<()> {
    let started = Instant::now();
    let mut file: DensityArgs = load_config(a.config.as_deref())?;
    overlay!(a, file; points, bounds, bins, bins_x, bins_y, l1, l2, a1, a2, out, format, report);
    let points_path = required(a.points.clone(), "points")?;
    let out = required(a.out.clone(), "out")?;
    let format = *a.format.get_or_insert(GridFormat::Csv);
    let report_path = a
        .report
        .get_or_insert_with(|| sibling(&out, "report.json"))
        .clone();
    let bins = *a.bins.get_or_insert(500);
    let bins_x = *a.bins_x.get_or_insert(bins);
    let bins_y = *a.bins_y.get_or_insert(bins);

    let rows =
        read_points_csv(std::fs::File::open(&points_path).map_err(with_path(&points_path))?)?;
    if rows.is_empty() {
        return Err(CliError::Usage(format!(
            "{} contains no points",
            points_path.display()
        )));
    }

    let sector = match a.l2 {
        Some(l2) => Some(RingSector::new(
            a.l1.unwrap_or(0.0),
            l2,
            a.a1.map_or(0.0, |x| x.0),
            a.a2.map_or(std::f64::consts::TAU, |x| x.0),
        )?),
        None => None,
    };

    // group by tag, keeping first-appearance order
    let mut order: Vec<SectorTag> = Vec::new();
    let mut groups: HashMap<SectorTag, Vec<Point2D>> = HashMap::new();
    for (p, t) in &rows {
        groups
            .entry(*t)
            .or_insert_with(|| {
                order.push(*t);
                Vec::new()
            })
            .push(*p);
    }
    let sets: Vec<&[Point2D]> = order.iter().map(|t| groups[t].as_slice()).collect();

    let bounds = match (&a.bounds, &sector) {
        (Some(b), _) => Bounds::new(b[0], b[1], b[2], b[3])?,
        (None, Some(s)) => Bounds::square(s.outer_radius())?,
        (None, None) => {
            let b = union_bounds(sets.iter().filter_map(|s| point_extent(s)))
                .expect("non-empty point sets");
            b.check()?;
            b
        }
    };
    a.bounds = Some(vec![bounds.x_lo, bounds.x_hi, bounds.y_lo, bounds.y_hi]);

    let pdf = asd_pdf_estimate(&sets, bounds, bins_x, bins_y)?;
    let grid: &HistogramGrid = &pdf.grid;
    let total = rows.len() as u64;
    let analytical = match &sector {
        Some(s) => Some(expected_bin_count(total, grid.bin_area(), s.area())?),
        None => None,
    };
    let (empirical, n_xy) = crate::density::empirical_mean_density(grid)?;
    let report = match analytical {
        Some(h) => json!(DensityReport::from_grid(grid, h)?),
        None => json!({
            "analytical": null,
            "empirical": empirical,
            "n_xy": n_xy,
            "error_pct": null,
        }),
    };
    let mut report = report;
    let obj = report.as_object_mut().expect("object");
    obj.insert("total_points".into(), total.into());
    obj.insert("binned".into(), grid.binned().into());
    obj.insert("out_of_bounds".into(), grid.out_of_bounds().into());
    obj.insert("bins_x".into(), bins_x.into());
    obj.insert("bins_y".into(), bins_y.into());
    obj.insert("bounds".into(), json!(bounds));
    obj.insert("riemann_sum".into(), pdf.riemann_sum().into());

    match format {
        GridFormat::Csv => {
            let mut buf = Vec::new();
            pdf.write_csv(&mut buf)?;
            write_atomic(&out, &buf)?;
        }
        GridFormat::Json => write_json(&out, &pdf.to_json())?,
    }
    write_json(&report_path, &report)?;
    write_manifest(
        &out,
        "density",
        None,
        &a,
        &[&points_path],
        &[&out, &report_path],
        started,
    )?;
    println!(
        "binned {} of {total} points on {bins_x}x{bins_y}; occupied-bin mean {empirical:.4} over {n_xy} bins",
        grid.binned()
    );
    Ok(())
}

#[derive(Serialize)]
struct CaseRow {
    name: &'static str,
    inner_radius: f64,
    outer_radius: f64,
    angle_lo: f64,
    angle_hi: f64,
    area: f64,
    samples: u64,
    bins: usize,
    number_density: f64,
    analytical: f64,
    empirical: f64,
    n_xy: u64,
    error_pct: f64,
    reference: Value,
}

fn report_cmd(mut a: ReportArgs) -> CliResult<()> {
    let started = Instant::now();
    let mut file: ReportArgs = load_config(a.config.as_deref())?;
    overlay!(a, file; samples, bins, cases, seed, out);
    let seed = *a.seed.get_or_insert(DEFAULT_SEED);
    let out = required(a.out.clone(), "out")?;
    if let Some(names) = &a.cases {
        for n in names {
            if !VALIDATION_CASES.iter().any(|c| c.name == n) {
                let known: Vec<&str> = VALIDATION_CASES.iter().map(|c| c.name).collect();
                return Err(CliError::Usage(format!(
                    "unknown case {n:?}; known cases: {}",
                    known.join(", ")
                )));
            }
        }
    }
    let selected: Vec<(usize, _)> = VALIDATION_CASES
        .iter()
        .enumerate()
        .filter(|(_, c)| {
            a.cases
                .as_ref()
                .is_none_or(|names| names.iter().any(|n| n == c.name))
        })
        .collect();

    let rows: Vec<CaseRow> = selected
        .par_iter()
        .map(|&(k, c)| -> CliResult<CaseRow> {
            let sector = c.sector();
            let samples = a.samples.unwrap_or(c.samples);
            let bins = a.bins.unwrap_or(c.bins);
            let mut rng = SeededRng::substream(seed, k as u64);
            let (_, r) = sector_density_check(&sector, samples, bins, &mut rng)?;
            Ok(CaseRow {
                name: c.name,
                inner_radius: c.inner_radius,
                outer_radius: c.outer_radius,
                angle_lo: c.angle_lo,
                angle_hi: c.angle_hi,
                area: sector.area(),
                samples,
                bins,
                number_density: samples as f64 / sector.area(),
                analytical: r.analytical,
                empirical: r.empirical,
                n_xy: r.n_xy,
                error_pct: r.error_pct,
                reference: json!({
                    "area": c.reference_area,
                    "samples": c.samples,
                    "analytical": c.reference_analytical,
                    "simulation": c.reference_simulation,
                    "error_pct": c.reference_error_pct,
                }),
            })
        })
        .collect::<CliResult<_>>()?;

    println!(
        "{:<22} {:>8} {:>10} {:>5} {:>11} {:>11} {:>7}",
        "case", "area", "samples", "bins", "analytical", "simulated", "err %"
    );
    for r in &rows {
        println!(
            "{:<22} {:>8.4} {:>10} {:>5} {:>11.4} {:>11.4} {:>7.2}",
            r.name, r.area, r.samples, r.bins, r.analytical, r.empirical, r.error_pct
        );
    }
    write_json(&out, &json!({ "seed": seed, "cases": rows }))?;
    write_manifest(&out, "report", Some(seed), &a, &[], &[&out], started)?;
    Ok(())
}

fn plot_cmd(mut a: PlotArgs) -> CliResult<()> {
    let started = Instant::now();
    let mut file: PlotArgs = load_config(a.config.as_deref())?;
    overlay!(a, file; input, out, image);
    let input = required(a.input.clone(), "input")?;
    let out = required(a.out.clone(), "out")?;
    let image = a
        .image
        .get_or_insert_with(|| out.with_extension("png"))
        .clone();
    let script = plot::script_for(&input, &image)?;
    write_atomic(&out, script.as_bytes())?;
    write_manifest(&out, "plot", None, &a, &[&input], &[&out], started)?;
    println!("wrote plot script {}", out.display());
    Ok(())
}
