//! Config-driven command-line front end.
//!
//! A scenario config is a JSON document; lengths are in wavelengths and
//! angles in degrees. See the README for the schema.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use log::{info, warn};
use rayon::prelude::*;
use serde::Deserialize;

use crate::aperture::{Aperture, CurvePiece, Point};
use crate::error::{Error, Result};
use crate::operator::{build_truncated_operator, CMatrix, OperatorOptions, TruncatedOperator, DEFAULT_ORDER_OFFSET};
use crate::pas::{doppler_spectrum, DopplerSpec, PasModel};
use crate::specfun::truncation_order;
use crate::spectrum::{
    correct_omega, discrete_correlation, discrete_diversity, discrete_spectrum, diversity_measure_of, log_bounds,
    max_pairwise_distance, nystrom_oracle, solve_spectrum, NystromOptions,
};

#[derive(Debug, Parser)]
#[command(name = "divspec", version, about = "Diversity spectra of spatial fading correlation on planar apertures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalue spectrum of one scenario.
    Spectrum(RunArgs),
    /// Diversity measure over the sweep range of a scenario.
    Sweep(RunArgs),
    /// Doppler spectrum of the scenario's PAS.
    Doppler(RunArgs),
    /// Write a matplotlib script that renders a CSV produced by this tool.
    Plot(PlotArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Output CSV; overrides `output_path` from the config. Defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write G and R̃ next to the output as `<stem>.gram.csv` and `<stem>.rtilde.csv`.
    #[arg(long)]
    pub dump_matrices: bool,
    /// Append Nyström-oracle values for cross-checking.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(long)]
    pub csv: PathBuf,
    /// One of: spectrum, sweep, doppler.
    #[arg(long)]
    pub kind: String,
    /// Script path; defaults to the CSV path with a `.py` extension.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PieceSpec {
    Line { from: Point, to: Point },
    Arc { center: Point, radius: f64, start_deg: f64, end_deg: f64 },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ApertureSpec {
    Segment {
        length: f64,
        #[serde(default)]
        orientation_deg: f64,
        #[serde(default)]
        center: Point,
    },
    Circle {
        radius: f64,
    },
    Disk {
        radius: f64,
    },
    Rectangle {
        width: f64,
        height: f64,
        #[serde(default)]
        rotation_deg: f64,
        #[serde(default)]
        center: Point,
    },
    PiecewiseCurve {
        pieces: Vec<PieceSpec>,
    },
    ParallelLines {
        lines: usize,
        length: f64,
        span: f64,
        #[serde(default)]
        orientation_deg: f64,
        #[serde(default)]
        center: Point,
    },
    DiscreteArray {
        #[serde(default)]
        positions: Option<Vec<Point>>,
        /// Two-column CSV `x,y`, relative to the config file.
        #[serde(default)]
        positions_csv: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PasSpec {
    Isotropic,
    Uniform {
        delta_deg: f64,
        #[serde(default)]
        alpha0_deg: f64,
    },
    VonMises {
        kappa: f64,
        #[serde(default)]
        alpha0_deg: f64,
    },
    Tabulated {
        /// Two-column CSV `alpha_deg,density`, relative to the config file.
        table: PathBuf,
        #[serde(default)]
        alpha0_deg: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    Radius,
    Length,
    Direction,
    Antennas,
    Doppler,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub kind: SweepKind,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub aperture: ApertureSpec,
    pub pas: PasSpec,
    #[serde(default)]
    pub n_override: Option<usize>,
    #[serde(default)]
    pub quadrature_order: Option<usize>,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
    /// Maximal Doppler frequency for the `doppler` command and sweep.
    #[serde(default)]
    pub nu_max: Option<f64>,
}

/// A scenario with its file location, used to resolve relative paths.
#[derive(Debug, Clone)]
pub struct LoadedScenario {
    pub scenario: Scenario,
    pub base_dir: PathBuf,
}

fn config_err(context: &str, e: impl std::fmt::Display) -> Error {
    Error::Config(format!("{context}: {e}"))
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io { path: path.display().to_string(), source }
}

pub fn parse_scenario(text: &str, origin: &str) -> Result<Scenario> {
    serde_json::from_str(text).map_err(|e| config_err(origin, e))
}

pub fn load_scenario(path: &Path) -> Result<LoadedScenario> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let scenario = parse_scenario(&text, &path.display().to_string())?;
    let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(LoadedScenario { scenario, base_dir })
}

fn read_pairs(path: &Path) -> Result<Vec<(f64, f64)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| config_err(&path.display().to_string(), e))?;
    let mut out = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| config_err(&path.display().to_string(), e))?;
        if rec.len() != 2 {
            return Err(config_err(&path.display().to_string(), format!("row {} must have 2 columns", i + 1)));
        }
        match (rec[0].parse::<f64>(), rec[1].parse::<f64>()) {
            (Ok(a), Ok(b)) => out.push((a, b)),
            // header row
            _ if i == 0 => continue,
            _ => return Err(config_err(&path.display().to_string(), format!("row {} is not numeric", i + 1))),
        }
    }
    Ok(out)
}

fn field<T>(r: Result<T>, name: &str) -> Result<T> {
    r.map_err(|e| Error::Config(format!("{name}: {e}")))
}

impl LoadedScenario {
    pub fn aperture(&self) -> Result<Aperture> {
        use ApertureSpec as A;
        let a = match &self.scenario.aperture {
            A::Segment { length, orientation_deg, center } => {
                Aperture::segment(*length, orientation_deg.to_radians(), *center)
            }
            A::Circle { radius } => Aperture::circle(*radius),
            A::Disk { radius } => Aperture::disk(*radius),
            A::Rectangle { width, height, rotation_deg, center } => {
                Aperture::rectangle(*width, *height, *center, rotation_deg.to_radians())
            }
            A::PiecewiseCurve { pieces } => Aperture::piecewise_curve(
                pieces
                    .iter()
                    .map(|p| match *p {
                        PieceSpec::Line { from, to } => CurvePiece::Line { from, to },
                        PieceSpec::Arc { center, radius, start_deg, end_deg } => {
                            CurvePiece::Arc { center, radius, start: start_deg.to_radians(), end: end_deg.to_radians() }
                        }
                    })
                    .collect(),
            ),
            A::ParallelLines { lines, length, span, orientation_deg, center } => {
                Aperture::parallel_lines(*lines, *length, *span, orientation_deg.to_radians(), *center)
            }
            A::DiscreteArray { positions, positions_csv } => {
                let pts = match (positions, positions_csv) {
                    (Some(p), None) => p.clone(),
                    (None, Some(path)) => {
                        read_pairs(&self.base_dir.join(path))?.into_iter().map(|(x, y)| [x, y]).collect()
                    }
                    _ => {
                        return Err(Error::Config(
                            "aperture: discrete_array needs exactly one of `positions` or `positions_csv`".into(),
                        ))
                    }
                };
                Aperture::discrete_array(pts)
            }
        };
        field(a, "aperture")
    }

    pub fn pas(&self) -> Result<PasModel> {
        let m = match &self.scenario.pas {
            PasSpec::Isotropic => Ok(PasModel::isotropic()),
            PasSpec::Uniform { delta_deg, alpha0_deg } => {
                PasModel::uniform(delta_deg.to_radians(), alpha0_deg.to_radians())
            }
            PasSpec::VonMises { kappa, alpha0_deg } => PasModel::von_mises(*kappa, alpha0_deg.to_radians()),
            PasSpec::Tabulated { table, alpha0_deg } => {
                let rows = read_pairs(&self.base_dir.join(table))?;
                let samples: Vec<(f64, f64)> = rows.into_iter().map(|(a, s)| (a.to_radians(), s)).collect();
                PasModel::tabulated(&samples, alpha0_deg.to_radians())
            }
        };
        field(m, "pas")
    }

    pub fn operator_options(&self) -> OperatorOptions {
        OperatorOptions {
            n: self.scenario.n_override,
            quadrature_order: self.scenario.quadrature_order,
            skip_convergence_check: false,
        }
    }

    pub fn doppler_spec(&self) -> Result<DopplerSpec> {
        field(DopplerSpec::new(self.scenario.nu_max.unwrap_or(1.0)), "nu_max")
    }

    fn sweep_spec(&self) -> Result<&SweepSpec> {
        let s = self.scenario.sweep.as_ref().ok_or_else(|| Error::Config("missing field `sweep`".into()))?;
        if s.steps < 2 {
            return Err(Error::Config(format!("sweep.steps must be >= 2, got {}", s.steps)));
        }
        if !(s.start < s.stop) {
            return Err(Error::Config(format!("sweep.start ({}) must be < sweep.stop ({})", s.start, s.stop)));
        }
        Ok(s)
    }
}

/// 17 significant digits, `.` decimal separator.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn linspace(start: f64, stop: f64, steps: usize) -> Vec<f64> {
    let h = (stop - start) / (steps - 1) as f64;
    (0..steps).map(|k| if k + 1 == steps { stop } else { start + h * k as f64 }).collect()
}

/// Default kernel order for a discrete array with the given positions.
pub fn discrete_kernel_order(positions: &[Point], n_override: Option<usize>) -> usize {
    n_override.unwrap_or(truncation_order(max_pairwise_distance(positions)) + DEFAULT_ORDER_OFFSET)
}

fn array_positions(a: &Aperture) -> &[Point] {
    match a {
        Aperture::DiscreteArray { positions } => positions,
        _ => unreachable!("caller checked for a discrete array"),
    }
}

fn omega_from_nystrom(a: &Aperture, m: &PasModel) -> Result<f64> {
    diversity_measure_of(&nystrom_oracle(a, m, NystromOptions::default())?.eigenvalues)
}

/// `spectrum` command body: CSV text and, for continuous apertures, the operator.
pub fn run_spectrum(sc: &LoadedScenario, oracle: bool) -> Result<(String, Option<TruncatedOperator>)> {
    let aperture = sc.aperture()?;
    let model = sc.pas()?;
    let mut out = String::new();
    let (values, op, nystrom) = if aperture.is_discrete() {
        let pos = array_positions(&aperture);
        let n = discrete_kernel_order(pos, sc.scenario.n_override);
        let r = discrete_correlation(pos, &model, n)?;
        let omega = discrete_diversity(&r)?;
        writeln!(out, "# L={}", pos.len()).unwrap();
        writeln!(out, "# N={n}").unwrap();
        writeln!(out, "# N_D={}", truncation_order(max_pairwise_distance(pos))).unwrap();
        writeln!(out, "# r1={}", fmt_f64(aperture.enclosing_radius())).unwrap();
        writeln!(out, "# rho_max={}", fmt_f64(model.rho_max())).unwrap();
        writeln!(out, "# omega={}", fmt_f64(omega)).unwrap();
        info!(
            "discrete array: L = {}, kernel N = {n}, entry error bound = {:.3e}",
            pos.len(),
            0.2 * (-(DEFAULT_ORDER_OFFSET as f64)).exp()
        );
        if oracle {
            warn!("the Nystrom oracle does not apply to discrete arrays; column left empty");
        }
        (discrete_spectrum(&r)?, None, None)
    } else {
        let op = build_truncated_operator(&aperture, &model, sc.operator_options())?;
        let spec = solve_spectrum(&op)?;
        log_bounds("spectrum", &spec);
        for (k, v) in [
            ("N", spec.n.to_string()),
            ("N_D", spec.n_d.to_string()),
            ("r1", fmt_f64(spec.r1)),
            ("rho_max", fmt_f64(spec.rho_max)),
            ("eig_error_bound", fmt_f64(spec.eig_error_bound)),
            ("omega", fmt_f64(spec.omega)),
            ("hs_error_bound", fmt_f64(spec.hs_error_bound)),
            ("trace", fmt_f64(spec.trace)),
            ("gram_trace", fmt_f64(spec.gram_trace)),
        ] {
            writeln!(out, "# {k}={v}").unwrap();
        }
        let nys =
            if oracle { Some(nystrom_oracle(&aperture, &model, NystromOptions::default())?.eigenvalues) } else { None };
        (spec.eigenvalues, Some(op), nys)
    };
    out.push_str(if oracle { "index,eigenvalue,cumulative,nystrom\n" } else { "index,eigenvalue,cumulative\n" });
    let mut cumulative = 0.0;
    for (i, v) in values.iter().enumerate() {
        cumulative += v;
        write!(out, "{},{},{}", i + 1, fmt_f64(*v), fmt_f64(cumulative)).unwrap();
        if oracle {
            out.push(',');
            if let Some(n) = nystrom.as_ref().and_then(|n| n.get(i)) {
                out.push_str(&fmt_f64(*n));
            }
        }
        out.push('\n');
    }
    Ok((out, op))
}

struct SweepRow {
    omega: f64,
    corrected: f64,
    error_bound: f64,
    nystrom: Option<f64>,
}

fn with_param(a: &Aperture, kind: SweepKind, p: f64) -> Result<Aperture> {
    let bad = || Error::Config(format!("sweep kind {kind:?} does not apply to this aperture kind"));

    match (kind, a) {
        (SweepKind::Radius, Aperture::Circle { .. }) => Aperture::circle(p),
        (SweepKind::Radius, Aperture::Disk { .. }) => Aperture::disk(p),
        (SweepKind::Length, Aperture::Segment { orientation, center, .. }) => {
            Aperture::segment(p, *orientation, *center)
        }
        (SweepKind::Length, Aperture::ParallelLines { lines, span, orientation, center, .. }) => {
            Aperture::parallel_lines(*lines, p, *span, *orientation, *center)
        }
        (SweepKind::Length, Aperture::Rectangle { height, center, rotation, .. }) => {
            Aperture::rectangle(p, *height, *center, *rotation)
        }
        (SweepKind::Direction, _) => Ok(a.clone()),
        _ => Err(bad()),
    }
}

fn continuous_point(a: &Aperture, m: &PasModel, opts: OperatorOptions, oracle: bool) -> Result<SweepRow> {
    let op = build_truncated_operator(a, m, opts)?;
    let spec = solve_spectrum(&op)?;
    log_bounds("sweep point", &spec);
    let (corrected, _) = correct_omega(spec.omega, spec.hs_error_bound)?;
    let nystrom = if oracle { Some(omega_from_nystrom(a, m)?) } else { None };
    Ok(SweepRow { omega: spec.omega, corrected, error_bound: corrected - spec.omega, nystrom })
}

/// `ω` of a discrete array and a first-order bound from the kernel
/// truncation error `δ = 0.2 e^{N_D − N}` on each off-diagonal entry.
fn discrete_point(pos: &[Point], m: &PasModel, n_override: Option<usize>) -> Result<SweepRow> {
    let n = discrete_kernel_order(pos, n_override);
    let nd = truncation_order(max_pairwise_distance(pos));
    let r = discrete_correlation(pos, m, n)?;
    let omega = discrete_diversity(&r)?;
    let delta = 0.2 * (nd as f64 - n as f64).exp();
    let l = pos.len() as f64;
    let fro: f64 = r.iter().map(|z| z.norm_sqr()).sum();
    let off_abs: f64 = r.iter().map(|z| z.norm()).sum::<f64>() - l;
    let slack = 2.0 * delta * off_abs + l * (l - 1.0) * delta * delta;
    let error_bound = if slack < fro { omega * slack / (fro - slack) } else { f64::INFINITY };
    info!("antennas L = {}: kernel N = {n}, N_D = {nd}, entry error bound = {delta:.3e}", pos.len());
    Ok(SweepRow { omega, corrected: omega, error_bound, nystrom: None })
}

/// `sweep` command body.
pub fn run_sweep(sc: &LoadedScenario, oracle: bool) -> Result<String> {
    let sweep = sc.sweep_spec()?;
    if sweep.kind == SweepKind::Doppler {
        return run_doppler_grid(sc, Some(sweep));
    }
    let aperture = sc.aperture()?;
    let model = sc.pas()?;
    let mut params = linspace(sweep.start, sweep.stop, sweep.steps);
    if sweep.kind == SweepKind::Antennas {
        for p in &mut params {
            *p = p.round();
        }
        params.dedup();
        if params.iter().any(|&p| p < 1.0) {
            return Err(Error::Config("antenna counts must be >= 1".into()));
        }
        if !matches!(aperture, Aperture::Circle { .. } | Aperture::Segment { .. }) {
            return Err(Error::Config("antennas sweep needs a circle or segment base aperture".into()));
        }
    } else if let Err(e @ Error::Config(_)) = with_param(&aperture, sweep.kind, params[0]) {
        // fail fast on kinds that do not fit the aperture
        return Err(e);
    }

    let rows: Vec<Result<SweepRow>> = params
        .par_iter()
        .map(|&p| -> Result<SweepRow> {
            match sweep.kind {
                SweepKind::Antennas => {
                    let pos = aperture.uniform_positions(p as usize)?;
                    discrete_point(&pos, &model, sc.scenario.n_override)
                }
                SweepKind::Direction => {
                    let m = model.with_center(p.to_radians())?;
                    if aperture.is_discrete() {
                        discrete_point(array_positions(&aperture), &m, sc.scenario.n_override)
                    } else {
                        continuous_point(&aperture, &m, sc.operator_options(), oracle)
                    }
                }
                _ => continuous_point(&with_param(&aperture, sweep.kind, p)?, &model, sc.operator_options(), oracle),
            }
        })
        .collect();

    let mut out = String::from(if oracle {
        "param,omega,omega_corrected,error_bound,nystrom_omega\n"
    } else {
        "param,omega,omega_corrected,error_bound\n"
    });
    for (p, row) in params.iter().zip(rows) {
        let param = if sweep.kind == SweepKind::Antennas { format!("{}", *p as usize) } else { fmt_f64(*p) };
        match row {
            Ok(r) => {
                write!(out, "{param},{},{},{}", fmt_f64(r.omega), fmt_f64(r.corrected), fmt_f64(r.error_bound))
                    .unwrap();
                if oracle {
                    out.push(',');
                    if let Some(n) = r.nystrom {
                        out.push_str(&fmt_f64(n));
                    }
                }
            }
            Err(e) => {
                warn!("sweep point {param} failed: {e}");
                write!(out, "{param},,,").unwrap();
                if oracle {
                    out.push(',');
                }
            }
        }
        out.push('\n');
    }
    Ok(out)
}

/// Default grid: `steps` interior points of `(−ν_max, ν_max)`.
const DOPPLER_DEFAULT_STEPS: usize = 201;

fn run_doppler_grid(sc: &LoadedScenario, sweep: Option<&SweepSpec>) -> Result<String> {
    let model = sc.pas()?;
    let spec = sc.doppler_spec()?;
    let nus = match sweep {
        Some(s) if s.kind == SweepKind::Doppler => linspace(s.start, s.stop, s.steps),
        _ => {
            let k = DOPPLER_DEFAULT_STEPS;
            (0..k).map(|i| spec.nu_max * (-1.0 + 2.0 * (i + 1) as f64 / (k + 1) as f64)).collect()
        }
    };
    let mut out = String::from("nu,S_doppler\n");
    for nu in nus {
        match doppler_spectrum(&model, spec, nu) {
            Ok(v) => writeln!(out, "{},{}", fmt_f64(nu), fmt_f64(v)).unwrap(),
            Err(e) => {
                warn!("Doppler point {nu} skipped: {e}");
                writeln!(out, "{},", fmt_f64(nu)).unwrap();
            }
        }
    }
    Ok(out)
}

/// `doppler` command body.
pub fn run_doppler(sc: &LoadedScenario) -> Result<String> {
    run_doppler_grid(sc, sc.scenario.sweep.as_ref())
}

/// `row,col,re,im` listing of a complex matrix.
pub fn matrix_csv(m: &CMatrix) -> String {
    let mut out = String::from("row,col,re,im\n");
    for i in 0..m.nrows() {
        for k in 0..m.ncols() {
            let z = m[(i, k)];
            writeln!(out, "{i},{k},{},{}", fmt_f64(z.re), fmt_f64(z.im)).unwrap();
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    Spectrum,
    Sweep,
    Doppler,
}

impl PlotKind {
    pub const NAMES: [&'static str; 3] = ["spectrum", "sweep", "doppler"];

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "spectrum" => Ok(PlotKind::Spectrum),
            "sweep" => Ok(PlotKind::Sweep),
            "doppler" => Ok(PlotKind::Doppler),
            _ => Err(Error::Config(format!("unknown plot kind `{s}`; valid kinds: {}", Self::NAMES.join(", ")))),
        }
    }

    fn header_prefix(self) -> &'static str {
        match self {
            PlotKind::Spectrum => "index,eigenvalue,cumulative",
            PlotKind::Sweep => "param,omega,omega_corrected,error_bound",
            PlotKind::Doppler => "nu,S_doppler",
        }
    }
}

/// Matplotlib script rendering `csv_path`: a log-scale stem plot for
/// spectra, line plots otherwise.
pub fn emit_plot_script(csv_path: &Path, kind: PlotKind) -> Result<String> {
    let text = fs::read_to_string(csv_path).map_err(|e| io_err(csv_path, e))?;
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap_or("");
    if !header.starts_with(kind.header_prefix()) {
        return Err(Error::Config(format!(
            "{}: expected header `{}`, found `{header}`",
            csv_path.display(),
            kind.header_prefix()
        )));
    }
    let path_literal = serde_json::to_string(&csv_path.display().to_string()).expect("string serializes");
    let body = match kind {
        PlotKind::Spectrum => {
            "x = [int(r[\"index\"]) for r in rows]\n\
             y = [float(r[\"eigenvalue\"]) for r in rows]\n\
             keep = [(a, b) for a, b in zip(x, y) if b > 0.0]\n\
             ax.stem([a for a, _ in keep], [b for _, b in keep], basefmt=\" \")\n\
             ax.set_yscale(\"log\")\n\
             ax.set_xlabel(\"index i\")\n\
             ax.set_ylabel(\"eigenvalue\")\n"
        }
        PlotKind::Sweep => {
            "x = [float(r[\"param\"]) for r in rows if r[\"omega\"]]\n\
             y = [float(r[\"omega\"]) for r in rows if r[\"omega\"]]\n\
             yc = [float(r[\"omega_corrected\"]) for r in rows if r[\"omega\"]]\n\
             ax.plot(x, y, \"-o\", label=\"omega\")\n\
             ax.plot(x, yc, \"--\", label=\"omega corrected\")\n\
             ax.set_xlabel(\"parameter\")\n\
             ax.set_ylabel(\"diversity measure\")\n\
             ax.legend()\n"
        }
        PlotKind::Doppler => {
            "x = [float(r[\"nu\"]) for r in rows if r[\"S_doppler\"]]\n\
             y = [float(r[\"S_doppler\"]) for r in rows if r[\"S_doppler\"]]\n\
             ax.plot(x, y, \"-\")\n\
             ax.set_xlabel(\"Doppler frequency\")\n\
             ax.set_ylabel(\"Doppler spectrum\")\n"
        }
    };
    Ok(format!(
        "import csv\n\
         import matplotlib.pyplot as plt\n\
         \n\
         path = {path_literal}\n\
         with open(path, newline=\"\") as fh:\n\
         \x20   rows = list(csv.DictReader(line for line in fh if not line.startswith(\"#\")))\n\
         \n\
         fig, ax = plt.subplots()\n\
         {body}\
         ax.grid(True, which=\"both\", alpha=0.3)\n\
         fig.tight_layout()\n\
         fig.savefig(path.rsplit(\".\", 1)[0] + \".png\", dpi=150)\n\
         plt.show()\n"
    ))
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| io_err(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn output_path(args: &RunArgs, sc: &LoadedScenario) -> Option<PathBuf> {
    args.out.clone().or_else(|| sc.scenario.output_path.as_ref().map(|p| sc.base_dir.join(p)))
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "divspec".into());
    path.with_file_name(format!("{stem}.{suffix}"))
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Spectrum(args) => {
            let sc = load_scenario(&args.config)?;
            let out = output_path(&args, &sc);
            let (csv, op) = run_spectrum(&sc, args.oracle)?;
            write_output(out.as_deref(), &csv)?;
            if args.dump_matrices {
                let base = out.ok_or_else(|| Error::Config("--dump-matrices needs --out or output_path".into()))?;
                match op {
                    Some(op) => {
                        for (suffix, m) in [("gram.csv", &op.gram), ("rtilde.csv", &op.rtilde)] {
                            let p = sibling(&base, suffix);
                            fs::write(&p, matrix_csv(m)).map_err(|e| io_err(&p, e))?;
                        }
                    }
                    None => warn!("discrete arrays have no G/R̃ matrices to dump"),
                }
            }
            Ok(())
        }
        Command::Sweep(args) => {
            let sc = load_scenario(&args.config)?;
            if args.dump_matrices {
                warn!("--dump-matrices is ignored by sweep");
            }
            let csv = run_sweep(&sc, args.oracle)?;
            write_output(output_path(&args, &sc).as_deref(), &csv)
        }
        Command::Doppler(args) => {
            let sc = load_scenario(&args.config)?;
            let csv = run_doppler(&sc)?;
            write_output(output_path(&args, &sc).as_deref(), &csv)
        }
        Command::Plot(args) => {
            let kind = PlotKind::parse(&args.kind)?;
            let script = emit_plot_script(&args.csv, kind)?;
            let out = args.out.unwrap_or_else(|| args.csv.with_extension("py"));
            fs::write(&out, script).map_err(|e| io_err(&out, e))
        }
    }
}
