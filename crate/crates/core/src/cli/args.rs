use std::f64::consts::TAU;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::plan::parse_angle;

/// Seed used when none is given on the command line or in a config file.
pub const DEFAULT_SEED: u64 = 20130;

/// Slack allowed above 2pi for angles typed with a few decimals
/// (`6.2832`); such values are snapped to exactly 2pi.
pub const FULL_TURN_SNAP: f64 = 1e-4;

#[derive(Debug, Parser)]
#[command(
    name = "asd",
    version,
    about = "Inhomogeneous random node deployment over circular cells"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample points uniformly inside one ring sector.
    SampleRing(SampleRingArgs),
    /// Deploy nodes following a network plan file.
    DeployControlled(DeployControlledArgs),
    /// Deploy nodes with a randomized layer layout.
    DeployAuto(DeployAutoArgs),
    /// Bin a points file into a density grid and report mean bin occupancy.
    Density(DensityArgs),
    /// Run the single-sector density validation cases.
    Report(ReportArgs),
    /// Emit a matplotlib script for a points or grid file.
    Plot(PlotArgs),
}

/// An angle in radians, also readable as a multiple of pi (`4pi/3`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Angle(pub f64);

impl FromStr for Angle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v = parse_angle(s).ok_or_else(|| format!("cannot read angle {s:?}"))?;
        Ok(Angle(snap_full_turn(v)))
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(Angle(snap_full_turn(v))),
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

pub fn snap_full_turn(v: f64) -> f64 {
    if v > TAU && v <= TAU + FULL_TURN_SNAP {
        TAU
    } else {
        v
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SampleRingArgs {
    /// JSON config file, or a run manifest to replay. Flags override it.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Inner radius. Defaults to 0.
    #[arg(long)]
    pub l1: Option<f64>,
    /// Outer radius.
    #[arg(long)]
    pub l2: Option<f64>,
    /// Lower angle (radians or k*pi/m form). Defaults to 0.
    #[arg(long)]
    pub a1: Option<Angle>,
    /// Upper angle (radians or k*pi/m form). Defaults to 2pi.
    #[arg(long)]
    pub a2: Option<Angle>,
    /// Number of points.
    #[arg(long)]
    pub n: Option<u64>,
    /// RNG seed. Defaults to 20130.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output points CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeployControlledArgs {
    /// JSON config file, or a run manifest to replay. Flags override it.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Plan file (JSON).
    #[arg(long)]
    pub plan: Option<PathBuf>,
    /// RNG seed. Defaults to 20130.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output points CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-sector summary JSON. Defaults to `<out>.summary.json`.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Generate sectors on independent sub-streams in parallel.
    #[arg(long)]
    pub parallel: Option<bool>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeployAutoArgs {
    /// JSON config file, or a run manifest to replay. Flags override it.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Cell radius. Defaults to 1.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Largest number of layers that may be drawn (>= 2).
    #[arg(long)]
    pub max_layers: Option<u32>,
    /// Total number of nodes.
    #[arg(long)]
    pub n: Option<u64>,
    /// RNG seed. Defaults to 20130.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output points CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Realization summary JSON. Defaults to `<out>.summary.json`.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DensityArgs {
    /// JSON config file, or a run manifest to replay. Flags override it.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Points CSV (`x,y,layer,sector`).
    #[arg(long)]
    pub points: Option<PathBuf>,
    /// Grid bounds as `x_lo,x_hi,y_lo,y_hi`.
    #[arg(long, value_delimiter = ',', num_args = 4)]
    pub bounds: Option<Vec<f64>>,
    /// Bins per axis. Defaults to 500.
    #[arg(long)]
    pub bins: Option<usize>,
    /// Bins along x (overrides --bins).
    #[arg(long)]
    pub bins_x: Option<usize>,
    /// Bins along y (overrides --bins).
    #[arg(long)]
    pub bins_y: Option<usize>,
    /// Inner radius of the sector the points were drawn from. With `--l2`
    /// this enables the analytical density. Defaults to 0.
    #[arg(long)]
    pub l1: Option<f64>,
    /// Outer radius of that sector. Also sets default bounds to `[-l2, l2]^2`.
    #[arg(long)]
    pub l2: Option<f64>,
    /// Lower angle of that sector. Defaults to 0.
    #[arg(long)]
    pub a1: Option<Angle>,
    /// Upper angle of that sector. Defaults to 2pi.
    #[arg(long)]
    pub a2: Option<Angle>,
    /// Grid output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Grid format. Defaults to csv.
    #[arg(long, value_enum)]
    pub format: Option<GridFormat>,
    /// Report JSON. Defaults to `<out>.report.json`.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReportArgs {
    /// JSON config file, or a run manifest to replay. Flags override it.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Sample count for every case (defaults to each case's own count).
    #[arg(long)]
    pub samples: Option<u64>,
    /// Bins per axis (defaults to each case's own count).
    #[arg(long)]
    pub bins: Option<usize>,
    /// Only run the named cases (repeatable).
    #[arg(long = "case")]
    pub cases: Option<Vec<String>>,
    /// RNG seed. Defaults to 20130.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlotArgs {
    /// JSON config file, or a run manifest to replay. Flags override it.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Points CSV or grid CSV.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Script to write.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Image file the script saves to. Defaults to `<out>` with `.png`.
    #[arg(long)]
    pub image: Option<PathBuf>,
}
