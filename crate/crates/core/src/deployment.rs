use std::io::{Read, Write};
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fmt::g17;
use crate::geometry::{Point2D, RingSector};
use crate::uncontrolled::AutoConfig;

/// 0-based (layer, sector) coordinates of a generated point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SectorTag {
    pub layer: u32,
    pub sector: u32,
}

/// A contiguous block of points generated inside one sector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SectorRun {
    pub tag: SectorTag,
    pub geometry: RingSector,
    pub start: usize,
    pub len: usize,
}

impl SectorRun {
    pub fn range(&self) -> Range<usize> {
        self.start..self.start + self.len
    }

    /// Realized number density (points per unit area).
    pub fn density(&self) -> f64 {
        self.len as f64 / self.geometry.area()
    }
}

/// What produced a deployment.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DeploymentSource {
    Sector,
    Plan { plan_hash: String },
    Auto { config: AutoConfig },
}

/// Generated points in generation order, with a sector tag per point.
#[derive(Clone, Debug, PartialEq)]
pub struct Deployment {
    pub points: Vec<Point2D>,
    pub tags: Vec<SectorTag>,
    pub runs: Vec<SectorRun>,
    pub seed: u64,
    pub source: DeploymentSource,
}

impl Deployment {
    pub(crate) fn with_capacity(n: usize, seed: u64, source: DeploymentSource) -> Self {
        Self {
            points: Vec::with_capacity(n),
            tags: Vec::with_capacity(n),
            runs: Vec::new(),
            seed,
            source,
        }
    }

    pub(crate) fn push_run(&mut self, tag: SectorTag, geometry: RingSector, points: Vec<Point2D>) {
        let start = self.points.len();
        self.runs.push(SectorRun {
            tag,
            geometry,
            start,
            len: points.len(),
        });
        self.tags.extend(std::iter::repeat_n(tag, points.len()));
        self.points.extend(points);
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn run_points(&self, run: &SectorRun) -> &[Point2D] {
        &self.points[run.range()]
    }

    /// Point sets split per sector, in generation order.
    pub fn per_sector_points(&self) -> Vec<(&SectorRun, &[Point2D])> {
        self.runs.iter().map(|r| (r, self.run_points(r))).collect()
    }

    pub fn run_counts(&self) -> Vec<usize> {
        self.runs.iter().map(|r| r.len).collect()
    }

    /// Indices of points falling outside their tagged sector by more than
    /// `tol`.
    pub fn membership_violations(&self, tol: f64) -> Vec<usize> {
        let mut bad = Vec::new();
        for run in &self.runs {
            for i in run.range() {
                if self.tags[i] != run.tag || !run.geometry.contains(self.points[i], tol) {
                    bad.push(i);
                }
            }
        }
        bad
    }

    /// Points CSV with header `x,y,layer,sector`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_points_csv(
            out,
            self.points.iter().copied().zip(self.tags.iter().copied()),
        )
    }
}

pub const POINTS_HEADER: [&str; 4] = ["x", "y", "layer", "sector"];

pub fn write_points_csv<W: Write>(
    out: W,
    rows: impl IntoIterator<Item = (Point2D, SectorTag)>,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(POINTS_HEADER).map_err(csv_err)?;
    for (p, t) in rows {
        w.write_record([
            g17(p.x),
            g17(p.y),
            t.layer.to_string(),
            t.sector.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a points CSV back. Fails on a wrong header or a malformed row.
pub fn read_points_csv<R: Read>(input: R) -> Result<Vec<(Point2D, SectorTag)>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers().map_err(csv_err)?.clone();
    if header.iter().ne(POINTS_HEADER) {
        return Err(Error::Config(format!(
            "points file must have header x,y,layer,sector, found {}",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut out = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let field = |k: usize| rec.get(k).unwrap_or("");
        let parse_f = |k: usize| -> Result<f64> {
            field(k)
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| {
                    Error::Config(format!(
                        "row {}: bad {} value {:?}",
                        line + 2,
                        POINTS_HEADER[k],
                        field(k)
                    ))
                })
        };
        let parse_u = |k: usize| -> Result<u32> {
            field(k).parse::<u32>().map_err(|_| {
                Error::Config(format!(
                    "row {}: bad {} value {:?}",
                    line + 2,
                    POINTS_HEADER[k],
                    field(k)
                ))
            })
        };
        out.push((
            Point2D::new(parse_f(0)?, parse_f(1)?),
            SectorTag {
                layer: parse_u(2)?,
                sector: parse_u(3)?,
            },
        ));
    }
    Ok(out)
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Config(format!("csv: {other:?}")),
    }
}
