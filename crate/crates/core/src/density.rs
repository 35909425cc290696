//! Bivariate histogram density estimation.
//!
//! A [`HistogramGrid`] bins points over a rectangle. From it we get the mean
//! occupancy of non-empty bins, which is compared against the closed-form
//! expectation for uniform placement, and the superposed-sector PDF
//! estimate `f = h / (n * dx * dy)`.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fmt::g17;
use crate::geometry::{Bounds, Point2D, RingSector};
use crate::rng::UniformSource;

/// Bin counts over `bounds`, `bins_x` columns by `bins_y` rows. Cells are
/// half-open `[edge, next_edge)`; points on the upper or right boundary go to
/// the last cell. Points outside `bounds` are tallied in `out_of_bounds`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HistogramGrid {
    bounds: Bounds,
    bins_x: usize,
    bins_y: usize,
    /// Index `i * bins_y + j` for column `i`, row `j`.
    counts: Vec<u64>,
    out_of_bounds: u64,
}

impl HistogramGrid {
    pub fn new(bounds: Bounds, bins_x: usize, bins_y: usize) -> Result<Self> {
        bounds.check()?;
        if bins_x == 0 || bins_y == 0 {
            return Err(Error::Density(format!(
                "resolution must be positive, got {bins_x} x {bins_y}"
            )));
        }
        Ok(Self {
            bounds,
            bins_x,
            bins_y,
            counts: vec![0; bins_x * bins_y],
            out_of_bounds: 0,
        })
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn bins_x(&self) -> usize {
        self.bins_x
    }

    pub fn bins_y(&self) -> usize {
        self.bins_y
    }

    pub fn bin_width_x(&self) -> f64 {
        (self.bounds.x_hi - self.bounds.x_lo) / self.bins_x as f64
    }

    pub fn bin_width_y(&self) -> f64 {
        (self.bounds.y_hi - self.bounds.y_lo) / self.bins_y as f64
    }

    pub fn bin_area(&self) -> f64 {
        self.bin_width_x() * self.bin_width_y()
    }

    /// Center of cell `(i, j)`, both 0-based.
    pub fn center(&self, i: usize, j: usize) -> Point2D {
        Point2D::new(
            self.bounds.x_lo + (i as f64 + 0.5) * self.bin_width_x(),
            self.bounds.y_lo + (j as f64 + 0.5) * self.bin_width_y(),
        )
    }

    pub fn count(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.bins_y + j]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn out_of_bounds(&self) -> u64 {
        self.out_of_bounds
    }

    /// Points that landed in a cell.
    pub fn binned(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn nonzero_bins(&self) -> u64 {
        self.counts.iter().filter(|&&c| c > 0).count() as u64
    }

    /// Cell index for `p`, or `None` outside the bounds.
    pub fn locate(&self, p: Point2D) -> Option<(usize, usize)> {
        if !self.bounds.contains(p) {
            return None;
        }
        let i = ((p.x - self.bounds.x_lo) / self.bin_width_x()).floor() as usize;
        let j = ((p.y - self.bounds.y_lo) / self.bin_width_y()).floor() as usize;
        Some((i.min(self.bins_x - 1), j.min(self.bins_y - 1)))
    }

    pub fn add(&mut self, p: Point2D) -> bool {
        match self.locate(p) {
            Some((i, j)) => {
                self.counts[i * self.bins_y + j] += 1;
                true
            }
            None => {
                self.out_of_bounds += 1;
                false
            }
        }
    }

    pub fn extend<I: IntoIterator<Item = Point2D>>(&mut self, points: I) {
        for p in points {
            self.add(p);
        }
    }

    /// Adds another grid of the same shape cell by cell.
    pub fn merge(&mut self, other: &HistogramGrid) -> Result<()> {
        if self.bounds != other.bounds || self.bins_x != other.bins_x || self.bins_y != other.bins_y
        {
            return Err(Error::Density(
                "cannot merge grids of different shape".into(),
            ));
        }
        self.add_counts(other);
        Ok(())
    }

    fn add_counts(&mut self, other: &HistogramGrid) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.out_of_bounds += other.out_of_bounds;
    }
}

const CHUNK: usize = 1 << 16;

/// Bins `points`. Large inputs are split across worker threads, each with a
/// private grid, and the grids are summed.
pub fn build_histogram(
    points: &[Point2D],
    bounds: Bounds,
    bins_x: usize,
    bins_y: usize,
) -> Result<HistogramGrid> {
    let empty = HistogramGrid::new(bounds, bins_x, bins_y)?;
    if points.len() <= CHUNK {
        let mut g = empty;
        g.extend(points.iter().copied());
        return Ok(g);
    }
    Ok(points
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut g = empty.clone();
            g.extend(chunk.iter().copied());
            g
        })
        .reduce(
            || empty.clone(),
            |mut a, b| {
                a.add_counts(&b);
                a
            },
        ))
}

/// Expected count in an occupied bin under uniform placement:
/// `n * bin_area / region_area`.
pub fn expected_bin_count(samples: u64, bin_area: f64, region_area: f64) -> Result<f64> {
    if !(region_area > 0.0 && bin_area > 0.0) {
        return Err(Error::Density(format!(
            "areas must be positive, got bin {bin_area}, region {region_area}"
        )));
    }
    Ok(samples as f64 * bin_area / region_area)
}

/// Expected count per occupied bin for a ring sector binned on its
/// `[-L2, L2]^2` square at `bins x bins`:
/// `8 n / (bins^2 (a2 - a1) (1 - (L1/L2)^2))`.
pub fn analytical_mean_density(sector: &RingSector, samples: u64, bins: usize) -> Result<f64> {
    if bins == 0 {
        return Err(Error::Density("bin count must be positive".into()));
    }
    let k = sector.inner_radius() / sector.outer_radius();
    let denom = (bins * bins) as f64 * sector.angular_span() * (1.0 - k * k);
    if denom.is_nan() || denom <= 0.0 {
        return Err(Error::Density("degenerate sector".into()));
    }
    Ok(8.0 * samples as f64 / denom)
}

/// Mean count over non-empty bins, and the number of such bins.
pub fn empirical_mean_density(grid: &HistogramGrid) -> Result<(f64, u64)> {
    let n_xy = grid.nonzero_bins();
    if n_xy == 0 {
        return Err(Error::Density("histogram has no occupied bins".into()));
    }
    Ok((grid.binned() as f64 / n_xy as f64, n_xy))
}

/// Relative deviation in percent.
pub fn density_error(analytical: f64, empirical: f64) -> Result<f64> {
    if analytical.is_nan() || analytical <= 0.0 {
        return Err(Error::Density(format!(
            "analytical density must be positive, got {analytical}"
        )));
    }
    Ok((empirical - analytical).abs() / analytical * 100.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DensityReport {
    pub analytical: f64,
    pub empirical: f64,
    pub n_xy: u64,
    pub error_pct: f64,
}

impl DensityReport {
    pub fn from_grid(grid: &HistogramGrid, analytical: f64) -> Result<Self> {
        let (empirical, n_xy) = empirical_mean_density(grid)?;
        Ok(Self {
            analytical,
            empirical,
            n_xy,
            error_pct: density_error(analytical, empirical)?,
        })
    }
}

/// Samples `samples` points uniformly in `sector` straight into a
/// `bins x bins` grid on `[-L2, L2]^2` and compares the occupied-bin mean
/// with the closed form. Points are not retained.
pub fn sector_density_check<R: UniformSource + ?Sized>(
    sector: &RingSector,
    samples: u64,
    bins: usize,
    rng: &mut R,
) -> Result<(HistogramGrid, DensityReport)> {
    let mut grid = HistogramGrid::new(Bounds::square(sector.outer_radius())?, bins, bins)?;
    for _ in 0..samples {
        grid.add(crate::geometry::sample_point(sector, rng));
    }
    let analytical = analytical_mean_density(sector, samples, bins)?;
    let report = DensityReport::from_grid(&grid, analytical)?;
    Ok((grid, report))
}

/// Gridded PDF estimate for a superposition of point sets.
#[derive(Clone, Debug, PartialEq)]
pub struct PdfGrid {
    pub grid: HistogramGrid,
    /// Total points across all sets, binned or not.
    pub total_points: u64,
}

impl PdfGrid {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.grid.count(i, j) as f64 / (self.total_points as f64 * self.grid.bin_area())
    }

    pub fn values(&self) -> Vec<f64> {
        let scale = 1.0 / (self.total_points as f64 * self.grid.bin_area());
        self.grid
            .counts()
            .iter()
            .map(|&c| c as f64 * scale)
            .collect()
    }

    /// `sum f * dx * dy`; equals the binned fraction of points.
    pub fn riemann_sum(&self) -> f64 {
        let a = self.grid.bin_area();
        self.values().iter().map(|v| v * a).sum()
    }

    /// CSV with header `i,j,x_center,y_center,count,pdf`, one row per cell,
    /// column-major (`i` outer).
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = std::io::BufWriter::new(out);
        writeln!(w, "{}", GRID_HEADER.join(","))?;
        let g = &self.grid;
        for i in 0..g.bins_x() {
            for j in 0..g.bins_y() {
                let c = g.center(i, j);
                writeln!(
                    w,
                    "{i},{j},{},{},{},{}",
                    g17(c.x),
                    g17(c.y),
                    g.count(i, j),
                    g17(self.value(i, j))
                )?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// JSON envelope with bounds and resolution metadata; `counts` and `pdf`
    /// are indexed `[i][j]`.
    pub fn to_json(&self) -> serde_json::Value {
        let g = &self.grid;
        let rows = |f: &dyn Fn(usize, usize) -> serde_json::Value| -> Vec<Vec<serde_json::Value>> {
            (0..g.bins_x())
                .map(|i| (0..g.bins_y()).map(|j| f(i, j)).collect())
                .collect()
        };
        serde_json::json!({
            "bounds": g.bounds(),
            "bins_x": g.bins_x(),
            "bins_y": g.bins_y(),
            "bin_width_x": g.bin_width_x(),
            "bin_width_y": g.bin_width_y(),
            "total_points": self.total_points,
            "out_of_bounds": g.out_of_bounds(),
            "counts": rows(&|i, j| g.count(i, j).into()),
            "pdf": rows(&|i, j| self.value(i, j).into()),
        })
    }
}

pub const GRID_HEADER: [&str; 6] = ["i", "j", "x_center", "y_center", "count", "pdf"];

/// Smallest box covering all the given boxes.
pub fn union_bounds<I: IntoIterator<Item = Bounds>>(boxes: I) -> Option<Bounds> {
    boxes.into_iter().reduce(|a, b| a.union(&b))
}

/// Extent of a point set, or `None` when empty.
pub fn point_extent(points: &[Point2D]) -> Option<Bounds> {
    let first = points.first()?;
    Some(points.iter().fold(
        Bounds {
            x_lo: first.x,
            x_hi: first.x,
            y_lo: first.y,
            y_hi: first.y,
        },
        |b, p| Bounds {
            x_lo: b.x_lo.min(p.x),
            x_hi: b.x_hi.max(p.x),
            y_lo: b.y_lo.min(p.y),
            y_hi: b.y_hi.max(p.y),
        },
    ))
}

/// PDF estimate over the superposition of per-sector point sets: each set is
/// binned on the common grid, the counts are summed, and every cell is
/// scaled by `1 / (n_total * dx * dy)`.
pub fn asd_pdf_estimate(
    sets: &[&[Point2D]],
    bounds: Bounds,
    bins_x: usize,
    bins_y: usize,
) -> Result<PdfGrid> {
    let total: usize = sets.iter().map(|s| s.len()).sum();
    if total == 0 {
        return Err(Error::Density("no points to estimate from".into()));
    }
    let mut grid = HistogramGrid::new(bounds, bins_x, bins_y)?;
    for set in sets {
        grid.merge(&build_histogram(set, bounds, bins_x, bins_y)?)?;
    }
    Ok(PdfGrid {
        grid,
        total_points: total as u64,
    })
}

/// [`asd_pdf_estimate`] over a deployment's sector runs, on the union of the
/// sectors' bounding boxes.
pub fn deployment_pdf(
    dep: &crate::deployment::Deployment,
    bins_x: usize,
    bins_y: usize,
) -> Result<PdfGrid> {
    let bounds = union_bounds(dep.runs.iter().map(|r| r.geometry.bounding_box()))
        .ok_or_else(|| Error::Density("deployment has no sectors".into()))?;
    let sets: Vec<&[Point2D]> = dep.runs.iter().map(|r| dep.run_points(r)).collect();
    asd_pdf_estimate(&sets, bounds, bins_x, bins_y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;
    use std::f64::consts::PI;

    fn unit_square() -> Bounds {
        Bounds::new(0.0, 2.0, 0.0, 2.0).unwrap()
    }

    #[test]
    fn centers_of_two_by_two() {
        let pts = [
            Point2D::new(0.5, 0.5),
            Point2D::new(1.5, 0.5),
            Point2D::new(0.5, 1.5),
            Point2D::new(1.5, 1.5),
        ];
        let g = build_histogram(&pts, unit_square(), 2, 2).unwrap();
        assert_eq!(g.counts(), &[1, 1, 1, 1]);
        assert_eq!(g.center(1, 0), Point2D::new(1.5, 0.5));
    }

    #[test]
    fn upper_edge_goes_to_last_bin() {
        let mut g = HistogramGrid::new(unit_square(), 2, 2).unwrap();
        assert!(g.add(Point2D::new(2.0, 2.0)));
        assert_eq!(g.count(1, 1), 1);
        assert!(g.add(Point2D::new(1.0, 0.0)));
        assert_eq!(g.count(1, 0), 1);
        assert!(!g.add(Point2D::new(2.0000001, 1.0)));
        assert!(!g.add(Point2D::new(-1e-300, 1.0)));
        assert_eq!(g.out_of_bounds(), 2);
        assert_eq!(g.binned(), 2);
    }

    #[test]
    fn bad_grids() {
        assert!(HistogramGrid::new(
            Bounds {
                x_lo: 1.0,
                x_hi: 1.0,
                y_lo: 0.0,
                y_hi: 1.0
            },
            2,
            2
        )
        .is_err());
        assert!(HistogramGrid::new(unit_square(), 0, 2).is_err());
        assert!(Bounds::new(0.0, 1.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn uniform_square_mean_count() {
        // oracle: n * dx * dy / A = 1e6 * (2/500)^2 / 4 = 4 per bin on [-1,1]^2
        let mut rng = SeededRng::new(12);
        let n = 1_000_000;
        let pts: Vec<Point2D> = (0..n)
            .map(|_| {
                Point2D::new(
                    -1.0 + 2.0 * rng.next_uniform(),
                    -1.0 + 2.0 * rng.next_uniform(),
                )
            })
            .collect();
        let g = build_histogram(&pts, Bounds::square(1.0).unwrap(), 500, 500).unwrap();
        let expected = expected_bin_count(n, g.bin_area(), 4.0).unwrap();
        assert!((expected - 4.0).abs() < 1e-12);
        let (mean, n_xy) = empirical_mean_density(&g).unwrap();
        assert_eq!(g.binned(), n);
        // P(empty bin) = e^-4: occupied-bin mean is biased up by 1/(1 - e^-4)
        let biased = expected / (1.0 - (-4.0f64).exp());
        assert!(
            (mean - biased).abs() / biased < 5e-3,
            "{mean} vs {biased}, {n_xy}"
        );
    }

    #[test]
    fn parallel_build_matches_serial() {
        let mut rng = SeededRng::new(4);
        let pts: Vec<Point2D> = (0..300_000)
            .map(|_| Point2D::new(rng.next_uniform() * 2.2 - 0.1, rng.next_uniform() * 2.0))
            .collect();
        let par = build_histogram(&pts, unit_square(), 37, 11).unwrap();
        let mut ser = HistogramGrid::new(unit_square(), 37, 11).unwrap();
        ser.extend(pts.iter().copied());
        assert_eq!(par, ser);
        assert_eq!(par.binned() + par.out_of_bounds(), pts.len() as u64);
    }

    #[test]
    fn analytical_examples() {
        let cell = RingSector::disk(1.0).unwrap();
        let h = analytical_mean_density(&cell, 10_000_000, 500).unwrap();
        assert!((h - 50.9296).abs() < 5e-5, "{h}");
        let ring = RingSector::ring(0.7, 1.0).unwrap();
        let h = analytical_mean_density(&ring, 1_000_000, 500).unwrap();
        assert!((h - 9.9862).abs() < 5e-5, "{h}");
        // general form with the rounded reference area of the large circular sector
        let h = expected_bin_count(1_000_000, (2.0f64 / 500.0).powi(2), 1.1345).unwrap();
        assert!((h - 14.1036).abs() < 1e-3, "{h}");
    }

    #[test]
    fn analytical_agrees_with_general_form() {
        let s = RingSector::new(0.3, 2.5, 0.4, 2.9).unwrap();
        let closed = analytical_mean_density(&s, 123_456, 200).unwrap();
        let general = expected_bin_count(123_456, (5.0f64 / 200.0).powi(2), s.area()).unwrap();
        assert!((closed - general).abs() / general < 1e-13);
    }

    #[test]
    fn resolution_scaling_is_exact() {
        let s = RingSector::ring(0.2, 1.0).unwrap();
        let a = analytical_mean_density(&s, 1_000_000, 100).unwrap();
        let b = analytical_mean_density(&s, 1_000_000, 200).unwrap();
        let c = analytical_mean_density(&s, 4_000_000, 200).unwrap();
        assert!((a / b - 4.0).abs() < 1e-12);
        assert!((a - c).abs() / a < 1e-12);
    }

    #[test]
    fn empirical_examples() {
        let mut g = HistogramGrid::new(unit_square(), 2, 2).unwrap();
        for _ in 0..3 {
            g.add(Point2D::new(0.5, 1.5));
        }
        for _ in 0..5 {
            g.add(Point2D::new(1.5, 1.5));
        }
        assert_eq!(empirical_mean_density(&g).unwrap(), (4.0, 2));
        let empty = HistogramGrid::new(unit_square(), 2, 2).unwrap();
        assert!(empirical_mean_density(&empty).is_err());
    }

    #[test]
    fn error_examples() {
        assert!((density_error(57.2958, 56.4602).unwrap() - 1.46).abs() < 5e-3);
        assert_eq!(density_error(3.0, 3.0).unwrap(), 0.0);
        assert!((density_error(14.1036, 14.0280).unwrap() - 0.54).abs() < 5e-3);
        assert!(density_error(0.0, 1.0).is_err());
    }

    #[test]
    fn unit_disk_check_scaled_down() {
        let disk = RingSector::disk(1.0).unwrap();
        let mut rng = SeededRng::new(2);
        let (_, r) = sector_density_check(&disk, 1_000_000, 500, &mut rng).unwrap();
        assert!((r.analytical - 5.09296).abs() < 5e-6);
        assert!(r.error_pct <= 3.0, "{r:?}");
        assert!(r.n_xy as usize <= 500 * 500);
    }

    #[test]
    fn pdf_of_uniform_disk_is_flat() {
        let disk = RingSector::disk(1.0).unwrap();
        let mut rng = SeededRng::new(6);
        let pts = crate::geometry::sample_points(&disk, 400_000, &mut rng);
        let pdf = asd_pdf_estimate(&[&pts], disk.bounding_box(), 20, 20).unwrap();
        assert!((pdf.riemann_sum() - 1.0).abs() < 1e-9);
        // a bin fully inside the disk: center (0.05, 0.05)
        let v = pdf.value(10, 10);
        assert!((v - 1.0 / PI).abs() < 0.03 / PI * 3.0, "{v}");
        // corner bin lies outside the disk
        assert_eq!(pdf.value(0, 0), 0.0);
    }

    #[test]
    fn pdf_rejects_empty() {
        assert!(asd_pdf_estimate(&[&[]], unit_square(), 2, 2).is_err());
    }

    #[test]
    fn csv_and_json_shapes() {
        let pts = [Point2D::new(0.5, 0.5), Point2D::new(1.5, 1.5)];
        let pdf = asd_pdf_estimate(&[&pts], unit_square(), 2, 2).unwrap();
        let mut buf = Vec::new();
        pdf.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "i,j,x_center,y_center,count,pdf\n0,0,0.5,0.5,1,0.5\n0,1,0.5,1.5,0,0\n1,0,1.5,0.5,0,0\n1,1,1.5,1.5,1,0.5\n"
        );
        let j = pdf.to_json();
        assert_eq!(j["bins_x"], 2);
        assert_eq!(j["counts"][1][1], 1);
        assert_eq!(j["bounds"]["x_hi"], 2.0);
    }

    #[test]
    fn point_extent_and_union() {
        assert!(point_extent(&[]).is_none());
        let b = point_extent(&[Point2D::new(1.0, -1.0), Point2D::new(-2.0, 3.0)]).unwrap();
        assert_eq!(
            b,
            Bounds {
                x_lo: -2.0,
                x_hi: 1.0,
                y_lo: -1.0,
                y_hi: 3.0
            }
        );
        let u = union_bounds([b, Bounds::square(5.0).unwrap()]).unwrap();
        assert_eq!(u, Bounds::square(5.0).unwrap());
    }
}
