//! Ring-sector geometry and exact uniform sampling inside a sector.
//!
//! A ring sector is the set of points whose polar coordinates satisfy
//! `L1 <= r <= L2` and `a1 <= theta <= a2`. Uniform placement over it factors
//! into independent radial and angular laws: the radius has density
//! `2r / (L2^2 - L1^2)` and the angle is uniform on `(a1, a2)`. Both are
//! sampled by inverting their CDFs.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::UniformSource;

/// Boundary slack used when checking that a generated point lies in its
/// sector after the polar -> Cartesian -> polar round trip.
pub const MEMBERSHIP_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[repr(C)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn from_polar(r: f64, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self { x: r * c, y: r * s }
    }

    pub fn radius(&self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Polar angle folded into `[0, 2pi)`.
    pub fn angle(&self) -> f64 {
        let a = self.y.atan2(self.x).rem_euclid(TAU);
        // rem_euclid can round up to exactly TAU for tiny negative inputs
        if a >= TAU {
            0.0
        } else {
            a
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Axis-aligned box `[x_lo, x_hi] x [y_lo, y_hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
}

impl Bounds {
    pub fn new(x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64) -> Result<Self> {
        let b = Self {
            x_lo,
            x_hi,
            y_lo,
            y_hi,
        };
        b.check()?;
        Ok(b)
    }

    /// The square `[-half, half]^2`.
    pub fn square(half: f64) -> Result<Self> {
        Self::new(-half, half, -half, half)
    }

    pub fn check(&self) -> Result<()> {
        let ok = [self.x_lo, self.x_hi, self.y_lo, self.y_hi]
            .iter()
            .all(|v| v.is_finite())
            && self.x_lo < self.x_hi
            && self.y_lo < self.y_hi;
        if ok {
            Ok(())
        } else {
            Err(Error::Density(format!(
                "bounds must satisfy x_lo < x_hi and y_lo < y_hi, got [{}, {}] x [{}, {}]",
                self.x_lo, self.x_hi, self.y_lo, self.y_hi
            )))
        }
    }

    pub fn union(&self, other: &Bounds) -> Bounds {
        Bounds {
            x_lo: self.x_lo.min(other.x_lo),
            x_hi: self.x_hi.max(other.x_hi),
            y_lo: self.y_lo.min(other.y_lo),
            y_hi: self.y_hi.max(other.y_hi),
        }
    }

    pub fn contains(&self, p: Point2D) -> bool {
        p.x >= self.x_lo && p.x <= self.x_hi && p.y >= self.y_lo && p.y <= self.y_hi
    }

    pub fn area(&self) -> f64 {
        (self.x_hi - self.x_lo) * (self.y_hi - self.y_lo)
    }
}

/// Region between radii `inner..outer` and angles `angle_lo..angle_hi`
/// (radians, counter-clockwise from the positive x axis).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RingSector {
    inner_radius: f64,
    outer_radius: f64,
    angle_lo: f64,
    angle_hi: f64,
}

impl RingSector {
    /// Builds a sector, rejecting anything outside `0 <= L1 < L2` and
    /// `0 <= a1 < a2 <= 2pi`. Degenerate sectors (zero width or zero span)
    /// are errors.
    pub fn new(inner_radius: f64, outer_radius: f64, angle_lo: f64, angle_hi: f64) -> Result<Self> {
        let fail = |what: String| Err(Error::InvalidSector(what));
        for (name, v) in [
            ("inner_radius", inner_radius),
            ("outer_radius", outer_radius),
            ("angle_lo", angle_lo),
            ("angle_hi", angle_hi),
        ] {
            if !v.is_finite() {
                return fail(format!("{name} must be finite, got {v}"));
            }
        }
        if inner_radius < 0.0 {
            return fail(format!("inner_radius must be >= 0, got {inner_radius}"));
        }
        if inner_radius >= outer_radius {
            return fail(format!(
                "inner_radius must be < outer_radius, got {inner_radius} >= {outer_radius}"
            ));
        }
        if angle_lo < 0.0 {
            return fail(format!("angle_lo must be >= 0, got {angle_lo}"));
        }
        if angle_lo >= angle_hi {
            return fail(format!(
                "angle_lo must be < angle_hi, got {angle_lo} >= {angle_hi}"
            ));
        }
        if angle_hi > TAU {
            return fail(format!("angle_hi must be <= 2pi, got {angle_hi}"));
        }
        Ok(Self {
            inner_radius,
            outer_radius,
            angle_lo,
            angle_hi,
        })
    }

    /// Full ring `L1..L2` over all angles.
    pub fn ring(inner_radius: f64, outer_radius: f64) -> Result<Self> {
        Self::new(inner_radius, outer_radius, 0.0, TAU)
    }

    /// Full disk of the given radius.
    pub fn disk(radius: f64) -> Result<Self> {
        Self::new(0.0, radius, 0.0, TAU)
    }

    pub fn inner_radius(&self) -> f64 {
        self.inner_radius
    }

    pub fn outer_radius(&self) -> f64 {
        self.outer_radius
    }

    pub fn angle_lo(&self) -> f64 {
        self.angle_lo
    }

    pub fn angle_hi(&self) -> f64 {
        self.angle_hi
    }

    pub fn angular_span(&self) -> f64 {
        self.angle_hi - self.angle_lo
    }

    fn radial_span_sq(&self) -> f64 {
        self.outer_radius * self.outer_radius - self.inner_radius * self.inner_radius
    }

    pub fn area(&self) -> f64 {
        sector_area(self)
    }

    /// Closed membership test with slack `tol` on every boundary. The angle
    /// test is skipped for points within `tol` of the origin, where the polar
    /// angle is meaningless.
    pub fn contains(&self, p: Point2D, tol: f64) -> bool {
        let r = p.radius();
        if r < self.inner_radius - tol || r > self.outer_radius + tol {
            return false;
        }
        if r <= tol {
            return true;
        }
        let a = p.angle();
        let within = |a: f64| a >= self.angle_lo - tol && a <= self.angle_hi + tol;
        within(a) || within(a - TAU) || within(a + TAU)
    }

    /// Smallest axis-aligned box holding the sector.
    pub fn bounding_box(&self) -> Bounds {
        let mut pts = vec![
            Point2D::from_polar(self.inner_radius, self.angle_lo),
            Point2D::from_polar(self.inner_radius, self.angle_hi),
            Point2D::from_polar(self.outer_radius, self.angle_lo),
            Point2D::from_polar(self.outer_radius, self.angle_hi),
        ];
        // extreme points of the outer arc where it crosses an axis
        for k in 0..=4 {
            let a = k as f64 * FRAC_PI_2;
            if a >= self.angle_lo && a <= self.angle_hi {
                let (x, y) = match k % 4 {
                    0 => (self.outer_radius, 0.0),
                    1 => (0.0, self.outer_radius),
                    2 => (-self.outer_radius, 0.0),
                    _ => (0.0, -self.outer_radius),
                };
                pts.push(Point2D::new(x, y));
            }
        }
        let mut b = Bounds {
            x_lo: f64::INFINITY,
            x_hi: f64::NEG_INFINITY,
            y_lo: f64::INFINITY,
            y_hi: f64::NEG_INFINITY,
        };
        for p in pts {
            b.x_lo = b.x_lo.min(p.x);
            b.x_hi = b.x_hi.max(p.x);
            b.y_lo = b.y_lo.min(p.y);
            b.y_hi = b.y_hi.max(p.y);
        }
        b
    }

    /// Inverse radial CDF: maps `u` in `(0, 1)` onto `(L1, L2)`.
    pub fn radius_at(&self, u: f64) -> f64 {
        (self.inner_radius * self.inner_radius + u * self.radial_span_sq()).sqrt()
    }

    /// Inverse angular CDF: maps `v` in `(0, 1)` onto `(a1, a2)`.
    pub fn angle_at(&self, v: f64) -> f64 {
        self.angle_lo + v * self.angular_span()
    }

    /// Point at the pair of CDF coordinates `(u, v)`.
    pub fn point_at(&self, u: f64, v: f64) -> Point2D {
        Point2D::from_polar(self.radius_at(u), self.angle_at(v))
    }
}

/// `(L2^2 - L1^2)(a2 - a1) / 2`.
pub fn sector_area(s: &RingSector) -> f64 {
    s.radial_span_sq() * s.angular_span() / 2.0
}

/// Marginal radial density `2r / (L2^2 - L1^2)` on `[L1, L2]`, zero elsewhere.
pub fn radial_pdf(s: &RingSector, r: f64) -> f64 {
    if r < s.inner_radius || r > s.outer_radius {
        0.0
    } else {
        2.0 * r / s.radial_span_sq()
    }
}

/// Marginal radial CDF `(r^2 - L1^2) / (L2^2 - L1^2)`, clamped to `[0, 1]`.
pub fn radial_cdf(s: &RingSector, r: f64) -> f64 {
    if r <= s.inner_radius {
        0.0
    } else if r >= s.outer_radius {
        1.0
    } else {
        ((r * r - s.inner_radius * s.inner_radius) / s.radial_span_sq()).clamp(0.0, 1.0)
    }
}

/// Angular CDF, uniform on `[a1, a2]`.
pub fn angular_cdf(s: &RingSector, theta: f64) -> f64 {
    ((theta - s.angle_lo) / s.angular_span()).clamp(0.0, 1.0)
}

/// One radius draw. Consumes exactly one uniform.
pub fn sample_radius<R: UniformSource + ?Sized>(s: &RingSector, rng: &mut R) -> f64 {
    s.radius_at(rng.next_uniform())
}

/// One angle draw. Consumes exactly one uniform.
pub fn sample_angle<R: UniformSource + ?Sized>(s: &RingSector, rng: &mut R) -> f64 {
    s.angle_at(rng.next_uniform())
}

/// One point: radius first, then angle. Consumes exactly two uniforms.
pub fn sample_point<R: UniformSource + ?Sized>(s: &RingSector, rng: &mut R) -> Point2D {
    let r = sample_radius(s, rng);
    let theta = sample_angle(s, rng);
    Point2D::from_polar(r, theta)
}

pub fn sample_points<R: UniformSource + ?Sized>(
    s: &RingSector,
    n: usize,
    rng: &mut R,
) -> Vec<Point2D> {
    (0..n).map(|_| sample_point(s, rng)).collect()
}
