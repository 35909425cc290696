//! Controlled network plans: layers of concentric rings, each split into
//! angular sectors with a node count per sector.
//!
//! The canonical representation is ragged: every layer lists its own interior
//! sector boundaries and one count per sector. The zero-padded matrix layout
//! (radius column, boundary block, count block) is supported for import and
//! export only.

use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fmt::g17;
use crate::geometry::{Point2D, RingSector};

/// One ring of the plan. Sector `j` spans from bound `j-1` (or 0) to bound
/// `j` (or 2pi), so `sector_counts.len()` must be `sector_bounds.len() + 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerSpec {
    pub outer_radius: f64,
    pub sector_bounds: Vec<f64>,
    pub sector_counts: Vec<u64>,
}

impl LayerSpec {
    pub fn new(outer_radius: f64, sector_bounds: Vec<f64>, sector_counts: Vec<u64>) -> Self {
        Self {
            outer_radius,
            sector_bounds,
            sector_counts,
        }
    }

    /// Single full-ring sector.
    pub fn ring(outer_radius: f64, count: u64) -> Self {
        Self::new(outer_radius, Vec::new(), vec![count])
    }

    pub fn sector_count(&self) -> usize {
        self.sector_bounds.len() + 1
    }

    /// Angular limits of sector `j` (0-based).
    pub fn sector_angles(&self, j: usize) -> (f64, f64) {
        let lo = if j == 0 {
            0.0
        } else {
            self.sector_bounds[j - 1]
        };
        let hi = self.sector_bounds.get(j).copied().unwrap_or(TAU);
        (lo, hi)
    }

    pub fn node_count(&self) -> u64 {
        self.sector_counts.iter().sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    NoLayers,
    NonFiniteRadius,
    NonPositiveRadius,
    RadiiNotIncreasing,
    NonFiniteBound,
    BoundOutOfRange,
    BoundsNotIncreasing,
    CountLengthMismatch { expected: usize, found: usize },
    NoNodes,
}

/// A broken plan invariant. Layer and sector coordinates are 0-based and
/// printed 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanViolation {
    pub layer: Option<usize>,
    pub sector: Option<usize>,
    pub kind: ViolationKind,
}

impl fmt::Display for PlanViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(l) = self.layer {
            write!(f, "layer {}", l + 1)?;
            if let Some(s) = self.sector {
                write!(f, " bound {}", s + 1)?;
            }
            f.write_str(": ")?;
        }
        match self.kind {
            ViolationKind::NoLayers => f.write_str("plan has no layers"),
            ViolationKind::NonFiniteRadius => f.write_str("outer radius is not finite"),
            ViolationKind::NonPositiveRadius => f.write_str("outer radius must be > 0"),
            ViolationKind::RadiiNotIncreasing => f.write_str("radii not strictly increasing"),
            ViolationKind::NonFiniteBound => f.write_str("sector bound is not finite"),
            ViolationKind::BoundOutOfRange => f.write_str("sector bound must lie in (0, 2pi)"),
            ViolationKind::BoundsNotIncreasing => {
                f.write_str("sector bounds not strictly increasing")
            }
            ViolationKind::CountLengthMismatch { expected, found } => write!(
                f,
                "expected {expected} sector counts (bounds + 1), found {found}"
            ),
            ViolationKind::NoNodes => f.write_str("plan deploys no nodes"),
        }
    }
}

/// A sector of a plan, resolved to its geometry.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PlannedSector {
    pub layer: usize,
    pub sector: usize,
    pub geometry: RingSector,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkPlan {
    pub layers: Vec<LayerSpec>,
}

impl NetworkPlan {
    /// Builds a plan and rejects it unless it validates cleanly.
    pub fn new(layers: Vec<LayerSpec>) -> Result<Self> {
        let plan = Self { layers };
        plan.ensure_valid()?;
        Ok(plan)
    }

    /// Every violated invariant; empty for a valid plan.
    pub fn validate(&self) -> Vec<PlanViolation> {
        let mut out = Vec::new();
        let mut push = |layer, sector, kind| {
            out.push(PlanViolation {
                layer,
                sector,
                kind,
            })
        };
        if self.layers.is_empty() {
            push(None, None, ViolationKind::NoLayers);
        }
        let mut prev_radius: Option<f64> = None;
        for (i, layer) in self.layers.iter().enumerate() {
            let r = layer.outer_radius;
            if !r.is_finite() {
                push(Some(i), None, ViolationKind::NonFiniteRadius);
            } else if r <= 0.0 {
                push(Some(i), None, ViolationKind::NonPositiveRadius);
            }
            if let Some(p) = prev_radius {
                if r.is_nan() || r <= p {
                    push(Some(i), None, ViolationKind::RadiiNotIncreasing);
                }
            }
            prev_radius = Some(r);

            let mut prev_bound = 0.0;
            for (j, &b) in layer.sector_bounds.iter().enumerate() {
                if !b.is_finite() {
                    push(Some(i), Some(j), ViolationKind::NonFiniteBound);
                    continue;
                }
                if b <= 0.0 || b >= TAU {
                    push(Some(i), Some(j), ViolationKind::BoundOutOfRange);
                } else if j > 0 && b <= prev_bound {
                    push(Some(i), Some(j), ViolationKind::BoundsNotIncreasing);
                }
                prev_bound = b;
            }
            let expected = layer.sector_count();
            if layer.sector_counts.len() != expected {
                push(
                    Some(i),
                    None,
                    ViolationKind::CountLengthMismatch {
                        expected,
                        found: layer.sector_counts.len(),
                    },
                );
            }
        }
        if !self.layers.is_empty() && self.total_nodes() == 0 {
            push(None, None, ViolationKind::NoNodes);
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidPlan(v))
        }
    }

    /// Non-fatal remarks: sectors planned with zero nodes.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, layer) in self.layers.iter().enumerate() {
            for (j, &n) in layer.sector_counts.iter().enumerate() {
                if n == 0 {
                    out.push(format!("layer {} sector {} has no nodes", i + 1, j + 1));
                }
            }
        }
        out
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn total_sectors(&self) -> usize {
        self.layers.iter().map(LayerSpec::sector_count).sum()
    }

    pub fn total_nodes(&self) -> u64 {
        self.layers.iter().map(LayerSpec::node_count).sum()
    }

    pub fn radii(&self) -> Vec<f64> {
        self.layers.iter().map(|l| l.outer_radius).collect()
    }

    /// Largest sector count over layers.
    pub fn max_sectors_per_layer(&self) -> usize {
        self.layers
            .iter()
            .map(LayerSpec::sector_count)
            .max()
            .unwrap_or(0)
    }

    /// Index of the first layer reaching [`Self::max_sectors_per_layer`].
    /// Ties resolve to the smallest index.
    pub fn widest_layer(&self) -> Option<usize> {
        let gamma = self.max_sectors_per_layer();
        self.layers.iter().position(|l| l.sector_count() == gamma)
    }

    pub fn outer_radius(&self) -> Option<f64> {
        self.layers.last().map(|l| l.outer_radius)
    }

    /// Resolves every sector to its ring-sector geometry, layer-major.
    pub fn to_sectors(&self) -> Result<Vec<PlannedSector>> {
        self.ensure_valid()?;
        let mut out = Vec::with_capacity(self.total_sectors());
        let mut inner = 0.0;
        for (i, layer) in self.layers.iter().enumerate() {
            for j in 0..layer.sector_count() {
                let (lo, hi) = layer.sector_angles(j);
                out.push(PlannedSector {
                    layer: i,
                    sector: j,
                    geometry: RingSector::new(inner, layer.outer_radius, lo, hi)?,
                    count: layer.sector_counts[j],
                });
            }
            inner = layer.outer_radius;
        }
        Ok(out)
    }

    /// Sector owning `p` under half-open conventions: radius in
    /// `(r_{i-1}, r_i]` (the origin belongs to the first layer) and angle in
    /// `[a1, a2)`. `None` outside the outermost radius.
    pub fn locate(&self, p: Point2D) -> Option<(usize, usize)> {
        let r = p.radius();
        let i = self.layers.iter().position(|l| r <= l.outer_radius)?;
        let a = p.angle();
        let bounds = &self.layers[i].sector_bounds;
        let j = bounds.partition_point(|&b| b <= a);
        Some((i, j))
    }

    /// Zero-padded `n_L x 2*gamma` matrix: radius, `gamma - 1` bounds, `gamma`
    /// counts per row.
    pub fn to_padded_matrix(&self) -> Vec<Vec<f64>> {
        let gamma = self.max_sectors_per_layer();
        self.layers
            .iter()
            .map(|l| {
                let mut row = vec![0.0; 2 * gamma];
                row[0] = l.outer_radius;
                row[1..1 + l.sector_bounds.len()].copy_from_slice(&l.sector_bounds);
                for (k, &n) in l.sector_counts.iter().enumerate() {
                    row[gamma + k] = n as f64;
                }
                row
            })
            .collect()
    }

    /// Inverse of [`Self::to_padded_matrix`]. Zeros in the boundary block are
    /// padding and may only trail; a zero followed by a nonzero bound is
    /// ambiguous and rejected. Counts must be whole numbers.
    pub fn from_padded_matrix(rows: &[Vec<f64>]) -> Result<Self> {
        let bad = |msg: String| Err(Error::PlanParse(format!("padded matrix: {msg}")));
        if rows.is_empty() {
            return Err(Error::InvalidPlan(vec![PlanViolation {
                layer: None,
                sector: None,
                kind: ViolationKind::NoLayers,
            }]));
        }
        let width = rows[0].len();
        if width < 2 || !width.is_multiple_of(2) {
            return bad(format!("row width must be even and >= 2, got {width}"));
        }
        let gamma = width / 2;
        let mut layers = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            if row.len() != width {
                return bad(format!(
                    "row {} has {} entries, expected {width}",
                    i + 1,
                    row.len()
                ));
            }
            let theta = &row[1..gamma];
            let n_bounds = theta.iter().position(|&t| t == 0.0).unwrap_or(theta.len());
            if let Some(k) = theta[n_bounds..].iter().position(|&t| t != 0.0) {
                return bad(format!(
                    "row {}: angle {} follows zero padding; an interior angle of 0 cannot be told apart from padding",
                    i + 1,
                    n_bounds + k + 2
                ));
            }
            let counts = &row[gamma..];
            let mut sector_counts = Vec::with_capacity(n_bounds + 1);
            for (k, &c) in counts.iter().enumerate() {
                if !(c >= 0.0 && c.fract() == 0.0 && c <= u64::MAX as f64) {
                    return bad(format!(
                        "row {}: count {} is not a non-negative integer ({c})",
                        i + 1,
                        k + 1
                    ));
                }
                if k <= n_bounds {
                    sector_counts.push(c as u64);
                } else if c != 0.0 {
                    return bad(format!(
                        "row {}: count {} given for a sector with no boundary",
                        i + 1,
                        k + 1
                    ));
                }
            }
            layers.push(LayerSpec::new(
                row[0],
                theta[..n_bounds].to_vec(),
                sector_counts,
            ));
        }
        Self::new(layers)
    }

    /// SHA-256 of the canonical file bytes, hex encoded.
    pub fn identity_hash(&self) -> String {
        let digest = Sha256::digest(save_plan(self).as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanFile {
    layers: Vec<LayerFile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LayerFile {
    outer_radius: f64,
    #[serde(default)]
    sector_bounds: Vec<AngleRepr>,
    sector_counts: Vec<u64>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AngleRepr {
    Radians(f64),
    Text(String),
}

/// Parses angles written as rational multiples of pi: `pi`, `2pi`, `pi/3`,
/// `25pi/18`. Plain decimal radians are also accepted.
pub fn parse_angle(text: &str) -> Option<f64> {
    let t = text.trim();
    if let Ok(v) = t.parse::<f64>() {
        return Some(v);
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let k = num.strip_suffix("pi")?.trim();
    let k: u64 = if k.is_empty() { 1 } else { k.parse().ok()? };
    let m: u64 = match den {
        Some(d) => d.parse().ok().filter(|&m| m > 0)?,
        None => 1,
    };
    Some(k as f64 * std::f64::consts::PI / m as f64)
}

/// Reads a plan file and validates it.
pub fn load_plan(text: &str) -> Result<NetworkPlan> {
    let file: PlanFile = serde_json::from_str(text).map_err(|e| Error::PlanParse(e.to_string()))?;
    let mut layers = Vec::with_capacity(file.layers.len());
    for (i, l) in file.layers.into_iter().enumerate() {
        let mut bounds = Vec::with_capacity(l.sector_bounds.len());
        for (j, a) in l.sector_bounds.into_iter().enumerate() {
            let v = match a {
                AngleRepr::Radians(v) => v,
                AngleRepr::Text(s) => parse_angle(&s).ok_or_else(|| {
                    Error::PlanParse(format!(
                        "layers[{i}].sector_bounds[{j}]: cannot read angle {s:?}; expected radians or a form like \"4pi/3\""
                    ))
                })?,
            };
            bounds.push(v);
        }
        layers.push(LayerSpec::new(l.outer_radius, bounds, l.sector_counts));
    }
    NetworkPlan::new(layers)
}

/// Canonical plan text: sorted keys, two-space indent, floats at 17
/// significant digits, trailing newline.
pub fn save_plan(plan: &NetworkPlan) -> String {
    let mut s = String::from("{\n  \"layers\": [");
    for (i, l) in plan.layers.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let bounds: Vec<String> = l.sector_bounds.iter().map(|&b| g17(b)).collect();
        let counts: Vec<String> = l.sector_counts.iter().map(u64::to_string).collect();
        s.push_str(&format!(
            "\n    {{\n      \"outer_radius\": {},\n      \"sector_bounds\": [{}],\n      \"sector_counts\": [{}]\n    }}",
            g17(l.outer_radius),
            bounds.join(", "),
            counts.join(", ")
        ));
    }
    if !plan.layers.is_empty() {
        s.push_str("\n  ");
    }
    s.push_str("]\n}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference::{six_sector_plan, ten_sector_plan};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn six_sector_plan_is_valid() {
        let p = six_sector_plan();
        assert!(p.validate().is_empty());
        assert_eq!(p.total_nodes(), 3300);
        assert_eq!(p.total_sectors(), 6);
        assert_eq!(p.max_sectors_per_layer(), 4);
        assert_eq!(p.widest_layer(), Some(1));
    }

    #[test]
    fn radii_must_increase() {
        let p = NetworkPlan {
            layers: vec![LayerSpec::ring(2.0, 10), LayerSpec::ring(1.0, 10)],
        };
        let v = p.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::RadiiNotIncreasing);
        assert_eq!(v[0].layer, Some(1));
        assert!(v[0].to_string().contains("radii not strictly increasing"));
    }

    #[test]
    fn bounds_must_increase() {
        let p = NetworkPlan {
            layers: vec![LayerSpec::new(1.0, vec![PI, PI / 2.0], vec![1, 1, 1])],
        };
        let v = p.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::BoundsNotIncreasing);
        assert_eq!((v[0].layer, v[0].sector), (Some(0), Some(1)));
    }

    #[test]
    fn collects_every_violation() {
        let p = NetworkPlan {
            layers: vec![
                LayerSpec::new(-1.0, vec![0.0, 7.0], vec![0]),
                LayerSpec::new(f64::NAN, vec![f64::INFINITY], vec![0, 0]),
            ],
        };
        let kinds: Vec<ViolationKind> = p.validate().into_iter().map(|v| v.kind).collect();
        assert!(kinds.contains(&ViolationKind::NonPositiveRadius));
        assert!(kinds.contains(&ViolationKind::BoundOutOfRange));
        assert!(kinds.contains(&ViolationKind::CountLengthMismatch {
            expected: 3,
            found: 1
        }));
        assert!(kinds.contains(&ViolationKind::NonFiniteRadius));
        assert!(kinds.contains(&ViolationKind::NonFiniteBound));
        assert!(kinds.contains(&ViolationKind::NoNodes));
        assert_eq!(
            NetworkPlan { layers: vec![] }.validate()[0].kind,
            ViolationKind::NoLayers
        );
    }

    #[test]
    fn zero_count_sector_is_a_warning() {
        let p = NetworkPlan::new(vec![LayerSpec::new(1.0, vec![PI], vec![0, 5])]).unwrap();
        assert_eq!(
            p.warnings(),
            vec!["layer 1 sector 1 has no nodes".to_string()]
        );
    }

    #[test]
    fn sectors_of_six_sector_plan() {
        let s = six_sector_plan().to_sectors().unwrap();
        assert_eq!(s.len(), 6);
        let mid: Vec<(f64, f64)> = s
            .iter()
            .filter(|p| p.layer == 1)
            .map(|p| (p.geometry.angle_lo(), p.geometry.angle_hi()))
            .collect();
        assert_eq!(
            mid,
            vec![
                (0.0, PI / 3.0),
                (PI / 3.0, PI),
                (PI, 4.0 * PI / 3.0),
                (4.0 * PI / 3.0, TAU)
            ]
        );
        for p in s.iter().filter(|p| p.layer == 1) {
            assert_eq!(p.geometry.inner_radius(), 1.0);
            assert_eq!(p.geometry.outer_radius(), 2.0);
        }
        let counts: Vec<u64> = s.iter().map(|p| p.count).collect();
        assert_eq!(counts, vec![100, 800, 1000, 300, 500, 600]);
    }

    #[test]
    fn single_layer_is_full_disk() {
        let p = NetworkPlan::new(vec![LayerSpec::ring(1.0, 50)]).unwrap();
        let s = p.to_sectors().unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].geometry, RingSector::disk(1.0).unwrap());
        assert_eq!(s[0].count, 50);
    }

    #[test]
    fn ten_sector_plan_sectors() {
        let p = ten_sector_plan();
        let s = p.to_sectors().unwrap();
        assert_eq!(s.len(), 10);
        assert_eq!(p.total_nodes(), 3300);
        assert_eq!(p.max_sectors_per_layer(), 4);
        assert_eq!(p.widest_layer(), Some(2));
    }

    #[test]
    fn areas_partition_the_disk() {
        for p in [six_sector_plan(), ten_sector_plan()] {
            let total: f64 = p
                .to_sectors()
                .unwrap()
                .iter()
                .map(|s| s.geometry.area())
                .sum();
            let r = p.outer_radius().unwrap();
            assert!(((total - PI * r * r) / (PI * r * r)).abs() < 1e-9);
        }
    }

    #[test]
    fn to_sectors_rejects_invalid() {
        let p = NetworkPlan {
            layers: vec![LayerSpec::ring(1.0, 0)],
        };
        assert!(matches!(p.to_sectors(), Err(Error::InvalidPlan(_))));
    }

    #[test]
    fn locate_is_half_open() {
        let p = six_sector_plan();
        assert_eq!(p.locate(Point2D::new(0.0, 0.0)), Some((0, 0)));
        assert_eq!(p.locate(Point2D::new(1.0, 0.0)), Some((0, 0)));
        assert_eq!(p.locate(Point2D::new(1.5, 0.0)), Some((1, 0)));
        assert_eq!(p.locate(Point2D::new(-1.5, 0.0)), Some((1, 2)));
        assert_eq!(p.locate(Point2D::new(0.0, -1.5)), Some((1, 3)));
        assert_eq!(p.locate(Point2D::new(3.0, 0.0)), Some((2, 0)));
        assert_eq!(p.locate(Point2D::new(3.6, 0.0)), None);
    }

    #[test]
    fn parse_angle_grammar() {
        assert_eq!(parse_angle("pi"), Some(PI));
        assert_eq!(parse_angle("2pi"), Some(2.0 * PI));
        assert_eq!(parse_angle("pi/3"), Some(PI / 3.0));
        assert_eq!(parse_angle("4pi/3"), Some(4.0 * PI / 3.0));
        assert_eq!(parse_angle(" 25pi/18 "), Some(25.0 * PI / 18.0));
        assert_eq!(parse_angle("1.5"), Some(1.5));
        assert_eq!(parse_angle("pi/0"), None);
        assert_eq!(parse_angle("tau"), None);
        assert_eq!(parse_angle("-pi"), None);
        assert_eq!(parse_angle("pi/x"), None);
    }

    #[test]
    fn load_plan_with_pi_strings() {
        let text = r#"{"layers": [
            {"outer_radius": 1.0, "sector_bounds": [], "sector_counts": [100]},
            {"outer_radius": 2.0, "sector_bounds": ["pi/3", "pi", "4pi/3"], "sector_counts": [800, 1000, 300, 500]},
            {"outer_radius": 3.5, "sector_counts": [600]}
        ]}"#;
        let p = load_plan(text).unwrap();
        assert_eq!(p, six_sector_plan());
        assert_eq!(p.total_nodes(), 3300);
    }

    #[test]
    fn load_plan_errors() {
        assert!(matches!(
            load_plan(r#"{"layers": []}"#),
            Err(Error::InvalidPlan(_))
        ));
        let err = load_plan("{\"layers\": [\n {\"outer_radius\": 1, \"sector_counts\": [1.5]}]}")
            .unwrap_err();
        assert!(matches!(err, Error::PlanParse(_)));
        assert!(err.to_string().contains("line 2"), "{err}");
        let err = load_plan(
            r#"{"layers": [{"outer_radius": 1, "sector_bounds": ["3 apples"], "sector_counts": [1, 1]}]}"#,
        )
        .unwrap_err();
        assert!(
            err.to_string().contains("layers[0].sector_bounds[0]"),
            "{err}"
        );
        assert!(matches!(
            load_plan(r#"{"layers": [{"outer_radius": 1, "sector_counts": [1], "extra": 2}]}"#),
            Err(Error::PlanParse(_))
        ));
    }

    #[test]
    fn canonical_text_is_stable() {
        let text = save_plan(&six_sector_plan());
        let expected = "{\n  \"layers\": [\n    {\n      \"outer_radius\": 1,\n      \"sector_bounds\": [],\n      \"sector_counts\": [100]\n    },\n    {\n      \"outer_radius\": 2,\n      \"sector_bounds\": [1.0471975511965976, 3.1415926535897931, 4.1887902047863905],\n      \"sector_counts\": [800, 1000, 300, 500]\n    },\n    {\n      \"outer_radius\": 3.5,\n      \"sector_bounds\": [],\n      \"sector_counts\": [600]\n    }\n  ]\n}\n";
        assert_eq!(text, expected);
        assert_eq!(save_plan(&load_plan(&text).unwrap()), text);
    }

    #[test]
    fn round_trip_ten_sector_plan() {
        let p = ten_sector_plan();
        let back = load_plan(&save_plan(&p)).unwrap();
        assert_eq!(back, p);
        let counts: Vec<u64> = back
            .layers
            .iter()
            .flat_map(|l| l.sector_counts.clone())
            .collect();
        assert_eq!(
            counts,
            vec![100, 500, 400, 200, 200, 1000, 500, 100, 200, 100]
        );
    }

    #[test]
    fn padded_matrix_examples() {
        let m = vec![
            vec![1.0, 0.0, 0.0, 0.0, 100.0, 0.0, 0.0, 0.0],
            vec![
                2.0,
                PI / 3.0,
                PI,
                4.0 * PI / 3.0,
                800.0,
                1000.0,
                300.0,
                500.0,
            ],
            vec![3.5, 0.0, 0.0, 0.0, 600.0, 0.0, 0.0, 0.0],
        ];
        assert_eq!(
            NetworkPlan::from_padded_matrix(&m).unwrap(),
            six_sector_plan()
        );
        assert_eq!(six_sector_plan().to_padded_matrix(), m);

        let m = vec![
            vec![0.5, 0.0, 0.0, 0.0, 100.0, 0.0, 0.0, 0.0],
            vec![
                1.3,
                5.0 * PI / 9.0,
                14.0 * PI / 9.0,
                0.0,
                500.0,
                400.0,
                200.0,
                0.0,
            ],
            vec![
                2.9,
                PI / 6.0,
                25.0 * PI / 18.0,
                16.0 * PI / 9.0,
                200.0,
                1000.0,
                500.0,
                100.0,
            ],
            vec![3.5, PI, 0.0, 0.0, 200.0, 100.0, 0.0, 0.0],
        ];
        let p = NetworkPlan::from_padded_matrix(&m).unwrap();
        assert_eq!(p, ten_sector_plan());
        assert_eq!(p.total_sectors(), 10);

        let p = NetworkPlan::from_padded_matrix(&[vec![2.0, 50.0]]).unwrap();
        assert_eq!(
            p.to_sectors().unwrap()[0].geometry,
            RingSector::disk(2.0).unwrap()
        );
    }

    #[test]
    fn padded_matrix_errors() {
        let ambiguous = vec![vec![1.0, 0.0, 1.0, 5.0, 5.0, 5.0]];
        let err = NetworkPlan::from_padded_matrix(&ambiguous).unwrap_err();
        assert!(err.to_string().contains("cannot be told apart"), "{err}");
        let fractional = vec![vec![1.0, 10.5]];
        assert!(NetworkPlan::from_padded_matrix(&fractional).is_err());
        let orphan = vec![vec![1.0, 0.0, 5.0, 5.0]];
        assert!(NetworkPlan::from_padded_matrix(&orphan).is_err());
        let ragged = vec![vec![1.0, 5.0], vec![2.0, 0.0, 5.0, 0.0]];
        assert!(NetworkPlan::from_padded_matrix(&ragged).is_err());
        assert!(NetworkPlan::from_padded_matrix(&[vec![1.0, 2.0, 3.0]]).is_err());
    }

    fn arb_plan() -> impl Strategy<Value = NetworkPlan> {
        let layer = (1usize..6).prop_flat_map(|n_sec| {
            (
                proptest::collection::vec(0.01f64..0.99, n_sec - 1),
                proptest::collection::vec(0u64..2000, n_sec),
                0.05f64..3.0,
            )
        });
        proptest::collection::vec(layer, 1..6).prop_filter_map("needs nodes", |layers| {
            let mut radius = 0.0;
            let specs: Vec<LayerSpec> = layers
                .into_iter()
                .map(|(mut fr, counts, width)| {
                    radius += width;
                    fr.sort_by(f64::total_cmp);
                    fr.dedup();
                    let bounds: Vec<f64> = fr.iter().map(|f| f * TAU).collect();
                    let counts = counts[..bounds.len() + 1].to_vec();
                    LayerSpec::new(radius, bounds, counts)
                })
                .collect();
            NetworkPlan::new(specs).ok()
        })
    }

    proptest! {
        #[test]
        fn matrix_round_trip(p in arb_plan()) {
            let m = p.to_padded_matrix();
            prop_assert_eq!(NetworkPlan::from_padded_matrix(&m).unwrap(), p);
        }

        #[test]
        fn file_round_trip(p in arb_plan()) {
            let text = save_plan(&p);
            let back = load_plan(&text).unwrap();
            prop_assert_eq!(&back, &p);
            prop_assert_eq!(save_plan(&back), text);
        }

        #[test]
        fn gamma_is_max_sector_count(p in arb_plan()) {
            let gamma = p.max_sectors_per_layer();
            prop_assert!(p.layers.iter().all(|l| l.sector_count() <= gamma));
            let k = p.widest_layer().unwrap();
            prop_assert_eq!(p.layers[k].sector_count(), gamma);
            prop_assert!(p.layers[..k].iter().all(|l| l.sector_count() < gamma));
        }

        #[test]
        fn sectors_partition_area(p in arb_plan()) {
            let total: f64 = p.to_sectors().unwrap().iter().map(|s| s.geometry.area()).sum();
            let r = p.outer_radius().unwrap();
            let disk = PI * r * r;
            prop_assert!(((total - disk) / disk).abs() < 1e-9);
        }

        #[test]
        fn located_sector_contains_point(p in arb_plan(), u in 0.0f64..1.0, v in 0.0f64..1.0) {
            // a point placed uniformly in the outer disk belongs to exactly
            // the sector reported by locate
            let r = p.outer_radius().unwrap() * u.sqrt();
            let pt = Point2D::from_polar(r, v * TAU);
            let (i, j) = p.locate(pt).unwrap();
            let sectors = p.to_sectors().unwrap();
            let owner = sectors.iter().find(|s| s.layer == i && s.sector == j).unwrap();
            prop_assert!(owner.geometry.contains(pt, 1e-12));
            let strict_hits = sectors.iter().filter(|s| s.geometry.contains(pt, -1e-9)).count();
            prop_assert!(strict_hits <= 1);
        }
    }
}
