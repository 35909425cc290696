//! Automatic deployment from three scalars: cell radius, maximum layer
//! count and total node count.
//!
//! The layer count is drawn uniformly from `2..=max_layers`, the layer radii
//! are sorted uniform draws on `(0, L)`, and nodes are split evenly with the
//! remainder going to the innermost layer. Because every ring holds (nearly)
//! the same number of nodes while ring areas are random, layer densities
//! differ from one another.

use serde::{Deserialize, Serialize};

use crate::deployment::{Deployment, DeploymentSource, SectorTag};
use crate::error::{Error, Result};
use crate::geometry::{sample_points, RingSector};
use crate::rng::{SeededRng, UniformSource};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AutoConfig {
    pub cell_radius: f64,
    pub max_layers: u32,
    pub total_nodes: u64,
}

impl AutoConfig {
    pub fn new(cell_radius: f64, max_layers: u32, total_nodes: u64) -> Result<Self> {
        let cfg = Self {
            cell_radius,
            max_layers,
            total_nodes,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cell_radius.is_finite() && self.cell_radius > 0.0) {
            return Err(Error::Config(format!(
                "cell radius must be a positive number, got {}",
                self.cell_radius
            )));
        }
        if self.max_layers < 2 {
            return Err(Error::Config(format!(
                "max layers must be at least 2, got {}",
                self.max_layers
            )));
        }
        if self.total_nodes < 1 {
            return Err(Error::Config("total nodes must be at least 1".into()));
        }
        Ok(())
    }

    /// Set when some drawable layer count would leave outer layers empty.
    /// Realization fails only if such a count is actually drawn.
    pub fn warnings(&self) -> Vec<String> {
        if self.total_nodes < self.max_layers as u64 {
            vec![format!(
                "{} nodes cannot fill up to {} layers; realizations drawing more than {} layers will fail",
                self.total_nodes, self.max_layers, self.total_nodes
            )]
        } else {
            Vec::new()
        }
    }
}

/// One automatic realization: the drawn layout plus its points.
#[derive(Clone, Debug, PartialEq)]
pub struct AutoRealization {
    pub config: AutoConfig,
    pub layer_count: u32,
    /// Outer radius of each layer, ascending; the last equals the cell radius.
    pub layer_radii: Vec<f64>,
    pub inner_nodes: u64,
    pub outer_nodes: u64,
    pub deployment: Deployment,
}

impl AutoRealization {
    /// Radial thickness of each layer.
    pub fn layer_widths(&self) -> Vec<f64> {
        let mut prev = 0.0;
        self.layer_radii
            .iter()
            .map(|&r| {
                let w = r - prev;
                prev = r;
                w
            })
            .collect()
    }

    /// Realized points per unit area for each layer.
    pub fn layer_densities(&self) -> Vec<f64> {
        self.deployment.runs.iter().map(|r| r.density()).collect()
    }

    pub fn layer_counts(&self) -> Vec<u64> {
        (0..self.layer_count)
            .map(|i| {
                if i == 0 {
                    self.inner_nodes
                } else {
                    self.outer_nodes
                }
            })
            .collect()
    }
}

/// Uniform layer count on `2..=max_layers`; one draw.
pub fn draw_layer_count<R: UniformSource + ?Sized>(max_layers: u32, rng: &mut R) -> Result<u32> {
    if max_layers < 2 {
        return Err(Error::Config(format!(
            "max layers must be at least 2, got {max_layers}"
        )));
    }
    let u = rng.next_uniform();
    let span = (max_layers - 1) as f64;
    let k = (u * span).floor() as u32;
    Ok((2 + k).min(max_layers))
}

/// Even split: `n_out = floor(n_s / n_L)` per outer layer and the rest,
/// `n_s - (n_L - 1) * n_out`, in the innermost layer.
pub fn split_nodes(total_nodes: u64, layer_count: u32) -> Result<(u64, u64)> {
    if total_nodes < 1 || layer_count < 1 {
        return Err(Error::Config(format!(
            "need at least one node and one layer, got {total_nodes} nodes and {layer_count} layers"
        )));
    }
    let n_l = layer_count as u64;
    let n_out = total_nodes / n_l;
    if n_out == 0 {
        return Err(Error::Config(format!(
            "fewer nodes than layers ({total_nodes} < {layer_count})"
        )));
    }
    Ok((total_nodes - (n_l - 1) * n_out, n_out))
}

/// `layer_count - 1` uniform radii on `(0, L)`, sorted, followed by `L`.
/// A draw that collides with an earlier one (or rounds up to `L`) is redrawn.
pub fn draw_layer_radii<R: UniformSource + ?Sized>(
    cell_radius: f64,
    layer_count: u32,
    rng: &mut R,
) -> Vec<f64> {
    let interior = layer_count.saturating_sub(1) as usize;
    let mut radii: Vec<f64> = Vec::with_capacity(interior + 1);
    while radii.len() < interior {
        let r = rng.next_uniform() * cell_radius;
        if r > 0.0 && r < cell_radius && !radii.contains(&r) {
            radii.push(r);
        }
    }
    radii.sort_by(f64::total_cmp);
    radii.push(cell_radius);
    radii
}

pub fn deploy_auto(cfg: &AutoConfig, seed: u64) -> Result<AutoRealization> {
    let mut rng = SeededRng::new(seed);
    deploy_auto_with(cfg, seed, &mut rng)
}

/// Draw order: layer count, interior radii, then per layer (inside out) a
/// radius and an angle per node.
pub fn deploy_auto_with<R: UniformSource + ?Sized>(
    cfg: &AutoConfig,
    seed: u64,
    rng: &mut R,
) -> Result<AutoRealization> {
    cfg.validate()?;
    let layer_count = draw_layer_count(cfg.max_layers, rng)?;
    let (inner_nodes, outer_nodes) = split_nodes(cfg.total_nodes, layer_count)?;
    let layer_radii = draw_layer_radii(cfg.cell_radius, layer_count, rng);

    let mut dep = Deployment::with_capacity(
        cfg.total_nodes as usize,
        seed,
        DeploymentSource::Auto { config: *cfg },
    );
    let mut inner = 0.0;
    for (i, &outer) in layer_radii.iter().enumerate() {
        let ring = RingSector::ring(inner, outer)?;
        let n = if i == 0 { inner_nodes } else { outer_nodes };
        let pts = sample_points(&ring, n as usize, rng);
        dep.push_run(
            SectorTag {
                layer: i as u32,
                sector: 0,
            },
            ring,
            pts,
        );
        inner = outer;
    }
    Ok(AutoRealization {
        config: *cfg,
        layer_count,
        layer_radii,
        inner_nodes,
        outer_nodes,
        deployment: dep,
    })
}
