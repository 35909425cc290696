//! Inhomogeneous random deployment of wireless nodes over circular cells.
//!
//! A cell is partitioned into ring sectors (concentric layers, optionally cut
//! into angular sectors). Nodes are placed uniformly and independently inside
//! each sector by inverse-CDF sampling, and sectors with different node
//! densities are superposed to give a spatially inhomogeneous deployment.
//!
//! * [`geometry`]: ring sectors, their area and marginal laws, point sampling.
//! * [`plan`]: layered network plans, validation and the plan file format.
//! * [`controlled`]: deployment following a plan exactly.
//! * [`uncontrolled`]: deployment with randomized layer count and widths.
//! * [`density`]: histogram density estimation and error metrics.
//! * [`gof`]: goodness-of-fit statistics used by the verification suites.
//!
//! All randomness comes from [`rng::SeededRng`]; the same seed always gives
//! the same output.

pub mod cli;
pub mod controlled;
pub mod density;
pub mod deployment;
pub mod error;
pub mod fmt;
pub mod geometry;
pub mod gof;
pub mod plan;
pub mod reference;
pub mod rng;
pub mod uncontrolled;

pub use controlled::{deploy_controlled, deploy_sector, sector_densities};
pub use deployment::{Deployment, DeploymentSource, SectorRun, SectorTag};
pub use error::{Error, Result};
pub use geometry::{Bounds, Point2D, RingSector};
pub use plan::{load_plan, save_plan, LayerSpec, NetworkPlan};
pub use rng::{SeededRng, UniformSource};
pub use uncontrolled::{deploy_auto, AutoConfig, AutoRealization};
