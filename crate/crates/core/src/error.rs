use std::fmt;

use crate::plan::PlanViolation;

/// Errors raised by the deployment and estimation routines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid ring sector: {0}")]
    InvalidSector(String),

    #[error("invalid network plan: {}", ViolationList(.0))]
    InvalidPlan(Vec<PlanViolation>),

    #[error("plan parse error: {0}")]
    PlanParse(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("density estimation: {0}")]
    Density(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

struct ViolationList<'a>(&'a [PlanViolation]);

impl fmt::Display for ViolationList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}
