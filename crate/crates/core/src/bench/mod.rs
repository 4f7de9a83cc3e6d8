//! Bound evaluation, reports, configuration files and the experiment runner.

pub mod cli;
pub mod config;
pub mod pipeline;
pub mod report;
pub mod rhs;
pub mod sweep;

use thiserror::Error;

use crate::constructions::ConstructionError;
use crate::counting::CountError;
use crate::energy::EnergyError;
use crate::erdos::ErdosError;
use crate::geom::GeomError;
use crate::quadrics::QuadricError;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Parse(#[from] config::ParseError),
    #[error("sweep spec: {0}")]
    Spec(String),
    #[error(transparent)]
    Rhs(#[from] rhs::RhsError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Quadric(#[from] QuadricError),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Erdos(#[from] ErdosError),
    #[error(transparent)]
    Energy(#[from] EnergyError),
    #[error("verification failed: {0}")]
    Mismatch(String),
    #[error("constraint flags violated: {0}")]
    Constraint(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl BenchError {
    /// 1 usage, 2 parse, 3 constraint violation, 4 overflow or internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Usage(_) | BenchError::Io(_) | BenchError::Rhs(_) => 1,
            BenchError::Parse(_) | BenchError::Spec(_) => 2,
            BenchError::Constraint(_) | BenchError::Construction(ConstructionError::Constraint(_)) => 3,
            BenchError::Count(CountError::Overflow)
            | BenchError::Erdos(ErdosError::Count(CountError::Overflow))
            | BenchError::Erdos(ErdosError::IdentityMismatch { .. })
            | BenchError::Energy(EnergyError::CriterionMismatch { .. })
            | BenchError::Energy(EnergyError::HitCount(_))
            | BenchError::Mismatch(_) => 4,
            // Remaining geometric errors come from inputs that parse but do
            // not fit the requested computation.
            _ => 2,
        }
    }
}
