use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    Domain(String),

    #[error("normal undefined at corner")]
    CornerPoint,

    #[error("singular parameterization")]
    SingularParameterization,

    #[error("mesh generation failed: {reason} (achieved h = {achieved_h:.6})")]
    MeshResource { reason: String, achieved_h: f64 },

    #[error("invalid mesh: {0}")]
    Mesh(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("assembly failed: {0}")]
    Assembly(String),

    #[error("matrix not positive definite: pivot {pivot:e} at row {row}")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("indefinite mass matrix: {0}")]
    IndefiniteMass(String),

    #[error(
        "eigensolver did not converge after {iterations} iterations (worst residual {:e})",
        residuals.iter().cloned().fold(0.0, f64::max)
    )]
    NoConvergence { iterations: usize, residuals: Vec<f64> },

    #[error("mesh does not resolve the requested spectrum: {0}")]
    Resolution(String),

    #[error("trivial eigenfunction")]
    TrivialEigenfunction,

    #[error("{0}")]
    InvalidInput(String),
}

/// Coarse failure class, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Geometry,
    Mesh,
    Solver,
    Input,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Domain(_) | Error::CornerPoint | Error::SingularParameterization => ErrorClass::Geometry,
            Error::MeshResource { .. } | Error::Mesh(_) => ErrorClass::Mesh,
            Error::NotPositiveDefinite { .. }
            | Error::IndefiniteMass(_)
            | Error::NoConvergence { .. }
            | Error::Resolution(_)
            | Error::Assembly(_) => ErrorClass::Solver,
            Error::Parse { .. } | Error::Io(_) | Error::TrivialEigenfunction | Error::InvalidInput(_) => {
                ErrorClass::Input
            }
        }
    }
}
