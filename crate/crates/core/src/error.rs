use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the library.
///
/// `kind()` returns a stable identifier suitable for machine-readable reports.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("rays do not span R^{dim} (rank {rank})")]
    NotFullDimensional { dim: usize, rank: usize },

    #[error("cone contains a line (dual cone has rank {rank} < {dim})")]
    NotPointed { dim: usize, rank: usize },

    #[error("ray {index} is zero, repeated, or not an extreme ray of the cone")]
    RedundantRay { index: usize },

    #[error("vector {index} has length {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("{what} exceeds supported size ({found} > {limit})")]
    ExceedsSupportedSize {
        what: &'static str,
        found: usize,
        limit: usize,
    },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("cone is not Q-Gorenstein: no l with <v_i, l> = 1 for every ray")]
    NotQGorenstein,

    #[error("Gorenstein system has a positive-dimensional solution set; supply l explicitly")]
    DegenerateSolutionSet,

    #[error("Gorenstein vector is not interior to the dual cone")]
    GorensteinNotInterior,

    #[error("Reeb vector is not in the interior of the cone (pairing with dual ray {index} is not positive)")]
    NotInReebCone { index: usize },

    #[error("slice polytope is unbounded")]
    UnboundedSlice,

    #[error("operation requires a rational Reeb vector")]
    IrrationalReeb,

    #[error("valuation vector is not in the cone or is zero")]
    InvalidValuation,

    #[error("expansion order {requested} exceeds supported depth {max}")]
    OrderTooLarge { requested: usize, max: usize },

    #[error("dimension {dim} too small for {what}")]
    DimensionTooSmall { dim: usize, what: &'static str },

    #[error("cutoff {cutoff} too small: estimated relative tail {tail:e} above tolerance {tol:e}")]
    CutoffTooSmall { cutoff: f64, tail: f64, tol: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("boundary divisors require the experimental flag")]
    ExperimentalDisabled,

    #[error("step left the Reeb cone")]
    LeftReebCone,

    #[error("no convergence after {iterations} iterations (gradient norm {gradient_norm:e})")]
    MaxIterations {
        iterations: usize,
        gradient_norm: f64,
    },

    #[error("Newton iteration failed: {0}")]
    NonConvergent(String),
}

/// Coarse classification used to pick process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    MathDomain,
    NonConvergence,
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotFullDimensional { .. } => "NotFullDimensional",
            Error::NotPointed { .. } => "NotPointed",
            Error::RedundantRay { .. } => "RedundantRay",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::ExceedsSupportedSize { .. } => "ExceedsSupportedSize",
            Error::Overflow(_) => "Overflow",
            Error::NotQGorenstein => "NotQGorenstein",
            Error::DegenerateSolutionSet => "DegenerateSolutionSet",
            Error::GorensteinNotInterior => "GorensteinNotInterior",
            Error::NotInReebCone { .. } => "NotInReebCone",
            Error::UnboundedSlice => "UnboundedSlice",
            Error::IrrationalReeb => "IrrationalReeb",
            Error::InvalidValuation => "InvalidValuation",
            Error::OrderTooLarge { .. } => "OrderTooLarge",
            Error::DimensionTooSmall { .. } => "DimensionTooSmall",
            Error::CutoffTooSmall { .. } => "CutoffTooSmall",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::ExperimentalDisabled => "ExperimentalDisabled",
            Error::LeftReebCone => "LeftReebCone",
            Error::MaxIterations { .. } => "MaxIterations",
            Error::NonConvergent(_) => "NonConvergent",
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::NotFullDimensional { .. }
            | Error::NotPointed { .. }
            | Error::RedundantRay { .. }
            | Error::DimensionMismatch { .. }
            | Error::InvalidArgument(_) => ErrorClass::Input,
            Error::MaxIterations { .. } | Error::NonConvergent(_) => ErrorClass::NonConvergence,
            _ => ErrorClass::MathDomain,
        }
    }
}
