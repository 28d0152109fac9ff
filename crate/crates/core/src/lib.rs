#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

//! Toric Sasaki cones: dual cones and Reeb slices, equivariant index and
//! weight characters, the δ-invariant and Futaki invariant, and volume
//! minimization over the Reeb cone.

pub mod characters;
mod error;
pub mod geometry;
pub mod linalg;
pub mod optimize;
pub mod scalar;
pub mod stability;

pub use characters::{
    decompose_dual, index_character, truncated_character_oracle, weight_character,
    CharacterOptions, LaurentSeries, OracleValue, SimplicialPiece,
};
pub use error::{Error, ErrorClass, Result};
pub use geometry::{
    dual_cone, gorenstein_vector, polytope_slice, GorensteinVector, PolytopeSlice, ReebVector,
    ToricCone, Warning,
};
pub use optimize::{
    grid_search_oracle, minimize_volume, rationality_probe, volume_functional, GridResult,
    MinimizeOptions, MinimizeResult, RationalCandidate, VolumeObjective,
};
pub use scalar::Scalar;
pub use stability::{
    delta, futaki_product, log_discrepancy, s_m_oracle, s_value, FutakiReport, StabilityReport,
    ToricValuation,
};
