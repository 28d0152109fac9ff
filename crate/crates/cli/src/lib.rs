//! Spec parsing, command dispatch and JSON reports for the `reebcone` tool.

pub mod report;
mod run;
pub mod spec;

pub use report::Report;
pub use run::{input_failure, run, Command, Flags, Settings, DEFAULT_PRECISION_BITS, DEFAULT_TOL};
pub use spec::{parse_cone_spec, ConeSpec, Number, SpecError};
