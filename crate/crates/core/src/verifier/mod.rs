//! Executable catalogue of relations and their checks.
//!
//! [`CATALOGUE`] lists every relation with an id such as `exchange/EE` or
//! `commutator/EF`; [`run_suite`] runs a selection of it and returns a
//! [`VerificationReport`].

mod catalogue;
pub mod checks;
mod report;
mod structure;
mod suite;

pub use catalogue::{select, CheckKind, RelationSpec, Route, CATALOGUE};
pub use report::{RelationCheck, SkippedRelation, VerificationReport, REPORT_SCHEMA_VERSION};
pub use structure::{ExchangeForm, Nome, StructureFunctions, THETA_FLOOR};
pub use suite::{run_suite, SuiteConfig, Tolerances};
