//! JSON front end for `mopsym-core`.
//!
//! The binary is a thin wrapper: it builds a [`JobSpec`] from the command line
//! and hands it to [`run`]. Tests drive the same entry points directly.

pub mod artifact;
pub mod commands;
pub mod convert;
pub mod error;
pub mod schema;

pub use artifact::{Artifact, Diagnostic, Document, SCHEMA_ID};
pub use commands::{parse_document, run, verify_document, Command, JobSpec, Options, RunOutcome};
pub use error::{CliError, EXIT_DEGENERATE, EXIT_INVALID};
pub use schema::schema_check;
