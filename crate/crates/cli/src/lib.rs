//! Command-line front end for `lapspread`: routing certificates, their
//! verification, spectra, corpus scans and the exact congestion oracle.
//!
//! Exit status is 0 when every check passes, 1 when a check fails and 2 for
//! usage, parse and I/O errors.

pub mod commands;
pub mod document;
pub mod error;
pub mod input;

pub use commands::{run, Cli};
pub use document::{verify, CertificateDocument, Verification, SCHEMA_VERSION};
pub use error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    CheckFailed,
}
