//! Command implementations behind the `fourfold` binary.

pub mod error;
pub mod output;
pub mod report;
pub mod source;
pub mod verify;

pub use error::CliError;
pub use report::{Report, ScanReport};
pub use verify::{Suite, VerifyReport};
