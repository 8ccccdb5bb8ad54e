//! Seeded verification campaigns over the checks in `qpslab-core`, with JSON
//! reports and a small evaluation front end.

pub mod campaign;
pub mod config;
pub mod eval;
pub mod report;

pub use campaign::run_suite;
pub use config::{Backend, CampaignConfig, Suite};
pub use eval::{eval_command, EvalKind};
pub use report::{CheckRecord, VerificationReport};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, unknown names, malformed inputs. Exit code 2.
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qpslab_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}
