use thiserror::Error;

use splfr_core::audit::AuditError;
use splfr_core::engine::EngineError;
use splfr_core::field::FieldError;
use splfr_core::pda::PdaError;
use splfr_core::toy::ToyError;
use splfr_core::tradeoff::TradeoffError;

/// Anything that stops a command before it reaches a verdict. All of these
/// exit with status 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Pda(#[from] PdaError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Audit(#[from] AuditError),
    #[error(transparent)]
    Tradeoff(#[from] TradeoffError),
    #[error(transparent)]
    Toy(#[from] ToyError),
}

impl CliError {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io { path: path.as_ref().display().to_string(), source }
    }
}
