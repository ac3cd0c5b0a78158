use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("missing input: {0}")]
    Missing(String),
    #[error("evaluation failed: {0}")]
    Evaluation(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) | CliError::Io(_) => 2,
            CliError::Missing(_) => 3,
            CliError::Evaluation(_) => 1,
        }
    }
}

impl From<hamalg_core::CheckError> for CliError {
    fn from(e: hamalg_core::CheckError) -> Self {
        CliError::Evaluation(e.to_string())
    }
}

impl From<hamalg_core::morphism::MapError> for CliError {
    fn from(e: hamalg_core::morphism::MapError) -> Self {
        CliError::Evaluation(e.to_string())
    }
}

impl From<hamalg_core::manifold::ChartError> for CliError {
    fn from(e: hamalg_core::manifold::ChartError) -> Self {
        CliError::Evaluation(e.to_string())
    }
}
