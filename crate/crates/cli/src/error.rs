use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments or an unreadable/ill-formed document.
    #[error("{0}")]
    Input(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl From<qgraph_core::Error> for CliError {
    fn from(e: qgraph_core::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
