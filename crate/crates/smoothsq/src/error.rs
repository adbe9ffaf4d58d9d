use std::path::PathBuf;

/// Failures of a CLI run, each mapped to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure in {module}: {source}")]
    Numerical {
        module: &'static str,
        #[source]
        source: smoothsq_core::Error,
    },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0} selftest check(s) failed")]
    Acceptance(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical { .. } | CliError::Io { .. } => 3,
            CliError::Acceptance(_) => 4,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

/// Tags a core error with the module that raised it.
pub trait Context<T> {
    fn within(self, module: &'static str) -> Result<T, CliError>;
}

impl<T> Context<T> for Result<T, smoothsq_core::Error> {
    fn within(self, module: &'static str) -> Result<T, CliError> {
        self.map_err(|source| CliError::Numerical { module, source })
    }
}
