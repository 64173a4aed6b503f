use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("no system randomness: {0}")]
    Entropy(String),
    #[error("network: {0}")]
    Net(std::io::Error),
    #[error("{}: {source}", path.display())]
    File {
        path: PathBuf,
        source: tcsp_core::Error,
    },
    #[error(transparent)]
    Core(#[from] tcsp_core::Error),
}

impl CliError {
    /// 1 usage, 2 I/O or malformed input, 3 cryptographic failure.
    pub fn exit_code(&self) -> i32 {
        use tcsp_core::Error as E;
        match self {
            CliError::Usage(_) => 1,
            CliError::Io { .. } | CliError::Net(_) | CliError::Entropy(_) => 2,
            CliError::File { source, .. } | CliError::Core(source) => match source {
                E::Authentication | E::ConfirmationMismatch | E::Protocol(_) => 3,
                E::InvalidParams(_) | E::SameSide => 1,
                _ => 2,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub trait AtPath<T> {
    fn at(self, path: &std::path::Path) -> CliResult<T>;
}

impl<T> AtPath<T> for tcsp_core::Result<T> {
    fn at(self, path: &std::path::Path) -> CliResult<T> {
        self.map_err(|source| CliError::File {
            path: path.to_path_buf(),
            source,
        })
    }
}
