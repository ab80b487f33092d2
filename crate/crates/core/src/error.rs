use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("promise violated: {0}")]
    PromiseViolation(String),

    #[error("capacity exceeded: {qubits} qubits requested, at most {max} supported")]
    Capacity { qubits: usize, max: usize },

    #[error("phase angle out of domain: {0}")]
    Domain(String),

    #[error("state leaves the search plane (leakage {0:.3e})")]
    Leakage(f64),

    #[error("failed to parse oracle {origin}: {message}")]
    Parse { origin: String, message: String },

    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Short stable tag, used as the machine-readable prefix of CLI diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Argument(_) => "argument",
            Error::PromiseViolation(_) => "promise",
            Error::Capacity { .. } => "capacity",
            Error::Domain(_) => "domain",
            Error::Leakage(_) => "leakage",
            Error::Parse { .. } => "parse",
            Error::Io { .. } => "io",
        }
    }
}
