use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown function `{0}`")]
    NotFound(String),

    #[error("conflict: {0}")]
    Conflict(String),

    #[error("objective `{function}` returned a non-finite value ({value}) at {position:?}")]
    NonFiniteFitness {
        function: String,
        value: f64,
        position: Vec<f64>,
    },

    /// A failed run inside an experiment, tagged with the run that produced it.
    #[error("run failed for {function} (seed {seed}): {source}")]
    Run {
        function: String,
        seed: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
