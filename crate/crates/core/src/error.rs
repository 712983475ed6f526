use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero divisor requested")]
    ZeroDivisor,

    /// A kernel or field was evaluated at (or too close to) one of its poles.
    #[error("singularity: {what} at distance {distance:e} from {set}")]
    Singularity {
        what: String,
        set: String,
        distance: f64,
    },

    #[error("unsupported dimension m = {0}; only m = 2 and m = 8 are available")]
    UnsupportedDimension(u32),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("ill-conditioned radial fit (condition number {condition:e} > {limit:e}); use a smaller max degree or better-spread radii")]
    IllConditioned { condition: f64, limit: f64 },

    #[error("field `{0}` has no polynomial representation; exact moments need a polynomial integrand")]
    NotPolynomial(String),

    #[error("divergent moment integral: radial exponent {0} is not integrable on the ball")]
    DivergentMoment(i32),

    #[error("evaluation failed at sample {index}: {source}")]
    Sample {
        index: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization: {0}")]
    Serialization(String),
}

impl Error {
    pub(crate) fn at_sample(self, index: u64) -> Error {
        match self {
            e @ Error::Sample { .. } => e,
            e => Error::Sample {
                index,
                source: Box::new(e),
            },
        }
    }
}
