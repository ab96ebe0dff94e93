use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("harmonic dimension Z({d}, {ell}) overflows u64; degree too large")]
    DegreeTooLarge { d: u32, ell: u64 },

    #[error("Newton iteration for Gauss-Legendre root {index} of {n} did not converge")]
    NoConvergence { n: usize, index: usize },

    #[error("singular linear system while building the needlet filter (kappa = {kappa})")]
    SingularFilterSystem { kappa: u32 },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}:{line}: node is {distance:.3e} from the unit sphere")]
    OffSphere {
        path: PathBuf,
        line: usize,
        distance: f64,
    },

    #[error(
        "rule is not exact at degree {degree}: worst residual {residual:.3e} at harmonic (l = {ell}, m = {m})"
    )]
    Certification {
        degree: usize,
        residual: f64,
        ell: usize,
        m: i64,
    },

    #[error("no quadrature of strength >= {required} available for needlet level {level}")]
    MissingDesign { level: usize, required: usize },

    #[error("{0}")]
    Config(String),

    #[error("{0}")]
    Domain(String),

    #[error(
        "truncation degree {l_trunc} is below the first omitted degree {first} of the order-{order} approximation"
    )]
    BelowTruncationFloor {
        order: u32,
        l_trunc: usize,
        first: usize,
    },

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("coefficients were computed for a different needlet frame")]
    FrameMismatch,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
