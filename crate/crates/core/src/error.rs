use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("parameter domain violated: {0}")]
    Domain(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("mode {mode} outside exactness window [{lo}, {hi}]")]
    ModeWindow { mode: i64, lo: i64, hi: i64 },

    /// The two-sided expansion difference is not matched by a finite delta comb
    /// over the supplied support points.
    #[error("not a delta comb: max normalised residual {max_residual:.3e}")]
    NotDeltaComb {
        max_residual: f64,
        /// `(exponent, normalised residual)` for every coefficient in the window.
        residual_profile: Vec<(i64, f64)>,
    },
}
