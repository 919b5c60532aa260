use thiserror::Error;

/// Crate-wide error type. Numerical guards become typed errors instead of
/// letting Inf/NaN propagate through the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// A jet division hit the configured guard; the evaluation point sits on
    /// (or numerically too close to) a singular locus of the chart.
    #[error("division guard tripped: |{value:.3e}| < {guard:.3e}")]
    DivisionNearZero { value: f64, guard: f64 },

    /// Metric evaluation failed at this chart point.
    #[error("singular point: {0}")]
    SingularPoint(String),

    /// A family configuration violates one of its invariants.
    #[error("invalid config: {0}")]
    ConfigInvalid(String),

    /// Metric determinant too small to invert reliably.
    #[error("near-singular metric: |det| = {det:.3e} (threshold {threshold:.3e})")]
    NearSingularMetric { det: f64, threshold: f64 },

    /// Rejection sampling gave up; the sampling box is badly matched to the
    /// family's singular loci.
    #[error("sampling exhausted after {rejections} rejections (requested {requested} points)")]
    SamplingExhausted { rejections: u64, requested: usize },

    /// A condition quantity was requested that the family does not define.
    #[error("quantity `{quantity}` is not defined for family [{family}]")]
    IndexNotInFamily { family: String, quantity: String },

    /// Least-squares fit target has zero norm (degenerate metric slipped through).
    #[error("degenerate constant-curvature fit: reference tensor has zero norm")]
    DegenerateFit,

    /// An operation that needs sample points received none.
    #[error("empty sample")]
    EmptySample,

    /// Argument outside an operation's precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
