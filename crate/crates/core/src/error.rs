use thiserror::Error;

#[derive(Debug, Error)]
pub enum JkaError {
    #[error("unknown algebra family `{0}`")]
    UnknownFamily(String),
    #[error("{family}:{n} is not supported: {reason}")]
    OutOfRange { family: String, n: usize, reason: String },
    #[error("malformed algebra spec `{0}`, expected FAMILY:N")]
    BadAlgebraSpec(String),
    #[error("operands belong to different algebras")]
    AlgebraMismatch,
    #[error("eigenvalues {a} and {b} are closer than the tolerance {tol}")]
    ClusteredSpectrum { a: f64, b: f64, tol: f64 },
    #[error("not a rank-one semi-positive element (defect {defect:.3e})")]
    NotRankOne { defect: f64 },
    #[error("frame axioms violated: {0}")]
    FrameViolation(String),
    #[error("rank deficiency: expected {expected}, found {found}")]
    RankDeficient { expected: usize, found: usize },
    #[error("linear map is outside the structure algebra")]
    OutsideStructureAlgebra,
    #[error("evaluation at the apex with a negative power of r")]
    ApexEvaluation,
    #[error("unknown identity suite `{0}`")]
    UnknownSuite(String),
    #[error("unknown operator kind `{0}`")]
    UnknownOperator(String),
    #[error("{0}")]
    InvalidInput(String),
    #[error("numerical rank unstable under re-seeding (gap {gap:.3e})")]
    UnstableRank { gap: f64 },
    #[error("operator leaves the filtered space (re-expansion residual {residual:.3e})")]
    ClosureFailure { residual: f64 },
    #[error("eigenvalue cluster near {0} is ambiguous")]
    AmbiguousCluster(f64),
    #[error("quadrature order {order} cannot integrate degree {degree} exactly")]
    UnderResolved { order: usize, degree: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, JkaError>;
