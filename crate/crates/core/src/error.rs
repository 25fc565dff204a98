use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("associativity violation: max basis-triple residual {residual:e} at (v{i}*v{j})*v{k}")]
    AssociativityViolation {
        residual: f64,
        i: usize,
        j: usize,
        k: usize,
    },

    #[error("unity violation: max residual {residual:e} against basis vector v{index}")]
    UnityViolation { residual: f64, index: usize },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("bad preset parameter: {0}")]
    BadPresetParameter(String),

    #[error("elements belong to different algebras")]
    AlgebraMismatch,

    #[error("element is not invertible")]
    NotInvertible,

    #[error("function evaluation failed: {0}")]
    EvaluationFailure(String),

    #[error("relation does not vanish in the algebra (residual {0:e})")]
    RelationNotNull(f64),

    #[error("unsupported relation: {0}")]
    UnsupportedRelation(String),

    #[error("non-finite integrand at t = {0}")]
    NonFiniteIntegrand(f64),

    #[error("bad curve: {0}")]
    BadCurve(String),

    #[error("non-finite term at index {0}")]
    NonFiniteTerm(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("power series centers differ")]
    CenterMismatch,

    #[error("slice axes are linearly dependent")]
    DegenerateSlice,

    #[error("series is not entire and L = {l} is not below the root-test radius {radius}")]
    NotEntireAndBeyondRadius { l: f64, radius: f64 },

    #[error("algebra is not commutative")]
    NotCommutative,

    #[error("dimension {0} exceeds the Leibniz determinant cap of 8")]
    DimensionTooLarge(usize),

    #[error("bad index: {0}")]
    BadIndex(String),

    #[error("algebra is not generated by a single element: {0}")]
    NotGenerated(String),
}
