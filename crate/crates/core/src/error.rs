use thiserror::Error;

pub type Result<T, E = MaccError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum MaccError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point budget exceeded: design needs {needed} points, budget is {budget}")]
    ResourceLimit { needed: u128, budget: u64 },

    #[error("condition violated: {0}")]
    ConditionViolated(String),

    #[error("topology generation failed: {0}")]
    Generation(String),

    #[error("unsupported design: {0}")]
    UnsupportedDesign(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("scheme not applicable: {0}")]
    NotApplicable(String),

    #[error("internal invariant broken: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl MaccError {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        MaccError::InvalidArgument(msg.into())
    }
}
