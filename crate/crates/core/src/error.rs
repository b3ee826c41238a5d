use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PatsError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unknown scenario `{0}`; valid keys: {1}")]
    UnknownScenario(String, String),

    #[error("corpus generation failed: {0}")]
    Generation(String),

    #[error("cannot adjust an empty index list")]
    EmptyIndices,
}

impl PatsError {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        PatsError::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = PatsError> = std::result::Result<T, E>;
