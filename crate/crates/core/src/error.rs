use alloc::string::String;

/// Errors raised by corpus construction, configuration validation and the
/// baseline.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("duplicate tweet id `{0}`")]
    DuplicateTweet(String),
    #[error("invalid hashtag `{0}`: empty after normalization")]
    EmptyHashtag(String),
    #[error("unknown user `{0}`")]
    UnknownUser(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("seed hashtag `{hashtag}` of class `{class}` is not among the feature dimensions")]
    SeedNotInFeatures { class: String, hashtag: String },
    #[error("partition sets overlap on `{0}`")]
    Overlap(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
