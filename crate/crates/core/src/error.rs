use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("matrix entry {value} at ({row}, {col}) is not in {{-1, 0, 1}}")]
    EntryOutOfRange { row: usize, col: usize, value: i64 },

    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("representation has rank {rank} but {rows} rows")]
    RankDeficient { rank: usize, rows: usize },

    #[error("budget exceeded: {what} needs {needed} but the cap is {cap}; {advice}")]
    Budget {
        what: &'static str,
        needed: u128,
        cap: u128,
        advice: &'static str,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("engines disagree: {0}")]
    Disagreement(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
