use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series of order {order} has no derivative of positive order")]
    DegenerateOrder { order: usize },

    #[error("series is not normalized: expected c0 = 0 and c1 = 1")]
    NotNormalized,

    #[error("kernel is not normalized: expected p0 = 1, found {found}")]
    KernelNotNormalized { found: String },

    #[error("non-finite coefficient at index {index}")]
    NonFinite { index: usize },

    #[error("invalid Herglotz measure: {0}")]
    InvalidMeasure(String),

    #[error("need at least {needed} entries, found {found}")]
    Length { needed: usize, found: usize },

    #[error("{what} = {value} is outside the admissible range {range}")]
    Domain {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("index {index} is not allowed (must be >= {min})")]
    Index { index: i64, min: i64 },

    #[error("prefix is not a Caratheodory prefix: D_{k} = {determinant}")]
    Infeasible { k: usize, determinant: f64 },

    #[error("LZ chart degenerates at |p1| = 2: x and y are immaterial")]
    ChartDegenerate,

    #[error("ratio is a 0/0 limit here: {0}")]
    Degenerate(&'static str),

    #[error("objective is not finite at argument {argument}")]
    Evaluation { argument: f64 },

    #[error("invalid optimizer setting: {0}")]
    Settings(String),
}
