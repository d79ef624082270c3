use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unstorable item: column {0} is empty")]
    UnstorableItem(usize),
    #[error("server index {index} out of range (m = {m})")]
    ServerOutOfRange { index: usize, m: usize },
    #[error("item index {index} out of range (n = {n})")]
    ItemOutOfRange { index: usize, n: usize },
    #[error("parameter out of range: {0}")]
    BadParams(String),
    #[error("instance too large for naive oracle: {subsets} subsets exceed budget {budget}")]
    NaiveBudget { subsets: u64, budget: u64 },
    #[error("construction self-verification failed: {0}")]
    SelfVerify(String),
    #[error("construction infeasible: {0}")]
    Infeasible(String),
    #[error("forbidden configuration on vertices {0:?}: {1}")]
    ForbiddenConfiguration(Vec<usize>, String),
    #[error("matrix file format error: {0}")]
    Format(String),
    #[error("matrix too large: m = {0} exceeds 64 rows")]
    TooManyRows(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
