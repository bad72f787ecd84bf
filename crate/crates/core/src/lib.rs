//! Exact rational machinery around the border rank of 2×2 matrix multiplication:
//! tensors and flattenings, Segre fundamental forms and limit planes, the sixteen
//! components of the sixth secant variety with witnesses, certification checks,
//! and a floating-point ALS probe.

pub mod catalog;
pub mod certify;
pub mod formats;
pub mod linalg;
pub mod numeric;
pub mod rational;
pub mod report;
pub mod segre;
pub mod tensor;

pub use linalg::RationalMatrix;
pub use rational::Q;
pub use tensor::{Factor, Rank1Term, Tensor3, Vector};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
