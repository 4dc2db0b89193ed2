//! One error type over the whole pipeline so engine-level calls compose
//! without callers matching on per-module enums.

use thiserror::Error;

use crate::cone::ConeError;
use crate::cover::CoverError;
use crate::env::EnvError;
use crate::lp::LpError;
use crate::model::ModelError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error("no teaching set of size at most {max_cardinality} exists")]
    NoTeachingSetWithin { max_cardinality: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
