//! Instance generators: two benchmark families with known structure, a
//! set-cover embedding, and seeded random realizable instances.

mod diamond;
mod random;
mod reduce;
mod tower;

pub use diamond::{gen_diamond, DiamondBoard, DiamondShape};
pub use random::gen_random_realizable;
pub use reduce::{reduce_set_cover, SetCoverSpec};
pub use tower::{gen_polygon_tower, polygon_tower_optimal};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EnvError {
    #[error("invalid generator parameter: {0}")]
    InvalidParam(String),
    #[error("elements {0:?} of the universe appear in no subset")]
    UncoverableUniverse(Vec<usize>),
    #[error("state {state} still had a score tie after {attempts} feature draws")]
    ResampleLimit { state: usize, attempts: usize },
    #[error("malformed cover JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Model(#[from] crate::model::ModelError),
}
