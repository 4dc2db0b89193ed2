//! Minimum teaching sets for linear behavior-cloning learners.
//!
//! A learner that plays `argmax_a <w, phi(s, a)>` is taught by showing it
//! state-action demonstrations; the open cone of weight vectors consistent
//! with a demonstration set is spanned by the difference vectors it induces.
//! This crate computes the smallest demonstration set whose cone equals the
//! full policy's cone: reduce the difference vectors to extreme rays by LP
//! elimination, then cover those rays with states, greedily or exactly.
//!
//! The `tie` binary wraps generation, solving, verification, and benching.

pub mod bench;
pub mod cone;
pub mod cover;
pub mod engine;
pub mod env;
mod error;
pub mod lp;
pub mod model;

pub use error::{Error, Result};
