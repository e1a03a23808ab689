//! Polynomial-time deciders for the tractable fragments, the complexity
//! classifier, and the dispatcher used by `--engine auto`.

mod classify;
mod deciders;
mod dispatch;

pub use classify::{classify, ComplexityClass, ComplexityVerdict};
pub use deciders::{
    decide_all_universal, decide_bipartite_small_partition, decide_bipartite_with_c4,
    decide_clique_high_thresholds, decide_complete_bipartite, decide_cycle_tractable,
    decide_forest_bounded_prefix, decide_k2_with_constant, decide_path5_one_three, K2Role,
};
pub use dispatch::{dispatch, Decider, Dispatch, COMPLETE_BIPARTITE_GATE};

use thiserror::Error;

use crate::model::ModelError;
use crate::oracle::OracleError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FastpathError {
    #[error("decider precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

pub(crate) fn precondition(msg: impl Into<String>) -> FastpathError {
    FastpathError::Precondition(msg.into())
}
