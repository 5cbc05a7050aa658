//! Searches over finite universes and around base configurations.
//!
//! Everything reported as certified has been re-censused exactly (or
//! matched to declared values numerically); float arithmetic only ever
//! proposes candidates.

mod extend;
mod falsify;
mod probe;
mod subset;
mod universe;

pub use extend::{extend_search, CertifiedPoint, ExtensionGrid, ExtensionResult, PointStatus, Snapped};
pub use falsify::{family_distance, falsify_quad_lemma, FalsificationReport, FalsifyOptions, TrialOutcome};
pub use probe::{conjecture_probe, conjectured, ProbeRow, ProbeStatus};
pub use subset::{exhaustive_best, subset_search, SubsetResult, Witness};
pub use universe::{AngleTable, SearchUniverse, UniverseError};

use crate::census::CensusError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("universe has {0} points; at least 3 are needed")]
    UniverseTooSmall(usize),
    #[error("base configuration already has {census} angles, more than k = {k}")]
    BaseCensusExceedsK { census: String, k: usize },
    #[error(transparent)]
    Universe(#[from] UniverseError),
    #[error(transparent)]
    Census(#[from] CensusError),
}
