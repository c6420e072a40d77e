//! Edge-path decompositions, induced vertex languages, deployments and
//! fellow-traveller checks.

mod deployment;
mod ft;
mod induced;
mod tracker;
mod visible;

pub use ft::{
    async_fellow_travel, equivalent_upto, ft_constant, sync_fellow_travel, Equivalence, FtChecker, FtConstant, Sample,
};
pub use deployment::{deployment_of, distinct, trace_position, DeployEntry, DeployOptions, Deployment, Position};
pub use induced::{
    assemble, coset_state_sets, edge_letter, edge_order, erase_identity, induced_language, state_sets, syllable_language,
    translate,
};
pub use tracker::{Marker, TrackerMachine, TrackerReport, TrackerState};
pub use visible::{edge_path_decompose, EdgePathDecomposition, VState, VisibleMachine, SYLLABLE_SLACK};

use crate::fsa::FsaError;
use crate::gog::GogError;
use crate::ygraph::YGraphError;

#[derive(Debug, thiserror::Error)]
pub enum DeployError {
    #[error(transparent)]
    Gog(#[from] GogError),
    #[error(transparent)]
    Fsa(#[from] FsaError),
    #[error(transparent)]
    YGraph(#[from] YGraphError),
    #[error("`{0}` is not a prefix of an accepted word")]
    NotAccepted(String),
    #[error("{0} is not in the target edge class")]
    NotInClass(String),
    #[error("state cap {0} exceeded")]
    StateCap(usize),
    #[error("tracker lost {0}; a larger radius may be needed")]
    TrackerMiss(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}
