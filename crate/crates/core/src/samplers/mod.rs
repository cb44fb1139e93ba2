//! Equivalent constructions of (α, t)-graphs.

mod degree_biased;
mod fenwick;
mod head;
mod recursion;
mod stick;

pub use degree_biased::{
    attachment_probabilities, run_degree_biased, sample_db, DegreeBiasedState, DEFAULT_FENWICK_THRESHOLD,
};
pub use head::HeadTracker;
pub use recursion::sample_psi_recursion;
pub use stick::{psi_beta_params, sample_ln_w1, sample_psi, sample_stick_breaking, StickWeights};

use crate::graph::LabelSequence;
use crate::schedule::ArrivalSchedule;

#[derive(Clone, Debug)]
pub struct SamplerOutput {
    pub labels: LabelSequence,
    /// Present for the stick-breaking path only.
    pub psi: Option<StickWeights>,
    pub schedule: ArrivalSchedule,
}
