//! Preferential attachment multigraphs with prescribed vertex arrival times.
//!
//! A graph is grown one edge-end at a time. At each step either a new vertex arrives
//! (at the times of the arrival schedule) or the end attaches to an existing vertex
//! with probability proportional to `deg − α`.

pub mod arrivals;
pub mod asymptotics;
pub mod dists;
pub mod error;
pub mod graph;
pub mod identities;
pub mod io;
pub mod likelihood;
pub mod params;
pub mod partition;
pub mod report;
pub mod rng;
pub mod samplers;
pub mod scalar;
pub mod schedule;
pub mod stats;
pub mod validate;

pub use error::{Error, Result};
pub use graph::{Label, LabelSequence, MultigraphView};
pub use params::ModelParams;
pub use schedule::{ArrivalSchedule, ArrivalTime, Provenance};

/// Exact rational arithmetic for small-case checks.
pub type Rational = num_rational::Ratio<i64>;
pub type Params64 = ModelParams<f64>;
pub type Params32 = ModelParams<f32>;
