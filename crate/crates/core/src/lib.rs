//! Exhaustive local optima network analysis of NK fitness landscapes.
//!
//! The pipeline is [`nk::NkInstance::generate`] → [`basin::map_basins`] →
//! [`lon::build_lon`] → [`metrics::compute_all`]; [`experiment`] runs it over
//! ensembles of instances and aggregates the results into tables.

pub mod basin;
pub mod error;
pub mod experiment;
pub mod invariants;
pub mod lon;
pub mod metrics;
pub mod nk;
pub mod stats;

pub use basin::{map_basins, BasinPartition};
pub use error::{Error, Result};
pub use lon::{build_lon, LocalOptimaNetwork};
pub use metrics::{compute_all, NetworkStats};
pub use nk::{Configuration, NeighborhoodModel, NkInstance};
