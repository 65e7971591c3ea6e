//! Size and power studies.
//!
//! Every replication draws from its own counter-indexed stream, so rejection
//! counts are identical for serial and parallel runs. All significance
//! levels of a study share the same replications, which makes the 1% region
//! nested inside the 5% region replication by replication.

mod calibrate;
mod dist;
mod sim;
mod tables;

pub use calibrate::{
    brent, calibrate_censoring, censoring_rate, empirical_censoring_fraction, integrated_survival,
};
pub use dist::{sample_dist, DistributionSpec, GAMMA_ALGORITHM, PARAMETERIZATION};
pub use sim::{rejection_rate, PowerRow, SimulationConfig, Simulator, CALIBRATION_REPS};
pub use tables::{
    custom_table, parse_power_table, reproduce_table, Cell, PowerTable, TableId, FORMAT_VERSION,
};
