//! Monte Carlo and reporting layer used by the command-line tool.

pub mod families;
pub mod inequalities;
pub mod io;
pub mod regions;
pub mod report;
pub mod sampling;

pub use families::{sweep_family, werner_thresholds, Family, WernerThresholds};
pub use inequalities::{verify_inequalities, Bound, InequalityReport};
pub use regions::{region_slice, Axis, RegionLabel, RegionSlice};
pub use report::{classify, report, SampleRecord, SteeringClass, SteeringReport};
pub use sampling::{sample_state, sample_states};
