//! The normalization flow: exact solution, numerical oracle, canonical
//! transformation and support invariance.

pub mod exact;
pub mod rhs;
pub mod rk4;
pub mod strip;
pub mod transform;

pub use exact::{solve_flow, FlowSolution, TrajectoryJson};
pub use rhs::{rhs_v1, rhs_v2, rhs_v2bar, FlowCoefficient, Snapshot};
pub use rk4::{default_steps, rk4_oracle, rk4_oracle_checkpoints, QuadraticField};
pub use strip::{check_strip_invariance, strip_violations, Region};
pub use transform::{normalizing_transform, CanonicalTransform};
