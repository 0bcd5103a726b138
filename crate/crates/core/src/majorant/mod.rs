//! Majorant series, the majorant flow and the radius estimates built on them.

mod bounds;
mod burgers;
mod flow;
mod radius;

pub use bounds::{
    all_indices, coefficient_tail_bound, geometric_majorant, geometric_majorant_series, riemann_zeta_upper, s_gamma,
    subseries_norm_bound, zeta_series, GeometricMajorant,
};
pub use burgers::{burgers_boundary, burgers_fixed_point, burgers_radius, FixedPoint, RadiusEstimate};
pub use flow::{domination_violations, majorant_flow, majorant_flow_checkpoints, MajorantField};
pub use radius::{fit_inverse_law, norm_radius, radius_profile, radius_profile_csv, InverseLawFit, RadiusRow};
