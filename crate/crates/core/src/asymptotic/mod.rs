//! Graded form, the asymptotic system and its relation to the flow.

mod flows;
mod graded;
mod lambda;
mod three;

pub use flows::{
    asymptotic_flow_explicit, asymptotic_flow_ode, divergence_probe, exp_times, one_sided_flow, small_divisor_seed,
    smallest_divisor_direction,
};
pub use graded::{component_degree, grade, ComponentJson, GradedHamiltonian, GradedJson};
pub use lambda::{
    lambda_conjugacy, lambda_conjugacy_residual, lambda_conjugacy_residual_rescaled, solve_asymptotic, LAMBDA_TOLERANCE,
};
pub use three::{kappa_q, three_components, three_graded, three_system_integrate, ThreeState};
