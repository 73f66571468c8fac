//! Evolution schemes: proximal and Euler sequences, the exponential-formula
//! reference flow, Yosida-regularized ODE integration, perturbed and
//! Tikhonov variants, and ergodic averages.

pub mod run;
pub mod schedule;
pub mod trajectory;

pub use run::{
    crandall_liggett_point, reference_flow, reference_flow_capped, run_euler,
    run_perturbed_proximal, run_proximal, run_tikhonov_flow, run_yosida_flow, EpsFunction,
    Perturbation,
};
pub use schedule::{make_schedule, ScheduleKind, StepSchedule, SummabilityFlags};
pub use trajectory::{Provenance, Sample, Trajectory};
