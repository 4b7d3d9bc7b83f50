//! Kirchhoff-type problem `-(a + b‖∇u‖₂^{2α})Δu = u^p + h`.

pub mod homotopy;
pub mod perturbation;
pub mod solution;
pub mod sweep;

pub use homotopy::{
    continuation, homotopy_step, uniform_schedule, ContinuationFailure, FixedPointOptions, Homotopy,
};
pub use perturbation::PerturbationSpec;
pub use solution::{
    kirchhoff_residual, reconstruct, recover_ground_state, semilinear_solution, Provenance,
    SolutionRecord,
};
pub use sweep::{
    blowup_probe, bound_sweep, compare_windows, BlowupTable, BoundsReport, SweepRegime, SweepSpec,
    Window,
};
