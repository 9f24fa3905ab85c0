//! Static staged equilibrium, modal estimate, Rayleigh damping and Newmark
//! time integration.

pub mod benchmarks;
pub mod checkpoint;
pub mod dynamic;
pub mod modal;
pub mod model;
pub mod static_solve;

pub use checkpoint::{load_checkpoint, save_checkpoint};
pub use dynamic::{newmark_dynamic_solve, DynamicSolveSettings, DynamicSummary, EnergyBalance, LateralBoundary, StepView};
pub use modal::{lowest_frequency, rayleigh_coefficients, rayleigh_ratio, ModalResult};
pub use model::{Material, Model, GRAVITY};
pub use static_solve::{
    equilibrate, geostatic_initialize, newton_static_solve, prescribed_displacement_solve, reactions, run_stages, StageReport,
    StaticSolveSettings,
};
