//! Numerical library for the condensation of q-particles (q in [-1, 1])
//! in equilibrium and local-equilibrium steady states: occupation numbers
//! under energy-dependent inverse temperatures, critical densities and
//! chemical-potential solvers, finite-volume box models, distributional
//! two-point kernels with their local-equilibrium residual, and the
//! physical read-outs of condensate states.

pub mod dispersion;
pub mod error;
pub mod finite_dim;
pub mod kernel;
pub mod linalg;
pub mod mu_solver;
pub mod observables;
pub mod quad;
pub mod special;
pub mod statistics;
pub mod temperature;

pub use dispersion::{DispersionKind, DispersionRelation};
pub use error::{Error, Result};
pub use finite_dim::{BohrLine, CMatrix, MatrixModel};
pub use kernel::{SingularPart, TestFunction, TwoPointKernel};
pub use statistics::{Convention, CriticalMu, DensityOutcome, MuBound, QStatistics};
pub use temperature::{
    dimension_condition, AdmissibilityReport, BetaZeroLimit, DimensionVerdict, InverseTempProfile,
    ProfileKind,
};
