//! Numerical laboratory for a nonlocal oscillator: the Pais-Uhlenbeck model
//! with Lagrangian (1/2)(qdot^2 - r^2 qddot^2 - q^2), its Green's-kernel
//! canonical structure on trajectory space, the Gaussian ground state of the
//! action operator, and the harmonic-oscillator local limit r -> 0.
//!
//! Modules
//! - [`timegrid`]: uniform interior grids, quadrature, difference operators,
//!   trajectories.
//! - [`puoperator`]: the operator L = 1 + r^2 d^2/dt^2, its spectrum, Green's
//!   kernels, functional calculus and trace series.
//! - [`classical`]: Lagrangian action, Ostrogradsky canonical form, RK4 flow,
//!   ghost energetics.
//! - [`canonical`]: generalized momentum, the Hamilton functional and the
//!   canonical action on trajectory space.
//! - [`groundstate`]: principal kernel M = sqrt(L), residual diagnostics,
//!   the action eigenvalue and the Gaussian wave functional.
//! - [`locallimit`]: alpha calibration, harmonic-oscillator reference and
//!   convergence sweeps.
//! - [`cli`]: command-line orchestration and CSV/JSON emission.

pub mod canonical;
pub mod classical;
pub mod cli;
pub mod error;
pub mod groundstate;
pub mod linalg;
pub mod locallimit;
pub mod puoperator;
pub mod timegrid;

pub use error::{QplaError, Result};
pub use puoperator::PUParams;
pub use timegrid::{make_grid, TimeGrid, Trajectory};
