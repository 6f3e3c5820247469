//! Numerical kernels shared by the benchmark problems.

pub mod expm;
pub mod ode;
pub mod quad;
pub mod roots;
pub mod spline;
pub mod tridiag;

pub use expm::{expm, expm_action, DenseMatrix, ExpmCache, MAX_EXPM_DIM};
pub use ode::{reference_solve, Dopri5, IntegrationStats, ReferenceIntegratorConfig};
pub use quad::{cumulative_trapezoid, periodic_sum, trapezoid};
pub use roots::{bisect, solve_scalar, RootOptions, DEFAULT_MAX_ITERATIONS, DEFAULT_ROOT_TOL};
pub use spline::{spline_shift, Boundary, CubicSpline1D, SplineKernel, MIN_KNOTS};
pub use tridiag::{solve_cyclic_tridiagonal, solve_tridiagonal, CyclicTridiagonalLu, TridiagonalLu};
