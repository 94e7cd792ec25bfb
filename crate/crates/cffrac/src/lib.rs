//! Fractional derivatives with exponential (nonsingular) kernel, their exact
//! discrete nabla counterparts, and the machinery to verify every identity
//! relating them — exactly in rational arithmetic on integer grids, and to
//! quadrature tolerance on the real line.
//!
//! Modules:
//!
//! - [`scalar`] — arbitrary-precision rationals, the carrier of all exact checks.
//! - [`grid`] — integer grids, grid functions, first-order differences,
//!   reflection, exponential kernels.
//! - [`discrete`] — the four fractional differences (Caputo/Riemann, left/right),
//!   the two fractional sums, their inversion and duality identities, and
//!   integration by parts, all exact.
//! - [`transform`] — the nabla discrete Laplace transform of a small signal
//!   algebra, discrete convolution, and the transform-side identities.
//! - [`continuous`] — quadrature-based operators on the real line with the
//!   same exponential kernel.
//! - [`varcalc`] — discrete action functionals, first variations, integration
//!   by parts with boundary terms, and an Euler-Lagrange minimizer.

pub mod continuous;
pub mod discrete;
pub mod error;
pub mod grid;
pub mod scalar;
pub mod transform;
pub mod varcalc;

pub use error::{Error, Result};
pub use grid::{GridDomain, GridFunction, Order, Value};
pub use scalar::Scalar;
