//! Special functions and quadrature kernels used by the physics modules:
//! the complex error function, the half-line Gaussian moment integral, and
//! the adaptive integrator they are built on.

mod erf;
mod moment;
mod quad;

pub use erf::{erf, erf_real, ERF_MAX_ABS};
pub use moment::{half_line_moment_integral, half_line_moment_integral_with_error};
pub use quad::{integrate_complex, integrate_real, QuadResult, QuadratureControl};
