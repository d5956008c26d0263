//! Half-line Gaussian moment integral
//!
//!     I(alpha, beta) = int_0^inf sqrt(u) exp(alpha u^2 + beta u) du,
//!     Re(alpha) < 0,
//!
//! the building block of the quantum collision-time density.
//!
//! The integrand is truncated where the Gaussian envelope falls below 1e-16
//! of its peak, then integrated adaptively. When the quadratic phase
//! dominates (|Im alpha| >= |Re alpha|) and the linear coefficient cannot
//! blow up the intermediate values, the contour is rotated onto the
//! steepest-descent ray u = r exp(i pi/4 sign(Im alpha)), where the
//! integrand decays like a plain Gaussian and the cost stays flat no matter
//! how fast the real-axis integrand oscillates. The integrand is entire and
//! Gaussian-suppressed throughout the swept sector, so both paths give the
//! same value.

use num_complex::Complex64;

use super::quad::{integrate_complex, QuadratureControl};
use crate::error::{CoreError, Result};

const LN_TRUNCATION: f64 = -36.841_361_487_904_73; // ln(1e-16)
/// Rotation is allowed only while exp(|beta'|^2 / (4 |alpha'|)) stays small
/// enough not to cost significant digits.
const ROTATION_EXPONENT_CAP: f64 = 25.0;

/// Truncation point where exp(ra u^2 + rb u) drops to 1e-16 of its peak
/// (ra < 0).
fn envelope_cutoff(ra: f64, rb: f64) -> f64 {
    let log_peak = if rb > 0.0 { rb * rb / (4.0 * -ra) } else { 0.0 };
    let level = log_peak + LN_TRUNCATION;
    // larger root of ra u^2 + rb u = level
    (-rb - (rb * rb + 4.0 * ra * level).sqrt()) / (2.0 * ra)
}

/// Evaluate I(alpha, beta) to the requested tolerances, also returning the
/// integrator's absolute error estimate.
pub fn half_line_moment_integral_with_error(
    alpha: Complex64,
    beta: Complex64,
    ctl: &QuadratureControl,
) -> Result<(Complex64, f64)> {
    if !(alpha.re.is_finite() && alpha.im.is_finite() && beta.re.is_finite() && beta.im.is_finite())
    {
        return Err(CoreError::InvalidInput(
            "half-line moment integral requires finite parameters".into(),
        ));
    }
    if alpha.re >= 0.0 {
        return Err(CoreError::Divergence(format!(
            "half-line moment integral diverges for Re(alpha) = {} >= 0",
            alpha.re
        )));
    }

    let rotate = alpha.im.abs() >= alpha.re.abs()
        && beta.norm_sqr() / (4.0 * alpha.im.abs()) <= ROTATION_EXPONENT_CAP;

    let (phase, alpha_ray, beta_ray) = if rotate {
        let theta = std::f64::consts::FRAC_PI_4 * alpha.im.signum();
        let e = Complex64::from_polar(1.0, theta);
        (Complex64::from_polar(1.0, 1.5 * theta), alpha * e * e, beta * e)
    } else {
        (Complex64::new(1.0, 0.0), alpha, beta)
    };

    let u_max = envelope_cutoff(alpha_ray.re, beta_ray.re);
    let result = integrate_complex(
        |r| r.sqrt() * (alpha_ray * r * r + beta_ray * r).exp(),
        0.0,
        u_max,
        ctl,
    )?;
    Ok((phase * result.value, result.abs_error))
}

/// Evaluate I(alpha, beta) = int_0^inf sqrt(u) exp(alpha u^2 + beta u) du.
pub fn half_line_moment_integral(
    alpha: Complex64,
    beta: Complex64,
    ctl: &QuadratureControl,
) -> Result<Complex64> {
    half_line_moment_integral_with_error(alpha, beta, ctl).map(|(v, _)| v)
}
