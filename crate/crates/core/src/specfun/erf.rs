//! Complex error function.
//!
//! Three regimes, selected for full f64 relative accuracy after reducing the
//! argument to the first quadrant via erf(-z) = -erf(z) and
//! erf(conj z) = conj(erf(z)):
//!
//! * small |Re z|: Maclaurin series (the loss from alternating-term
//!   cancellation grows like exp(2 Re(z)^2), so the cut is on the real part,
//!   not on |z|);
//! * moderate z off the real axis: erfc(z) = exp(-z^2) w(iz) with the
//!   Faddeeva function w evaluated by a midpoint-rule sum, exponentially
//!   accurate once Im(iz) is bounded away from the real line;
//! * large |z|: optimally truncated asymptotic series for erfc.

use num_complex::Complex64;

use crate::error::{CoreError, Result};

/// Largest |z| accepted; far outside, erf saturates at +-1 along the real
/// directions and callers should use that limit directly.
pub const ERF_MAX_ABS: f64 = 50.0;

const SQRT_PI: f64 = 1.772_453_850_905_516;
/// Series/Faddeeva switch on the first-quadrant real part.
const SERIES_RE_CUT: f64 = 2.6;
/// Faddeeva/asymptotic switch on |z|.
const ASYMPTOTIC_ABS_CUT: f64 = 6.0;

/// Error function of a complex argument.
///
/// Accurate to better than 1e-10 relative for |z| <= 10; errors for NaN
/// input, |z| > [`ERF_MAX_ABS`], or results that overflow f64.
pub fn erf(z: Complex64) -> Result<Complex64> {
    if z.re.is_nan() || z.im.is_nan() {
        return Err(CoreError::InvalidInput("erf argument is NaN".into()));
    }
    if z.norm() > ERF_MAX_ABS {
        return Err(CoreError::Domain(format!(
            "erf argument |z| = {:.3} exceeds supported range {}",
            z.norm(),
            ERF_MAX_ABS
        )));
    }
    // |erf| grows like exp(Im^2 - Re^2); past ~700 the result overflows f64
    if z.im * z.im - z.re * z.re > 700.0 {
        return Err(CoreError::Domain(
            "erf result magnitude overflows f64 for this argument".into(),
        ));
    }

    // quadrant reduction: x >= 0, y >= 0
    let x = z.re.abs();
    let y = z.im.abs();
    let w = Complex64::new(x, y);

    let v = if x <= SERIES_RE_CUT && w.norm() <= ASYMPTOTIC_ABS_CUT {
        erf_series(w)
    } else if w.norm() <= ASYMPTOTIC_ABS_CUT {
        erf_faddeeva(w)
    } else {
        erf_asymptotic(w)
    };

    let v = Complex64::new(v.re, if z.im == 0.0 { 0.0 } else { v.im });
    let v = Complex64::new(if z.re == 0.0 { 0.0 } else { v.re }, v.im);

    // undo the quadrant reduction
    let v = if z.im.is_sign_negative() { v.conj() } else { v };
    let v = if z.re.is_sign_negative() { -v } else { v };
    if v.re.is_nan() || v.im.is_nan() {
        return Err(CoreError::Domain("erf evaluation produced NaN".into()));
    }
    Ok(v)
}

/// Error function of a real argument.
pub fn erf_real(x: f64) -> Result<f64> {
    Ok(erf(Complex64::new(x, 0.0))?.re)
}

fn erf_series(z: Complex64) -> Complex64 {
    // erf(z) = 2/sqrt(pi) sum_n (-1)^n z^{2n+1} / (n! (2n+1))
    let z2 = z * z;
    let mut term = z; // (-1)^n z^{2n+1} / n!
    let mut sum = z;
    let n_min = (z.norm_sqr().ceil() as usize) + 2;
    for n in 1..900 {
        term *= -z2 / n as f64;
        let contrib = term / (2 * n + 1) as f64;
        sum += contrib;
        if n >= n_min && contrib.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum * 2.0 / SQRT_PI
}

/// Faddeeva function w(zeta) for Im(zeta) >= 2, by the midpoint rule applied
/// to its Hilbert-transform representation. With node spacing H the error is
/// O(exp(-2 pi Im(zeta) / H)), negligible here.
fn faddeeva_midpoint(zeta: Complex64) -> Complex64 {
    const H: f64 = 0.3;
    let mut sum = Complex64::new(0.0, 0.0);
    // e^{-t^2} < 1e-19 beyond |t| = 6.6
    let n_max = (6.9 / H) as i64;
    for n in -n_max..n_max {
        let t = (n as f64 + 0.5) * H;
        sum += (-t * t).exp() / (zeta - t);
    }
    sum * Complex64::new(0.0, H / std::f64::consts::PI)
}

fn erf_faddeeva(z: Complex64) -> Complex64 {
    // first-quadrant z with Re z > 2.6, so Im(iz) = Re z is safely positive
    let w = faddeeva_midpoint(Complex64::new(-z.im, z.re));
    let erfc = (-z * z).exp() * w;
    Complex64::new(1.0, 0.0) - erfc
}

fn erf_asymptotic(z: Complex64) -> Complex64 {
    // erfc(z) ~ e^{-z^2} / (z sqrt(pi)) sum_k (-1)^k (2k-1)!! / (2 z^2)^k,
    // truncated at the smallest term
    let inv_2z2 = 0.5 / (z * z);
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut last_mag = 1.0f64;
    for k in 0..60 {
        term *= -((2 * k + 1) as f64) * inv_2z2;
        let mag = term.norm();
        if mag >= last_mag || mag <= 1e-17 * sum.norm() {
            break;
        }
        sum += term;
        last_mag = mag;
    }
    let erfc = (-z * z).exp() / (z * SQRT_PI) * sum;
    Complex64::new(1.0, 0.0) - erfc
}
