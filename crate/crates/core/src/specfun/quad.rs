//! Adaptive Gauss-Kronrod quadrature over finite intervals for complex-valued
//! integrands of a real variable.
//!
//! Each interval is scored with an embedded G7/K15 pair; the worst interval is
//! bisected until the summed error estimate meets the requested tolerance or
//! the subdivision budget is exhausted.

use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{CoreError, Result};

/// Tolerances and budget for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureControl {
    /// Relative tolerance on the integral value.
    pub rel_tol: f64,
    /// Absolute tolerance floor.
    pub abs_tol: f64,
    /// Maximum number of interval bisections before giving up.
    pub max_subdivisions: usize,
}

impl Default for QuadratureControl {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureControl {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(CoreError::InvalidInput(
                "quadrature tolerances must be positive".into(),
            ));
        }
        if self.max_subdivisions < 1 {
            return Err(CoreError::InvalidInput(
                "max_subdivisions must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Integral value together with the achieved error estimate.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: Complex64,
    pub abs_error: f64,
    pub subdivisions: usize,
    pub evaluations: usize,
}

// 15-point Kronrod abscissae on [-1, 1]; odd indices are the embedded
// 7-point Gauss nodes (QUADPACK values).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_33,
    0.949_107_912_342_758_524_526_189_684_047_85,
    0.864_864_423_359_769_072_789_712_788_640_93,
    0.741_531_185_599_394_439_863_864_773_280_79,
    0.586_087_235_467_691_130_294_144_838_258_73,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_24,
    0.0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_08,
    0.279_705_391_489_276_667_901_467_771_423_78,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_33,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_20,
    0.104_790_010_322_250_183_839_876_322_541_52,
    0.140_653_259_715_525_918_745_189_590_510_24,
    0.169_004_726_639_267_902_826_583_426_598_55,
    0.190_350_578_064_785_409_913_256_402_421_01,
    0.204_432_940_075_298_892_414_161_999_234_65,
    0.209_482_141_084_727_828_012_999_174_891_71,
];

/// One G7/K15 evaluation on [a, b]: Kronrod value and |K15 - G7| error bound.
fn gk15<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> (Complex64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let f_center = f(center);
    let mut kronrod = f_center * WGK[7];
    let mut gauss = f_center * WG[3];
    let mut res_abs = f_center.norm() * WGK[7];

    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        let sum = f1 + f2;
        kronrod += sum * WGK[j];
        res_abs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += sum * WG[j / 2];
        }
    }

    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).norm();
    (value, err, res_abs * half.abs())
}

#[derive(Debug)]
struct Interval {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
    }
}

/// Adaptively integrate a complex-valued `f` over `[a, b]`.
pub fn integrate_complex<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    ctl: &QuadratureControl,
) -> Result<QuadResult> {
    ctl.validate()?;
    if !a.is_finite() || !b.is_finite() {
        return Err(CoreError::InvalidInput(
            "integration bounds must be finite".into(),
        ));
    }
    if a == b {
        return Ok(QuadResult {
            value: Complex64::new(0.0, 0.0),
            abs_error: 0.0,
            subdivisions: 0,
            evaluations: 0,
        });
    }

    let mut evaluations = 15usize;
    let (v0, e0, _) = gk15(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    let mut total = v0;
    let mut total_err = e0;
    heap.push(Interval {
        a,
        b,
        value: v0,
        error: e0,
    });

    let mut subdivisions = 0usize;
    loop {
        let tolerance = ctl.abs_tol.max(ctl.rel_tol * total.norm());
        if total_err <= tolerance {
            return Ok(QuadResult {
                value: total,
                abs_error: total_err,
                subdivisions,
                evaluations,
            });
        }
        if subdivisions >= ctl.max_subdivisions {
            return Err(CoreError::QuadratureConvergence {
                error: total_err,
                tolerance,
                subdivisions,
            });
        }

        let worst = heap.pop().expect("heap nonempty while error positive");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval at floating-point resolution; accept what we have
            heap.push(worst);
            let tolerance = ctl.abs_tol.max(ctl.rel_tol * total.norm());
            return if total_err <= tolerance * 10.0 {
                Ok(QuadResult {
                    value: total,
                    abs_error: total_err,
                    subdivisions,
                    evaluations,
                })
            } else {
                Err(CoreError::QuadratureConvergence {
                    error: total_err,
                    tolerance,
                    subdivisions,
                })
            };
        }

        let (v1, e1, _) = gk15(&mut f, worst.a, mid);
        let (v2, e2, _) = gk15(&mut f, mid, worst.b);
        evaluations += 30;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Interval {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Interval {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
        subdivisions += 1;
    }
}

/// Adaptively integrate a real-valued `f` over `[a, b]`.
pub fn integrate_real<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    ctl: &QuadratureControl,
) -> Result<QuadResult> {
    integrate_complex(|x| Complex64::new(f(x), 0.0), a, b, ctl)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let ctl = QuadratureControl::default();
        let r = integrate_real(|x| 3.0 * x * x, 0.0, 2.0, &ctl).unwrap();
        assert_relative_eq!(r.value.re, 8.0, max_relative = 1e-14);
        assert_eq!(r.subdivisions, 0);
    }

    #[test]
    fn gaussian_integral() {
        let ctl = QuadratureControl::default();
        let r = integrate_real(|x| (-x * x).exp(), -10.0, 10.0, &ctl).unwrap();
        assert_relative_eq!(r.value.re, PI.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn oscillatory_complex_integral() {
        // int_0^1 e^{i w x} dx = (e^{iw} - 1)/(iw)
        let w = 200.0;
        let ctl = QuadratureControl::default();
        let r = integrate_complex(
            |x| Complex64::new(0.0, w * x).exp(),
            0.0,
            1.0,
            &ctl,
        )
        .unwrap();
        let exact = (Complex64::new(0.0, w).exp() - 1.0) / Complex64::new(0.0, w);
        assert!((r.value - exact).norm() < 1e-11);
    }

    #[test]
    fn budget_exhaustion_reported() {
        let ctl = QuadratureControl {
            rel_tol: 1e-14,
            abs_tol: 1e-16,
            max_subdivisions: 3,
            ..Default::default()
        };
        // nasty integrand needing many splits
        let r = integrate_real(|x| (1e4 * x).sin() / (1e-3 + x * x), -1.0, 1.0, &ctl);
        assert!(matches!(
            r,
            Err(CoreError::QuadratureConvergence { .. })
        ));
    }

    #[test]
    fn zero_width_interval() {
        let ctl = QuadratureControl::default();
        let r = integrate_real(|x| x.exp(), 1.0, 1.0, &ctl).unwrap();
        assert_eq!(r.value.re, 0.0);
    }
}
