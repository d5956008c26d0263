//! Classical and semiclassical collision-time machinery: point-particle
//! collision times, the closed-form Wigner-averaged collision-time density,
//! and a phase-space Monte Carlo estimate of the same density.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::error::{CoreError, Result};
use crate::specfun::erf_real;
use crate::wavepacket::Scenario;

/// Which pipeline produced a density curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityMethod {
    Semiclassical,
    Quantum,
    MonteCarlo,
}

impl DensityMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            DensityMethod::Semiclassical => "semiclassical",
            DensityMethod::Quantum => "quantum",
            DensityMethod::MonteCarlo => "monte-carlo",
        }
    }
}

/// Provenance attached to a curve: scenario hash and the quadrature
/// tolerance actually achieved while building it (0 for closed forms).
#[derive(Debug, Clone, PartialEq)]
pub struct CurveMeta {
    pub fingerprint: String,
    pub max_quad_error: f64,
}

/// A sampled probability density over collision times.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityCurve {
    grid: Vec<f64>,
    values: Vec<f64>,
    method: DensityMethod,
    meta: CurveMeta,
}

impl DensityCurve {
    pub fn new(
        grid: Vec<f64>,
        values: Vec<f64>,
        method: DensityMethod,
        meta: CurveMeta,
    ) -> Result<Self> {
        if grid.len() != values.len() || grid.len() < 2 {
            return Err(CoreError::InvalidInput(
                "density curve needs matching grid/value lengths of at least 2".into(),
            ));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(CoreError::InvalidInput(
                "density curve grid must be strictly increasing".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(CoreError::InvalidInput(
                "density curve values must be finite and non-negative".into(),
            ));
        }
        let curve = Self {
            grid,
            values,
            method,
            meta,
        };
        let total = curve.trapezoid_integral();
        if total > 1.0 + 1e-6 {
            return Err(CoreError::ProbabilityBound(format!(
                "density integrates to {total}, above 1"
            )));
        }
        Ok(curve)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn method(&self) -> DensityMethod {
        self.method
    }

    pub fn meta(&self) -> &CurveMeta {
        &self.meta
    }

    pub fn t_min(&self) -> f64 {
        self.grid[0]
    }

    pub fn t_max(&self) -> f64 {
        *self.grid.last().unwrap()
    }

    /// Trapezoid integral over the whole stored grid.
    pub fn trapezoid_integral(&self) -> f64 {
        self.grid
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(t, v)| 0.5 * (v[0] + v[1]) * (t[1] - t[0]))
            .sum()
    }

    /// Trapezoid integral of the curve restricted to [lo, hi] (clipped to the
    /// grid, with linear interpolation at the cut points).
    pub fn integral_between(&self, lo: f64, hi: f64) -> f64 {
        let lo = lo.max(self.t_min());
        let hi = hi.min(self.t_max());
        if hi <= lo {
            return 0.0;
        }
        let mut acc = 0.0;
        for (t, v) in self.grid.windows(2).zip(self.values.windows(2)) {
            let (t0, t1) = (t[0], t[1]);
            if t1 <= lo || t0 >= hi {
                continue;
            }
            let a = t0.max(lo);
            let b = t1.min(hi);
            let f = |x: f64| v[0] + (v[1] - v[0]) * (x - t0) / (t1 - t0);
            acc += 0.5 * (f(a) + f(b)) * (b - a);
        }
        acc
    }
}

/// Classical phase-space point of the pair at t = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpacePoint {
    pub x1: f64,
    pub p1: f64,
    pub x2: f64,
    pub p2: f64,
}

impl PhaseSpacePoint {
    pub fn new(x1: f64, p1: f64, x2: f64, p2: f64) -> Result<Self> {
        if ![x1, p1, x2, p2].iter().all(|v| v.is_finite()) {
            return Err(CoreError::InvalidInput(
                "phase-space coordinates must be finite".into(),
            ));
        }
        Ok(Self { x1, p1, x2, p2 })
    }
}

/// Outcome of a classical collision-time computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CollisionOutcome {
    Collides(f64),
    /// Parallel trajectories (equal momenta) never meet.
    Never,
}

impl CollisionOutcome {
    pub fn time(&self) -> Option<f64> {
        match self {
            CollisionOutcome::Collides(t) => Some(*t),
            CollisionOutcome::Never => None,
        }
    }
}

/// Time at which two free point particles meet: m (x1 - x2) / (p2 - p1).
pub fn classical_collision_time(pt: &PhaseSpacePoint, m: f64) -> Result<CollisionOutcome> {
    if !(m > 0.0) {
        return Err(CoreError::InvalidInput(format!("mass {m} must be > 0")));
    }
    let dp = pt.p2 - pt.p1;
    let scale = pt.p1.abs().max(pt.p2.abs()).max(1.0);
    if dp.abs() <= 1e-14 * scale {
        return Ok(CollisionOutcome::Never);
    }
    Ok(CollisionOutcome::Collides(m * (pt.x1 - pt.x2) / dp))
}

/// Quadratic-in-u reduction of the Wigner collision-time integrand:
/// exponent -(A u^2 - 2 B u + C) plus the |u| moment weight.
fn quadratic_coefficients(sc: &Scenario, t_c: f64) -> (f64, f64, f64, f64) {
    let (al, ar) = (sc.left.a, sc.right.a);
    let m = sc.mass();
    let s = al * al + ar * ar;
    let k = al * al * ar * ar / s;
    let delta = sc.mean_relative_momentum();
    let d = sc.separation();
    let a = k + t_c * t_c / (m * m * s);
    let b = k * delta - t_c * d / (m * s);
    let c = k * delta * delta + d * d / s;
    (a, b, c, s)
}

/// First absolute moment of a Gaussian: int |u| exp(-k (u - mu)^2) du.
fn abs_first_moment(k: f64, mu: f64) -> f64 {
    let arg = k.sqrt() * mu;
    // erf of a real argument never fails inside f64 range; saturate far out
    let erf_val = if arg.abs() > 26.0 {
        arg.signum()
    } else {
        erf_real(arg).expect("real erf within range")
    };
    (-k * mu * mu).exp() / k + mu * (std::f64::consts::PI / k).sqrt() * erf_val
}

/// Semiclassical collision-time density: the Wigner-function average of the
/// point-particle collision time, in closed form through the error function.
pub fn rho_cl(sc: &Scenario, t_c: f64) -> f64 {
    let (a, b, c, s) = quadratic_coefficients(sc, t_c);
    let m = sc.mass();
    let (al, ar) = (sc.left.a, sc.right.a);
    let prefactor = al * ar / (std::f64::consts::PI * m * s);
    let exponent = -(c - b * b / a);
    let density = prefactor * exponent.exp() * abs_first_moment(a, b / a);
    density.max(0.0)
}

/// Integrand of the relative-momentum integral behind [`rho_cl`]; exposed for
/// quadrature cross-checks.
pub fn rho_cl_integrand(sc: &Scenario, t_c: f64, u: f64) -> f64 {
    let (a, b, c, s) = quadratic_coefficients(sc, t_c);
    let m = sc.mass();
    let (al, ar) = (sc.left.a, sc.right.a);
    let prefactor = al * ar / (std::f64::consts::PI * m * s);
    prefactor * u.abs() * (-(a * u * u - 2.0 * b * u + c)).exp()
}

/// Evaluate [`rho_cl`] on an explicit grid.
pub fn rho_cl_curve(sc: &Scenario, grid: &[f64]) -> Result<DensityCurve> {
    let values = grid.iter().map(|&t| rho_cl(sc, t)).collect();
    DensityCurve::new(
        grid.to_vec(),
        values,
        DensityMethod::Semiclassical,
        CurveMeta {
            fingerprint: sc.fingerprint(),
            max_quad_error: 0.0,
        },
    )
}

/// Uniform-bin histogram specification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramSpec {
    pub t_min: f64,
    pub t_max: f64,
    pub bins: usize,
}

impl HistogramSpec {
    pub fn new(t_min: f64, t_max: f64, bins: usize) -> Result<Self> {
        if !(t_max > t_min) || bins == 0 {
            return Err(CoreError::DegenerateBins(format!(
                "need t_max > t_min and bins >= 1, got [{t_min}, {t_max}] with {bins} bins"
            )));
        }
        let width = (t_max - t_min) / bins as f64;
        if !(width > 0.0) {
            return Err(CoreError::DegenerateBins(
                "bin width underflows to zero".into(),
            ));
        }
        Ok(Self { t_min, t_max, bins })
    }

    pub fn width(&self) -> f64 {
        (self.t_max - self.t_min) / self.bins as f64
    }

    pub fn centers(&self) -> Vec<f64> {
        let w = self.width();
        (0..self.bins)
            .map(|i| self.t_min + (i as f64 + 0.5) * w)
            .collect()
    }

    fn bin_of(&self, t: f64) -> Option<usize> {
        if !t.is_finite() || t < self.t_min || t >= self.t_max {
            return None;
        }
        Some(((t - self.t_min) / self.width()) as usize)
    }
}

/// Samples per deterministic substream; the stream index doubles as the
/// ChaCha stream id, so results are independent of worker count.
pub(crate) const MC_CHUNK: u64 = 1 << 16;

/// Run `sample` n times across deterministic per-chunk substreams, binning
/// produced values. Returns (bin counts, number of produced values).
pub(crate) fn parallel_histogram<F>(
    n_samples: u64,
    seed: u64,
    spec: &HistogramSpec,
    sample: F,
) -> (Vec<u64>, u64)
where
    F: Fn(&mut ChaCha8Rng) -> Option<f64> + Sync,
{
    let n_chunks = n_samples.div_ceil(MC_CHUNK);
    (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk);
            let lo = chunk * MC_CHUNK;
            let hi = (lo + MC_CHUNK).min(n_samples);
            let mut counts = vec![0u64; spec.bins];
            let mut produced = 0u64;
            for _ in lo..hi {
                if let Some(t) = sample(&mut rng) {
                    produced += 1;
                    if let Some(b) = spec.bin_of(t) {
                        counts[b] += 1;
                    }
                }
            }
            (counts, produced)
        })
        .reduce(
            || (vec![0u64; spec.bins], 0),
            |(mut acc, na), (c, nb)| {
                for (a, b) in acc.iter_mut().zip(c) {
                    *a += b;
                }
                (acc, na + nb)
            },
        )
}

/// Monte Carlo estimate of the semiclassical density: draw phase-space
/// points from each packet's Wigner distribution at t = 0, map them through
/// the classical collision time, and histogram. Deterministic per seed and
/// independent of the rayon worker count.
pub fn rho_cl_mc(
    sc: &Scenario,
    n_samples: u64,
    seed: u64,
    spec: &HistogramSpec,
) -> Result<DensityCurve> {
    if n_samples == 0 {
        return Err(CoreError::InvalidInput("need at least one sample".into()));
    }
    let m = sc.mass();
    let x_l = Normal::new(sc.left.c, sc.left.a / std::f64::consts::SQRT_2).unwrap();
    let p_l = Normal::new(
        sc.left.mean_momentum(),
        sc.left.momentum_variance().sqrt(),
    )
    .unwrap();
    let x_r = Normal::new(sc.right.c, sc.right.a / std::f64::consts::SQRT_2).unwrap();
    let p_r = Normal::new(
        sc.right.mean_momentum(),
        sc.right.momentum_variance().sqrt(),
    )
    .unwrap();

    let (counts, _) = parallel_histogram(n_samples, seed, spec, |rng| {
        let x1 = x_l.sample(rng);
        let p1 = p_l.sample(rng);
        let x2 = x_r.sample(rng);
        let p2 = p_r.sample(rng);
        if p1 == p2 {
            return None; // measure-zero parallel trajectories
        }
        Some(m * (x1 - x2) / (p2 - p1))
    });

    let norm = 1.0 / (n_samples as f64 * spec.width());
    let values = counts.iter().map(|&c| c as f64 * norm).collect();
    DensityCurve::new(
        spec.centers(),
        values,
        DensityMethod::MonteCarlo,
        CurveMeta {
            fingerprint: sc.fingerprint(),
            max_quad_error: 0.0,
        },
    )
}

/// Suggested symmetric grid range [-T, T] capturing the collision-time
/// density's core: |peak| + 8 linearized widths.
pub fn default_time_span(sc: &Scenario) -> f64 {
    let m = sc.mass();
    let d = sc.separation();
    let delta = sc.mean_relative_momentum();
    let sigma_u = (sc.left.momentum_variance() + sc.right.momentum_variance()).sqrt();
    let sigma_y = 0.5 * (sc.left.a.powi(2) + sc.right.a.powi(2)).sqrt();
    let u_eff = delta.abs().max(sigma_u);
    let t_peak = if delta.abs() > 1e-12 { m * d.abs() / delta.abs() } else { 0.0 };
    let sigma_t =
        m * (sigma_y * sigma_y / (u_eff * u_eff) + d * d * sigma_u * sigma_u / u_eff.powi(4)).sqrt();
    t_peak + 8.0 * sigma_t
}

/// Uniformly spaced grid with `points` nodes on [lo, hi].
pub fn linear_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 || !(hi > lo) {
        return Err(CoreError::InvalidInput(format!(
            "grid needs at least 2 points and hi > lo, got {points} on [{lo}, {hi}]"
        )));
    }
    let step = (hi - lo) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            if i == points - 1 {
                hi
            } else {
                lo + step * i as f64
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::QuadratureControl;
    use crate::wavepacket::{GaussianPacket, Statistics};
    use approx::assert_relative_eq;

    fn scenario(a: f64, b: f64, d: f64) -> Scenario {
        let left = GaussianPacket::new(a, b, -d / 2.0, 1.0).unwrap();
        let right = GaussianPacket::new(a, -b, d / 2.0, 1.0).unwrap();
        Scenario::new(left, right, Statistics::Bosonic, QuadratureControl::default()).unwrap()
    }

    #[test]
    fn head_on_collision_time() {
        let pt = PhaseSpacePoint::new(-1.0, 1.0, 1.0, -1.0).unwrap();
        assert_eq!(
            classical_collision_time(&pt, 1.0).unwrap(),
            CollisionOutcome::Collides(1.0)
        );
    }

    #[test]
    fn counterpropagating_example() {
        let pt = PhaseSpacePoint::new(-2.5, 3.33, 2.5, -3.33).unwrap();
        let t = classical_collision_time(&pt, 1.0).unwrap().time().unwrap();
        assert_relative_eq!(t, 5.0 / 6.66, max_relative = 1e-12);
    }

    #[test]
    fn parallel_trajectories_never_collide() {
        let pt = PhaseSpacePoint::new(-1.0, 2.0, 1.0, 2.0).unwrap();
        assert_eq!(
            classical_collision_time(&pt, 1.0).unwrap(),
            CollisionOutcome::Never
        );
    }

    #[test]
    fn nan_phase_space_rejected() {
        assert!(PhaseSpacePoint::new(f64::NAN, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn density_peaks_near_the_ballistic_estimate() {
        let sc = scenario(1.0, 3.33, 5.0);
        // t ~ m d / (relative mean speed) = 5 / 6.66
        let grid = linear_grid(0.0, 2.0, 2001).unwrap();
        let curve = rho_cl_curve(&sc, &grid).unwrap();
        let (imax, _) = curve
            .values()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap();
        assert!((curve.grid()[imax] - 0.7508).abs() < 0.05);
    }

    #[test]
    fn symmetric_scenario_gives_even_density() {
        let left = GaussianPacket::new(0.8, 0.0, -1.7, 1.0).unwrap();
        let right = GaussianPacket::new(0.8, 0.0, 1.7, 1.0).unwrap();
        let sc = Scenario::new(left, right, Statistics::Bosonic, QuadratureControl::default())
            .unwrap();
        for t in [0.3, 0.9, 2.4, 6.0] {
            let diff = (rho_cl(&sc, t) - rho_cl(&sc, -t)).abs();
            assert!(diff < 1e-10, "asymmetry {diff} at t = {t}");
        }
    }

    #[test]
    fn mc_is_deterministic_per_seed() {
        let sc = scenario(1.0, 3.33, 5.0);
        let spec = HistogramSpec::new(-0.5, 2.0, 50).unwrap();
        let a = rho_cl_mc(&sc, 40_000, 7, &spec).unwrap();
        let b = rho_cl_mc(&sc, 40_000, 7, &spec).unwrap();
        assert_eq!(a.values(), b.values());
        let c = rho_cl_mc(&sc, 40_000, 8, &spec).unwrap();
        assert_ne!(a.values(), c.values());
    }

    #[test]
    fn degenerate_bins_rejected() {
        assert!(HistogramSpec::new(1.0, 1.0, 10).is_err());
        assert!(HistogramSpec::new(0.0, 1.0, 0).is_err());
    }

    #[test]
    fn curve_constructor_enforces_invariants() {
        let meta = CurveMeta {
            fingerprint: "test".into(),
            max_quad_error: 0.0,
        };
        assert!(DensityCurve::new(
            vec![0.0, 1.0, 0.5],
            vec![0.1; 3],
            DensityMethod::Semiclassical,
            meta.clone()
        )
        .is_err());
        assert!(DensityCurve::new(
            vec![0.0, 1.0],
            vec![-0.1, 0.0],
            DensityMethod::Semiclassical,
            meta.clone()
        )
        .is_err());
        assert!(DensityCurve::new(
            vec![0.0, 1.0],
            vec![2.0, 2.0],
            DensityMethod::Semiclassical,
            meta
        )
        .is_err());
    }
}
