//! Free Gaussian wavepackets in natural units (hbar = 1, mass explicit).
//!
//! A packet is parametrized by the inverse momentum width `a`, the
//! dimensionless drift `b` (so the mean momentum is b/a), the initial center
//! `c`, and the mass `m`. Its normalized momentum wavefunction is
//!
//!     chi(p) = sqrt(a) / pi^{1/4} * exp[-b^2/2 + p (b a - i c) - a^2 p^2 / 2],
//!
//! giving <p> = b/a and Var(p) = 1/(2 a^2). Free evolution multiplies chi by
//! exp(-i t p^2 / 2m).

use num_complex::Complex64;
use sha2::{Digest, Sha256};

use crate::error::{CoreError, Result};
use crate::specfun::QuadratureControl;

const PI_QUARTER_ROOT: f64 = 1.331_335_363_800_389_7; // pi^{1/4}

/// Single-particle Gaussian state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacket {
    /// Inverse momentum width (a > 0); coordinate width at t = 0 is a/sqrt(2).
    pub a: f64,
    /// Momentum drift parameter; mean momentum is b/a.
    pub b: f64,
    /// Initial center of the packet.
    pub c: f64,
    /// Particle mass (m > 0).
    pub m: f64,
}

impl GaussianPacket {
    pub fn new(a: f64, b: f64, c: f64, m: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite() && m.is_finite()) {
            return Err(CoreError::InvalidInput(
                "packet parameters must be finite".into(),
            ));
        }
        if a <= 0.0 {
            return Err(CoreError::InvalidInput(format!(
                "packet width parameter a = {a} must be > 0"
            )));
        }
        if m <= 0.0 {
            return Err(CoreError::InvalidInput(format!(
                "packet mass m = {m} must be > 0"
            )));
        }
        Ok(Self { a, b, c, m })
    }

    /// Mean momentum b/a.
    pub fn mean_momentum(&self) -> f64 {
        self.b / self.a
    }

    /// Momentum variance 1/(2 a^2).
    pub fn momentum_variance(&self) -> f64 {
        1.0 / (2.0 * self.a * self.a)
    }

    /// Dimensionless time tau = t / (m a^2).
    pub fn tau(&self, t: f64) -> f64 {
        t / (self.m * self.a * self.a)
    }

    /// Center of |psi(x,t)|^2: c + (b/a) t / m.
    pub fn center_at(&self, t: f64) -> f64 {
        self.c + self.mean_momentum() * t / self.m
    }

    /// Coordinate standard deviation (a / sqrt(2)) sqrt(1 + tau^2).
    pub fn sigma_x(&self, t: f64) -> f64 {
        let tau = self.tau(t);
        self.a / std::f64::consts::SQRT_2 * (1.0 + tau * tau).sqrt()
    }
}

/// Momentum-space amplitude psi(p, t) = exp(-i t p^2 / 2m) chi(p).
pub fn momentum_amplitude(pkt: &GaussianPacket, p: f64, t: f64) -> Complex64 {
    let GaussianPacket { a, b, c, m } = *pkt;
    let exponent = Complex64::new(
        -b * b / 2.0 + p * b * a - a * a * p * p / 2.0,
        -p * c - t * p * p / (2.0 * m),
    );
    a.sqrt() / PI_QUARTER_ROOT * exponent.exp()
}

/// Coordinate-space amplitude; closed form of the free Gaussian evolution.
pub fn position_amplitude(pkt: &GaussianPacket, x: f64, t: f64) -> Complex64 {
    let GaussianPacket { a, b, .. } = *pkt;
    let tau = pkt.tau(t);
    let xi = (x - pkt.c) / a;
    let one_itau = Complex64::new(1.0, tau);
    let z = Complex64::new(xi, -b);
    let exponent = -Complex64::new(b * b / 2.0, 0.0) - z * z / (2.0 * one_itau);
    exponent.exp() / (PI_QUARTER_ROOT * (a * one_itau).sqrt())
}

/// State overlap <L|R>, conserved under free evolution.
pub fn overlap(left: &GaussianPacket, right: &GaussianPacket) -> Complex64 {
    let (al, bl, cl) = (left.a, left.b, left.c);
    let (ar, br, cr) = (right.a, right.b, right.c);
    let s = al * al + ar * ar;
    let amp = (2.0 * al * ar / s).sqrt();
    let exponent = Complex64::new(
        -((al * br - ar * bl).powi(2) + (cr - cl).powi(2)) / (2.0 * s),
        (cl - cr) * (ar * br + al * bl) / s,
    );
    amp * exponent.exp()
}

/// Wigner function of a free Gaussian packet: a product of Gaussians in
/// momentum and in the comoving coordinate, hence non-negative.
pub fn wigner(pkt: &GaussianPacket, x: f64, p: f64, t: f64) -> f64 {
    let GaussianPacket { a, b, c, m } = *pkt;
    let dp = a * p - b;
    let dx = x - c - p * t / m;
    (-dp * dp - dx * dx / (a * a)).exp() / std::f64::consts::PI
}

/// Exchange statistics of the pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistics {
    Bosonic,
    Fermionic,
}

impl Statistics {
    /// Sign eta entering symmetrized-state interference terms.
    pub fn sign(&self) -> f64 {
        match self {
            Statistics::Bosonic => 1.0,
            Statistics::Fermionic => -1.0,
        }
    }

    pub fn from_sign(eta: i8) -> Result<Self> {
        match eta {
            1 => Ok(Statistics::Bosonic),
            -1 => Ok(Statistics::Fermionic),
            other => Err(CoreError::InvalidInput(format!(
                "eta must be +1 or -1, got {other}"
            ))),
        }
    }
}

/// Two identical packets heading for a collision, plus numerical controls.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub left: GaussianPacket,
    pub right: GaussianPacket,
    pub eta: Statistics,
    pub quad: QuadratureControl,
}

impl Scenario {
    pub fn new(
        left: GaussianPacket,
        right: GaussianPacket,
        eta: Statistics,
        quad: QuadratureControl,
    ) -> Result<Self> {
        quad.validate()?;
        let scale = left.m.abs().max(right.m.abs());
        if (left.m - right.m).abs() > 1e-12 * scale {
            return Err(CoreError::InvalidInput(format!(
                "identical particles must share a mass: {} vs {}",
                left.m, right.m
            )));
        }
        Ok(Self {
            left,
            right,
            eta,
            quad,
        })
    }

    pub fn mass(&self) -> f64 {
        self.left.m
    }

    /// Initial separation d = c_R - c_L.
    pub fn separation(&self) -> f64 {
        self.right.c - self.left.c
    }

    /// Mean relative momentum <p_R> - <p_L>.
    pub fn mean_relative_momentum(&self) -> f64 {
        self.right.mean_momentum() - self.left.mean_momentum()
    }

    pub fn equal_widths(&self) -> bool {
        (self.left.a - self.right.a).abs() <= 1e-12 * self.left.a.max(self.right.a)
    }

    /// Scenario with the packet roles exchanged.
    pub fn swapped(&self) -> Scenario {
        Scenario {
            left: self.right,
            right: self.left,
            eta: self.eta,
            quad: self.quad,
        }
    }

    /// Hash of the physics-relevant fields (packets, mass, statistics);
    /// numerical controls deliberately excluded.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        for v in [
            self.left.a,
            self.left.b,
            self.left.c,
            self.right.a,
            self.right.b,
            self.right.c,
            self.mass(),
            self.eta.sign(),
        ] {
            hasher.update(v.to_le_bytes());
        }
        let digest = hasher.finalize();
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn packet(a: f64, b: f64, c: f64) -> GaussianPacket {
        GaussianPacket::new(a, b, c, 1.0).unwrap()
    }

    #[test]
    fn momentum_amplitude_at_origin() {
        let v = momentum_amplitude(&packet(1.0, 0.0, 0.0), 0.0, 0.0);
        assert_relative_eq!(v.re, 0.751_125_544_464_942_5, max_relative = 1e-14);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn free_evolution_is_a_momentum_phase() {
        let pkt = packet(0.7, 1.3, -0.4);
        for p in [-2.0, 0.3, 1.9] {
            let m0 = momentum_amplitude(&pkt, p, 0.0).norm();
            let mt = momentum_amplitude(&pkt, p, 3.7).norm();
            assert_relative_eq!(m0, mt, max_relative = 1e-14);
        }
    }

    #[test]
    fn position_amplitude_at_origin() {
        let v = position_amplitude(&packet(1.0, 0.0, 0.0), 0.0, 0.0);
        assert_relative_eq!(v.re, 0.751_125_544_464_942_5, max_relative = 1e-14);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn density_peak_drifts_with_mean_velocity() {
        let pkt = GaussianPacket::new(0.5, 1.2, -2.0, 2.0).unwrap();
        let t = 1.5;
        let x_peak = pkt.center_at(t);
        let step = 1e-4;
        let here = position_amplitude(&pkt, x_peak, t).norm_sqr();
        assert!(here > position_amplitude(&pkt, x_peak + step, t).norm_sqr());
        assert!(here > position_amplitude(&pkt, x_peak - step, t).norm_sqr());
    }

    #[test]
    fn overlap_of_packet_with_itself_is_one() {
        let pkt = packet(0.8, -1.1, 2.3);
        let v = overlap(&pkt, &pkt);
        assert_relative_eq!(v.re, 1.0, max_relative = 1e-14);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn overlap_of_separated_counterpropagating_packets() {
        // frozen from direct evaluation; cross-checked by momentum quadrature
        let l = packet(1.0, 3.33, -2.5);
        let r = packet(1.0, -3.33, 2.5);
        let v = overlap(&l, &r).norm();
        assert_relative_eq!(v, 2.949_927_943_001_929e-8, max_relative = 1e-10);
    }

    #[test]
    fn wigner_is_nonnegative_and_peaked_at_the_classical_point() {
        let pkt = packet(0.4, 0.9, 1.0);
        let t = 0.8;
        let mut max_val: f64 = -1.0;
        let mut max_at = (0.0, 0.0);
        for i in 0..100 {
            for j in 0..100 {
                let x = -4.0 + 10.0 * i as f64 / 99.0;
                let p = -4.0 + 12.0 * j as f64 / 99.0;
                let w = wigner(&pkt, x, p, t);
                assert!(w >= 0.0);
                if w > max_val {
                    max_val = w;
                    max_at = (x, p);
                }
            }
        }
        let p_mean = pkt.mean_momentum();
        assert!((max_at.1 - p_mean).abs() < 0.15);
        assert!((max_at.0 - pkt.center_at(t)).abs() < 0.15);
    }

    #[test]
    fn scenario_rejects_mismatched_masses() {
        let l = GaussianPacket::new(1.0, 0.0, -1.0, 1.0).unwrap();
        let r = GaussianPacket::new(1.0, 0.0, 1.0, 2.0).unwrap();
        assert!(Scenario::new(l, r, Statistics::Bosonic, QuadratureControl::default()).is_err());
    }

    #[test]
    fn invalid_packet_parameters_rejected() {
        assert!(GaussianPacket::new(0.0, 0.0, 0.0, 1.0).is_err());
        assert!(GaussianPacket::new(1.0, 0.0, 0.0, -1.0).is_err());
        assert!(GaussianPacket::new(1.0, f64::NAN, 0.0, 1.0).is_err());
    }

    #[test]
    fn fingerprint_tracks_physics_fields_only(){
        let l = packet(1.0, 3.33, -2.5);
        let r = packet(1.0, -3.33, 2.5);
        let sc = Scenario::new(l, r, Statistics::Bosonic, QuadratureControl::default()).unwrap();
        let mut tighter = sc.clone();
        tighter.quad.rel_tol = 1e-6;
        assert_eq!(sc.fingerprint(), tighter.fingerprint());
        let mut moved = sc.clone();
        moved.left.c = -2.6;
        assert_ne!(sc.fingerprint(), moved.fingerprint());
    }
}
