use core::f64::consts::LN_2;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::angle::{abs_cos_turns, Angle};
use crate::{Error, Result};

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_TRANSIENT: usize = 100_000;
pub const MIN_LYAPUNOV_POINTS: usize = 1 << 10;
pub const DEFAULT_LYAPUNOV_POINTS: usize = 1 << 20;

/// Parameters of `θ ↦ θ + ω`, `x ↦ 2σ tanh(x) (ε + |cos 2πθ|)` and of the
/// orbit started at `(θ0, x0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SkewProductParams {
    sigma: f64,
    epsilon: f64,
    omega: Angle,
    x0: f64,
    theta0: Angle,
    seed: u64,
}

/// Draws `θ0` from ChaCha8 seeded with `seed`.
fn seeded_angle(seed: u64) -> Angle {
    Angle(ChaCha8Rng::seed_from_u64(seed).next_u64())
}

impl SkewProductParams {
    /// Golden rotation, `x0 = 2σ + 1` and `θ0` drawn from [`DEFAULT_SEED`].
    pub fn new(sigma: f64, epsilon: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter("sigma must be positive and finite"));
        }
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidParameter("epsilon must be non-negative and finite"));
        }
        Ok(SkewProductParams {
            sigma,
            epsilon,
            omega: Angle::GOLDEN,
            x0: 2.0 * sigma + 1.0,
            theta0: seeded_angle(DEFAULT_SEED),
            seed: DEFAULT_SEED,
        })
    }

    /// Redraws `θ0` from `seed`.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self.theta0 = seeded_angle(seed);
        self
    }

    pub fn with_theta0(mut self, theta0: Angle) -> Self {
        self.theta0 = theta0;
        self
    }

    /// `x0` must exceed `2σ`, the supremum of `2σ tanh`.
    pub fn with_x0(mut self, x0: f64) -> Result<Self> {
        if !(x0 > 2.0 * self.sigma && x0.is_finite()) {
            return Err(Error::InvalidParameter("x0 must be finite and exceed 2·sigma"));
        }
        self.x0 = x0;
        Ok(self)
    }

    pub fn with_omega(mut self, omega: Angle) -> Result<Self> {
        if omega.0 == 0 {
            return Err(Error::InvalidParameter("omega must lie in (0, 1)"));
        }
        self.omega = omega;
        Ok(self)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn omega(&self) -> Angle {
        self.omega
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn theta0(&self) -> Angle {
        self.theta0
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn initial_state(&self) -> SkewState {
        SkewState { theta: self.theta0, x: self.x0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SkewState {
    pub theta: Angle,
    pub x: f64,
}

/// Fibre map `2σ tanh(x) (ε + |cos 2πθ|)`, shared by orbits and the transfer operator.
#[inline]
pub fn fibre_map(params: &SkewProductParams, theta: Angle, x: f64) -> f64 {
    2.0 * params.sigma * libm::tanh(x) * (params.epsilon + abs_cos_turns(theta))
}

#[inline]
pub fn step(params: &SkewProductParams, state: SkewState) -> SkewState {
    SkewState { theta: state.theta + params.omega, x: fibre_map(params, state.theta, state.x) }
}

/// Vertical Lyapunov exponent `log 2σ + ∫_0^1 log(ε + |cos 2πθ|) dθ` of the
/// invariant circle `x = 0`, by the composite midpoint rule.
pub fn lyapunov_vertical(params: &SkewProductParams, points: usize) -> Result<f64> {
    if points < MIN_LYAPUNOV_POINTS {
        return Err(Error::InvalidParameter("at least 1024 quadrature points are required"));
    }
    let h = 1.0 / points as f64;
    let integrand = |t: f64| libm::log(params.epsilon + abs_cos_turns(Angle::from_turns(t)));
    let mut sum = 0.0;
    for i in 0..points {
        let t = (i as f64 + 0.5) * h;
        let mut v = integrand(t);
        if v == f64::NEG_INFINITY {
            v = integrand(t + 0.5 * h);
        }
        sum += v;
    }
    Ok(LN_2 + libm::log(params.sigma) + sum * h)
}

/// `φ_k(θ)` for `φ_0 ≡ c` and `φ_k(θ) = 2σ tanh(φ_{k-1}(θ-ω)) (ε + |cos 2π(θ-ω)|)`.
///
/// The recursion is unrolled from the oldest angle `θ - kω`, which makes it
/// the orbit of `(θ - kω, c)` evaluated in the same order of operations.
pub fn transfer_eval(params: &SkewProductParams, k: usize, theta: Angle, c: f64) -> Result<f64> {
    if c.is_nan() || c <= 2.0 * params.sigma {
        return Err(Error::InvalidParameter("c must exceed 2·sigma"));
    }
    let mut angle = theta;
    for _ in 0..k {
        angle = angle - params.omega;
    }
    let mut x = c;
    for _ in 0..k {
        x = fibre_map(params, angle, x);
        angle = angle + params.omega;
    }
    Ok(x)
}

/// `(σ - 3/2)^2` above `σ = 3/2`, zero below; `σ` must lie in `[1, 2]`.
pub fn epsilon_of_sigma(sigma: f64) -> Result<f64> {
    if !(1.0..=2.0).contains(&sigma) {
        return Err(Error::InvalidParameter("sigma must lie in [1, 2]"));
    }
    Ok(if sigma > 1.5 { (sigma - 1.5) * (sigma - 1.5) } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_validation() {
        assert!(SkewProductParams::new(0.0, 0.0).is_err());
        assert!(SkewProductParams::new(1.0, -0.1).is_err());
        let p = SkewProductParams::new(1.5, 0.0).unwrap();
        assert_eq!(p.x0(), 4.0);
        assert!(p.with_x0(3.0).is_err());
        assert!(p.with_omega(Angle(0)).is_err());
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = SkewProductParams::new(1.5, 0.0).unwrap().with_seed(7);
        let b = SkewProductParams::new(1.5, 0.0).unwrap().with_seed(7);
        let c = SkewProductParams::new(1.5, 0.0).unwrap().with_seed(8);
        assert_eq!(a.theta0(), b.theta0());
        assert_ne!(a.theta0(), c.theta0());
    }

    #[test]
    fn pinched_fibre_collapses() {
        let p = SkewProductParams::new(1.7, 0.0).unwrap();
        for &x in &[0.1, 1.0, 50.0] {
            let s = step(&p, SkewState { theta: Angle::from_turns(0.25), x });
            assert_eq!(s.x, 0.0);
            assert_eq!(s.theta, Angle::from_turns(0.25) + Angle::GOLDEN);
        }
    }

    #[test]
    fn zero_circle_is_invariant() {
        let p = SkewProductParams::new(1.7, 0.3).unwrap();
        for i in 0..64 {
            let s = step(&p, SkewState { theta: Angle::from_turns(i as f64 / 64.0), x: 0.0 });
            assert_eq!(s.x, 0.0);
        }
    }

    #[test]
    fn saturation() {
        let p = SkewProductParams::new(1.5, 0.0).unwrap();
        let s = step(&p, SkewState { theta: Angle(0), x: 40.0 });
        assert_eq!(s.x, 3.0);
    }

    #[test]
    fn lyapunov_pinched_is_log_sigma() {
        for &sigma in &[1.0, 1.1, 1.5, 2.0] {
            let p = SkewProductParams::new(sigma, 0.0).unwrap();
            let kappa = lyapunov_vertical(&p, DEFAULT_LYAPUNOV_POINTS).unwrap();
            assert!((kappa - libm::log(sigma)).abs() <= 1e-3, "sigma = {sigma}: {kappa}");
        }
    }

    #[test]
    fn lyapunov_survives_a_node_on_a_zero() {
        // 1026 = 4·256 + 2 puts the midpoint of cell 256 exactly on θ = 1/4
        let p = SkewProductParams::new(1.0, 0.0).unwrap();
        assert!(lyapunov_vertical(&p, 1026).unwrap().is_finite());
        assert!(lyapunov_vertical(&p, 512).is_err());
    }

    #[test]
    fn lyapunov_closed_form_at_unit_epsilon() {
        // ∫_0^1 log(1 + |cos 2πθ|) dθ = 4G/π - log 2 with G Catalan's constant
        const CATALAN: f64 = 0.915_965_594_177_219;
        let p = SkewProductParams::new(1.0, 1.0).unwrap();
        let kappa = lyapunov_vertical(&p, DEFAULT_LYAPUNOV_POINTS).unwrap();
        assert!((kappa - 4.0 * CATALAN / core::f64::consts::PI).abs() < 1e-9);
    }

    #[test]
    fn transfer_base_case() {
        let p = SkewProductParams::new(1.5, 0.0).unwrap();
        assert_eq!(transfer_eval(&p, 0, Angle::from_turns(0.3), 4.0).unwrap(), 4.0);
        assert!(transfer_eval(&p, 3, Angle(0), 3.0).is_err());
    }

    #[test]
    fn epsilon_schedule() {
        assert_eq!(epsilon_of_sigma(1.5).unwrap(), 0.0);
        assert_eq!(epsilon_of_sigma(1.2).unwrap(), 0.0);
        assert_eq!(epsilon_of_sigma(2.0).unwrap(), 0.25);
        assert!((epsilon_of_sigma(1.699219).unwrap() - 0.039688).abs() < 5e-7);
        assert!(epsilon_of_sigma(0.9).is_err());
        assert!(epsilon_of_sigma(2.1).is_err());
    }
}
