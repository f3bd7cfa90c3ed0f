//! The Weierstraß family `W(x) = Σ_{n≥1} A^n sin(B^n x)`, of Besov regularity
//! `-log_B A` when `1/B <= A < 1 < B` (the endpoint `A = 1/B` has regularity 1).

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::mesh::DyadicMesh;
use crate::{Error, Result};

pub const DEFAULT_TRUNCATION_TOL: f64 = 1e-16;
pub const MAX_TERMS: usize = 2000;

/// Finest levels the calibration leaves out of the fit. On a grid of `2^J`
/// points per period the terms with `B^n >= 2^{J-1}` alias or vanish, which
/// bends the last few level sups away from the line.
pub const CALIBRATION_SKIP_FINE: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeierstrassParams {
    a: f64,
    b: f64,
    truncation_tol: f64,
}

impl WeierstrassParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        Self::with_tolerance(a, b, DEFAULT_TRUNCATION_TOL)
    }

    pub fn with_tolerance(a: f64, b: f64, truncation_tol: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::InvalidParameter("A must lie in (0, 1)"));
        }
        if !(b > 1.0 && b.is_finite()) {
            return Err(Error::InvalidParameter("B must be finite and greater than 1"));
        }
        if (a * b).is_nan() || a * b < 1.0 {
            return Err(Error::InvalidParameter("A·B must be at least 1"));
        }
        if !(truncation_tol > 0.0 && truncation_tol < 1.0) {
            return Err(Error::InvalidParameter("truncation tolerance must lie in (0, 1)"));
        }
        Ok(WeierstrassParams { a, b, truncation_tol })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn truncation_tol(&self) -> f64 {
        self.truncation_tol
    }

    /// Number of terms `N = ⌈log(tol) / log(A)⌉`, at most [`MAX_TERMS`].
    pub fn terms(&self) -> usize {
        let n = libm::ceil(libm::log(self.truncation_tol) / libm::log(self.a));
        (n as usize).clamp(1, MAX_TERMS)
    }

    fn integer_b(&self) -> Option<u64> {
        (self.b == libm::floor(self.b) && self.b < 4294967296.0).then_some(self.b as u64)
    }
}

/// `-log_B A`.
pub fn theoretical_regularity(params: &WeierstrassParams) -> f64 {
    -libm::log(params.a) / libm::log(params.b)
}

/// Truncated series `Σ_{n=1}^{N} A^n sin(B^n x)`.
pub fn weierstrass_eval(params: &WeierstrassParams, x: f64) -> f64 {
    let mut an = 1.0;
    let mut bn = 1.0;
    let mut sum = 0.0;
    for _ in 0..params.terms() {
        an *= params.a;
        bn *= params.b;
        sum += an * libm::sin(bn * x);
    }
    sum
}

/// Where the `2^J` mesh points are taken.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SamplingDomain {
    /// `x_n = 2π n 2^{-J}`: one full period of `W`, rescaled onto the circle.
    #[default]
    Period,
    /// `x_n = n 2^{-J}`: the restriction of `W` to `[0, 1)`, treated as a
    /// function on the circle with a jump at `0`.
    UnitInterval,
}

impl SamplingDomain {
    pub fn abscissa(self, n: usize, depth: u32) -> f64 {
        let t = n as f64 * libm::exp2(-(depth as f64));
        match self {
            SamplingDomain::Period => 2.0 * PI * t,
            SamplingDomain::UnitInterval => t,
        }
    }
}

/// Samples `W` on the dyadic grid of depth `J`.
///
/// Over a full period with integer `B` the phases `B^n x_k` are reduced
/// exactly, as integers modulo `2^J`, and looked up in a sine table; the
/// result agrees with [`weierstrass_eval`] up to rounding in the phase.
pub fn weierstrass_mesh(params: &WeierstrassParams, depth: u32, domain: SamplingDomain) -> Result<DyadicMesh> {
    if !(4..=30).contains(&depth) {
        return Err(Error::InvalidParameter("depth must lie in 4..=30"));
    }
    match (domain, params.integer_b()) {
        (SamplingDomain::Period, Some(b)) => DyadicMesh::new(periodic_integer_mesh(params, b, depth)),
        _ => {
            let len = 1usize << depth;
            let values = (0..len).map(|n| weierstrass_eval(params, domain.abscissa(n, depth))).collect();
            DyadicMesh::new(values)
        }
    }
}

fn periodic_integer_mesh(params: &WeierstrassParams, b: u64, depth: u32) -> Vec<f64> {
    let len = 1usize << depth;
    let mask = (len - 1) as u64;
    let step = 2.0 * PI / len as f64;
    let sines: Vec<f64> = (0..len).map(|m| libm::sin(step * m as f64)).collect();
    let terms = params.terms();
    let powers: Vec<f64> = (0..terms)
        .scan(1.0, |an, _| {
            *an *= params.a;
            Some(*an)
        })
        .collect();
    (0..len as u64)
        .map(|n| {
            let mut m = n;
            let mut sum = 0.0;
            for &an in &powers {
                m = m.wrapping_mul(b) & mask;
                if m == 0 {
                    // every later phase is a multiple of 2π too
                    break;
                }
                sum += an * sines[m as usize];
            }
            sum
        })
        .collect()
}
