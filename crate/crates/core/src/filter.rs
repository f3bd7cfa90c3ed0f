//! Daubechies scaling filters and their quadrature mirrors.

use alloc::vec::Vec;

use crate::filter_table::TABLE;
use crate::{Error, Result};

/// Largest tabulated number of vanishing moments.
pub const MAX_VANISHING_MOMENTS: usize = 20;

/// A Daubechies scaling filter `h` (support `0..2p`) with its wavelet filter `g`.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveletFilter {
    vanishing_moments: usize,
    h: Vec<f64>,
    g: Vec<f64>,
}

impl WaveletFilter {
    /// Builds a filter from an arbitrary scaling filter of even length.
    ///
    /// No orthonormality check is made here; the tabulated constructor
    /// [`daubechies_filter`] is the normal entry point.
    pub fn from_scaling(vanishing_moments: usize, h: Vec<f64>) -> Result<Self> {
        if h.is_empty() || h.len() % 2 != 0 {
            return Err(Error::InvalidParameter("scaling filter must have even, nonzero length"));
        }
        let g = mirror_filter(&h);
        Ok(WaveletFilter { vanishing_moments, h, g })
    }

    pub fn vanishing_moments(&self) -> usize {
        self.vanishing_moments
    }

    /// Low-pass (scaling) filter.
    pub fn h(&self) -> &[f64] {
        &self.h
    }

    /// High-pass (wavelet) filter.
    pub fn g(&self) -> &[f64] {
        &self.g
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    /// Inclusive index range `(first, last)` on which `h` and `g` may be nonzero.
    pub fn support(&self) -> (usize, usize) {
        (0, self.h.len() - 1)
    }
}

/// Daubechies filter with `p` vanishing moments, `1 <= p <= 20`.
pub fn daubechies_filter(p: usize) -> Result<WaveletFilter> {
    if p == 0 || p > MAX_VANISHING_MOMENTS {
        return Err(Error::FilterNotTabulated(p));
    }
    WaveletFilter::from_scaling(p, TABLE[p - 1].to_vec())
}

/// Quadrature mirror of `h`: `g[n] = (-1)^n h[L-1-n]` with `L = len(h)`.
///
/// This is the alternating flip of `h` re-based onto the same support, so a
/// periodic analysis step with `(h, g)` is orthogonal whenever the integer
/// translates of the scaling function are.
pub fn mirror_filter(h: &[f64]) -> Vec<f64> {
    let last = h.len().saturating_sub(1);
    (0..h.len())
        .map(|n| if n % 2 == 0 { h[last - n] } else { -h[last - n] })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shifted_dot(a: &[f64], b: &[f64], shift: usize) -> f64 {
        a.iter().skip(shift).zip(b).map(|(x, y)| x * y).sum()
    }

    /// Moments are taken in the normalized abscissa t = n/(L-1); the condition
    /// is affine-invariant and stays well conditioned at p = 20.
    fn normalized_moment(g: &[f64], k: i32) -> f64 {
        let scale = (g.len() - 1) as f64;
        g.iter()
            .enumerate()
            .map(|(n, v)| libm::pow(n as f64 / scale, k as f64) * v)
            .sum()
    }

    #[test]
    fn haar_is_analytic() {
        let f = daubechies_filter(1).unwrap();
        let r = core::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(f.h(), &[r, r]);
        assert_eq!(f.g(), &[r, -r]);
    }

    #[test]
    fn db2_first_tap_is_closed_form() {
        let f = daubechies_filter(2).unwrap();
        let s3 = libm::sqrt(3.0);
        let exact = [
            (1.0 + s3) / (4.0 * core::f64::consts::SQRT_2),
            (3.0 + s3) / (4.0 * core::f64::consts::SQRT_2),
            (3.0 - s3) / (4.0 * core::f64::consts::SQRT_2),
            (1.0 - s3) / (4.0 * core::f64::consts::SQRT_2),
        ];
        for (a, b) in f.h().iter().zip(exact) {
            assert!((a - b).abs() < 1e-15, "{a} vs {b}");
        }
        assert!((f.h()[0] - 0.482962913).abs() < 1e-9);
    }

    #[test]
    fn unsupported_orders_error() {
        assert_eq!(daubechies_filter(0), Err(Error::FilterNotTabulated(0)));
        assert_eq!(daubechies_filter(21), Err(Error::FilterNotTabulated(21)));
    }

    #[test]
    fn every_tabulated_filter_satisfies_invariants() {
        for p in 1..=MAX_VANISHING_MOMENTS {
            let f = daubechies_filter(p).unwrap();
            assert_eq!(f.len(), 2 * p);
            let sum: f64 = f.h().iter().sum();
            assert!((sum - core::f64::consts::SQRT_2).abs() < 1e-12, "p={p} sum h = {sum}");
            for k in 0..p {
                let d = shifted_dot(f.h(), f.h(), 2 * k);
                let want = if k == 0 { 1.0 } else { 0.0 };
                assert!((d - want).abs() < 1e-10, "p={p} k={k} <h, h(.-2k)> = {d}");
                let c = shifted_dot(f.g(), f.h(), 2 * k);
                assert!(c.abs() < 1e-10, "p={p} k={k} <g(.+2k), h> = {c}");
                let c = shifted_dot(f.h(), f.g(), 2 * k);
                assert!(c.abs() < 1e-10, "p={p} k={k} <h(.+2k), g> = {c}");
            }
            for k in 0..p as i32 {
                let m = normalized_moment(f.g(), k);
                assert!(m.abs() < 1e-8, "p={p} moment {k} = {m}");
            }
        }
    }

    #[test]
    fn mirror_sums_to_zero() {
        for p in [2, 5, 13] {
            let g = mirror_filter(daubechies_filter(p).unwrap().h());
            assert!(g.iter().sum::<f64>().abs() < 1e-12);
        }
    }
}
