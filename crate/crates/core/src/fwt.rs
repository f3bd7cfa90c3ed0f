//! Periodic (circular) fast wavelet transform.
//!
//! One analysis step at a level holding `n` coefficients computes
//!
//! ```text
//! a'[p] = Σ_k h[k] · a[(2p + k) mod n],   d'[p] = Σ_k g[k] · a[(2p + k) mod n]
//! ```
//!
//! for `p = 0..n/2`. Indices always wrap, including at the coarse levels where
//! the filter is longer than the signal, so every level is an orthogonal map.

use alloc::vec;
use alloc::vec::Vec;

use crate::filter::WaveletFilter;
use crate::mesh::{dyadic_depth, DyadicMesh};
use crate::{Error, Result};

/// Coarse coefficient `a0` plus detail levels `d_{-j}`, `j = 0..J`, where
/// level `j` holds `2^j` coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveletDecomposition {
    a0: f64,
    details: Vec<Vec<f64>>,
}

impl WaveletDecomposition {
    /// Validates that `details[j]` has `2^j` entries.
    pub fn from_parts(a0: f64, details: Vec<Vec<f64>>) -> Result<Self> {
        for (level, d) in details.iter().enumerate() {
            let expected = 1usize << level;
            if d.len() != expected {
                return Err(Error::LevelShape { level, expected, found: d.len() });
            }
        }
        Ok(WaveletDecomposition { a0, details })
    }

    /// Inverse of [`Self::to_flat`]: `a0` followed by the levels coarse to fine.
    pub fn from_flat(flat: &[f64]) -> Result<Self> {
        let depth = dyadic_depth(flat.len())? as usize;
        let mut details = Vec::with_capacity(depth);
        let mut start = 1;
        for level in 0..depth {
            let len = 1usize << level;
            details.push(flat[start..start + len].to_vec());
            start += len;
        }
        Ok(WaveletDecomposition { a0: flat[0], details })
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    /// Scale depth `J` (number of detail levels).
    pub fn depth(&self) -> usize {
        self.details.len()
    }

    /// Detail level `j` (the coefficients `d_{-j}[n]`).
    pub fn level(&self, j: usize) -> &[f64] {
        &self.details[j]
    }

    /// All detail levels, coarse to fine.
    pub fn levels(&self) -> &[Vec<f64>] {
        &self.details
    }

    /// Total number of stored coefficients, always `2^J`.
    pub fn len(&self) -> usize {
        1 + self.details.iter().map(Vec::len).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `a0² + Σ d²`.
    pub fn energy(&self) -> f64 {
        self.a0 * self.a0 + self.details.iter().flatten().map(|d| d * d).sum::<f64>()
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        out.push(self.a0);
        for d in &self.details {
            out.extend_from_slice(d);
        }
        out
    }
}

/// Finest-scale scaling coefficients `a_{-J}[n] = 2^{-J/2} · values[n]`.
pub fn init_coeffs(mesh: &DyadicMesh) -> Vec<f64> {
    let scale = libm::exp2(-0.5 * mesh.depth() as f64);
    mesh.values().iter().map(|v| scale * v).collect()
}

/// Full periodic decomposition of `2^J` finest-scale coefficients.
pub fn fwt_forward(coeffs: &[f64], filter: &WaveletFilter) -> Result<WaveletDecomposition> {
    let depth = dyadic_depth(coeffs.len())? as usize;
    let mut approx = coeffs.to_vec();
    let mut next = vec![0.0; coeffs.len() / 2];
    let mut details = Vec::with_capacity(depth);
    while approx.len() > 1 {
        let half = approx.len() / 2;
        let mut detail = vec![0.0; half];
        analysis_step(&approx, filter, &mut next[..half], &mut detail);
        details.push(detail);
        approx.truncate(half);
        approx.copy_from_slice(&next[..half]);
    }
    details.reverse();
    debug_assert_eq!(details.len(), depth);
    Ok(WaveletDecomposition { a0: approx[0], details })
}

/// Transpose of [`fwt_forward`]; reconstructs the finest-scale coefficients.
pub fn fwt_inverse(dec: &WaveletDecomposition, filter: &WaveletFilter) -> Result<Vec<f64>> {
    let mut approx = vec![dec.a0];
    for (level, d) in dec.details.iter().enumerate() {
        if d.len() != approx.len() {
            return Err(Error::LevelShape { level, expected: approx.len(), found: d.len() });
        }
        let mut out = vec![0.0; 2 * approx.len()];
        synthesis_step(&approx, d, filter, &mut out);
        approx = out;
    }
    Ok(approx)
}

/// One periodic analysis step: `input` (length `n`) into `approx` and
/// `detail` (length `n/2` each).
pub fn analysis_step(input: &[f64], filter: &WaveletFilter, approx: &mut [f64], detail: &mut [f64]) {
    let n = input.len();
    let mask = n - 1;
    let (h, g) = (filter.h(), filter.g());
    let taps = h.len();
    for p in 0..n / 2 {
        let base = 2 * p;
        let (mut a, mut d) = (0.0, 0.0);
        if base + taps <= n {
            let window = &input[base..base + taps];
            for k in 0..taps {
                a += h[k] * window[k];
                d += g[k] * window[k];
            }
        } else {
            for k in 0..taps {
                let x = input[(base + k) & mask];
                a += h[k] * x;
                d += g[k] * x;
            }
        }
        approx[p] = a;
        detail[p] = d;
    }
}

/// Adjoint of [`analysis_step`]; accumulates into `out` (length `2·approx.len()`).
pub fn synthesis_step(approx: &[f64], detail: &[f64], filter: &WaveletFilter, out: &mut [f64]) {
    let n = out.len();
    let mask = n - 1;
    let (h, g) = (filter.h(), filter.g());
    out.iter_mut().for_each(|v| *v = 0.0);
    for p in 0..approx.len() {
        let (a, d) = (approx[p], detail[p]);
        for k in 0..h.len() {
            out[(2 * p + k) & mask] += h[k] * a + g[k] * d;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filter::daubechies_filter;

    #[test]
    fn constant_mesh_gives_unit_a0_and_no_detail() {
        for p in [1, 2, 7, 16] {
            let f = daubechies_filter(p).unwrap();
            let mesh = DyadicMesh::new(vec![1.0; 1 << 9]).unwrap();
            let dec = fwt_forward(&init_coeffs(&mesh), &f).unwrap();
            assert!((dec.a0() - 1.0).abs() < 1e-12, "p={p} a0={}", dec.a0());
            let worst = dec.levels().iter().flatten().fold(0.0f64, |m, d| m.max(d.abs()));
            assert!(worst <= 1e-12, "p={p} max |d| = {worst}");
        }
    }

    #[test]
    fn init_coeffs_scales_by_root_of_depth() {
        let mesh = DyadicMesh::new(vec![3.0; 8]).unwrap();
        let want = 3.0 * libm::exp2(-1.5);
        assert!(init_coeffs(&mesh).iter().all(|&a| a == want));

        let ramp = DyadicMesh::from_fn(20, |x| x).unwrap();
        let a = init_coeffs(&ramp);
        assert_eq!(a[1 << 19], 0.5 * libm::exp2(-10.0));
    }

    #[test]
    fn shapes_follow_dyadic_levels() {
        let f = daubechies_filter(3).unwrap();
        let dec = fwt_forward(&[0.5; 32], &f).unwrap();
        assert_eq!(dec.depth(), 5);
        for j in 0..5 {
            assert_eq!(dec.level(j).len(), 1 << j);
        }
        assert_eq!(dec.len(), 32);
    }

    #[test]
    fn non_power_of_two_is_rejected() {
        let f = daubechies_filter(1).unwrap();
        assert_eq!(fwt_forward(&[1.0; 12], &f), Err(Error::NotPowerOfTwo(12)));
    }

    #[test]
    fn zero_decomposition_inverts_to_zero() {
        let f = daubechies_filter(4).unwrap();
        let dec = WaveletDecomposition::from_flat(&[0.0; 64]).unwrap();
        assert!(fwt_inverse(&dec, &f).unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn a0_only_reconstructs_a_constant() {
        // Periodized scaling functions at level 0 are constant: a0 = 1 gives 2^{-J/2}.
        let f = daubechies_filter(5).unwrap();
        let mut flat = vec![0.0; 16];
        flat[0] = 1.0;
        let rec = fwt_inverse(&WaveletDecomposition::from_flat(&flat).unwrap(), &f).unwrap();
        for v in rec {
            assert!((v - 0.25).abs() < 1e-14);
        }
    }

    #[test]
    fn level_shape_is_validated() {
        let err = WaveletDecomposition::from_parts(0.0, vec![vec![0.0], vec![0.0; 3]]);
        assert_eq!(err, Err(Error::LevelShape { level: 1, expected: 2, found: 3 }));
    }

    #[test]
    fn flat_layout_round_trips() {
        let flat: Vec<f64> = (0..16).map(|i| i as f64).collect();
        let dec = WaveletDecomposition::from_flat(&flat).unwrap();
        assert_eq!(dec.a0(), 0.0);
        assert_eq!(dec.level(2), &[4.0, 5.0, 6.0, 7.0]);
        assert_eq!(dec.to_flat(), flat);
    }
}
