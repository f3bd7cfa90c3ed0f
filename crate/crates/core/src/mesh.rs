use alloc::vec::Vec;

use crate::{Error, Result};

/// `2^J` finite samples of a circle map, entry `n` taken at abscissa `n·2^{-J}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DyadicMesh {
    depth: u32,
    values: Vec<f64>,
}

impl DyadicMesh {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let depth = dyadic_depth(values.len())?;
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(DyadicMesh { depth, values })
    }

    /// Samples `f` at `n·2^{-depth}` for `n = 0..2^depth`.
    pub fn from_fn(depth: u32, mut f: impl FnMut(f64) -> f64) -> Result<Self> {
        if depth == 0 || depth > 40 {
            return Err(Error::InvalidParameter("mesh depth must be in 1..=40"));
        }
        let n = 1usize << depth;
        let step = libm::exp2(-(depth as f64));
        Self::new((0..n).map(|i| f(i as f64 * step)).collect())
    }

    /// Scale depth `J`.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Abscissa of entry `n`.
    pub fn abscissa(&self, n: usize) -> f64 {
        n as f64 * libm::exp2(-(self.depth as f64))
    }
}

/// `J` such that `len == 2^J`, `J >= 1`.
pub(crate) fn dyadic_depth(len: usize) -> Result<u32> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    Ok(len.trailing_zeros())
}
