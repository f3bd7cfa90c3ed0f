//! Besov regularity from the decay of per-level wavelet suprema.
//!
//! For each detail level `j` the estimator takes `s_{-j} = log2 sup_n |d_{-j}[n]|`,
//! fits `s_{-j} ≈ τ·(-j) + log2 C` by least squares and reports `Reg(τ)`. The
//! number of vanishing moments `p` must exceed `max(s, 5/2 - s)`; when it
//! does not, the fit is repeated with a longer filter.

use alloc::vec::Vec;

use crate::filter::{daubechies_filter, MAX_VANISHING_MOMENTS};
use crate::fwt::{fwt_forward, init_coeffs, WaveletDecomposition};
use crate::mesh::DyadicMesh;
use crate::{Error, Result};

/// Pearson coefficient from which a fit counts as evidence of linear decay.
pub const LINEAR_EVIDENCE_PEARSON: f64 = 0.99;

/// Piecewise map from fitted slope to regularity: `t - 1/2` above `1/2`,
/// `t + 1/2` below `-1/2`, and `0` on the plateau `[-1/2, 1/2]`.
pub fn reg_map(t: f64) -> f64 {
    if t > 0.5 {
        t - 0.5
    } else if t < -0.5 {
        t + 0.5
    } else {
        0.0
    }
}

/// Whether `p` vanishing moments are enough for regularity `s`.
pub fn is_admissible(p: usize, s: f64) -> bool {
    p as f64 > s.max(2.5 - s)
}

/// Levels `j` with `2^j < 2p - 1` (wavelet support wider than the circle).
pub fn default_skip_coarse(p: usize, depth: usize) -> usize {
    let support = 2 * p as u64 - 1;
    (0..depth).take_while(|&j| (1u64 << j) < support).count()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exclusion {
    /// Among the coarsest levels dropped by `skip_coarse`.
    Coarse,
    /// Among the finest levels dropped by `skip_fine`.
    Fine,
    /// Every coefficient at this level is exactly zero.
    ZeroSup,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LevelSup {
    /// Level index `j`; the regression abscissa is `-j`.
    pub level: usize,
    /// `log2 sup_n |d_{-j}[n]|`, `-inf` for an all-zero level.
    pub log2_sup: f64,
    pub excluded: Option<Exclusion>,
}

/// One entry per decomposition level, coarse to fine.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelSupSeries {
    entries: Vec<LevelSup>,
}

impl LevelSupSeries {
    pub fn entries(&self) -> &[LevelSup] {
        &self.entries
    }

    /// Levels that take part in the regression.
    pub fn used(&self) -> impl Iterator<Item = &LevelSup> + '_ {
        self.entries.iter().filter(|e| e.excluded.is_none())
    }

    pub fn zero_levels(&self) -> usize {
        self.entries.iter().filter(|e| e.excluded == Some(Exclusion::ZeroSup)).count()
    }

    /// Smallest `log2 C` with `sup_n |d_{-j}[n]| <= C·2^{-τ j}` on every used level.
    ///
    /// At a fixed exponent this is the Besov-norm proxy whose blow-up marks a
    /// change of regularity space.
    pub fn log2_norm_at(&self, tau: f64) -> Option<f64> {
        self.used().map(|e| e.log2_sup + tau * e.level as f64).reduce(f64::max)
    }
}

/// Per-level log2 suprema of `dec`, flagging the `skip_coarse` coarsest and
/// `skip_fine` finest levels, and any level that is identically zero.
pub fn level_sups(dec: &WaveletDecomposition, skip_coarse: usize, skip_fine: usize) -> Result<LevelSupSeries> {
    let depth = dec.depth();
    if skip_coarse >= depth {
        return Err(Error::InvalidParameter("skip_coarse must be smaller than the depth"));
    }
    let entries = dec
        .levels()
        .iter()
        .enumerate()
        .map(|(level, d)| {
            let sup = d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let excluded = if level < skip_coarse {
                Some(Exclusion::Coarse)
            } else if level + skip_fine >= depth {
                Some(Exclusion::Fine)
            } else if sup == 0.0 {
                Some(Exclusion::ZeroSup)
            } else {
                None
            };
            let log2_sup = if sup == 0.0 { f64::NEG_INFINITY } else { libm::log2(sup) };
            LevelSup { level, log2_sup, excluded }
        })
        .collect();
    Ok(LevelSupSeries { entries })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Regression {
    pub tau: f64,
    pub log2_c: f64,
    pub pearson: f64,
    pub levels_used: usize,
}

/// Ordinary least squares of `s_{-j}` against `-j` over the used levels.
///
/// A series with no spread in `s_{-j}` has an undefined correlation, reported as 0.
pub fn regress(series: &LevelSupSeries) -> Result<Regression> {
    let points: Vec<(f64, f64)> = series.used().map(|e| (-(e.level as f64), e.log2_sup)).collect();
    let n = points.len();
    if n < 3 {
        return Err(Error::TooFewLevels { usable: n });
    }
    let nf = n as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in &points {
        let (dx, dy) = (x - mean_x, y - mean_y);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::ZeroVariance);
    }
    let tau = sxy / sxx;
    let pearson = if syy == 0.0 { 0.0 } else { (sxy / libm::sqrt(sxx * syy)).clamp(-1.0, 1.0) };
    Ok(Regression { tau, log2_c: mean_y - tau * mean_x, pearson, levels_used: n })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstimatorConfig {
    /// Vanishing moments of the first filter tried.
    pub p_start: usize,
    /// Coarse levels to drop; `None` drops those with `2^j < 2p - 1`.
    pub skip_coarse: Option<usize>,
    /// Finest levels to drop.
    pub skip_fine: usize,
    /// Increment of `p` while the fit is not admissible.
    pub p_step: usize,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig { p_start: 10, skip_coarse: None, skip_fine: 0, p_step: 2 }
    }
}

impl EstimatorConfig {
    pub fn with_p(p: usize) -> Self {
        EstimatorConfig { p_start: p, ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegularityEstimate {
    /// Fitted slope.
    pub tau: f64,
    /// Reported regularity `Reg(τ)`.
    pub s: f64,
    /// Regression intercept.
    pub log2_c: f64,
    pub pearson: f64,
    pub levels_used: usize,
    pub vanishing_moments: usize,
    /// `p > max(s, 5/2 - s)`.
    pub admissible: bool,
    /// Pearson at least [`LINEAR_EVIDENCE_PEARSON`].
    pub linear_evidence: bool,
    /// False when more than half of the candidate levels were all-zero.
    pub reliable: bool,
    pub series: LevelSupSeries,
}

/// Regularity of an already computed decomposition, obtained with `p` vanishing moments.
pub fn estimate_from_decomposition(
    dec: &WaveletDecomposition,
    p: usize,
    config: &EstimatorConfig,
) -> Result<RegularityEstimate> {
    let skip_coarse = config.skip_coarse.unwrap_or_else(|| default_skip_coarse(p, dec.depth()));
    let series = level_sups(dec, skip_coarse, config.skip_fine)?;
    let candidates = series.entries().iter().filter(|e| e.excluded != Some(Exclusion::Coarse)
        && e.excluded != Some(Exclusion::Fine)).count();
    if candidates > 0 && series.zero_levels() == candidates {
        return Err(Error::DegenerateInput);
    }
    if series.entries().iter().all(|e| e.log2_sup == f64::NEG_INFINITY) {
        return Err(Error::DegenerateInput);
    }
    let fit = regress(&series)?;
    let s = reg_map(fit.tau);
    Ok(RegularityEstimate {
        tau: fit.tau,
        s,
        log2_c: fit.log2_c,
        pearson: fit.pearson,
        levels_used: fit.levels_used,
        vanishing_moments: p,
        admissible: is_admissible(p, s),
        linear_evidence: fit.pearson >= LINEAR_EVIDENCE_PEARSON,
        reliable: 2 * series.zero_levels() <= candidates,
        series,
    })
}

/// Full estimate from a mesh: initialization, transform, fit, and the
/// vanishing-moment loop. Once the table is exhausted the last estimate is
/// returned with `admissible == false`.
pub fn estimate_regularity(mesh: &DyadicMesh, config: &EstimatorConfig) -> Result<RegularityEstimate> {
    if config.p_step == 0 {
        return Err(Error::InvalidParameter("p_step must be positive"));
    }
    let coeffs = init_coeffs(mesh);
    let mut p = config.p_start;
    loop {
        let filter = daubechies_filter(p)?;
        let dec = fwt_forward(&coeffs, &filter)?;
        let est = estimate_from_decomposition(&dec, p, config)?;
        if est.admissible || p + config.p_step > MAX_VANISHING_MOMENTS {
            return Ok(est);
        }
        p += config.p_step;
    }
}
