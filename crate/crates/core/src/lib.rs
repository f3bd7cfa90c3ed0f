//! Besov regularity of sampled circle maps via the periodic Daubechies fast
//! wavelet transform, together with the mesh generators it is calibrated and
//! used on: the Weierstraß family and the attractor of the pinched skew product
//!
//! ```text
//! θ ↦ θ + ω (mod 1),   x ↦ 2σ·tanh(x)·(ε + |cos 2πθ|).
//! ```
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! parallel sweeps live in the `snawave` companion crate.

#![no_std]

extern crate alloc;

mod error;
mod filter_table;

pub mod filter;
pub mod fwt;
pub mod mesh;
pub mod regularity;
pub mod sna;
pub mod weierstrass;

pub use error::{Error, Result};
pub use filter::{daubechies_filter, mirror_filter, WaveletFilter, MAX_VANISHING_MOMENTS};
pub use fwt::{fwt_forward, fwt_inverse, init_coeffs, WaveletDecomposition};
pub use mesh::DyadicMesh;
pub use regularity::{
    estimate_from_decomposition, estimate_regularity, level_sups, reg_map, regress, EstimatorConfig,
    LevelSupSeries, Regression, RegularityEstimate,
};
