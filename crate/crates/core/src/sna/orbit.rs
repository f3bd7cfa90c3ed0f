//! Attractor meshes from a single orbit.
//!
//! After a transient the orbit points `(θ_n, x_n)` are dropped into the cell
//! `⌊2^J θ_n⌋` of a `2^J` array, or the nearest free one. Because the
//! rotation is uniquely ergodic the array comes out almost sorted, and an
//! insertion sort finishes the job in near-linear time. Reading the sorted
//! `x` values at `i 2^{-J}` samples the invariant graph up to a monotone
//! reparametrization of the circle.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;

use super::angle::Angle;
use super::skew::{step, SkewProductParams, SkewState};
use crate::mesh::DyadicMesh;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OrbitStats {
    /// Points that did not land in their own cell.
    pub displaced: usize,
    /// Element moves made by the insertion sort.
    pub shifts: u64,
    /// Wrapping sum of the bit patterns of all `x` values as generated.
    pub checksum: u64,
}

/// `2^J` attractor samples ordered by angle.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitMesh {
    depth: u32,
    theta: Vec<Angle>,
    z: Vec<f64>,
    stats: OrbitStats,
}

impl OrbitMesh {
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    /// Sorted angles of the samples.
    pub fn angles(&self) -> &[Angle] {
        &self.theta
    }

    pub fn values(&self) -> &[f64] {
        &self.z
    }

    pub fn stats(&self) -> OrbitStats {
        self.stats
    }

    /// `(θ, x)` pairs in angle order.
    pub fn scatter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.theta.iter().zip(&self.z).map(|(t, &x)| (t.to_turns(), x))
    }

    /// Whether the values are a permutation of those generated.
    pub fn checksum_ok(&self) -> bool {
        bits_checksum(&self.z) == self.stats.checksum
    }

    /// Forgets the angles: sample `i` now sits at abscissa `i 2^{-J}`.
    pub fn into_mesh(self) -> Result<DyadicMesh> {
        DyadicMesh::new(self.z)
    }
}

fn bits_checksum(z: &[f64]) -> u64 {
    z.iter().fold(0u64, |acc, v| acc.wrapping_add(v.to_bits()))
}

fn check_args(transient: usize, depth: u32) -> Result<()> {
    if transient == 0 {
        return Err(Error::InvalidParameter("transient must be at least 1"));
    }
    if !(4..=30).contains(&depth) {
        return Err(Error::InvalidParameter("depth must lie in 4..=30"));
    }
    Ok(())
}

fn after_transient(params: &SkewProductParams, transient: usize) -> SkewState {
    let mut state = params.initial_state();
    for _ in 0..transient {
        state = step(params, state);
    }
    state
}

struct Occupancy(Vec<u64>);

impl Occupancy {
    fn is_free(&self, i: usize) -> bool {
        self.0[i >> 6] & (1 << (i & 63)) == 0
    }

    fn take(&mut self, i: usize) {
        self.0[i >> 6] |= 1 << (i & 63);
    }
}

/// Nearest free cell to `i` in circular distance, preferring the higher
/// index on a tie.
fn nearest_free(occ: &Occupancy, i: usize, len: usize) -> Result<usize> {
    let mask = len - 1;
    for d in 1..=len / 2 {
        let right = (i + d) & mask;
        if occ.is_free(right) {
            return Ok(right);
        }
        let left = (i + len - d) & mask;
        if occ.is_free(left) {
            return Ok(left);
        }
    }
    Err(Error::CollisionCascade { slot: i })
}

/// Iterates `transient` steps from the initial state, then places the next
/// `2^depth` orbit points and sorts them by angle.
pub fn generate_orbit_mesh(params: &SkewProductParams, transient: usize, depth: u32) -> Result<OrbitMesh> {
    check_args(transient, depth)?;
    let len = 1usize << depth;
    let mut theta = vec![Angle(0); len];
    let mut z = vec![0.0; len];
    let mut occ = Occupancy(vec![0; len.div_ceil(64)]);
    let mut displaced = 0;
    let mut checksum = 0u64;

    let mut state = after_transient(params, transient);
    for _ in 0..len {
        let home = state.theta.slot(depth);
        let slot = if occ.is_free(home) {
            home
        } else {
            displaced += 1;
            nearest_free(&occ, home, len)?
        };
        occ.take(slot);
        theta[slot] = state.theta;
        z[slot] = state.x;
        checksum = checksum.wrapping_add(state.x.to_bits());
        state = step(params, state);
    }

    let shifts = insertion_sort(&mut theta, &mut z);
    Ok(OrbitMesh { depth, theta, z, stats: OrbitStats { displaced, shifts, checksum } })
}

fn insertion_sort(theta: &mut [Angle], z: &mut [f64]) -> u64 {
    let mut shifts = 0u64;
    for i in 1..theta.len() {
        let (t, x) = (theta[i], z[i]);
        let mut j = i;
        while j > 0 && theta[j - 1] > t {
            theta[j] = theta[j - 1];
            z[j] = z[j - 1];
            j -= 1;
        }
        shifts += (i - j) as u64;
        theta[j] = t;
        z[j] = x;
    }
    shifts
}

/// Comparison sort used in place of the hash placement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaselineSort {
    Heap,
    Unstable,
}

/// Same orbit as [`generate_orbit_mesh`], collected unordered and then sorted
/// by a general-purpose comparison sort.
pub fn generate_orbit_mesh_baseline(
    params: &SkewProductParams,
    transient: usize,
    depth: u32,
    sort: BaselineSort,
) -> Result<OrbitMesh> {
    check_args(transient, depth)?;
    let len = 1usize << depth;
    let mut state = after_transient(params, transient);
    let mut pairs = Vec::with_capacity(len);
    for _ in 0..len {
        pairs.push((state.theta, state.x.to_bits()));
        state = step(params, state);
    }
    let pairs = match sort {
        BaselineSort::Heap => BinaryHeap::from(pairs).into_sorted_vec(),
        BaselineSort::Unstable => {
            pairs.sort_unstable();
            pairs
        }
    };
    let (theta, bits): (Vec<Angle>, Vec<u64>) = pairs.into_iter().unzip();
    let checksum = bits.iter().fold(0u64, |acc, &b| acc.wrapping_add(b));
    let z = bits.into_iter().map(f64::from_bits).collect();
    Ok(OrbitMesh { depth, theta, z, stats: OrbitStats { displaced: 0, shifts: 0, checksum } })
}
