//! The pinched skew product and its attractor as a dyadic mesh.

mod angle;
mod orbit;
mod skew;

pub use angle::{abs_cos_turns, Angle};
pub use orbit::{generate_orbit_mesh, generate_orbit_mesh_baseline, BaselineSort, OrbitMesh, OrbitStats};
pub use skew::{
    epsilon_of_sigma, fibre_map, lyapunov_vertical, step, transfer_eval, SkewProductParams, SkewState,
    DEFAULT_LYAPUNOV_POINTS, DEFAULT_SEED, DEFAULT_TRANSIENT, MIN_LYAPUNOV_POINTS,
};
