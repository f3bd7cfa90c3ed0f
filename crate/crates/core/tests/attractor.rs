use snawave_core::sna::{
    generate_orbit_mesh, lyapunov_vertical, step, transfer_eval, Angle, SkewProductParams, DEFAULT_LYAPUNOV_POINTS,
};
use snawave_core::{estimate_regularity, EstimatorConfig};

fn params(sigma: f64, epsilon: f64) -> SkewProductParams {
    SkewProductParams::new(sigma, epsilon).unwrap()
}

#[test]
fn orbit_from_c_is_the_transfer_iterate() {
    for (sigma, epsilon, seed) in [(1.699219, 0.039688, 1), (1.5, 0.0, 2), (1.2, 0.3, 3)] {
        let p = params(sigma, epsilon).with_seed(seed);
        let c = p.x0();
        let mut state = p.initial_state();
        for k in 0..=50 {
            let phi = transfer_eval(&p, k, state.theta, c).unwrap();
            assert_eq!(phi.to_bits(), state.x.to_bits(), "sigma = {sigma}, k = {k}");
            state = step(&p, state);
        }
    }
}

#[test]
fn transfer_iterates_decrease() {
    for (sigma, epsilon) in [(1.699219, 0.039688), (1.5, 0.0), (2.0, 0.25), (1.1, 0.0)] {
        let p = params(sigma, epsilon);
        let c = 2.0 * sigma + 1.0;
        for i in 0..1 << 12 {
            let theta = Angle::from_turns(i as f64 / 4096.0);
            let mut prev = transfer_eval(&p, 0, theta, c).unwrap();
            for k in 1..=20 {
                let next = transfer_eval(&p, k, theta, c).unwrap();
                assert!(next <= prev, "sigma = {sigma}, theta = {i}/4096, k = {k}");
                prev = next;
            }
        }
    }
}

#[test]
fn mesh_values_are_nonnegative_and_bounded() {
    for (sigma, epsilon) in [(1.8, 0.09), (1.5, 0.0), (1.1, 0.0)] {
        let m = generate_orbit_mesh(&params(sigma, epsilon), 10_000, 12).unwrap();
        let bound = 2.0 * sigma * (epsilon + 1.0);
        assert!(m.values().iter().all(|&z| (0.0..=bound).contains(&z)));
        assert!(m.checksum_ok());
    }
}

#[test]
fn orbits_from_different_heights_merge() {
    let base = params(1.699219, 0.039688).with_seed(5);
    let a = generate_orbit_mesh(&base, 10_000, 8).unwrap();
    let b = generate_orbit_mesh(&base.with_x0(50.0).unwrap(), 10_000, 8).unwrap();
    assert_eq!(a.angles(), b.angles());
    for (x, y) in a.values().iter().zip(b.values()) {
        assert!((x - y).abs() <= 1e-10);
    }
}

#[test]
fn pinched_attractor_approaches_zero() {
    let min = |depth| {
        let m = generate_orbit_mesh(&params(1.5, 0.0), 100_000, depth).unwrap();
        assert!(m.values().iter().all(|&z| z >= 0.0));
        m.values().iter().copied().fold(f64::INFINITY, f64::min)
    };
    // 2^12 orbit points come no closer than ~1e-3 to the pinched set
    assert!(min(12) < 1e-2);
    assert!(min(16) < 1e-6);
}

#[test]
fn negative_exponent_collapses_onto_zero() {
    let p = params(0.9, 0.0);
    assert!(lyapunov_vertical(&p, DEFAULT_LYAPUNOV_POINTS).unwrap() < 0.0);
    let m = generate_orbit_mesh(&p, 10_000, 12).unwrap();
    assert!(m.values().iter().all(|&z| z < 1e-6));
    assert!(m.into_mesh().is_ok());
}

#[test]
fn hash_placement_is_mostly_right() {
    let p = params(1.699219, 0.039688);
    let m16 = generate_orbit_mesh(&p, 1000, 16).unwrap();
    assert!((m16.stats().displaced as f64) < 0.25 * 65536.0);
    let m20 = generate_orbit_mesh(&p, 1000, 20).unwrap();
    let n = (1u64 << 20) as f64;
    assert!((m20.stats().displaced as f64) < 0.2 * n);
    assert!((m20.stats().shifts as f64) < 4.0 * n);
    assert!(m20.angles().windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn pinched_graph_vanishes_near_the_images_of_the_zero() {
    let p = params(1.5, 0.0);
    let m = generate_orbit_mesh(&p, 100_000, 20).unwrap();
    let quarter = Angle::from_turns(0.25);
    for k in 1..=10u64 {
        let target = Angle(quarter.0.wrapping_add(p.omega().0.wrapping_mul(k)));
        let i = m.angles().partition_point(|a| *a < target);
        let near = [i.saturating_sub(1), i.min(m.len() - 1)];
        let z = near.iter().map(|&j| m.values()[j]).fold(f64::INFINITY, f64::min);
        assert!(z < 1e-3, "k = {k}: {z}");
    }
}

#[test]
fn estimate_is_stable_under_a_longer_transient() {
    let p = params(1.699219, 0.039688);
    let config = EstimatorConfig::with_p(16);
    let est = |n0| estimate_regularity(&generate_orbit_mesh(&p, n0, 16).unwrap().into_mesh().unwrap(), &config);
    let a = est(100_000).unwrap();
    let b = est(200_000).unwrap();
    assert!((a.s - b.s).abs() < 0.05, "{} vs {}", a.s, b.s);
}
