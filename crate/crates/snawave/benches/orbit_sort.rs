use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use snawave::core::sna::{
    epsilon_of_sigma, generate_orbit_mesh, generate_orbit_mesh_baseline, BaselineSort, SkewProductParams,
};

fn orbit_sort(c: &mut Criterion) {
    let sigma = 1.7;
    let params = SkewProductParams::new(sigma, epsilon_of_sigma(sigma).unwrap()).unwrap();
    let mut group = c.benchmark_group("orbit_mesh");
    group.sample_size(10);
    for depth in [14u32, 16, 18] {
        group.bench_with_input(BenchmarkId::new("hash", depth), &depth, |b, &j| {
            b.iter(|| generate_orbit_mesh(&params, 1000, j).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("heapsort", depth), &depth, |b, &j| {
            b.iter(|| generate_orbit_mesh_baseline(&params, 1000, j, BaselineSort::Heap).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("sort_unstable", depth), &depth, |b, &j| {
            b.iter(|| generate_orbit_mesh_baseline(&params, 1000, j, BaselineSort::Unstable).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, orbit_sort);
criterion_main!(benches);
