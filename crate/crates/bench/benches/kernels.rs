use camps_bench::{chain, random_theta};
use camps_core::camps::GateSearch;
use camps_core::clifford::{
    enumerate_two_qubit_cliffords, reduce_by_local_equivalence, GateSet, GateSetMode,
};
use camps_core::engine::{
    compile_mpo, two_site_eigensolve, Direction, LanczosOptions, SweepEngine,
};
use camps_core::pauli::{build_model, Model};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn gate_search(c: &mut Criterion) {
    let search = GateSearch::new(&GateSet::for_mode(GateSetMode::LocalRepresentatives)).unwrap();
    let mut group = c.benchmark_group("gate_search");
    for bond in [8, 32, 64] {
        let theta = random_theta(bond, 1);
        group.bench_with_input(BenchmarkId::from_parameter(bond), &theta, |b, t| {
            b.iter(|| search.select(black_box(t)).unwrap())
        });
    }
    group.finish();
}

fn eigensolve(c: &mut Criterion) {
    let mut group = c.benchmark_group("eigensolve");
    group.sample_size(10);
    let (mps, mpo) = chain(Model::Xxz, 16, 32);
    group.bench_function("center_pair_xxz_L16_D32", |b| {
        b.iter(|| two_site_eigensolve(black_box(&mps), &mpo, 8, 1e-9).unwrap())
    });
    let (mps, mpo) = chain(Model::Ising, 16, 32);
    let engine = SweepEngine::new(mps, mpo, LanczosOptions::default(), 1e-10).unwrap();
    group.bench_function("sweep_ising_L16_D32", |b| {
        b.iter(|| {
            let mut e = engine.clone();
            e.sweep(Direction::Right).unwrap()
        })
    });
    group.finish();
}

fn mpo_compile(c: &mut Criterion) {
    let mut group = c.benchmark_group("compile_mpo");
    for length in [16, 64, 128] {
        let h = build_model(Model::Xxz, length, 0.5).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(length), &h, |b, h| {
            b.iter(|| compile_mpo(black_box(h)))
        });
    }
    group.finish();
}

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumeration");
    group.sample_size(10);
    group.bench_function("two_qubit_cliffords", |b| {
        b.iter(enumerate_two_qubit_cliffords)
    });
    let full = enumerate_two_qubit_cliffords();
    group.bench_function("reduce_by_local_equivalence", |b| {
        b.iter(|| reduce_by_local_equivalence(black_box(&full)))
    });
    group.finish();
}

criterion_group!(benches, gate_search, eigensolve, mpo_compile, enumeration);
criterion_main!(benches);
