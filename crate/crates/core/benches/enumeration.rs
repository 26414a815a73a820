//! Parallel against sequential execution of the heavy kernels. The sequential
//! case runs inside a one-thread rayon pool; without the `parallel` feature
//! both cases take the sequential code path.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mfq::catalog::{verify_records, Catalog, VerifyOptions};
use mfq::classical::standard_generators;
use mfq::congruence::{crt_check, ModKind};
use mfq::fuchsian::{find_epimorphisms, Signature};
use mfq::group::enumerate_group;

fn modes() -> Vec<(&'static str, rayon::ThreadPool)> {
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let all = rayon::ThreadPoolBuilder::new().build().unwrap();
    vec![("sequential", one), ("parallel", all)]
}

fn bench(c: &mut Criterion) {
    let psu35 = standard_generators(&"psu(3,5)".parse().unwrap()).unwrap();
    let psl213 = enumerate_group(&standard_generators(&"psl(2,13)".parse().unwrap()).unwrap(), 10_000).unwrap();
    let hurwitz: Signature = "(2,3,7)".parse().unwrap();
    let catalog = Catalog::default_catalog();
    let small: Vec<_> = ["A7", "U3(3)", "L3(4)", "L2(49)"].iter().map(|n| catalog.get(n).unwrap()).collect();
    let opts = VerifyOptions { check_markers: false, ..VerifyOptions::default() };

    let mut group = c.benchmark_group("kernels");
    group.sample_size(10);
    for (mode, pool) in modes() {
        group.bench_with_input(BenchmarkId::new("enumerate PSU(3,5)", mode), &pool, |b, pool| {
            b.iter(|| pool.install(|| enumerate_group(&psu35, 200_000).unwrap().order()))
        });
        group.bench_with_input(BenchmarkId::new("epimorphisms (2,3,7) -> PSL(2,13)", mode), &pool, |b, pool| {
            b.iter(|| pool.install(|| find_epimorphisms(&hurwitz, &psl213, true, false).unwrap().len()))
        });
        group.bench_with_input(BenchmarkId::new("verify four records", mode), &pool, |b, pool| {
            b.iter(|| pool.install(|| verify_records(&small, opts).len()))
        });
        group.bench_with_input(BenchmarkId::new("CRT SL(2,Z/12)", mode), &pool, |b, pool| {
            b.iter(|| pool.install(|| crt_check(ModKind::Sl, 2, 12).unwrap().passed))
        });
    }
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
