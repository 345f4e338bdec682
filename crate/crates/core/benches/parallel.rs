//! Sequential against rayon-parallel execution of the exhaustive checks.
//! On a single core the two should be close; the gap is rayon's overhead.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use padic_tiling::fixtures::worked_example;
use padic_tiling::oracle::{continuity_modulus, oracle_equivalence};
use padic_tiling::{check_level_map, Execution, DEFAULT_CAP};

const STRATEGIES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn subtree_equivalence(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle_equivalence_base2_depth4");
    for (name, exec) in STRATEGIES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| oracle_equivalence(2, 4, DEFAULT_CAP, exec).unwrap())
        });
    }
    group.finish();
}

fn continuity(c: &mut Criterion) {
    let h = worked_example();
    let mut group = c.benchmark_group("continuity_modulus_k4");
    for (name, exec) in STRATEGIES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| continuity_modulus(&h, 4, DEFAULT_CAP, exec).unwrap())
        });
    }
    group.finish();
}

fn level_map(c: &mut Criterion) {
    let h = worked_example();
    let mut group = c.benchmark_group("check_level_map_n2");
    group.sample_size(20);
    for (name, exec) in STRATEGIES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                check_level_map(h.source(), h.target(), 2, DEFAULT_CAP, exec, |w| {
                    h.extend_blockwise(w)
                })
                .unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, subtree_equivalence, continuity, level_map);
criterion_main!(benches);
