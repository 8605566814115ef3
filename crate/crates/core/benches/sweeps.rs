use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use edgedom_core::cone::{assemble_domain, fixtures::fix_c, ConeOperator};
use edgedom_core::edge::{fixtures::fix_g, homogeneity_checks, SweepConfig};
use edgedom_core::oracle::{contour_g, CutoffPair, TestFunction};
use edgedom_core::par::{self, Execution};
use edgedom_core::tolerance::Tolerances;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn edge_sweep(c: &mut Criterion) {
    let op = fix_g(2);
    let tol = Tolerances::default();
    let mut group = c.benchmark_group("edge_sweep");
    for rays in [8, 32] {
        for (name, exec) in MODES {
            let cfg = SweepConfig { rays, execution: exec, ..SweepConfig::default() };
            group.bench_with_input(BenchmarkId::new(name, rays), &cfg, |b, cfg| {
                b.iter(|| homogeneity_checks(black_box(&op), &tol, cfg).unwrap())
            });
        }
    }
    group.finish();
}

fn contour_oracle(c: &mut Criterion) {
    let dd = assemble_domain(&fix_c(), &Tolerances::default()).unwrap();
    let u = TestFunction::BetaPower { a: 3.0, b: 3.0 };
    let pd = &dd.poles[0].pole;
    let mut group = c.benchmark_group("contour_oracle");
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| contour_g(&dd.f[0], pd, 1, &dd.g[1], &u, None, &CutoffPair, exec).unwrap())
        });
    }
    group.finish();
}

fn random_domains(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let ops: Vec<ConeOperator> = (0..64).map(|i| ConeOperator::random(&mut rng, 1 + i % 4, 0.05)).collect();
    let tol = Tolerances::default();
    let mut group = c.benchmark_group("random_domains");
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| par::map(exec, &ops, |op| assemble_domain(op, &tol).unwrap().dim()))
        });
    }
    group.finish();
}

criterion_group!(benches, edge_sweep, contour_oracle, random_domains);
criterion_main!(benches);
