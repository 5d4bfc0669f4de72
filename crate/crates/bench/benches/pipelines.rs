use criterion::{black_box, criterion_group, criterion_main, Criterion};

use transversal_bench::{counterexample_instance, cut_cube, theorem_instance};
use transversal_core::exactla::lp_feasible;
use transversal_core::{check_colorful, full_certificate, k_transversal, verify_theorem};

fn lp(c: &mut Criterion) {
    let cs = cut_cube(8, 50);
    c.bench_function("lp_feasible cut cube dim 8", |b| {
        b.iter(|| lp_feasible(black_box(&cs), 8).unwrap())
    });
}

fn transversal(c: &mut Criterion) {
    let theorem = theorem_instance(&[1, 1], 0);
    let ce = counterexample_instance(&[2, 1], 0);
    c.bench_function("k_transversal present (1,1)", |b| {
        b.iter(|| k_transversal(black_box(&theorem.families[0])).unwrap())
    });
    c.bench_function("k_transversal absent (2,1)", |b| {
        b.iter(|| k_transversal(black_box(&ce.families[0])).unwrap())
    });
}

fn colorful(c: &mut Criterion) {
    let mut group = c.benchmark_group("theorem");
    group.sample_size(10);
    for ks in [&[1usize, 1][..], &[1, 1, 1]] {
        let inst = theorem_instance(ks, 0);
        group.bench_function(format!("check_colorful {ks:?}"), |b| {
            b.iter(|| check_colorful(black_box(&inst)).unwrap())
        });
        group.bench_function(format!("verify_theorem {ks:?}"), |b| {
            b.iter(|| verify_theorem(black_box(&inst)).unwrap())
        });
    }
    group.finish();
}

fn certificate(c: &mut Criterion) {
    let mut group = c.benchmark_group("certificate");
    group.sample_size(10);
    for ks in [&[1usize, 1][..], &[0, 0, 0]] {
        let inst = counterexample_instance(ks, 0);
        group.bench_function(format!("full_certificate {ks:?}"), |b| {
            b.iter(|| full_certificate(black_box(&inst)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, lp, transversal, colorful, certificate);
criterion_main!(benches);
