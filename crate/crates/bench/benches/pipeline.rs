use std::hint::black_box;

use bosent::optics::{concurrence_at, fit_gaussian_dip_with, OverlapConvention};
use bosent::{
    oracle_postselected_density, postselected_spin_state, symmetrize, wootters_concurrence,
};
use bosent_bench::{default_fit, hom_scan, pair};
use criterion::{criterion_group, criterion_main, Criterion};

fn wootters(c: &mut Criterion) {
    let (a, b) = pair(17.0, 0.6);
    let rho = postselected_spin_state(&a, &b).unwrap();
    c.bench_function("wootters_normalized", |bench| {
        bench.iter(|| wootters_concurrence(black_box(&rho), true).unwrap())
    });
    c.bench_function("nolabel_pipeline", |bench| {
        bench.iter(|| postselected_spin_state(black_box(&a), black_box(&b)).unwrap())
    });
}

fn oracle(c: &mut Criterion) {
    let (a, b) = pair(17.0, 0.6);
    c.bench_function("oracle_density", |bench| {
        bench.iter(|| {
            let s = symmetrize(black_box(&a), black_box(&b)).unwrap();
            oracle_postselected_density(&s)
        })
    });
}

fn dip_fit(c: &mut Criterion) {
    let scan = hom_scan(61);
    let opts = default_fit();
    c.bench_function("fit_gaussian_dip_61", |bench| {
        bench.iter(|| fit_gaussian_dip_with(black_box(&scan), &opts).unwrap())
    });
}

fn sweep(c: &mut Criterion) {
    c.bench_function("closed_form_grid_19x21", |bench| {
        bench.iter(|| {
            let mut total = 0.0;
            for i in 0..19 {
                for j in 0..21 {
                    let theta = 2.5 * i as f64;
                    let l = -300.0 + 30.0 * j as f64;
                    total += concurrence_at(theta, l, 59.45, OverlapConvention::Paper).unwrap();
                }
            }
            black_box(total)
        })
    });
}

criterion_group!(benches, wootters, oracle, dip_fit, sweep);
criterion_main!(benches);
