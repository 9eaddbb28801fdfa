use criterion::{black_box, criterion_group, criterion_main, Criterion};
use hodge_spectra::bessel::{bessel_j, first_zero_cross, first_zero_j};
use hodge_spectra::{ball_spectrum, BesselOrder};

fn zeros(c: &mut Criterion) {
    c.bench_function("first_zero_j(0)", |b| b.iter(|| first_zero_j(black_box(BesselOrder::integer(0)))));
    c.bench_function("first_zero_cross(1/2)", |b| b.iter(|| first_zero_cross(black_box(BesselOrder::from_twice(1)))));
    c.bench_function("bessel_j(1, 40)", |b| b.iter(|| bessel_j(BesselOrder::integer(1), black_box(40.0))));
}

fn balls(c: &mut Criterion) {
    c.bench_function("ball_spectrum n=2..8", |b| {
        b.iter(|| (2..=8).map(|n| ball_spectrum(n, black_box(1.0)).unwrap().big_gamma1).sum::<f64>())
    });
}

criterion_group!(benches, zeros, balls);
criterion_main!(benches);
