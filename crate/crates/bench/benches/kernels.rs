use criterion::{criterion_group, criterion_main, Criterion};
use ffstat::biquad::{enumerate_family, zeta_numerator, Variant};
use ffstat::eulerprod::{prime_sum, FactorKind};
use ffstat::ffpoly::jacobi_symbol;
use ffstat::lfunc::{complete_l, l_polynomial, verify_catalog};
use ffstat::moments::FamilyMoments;
use ffstat::{FiniteField, Poly, QuadChar, Sign};
use ffstat_bench::{f3, squarefree_modulus, worked_curve};
use std::hint::black_box;

fn polynomials(c: &mut Criterion) {
    let f5 = FiniteField::prime(5).unwrap();
    let a = Poly::from_ints(&f5, &[1, 2, 3, 4, 0, 1, 2, 1]);
    let b = squarefree_modulus(&f5, 6);
    c.bench_function("jacobi symbol, q=5, degrees 7/6", |bench| {
        bench.iter(|| jacobi_symbol(black_box(&a), black_box(&b)).unwrap())
    });
    let chi = QuadChar::new(&b, Sign::Plus).unwrap();
    c.bench_function("completed L-polynomial, q=5, deg D=6", |bench| {
        bench.iter(|| complete_l(&l_polynomial(black_box(&chi)).unwrap()).unwrap())
    });
}

fn catalogs(c: &mut Criterion) {
    let f = f3();
    let mut group = c.benchmark_group("catalog");
    group.sample_size(10);
    group.bench_function("all square-free D, q=3, deg<=5", |bench| {
        bench.iter(|| verify_catalog(&f, 5, 8, 1e-9).unwrap())
    });
    group.finish();
}

fn curves(c: &mut Criterion) {
    let t = worked_curve();
    c.bench_function("zeta numerator of the worked curve", |bench| {
        bench.iter(|| zeta_numerator(black_box(&t), 6).unwrap())
    });
    let f = f3();
    let mut group = c.benchmark_group("family");
    group.sample_size(10);
    group.bench_function("enumerate full family, q=3, g=3", |bench| {
        bench.iter(|| enumerate_family(&f, 3, Variant::Full).unwrap())
    });
    group.bench_function("moments table, q=3, g=3, n<=6", |bench| {
        bench.iter(|| {
            let fm = FamilyMoments::new(&f, 3, 6).unwrap();
            (1..=6).map(|n| fm.report(n, Variant::Full).unwrap().avg_trace).sum::<f64>()
        })
    });
    group.bench_function("prime sum, q=3, n=3, M=9, exact", |bench| {
        bench.iter(|| prime_sum(FactorKind::Plus, &f, 3, 9, true).unwrap())
    });
    group.finish();
}

criterion_group!(benches, polynomials, catalogs, curves);
criterion_main!(benches);
