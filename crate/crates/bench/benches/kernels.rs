use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

use wittkit::lattice::{canonical_form, enumerate_lattices, smith_form, WittMatrix};
use wittkit::plin::{all_p_nilpotents, lattice_of_nilpotent, nilpotent_of_lattice};
use wittkit::ring::Ring;
use wittkit::rla::restricted_check;
use wittkit::witt::{GaloisRing, WittGeneric, WittRing};
use wittkit::Gf;

fn witt_arithmetic(c: &mut Criterion) {
    let mut group = c.benchmark_group("witt_mul");
    for (p, m, s) in [(2, 2, 3), (3, 1, 3), (5, 1, 2)] {
        let gf = Gf::new(p, m).unwrap();
        let wr = WittRing::new(&gf, s).unwrap();
        let w = WittGeneric::new(gf.clone(), p, s).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (a, b) = (wr.random(&mut rng), wr.random(&mut rng));
        let label = format!("p{p}m{m}s{s}");
        group.bench_with_input(BenchmarkId::new("galois", &label), &(), |bn, _| {
            bn.iter(|| wr.mul(black_box(&a), black_box(&b)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("polynomials", &label), &(), |bn, _| {
            bn.iter(|| w.mul(black_box(&a.digits), black_box(&b.digits)))
        });
    }
    group.finish();
}

fn lattices(c: &mut Criterion) {
    let gr = GaloisRing::new(&Gf::new(3, 1).unwrap(), 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let u = WittMatrix::random_invertible(&gr, 4, &mut rng)
        .mul(&gr, &WittMatrix::diagonal(&gr, &[3, 1, 0, 0]))
        .mul(&gr, &WittMatrix::random_invertible(&gr, 4, &mut rng));
    c.bench_function("smith_form 4x4 W_4(F_3)", |bn| bn.iter(|| smith_form(&gr, black_box(&u))));
    c.bench_function("canonical_form 4x4 W_4(F_3)", |bn| bn.iter(|| canonical_form(&gr, black_box(&u))));
    let small = GaloisRing::new(&Gf::new(2, 1).unwrap(), 4).unwrap();
    c.bench_function("enumerate_lattices n2 s4 colength 4", |bn| {
        bn.iter(|| enumerate_lattices(&small, 2, black_box(4)).unwrap())
    });
}

fn correspondence(c: &mut Criterion) {
    let gf = Gf::new(2, 2).unwrap();
    let maps = all_p_nilpotents(&gf, 2, 1 << 16).unwrap();
    c.bench_function("plin round trip F_4 n2 (all maps)", |bn| {
        bn.iter(|| {
            for phi in &maps {
                let lat = lattice_of_nilpotent(&gf, phi).unwrap();
                black_box(nilpotent_of_lattice(&gf, &lat).unwrap());
            }
        })
    });
}

fn jacobson(c: &mut Criterion) {
    let gf = Gf::prime(5).unwrap();
    c.bench_function("restricted_check p5 3x3 x10", |bn| {
        bn.iter(|| {
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            restricted_check(&gf, 3, 10, &mut rng).unwrap()
        })
    });
}

criterion_group!(benches, witt_arithmetic, lattices, correspondence, jacobson);
criterion_main!(benches);
