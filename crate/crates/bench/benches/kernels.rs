use criterion::{black_box, criterion_group, criterion_main, Criterion};

use jka::hidden::{commutator, identity_residual};
use jka::random::{rational_vec, rng};
use jka::scalar::{CRat, Scalar};
use jka::spectral::h0_matrix_spectrum;
use jka::tkk::{random_element, Tkk};
use jka_bench::{algebra, HiddenFixture};

fn jordan_product(c: &mut Criterion) {
    for spec in ["herm_r:3", "herm_o:3"] {
        let alg = algebra(spec);
        let mut g = rng(1);
        let u = rational_vec(&mut g, alg.dim());
        let v = rational_vec(&mut g, alg.dim());
        c.bench_function(&format!("lmul/{spec}"), |b| b.iter(|| alg.lmul(black_box(&u))));
        c.bench_function(&format!("mul/{spec}"), |b| b.iter(|| alg.mul(black_box(&u), black_box(&v))));
    }
}

fn tkk_bracket(c: &mut Criterion) {
    for spec in ["gamma:4", "herm_c:3"] {
        let tkk = Tkk::new(algebra(spec));
        let mut g = rng(2);
        let a = random_element(&tkk, &mut g);
        let b2 = random_element(&tkk, &mut g);
        c.bench_function(&format!("bracket/{spec}"), |b| b.iter(|| tkk.bracket(black_box(&a), black_box(&b2))));
    }
}

fn hidden_relation(c: &mut Criterion) {
    let fx = HiddenFixture::new("gamma:3", 5);
    let alg = fx.action.algebra().clone();
    let mut g = rng(3);
    let u = rational_vec(&mut g, alg.dim());
    let v = rational_vec(&mut g, alg.dim());
    let lhs = commutator(&fx.action.tilde_x(&u), &fx.action.tilde_y(&v));
    let rhs = fx.action.tilde_s(&u, &v).scale(CRat::from_i64(-2));
    let mut group = c.benchmark_group("hidden");
    group.sample_size(10);
    group.bench_function("xy_relation/gamma:3", |b| b.iter(|| identity_residual(&lhs, &rhs, &fx.tests, &fx.points).unwrap()));
    group.finish();
}

fn spectrum(c: &mut Criterion) {
    let alg = algebra("gamma:3");
    let mut group = c.benchmark_group("spectrum");
    group.sample_size(10);
    group.bench_function("h0/gamma:3/d3", |b| b.iter(|| h0_matrix_spectrum(alg.clone(), 3, 0).unwrap()));
    group.finish();
}

criterion_group!(benches, jordan_product, tkk_bracket, hidden_relation, spectrum);
criterion_main!(benches);
