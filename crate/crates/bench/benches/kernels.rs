use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use twistlab::euler::{algebra_dimension, EulerOp};
use twistlab::orbitcert::{position_certificate, OrbitWindow};
use twistlab::scalars::field::{Fq, Q61};
use twistlab::{GradedPoly, Scalar, SubringCtx};
use twistlab_bench::{generic_diag, prime_field_diag};

fn rational_functions(c: &mut Criterion) {
    let (s, _, _) = generic_diag(2);
    let a = Scalar::parse(&s, "(p1^3 - 2*p2 + 1)/(p1*p2 + p2^2 - 3)").unwrap();
    let b = Scalar::parse(&s, "(p2^2 + p1)/(p1 - 1)").unwrap();
    c.bench_function("scalar add", |bch| bch.iter(|| black_box(&a).add(black_box(&b))));
    c.bench_function("scalar mul", |bch| bch.iter(|| black_box(&a).mul(black_box(&b))));
}

fn closed_pieces(c: &mut Criterion) {
    let mut g = c.benchmark_group("closed piece");
    for n in [4, 6, 8] {
        g.bench_with_input(BenchmarkId::new("GF(q) t=3", n), &n, |bch, &n| {
            bch.iter(|| prime_field_diag(3, 10).r_piece_closed(n).dim())
        });
    }
    for n in [2, 3, 4] {
        let (_, phi, pt) = generic_diag(2);
        g.bench_with_input(BenchmarkId::new("symbolic t=2", n), &n, |bch, &n| {
            bch.iter(|| SubringCtx::from_aut(phi.clone(), pt.clone(), 6).unwrap().r_piece_closed(n).dim())
        });
    }
    g.finish();
}

fn twisted_products(c: &mut Criterion) {
    let ctx = prime_field_diag(3, 6);
    let f = ctx.random_member(&ctx.r_piece_closed(3), 1);
    let g = ctx.random_member(&ctx.r_piece_closed(2), 2);
    c.bench_function("twist product GF(q) deg 3 * deg 2", |bch| bch.iter(|| ctx.ring().twist_mul(black_box(&f), black_box(&g))));
    let (s, phi, _) = generic_diag(2);
    let ring = twistlab::TwistRing::new(phi).unwrap();
    let x = GradedPoly::var(&s, 2, 1).add(&GradedPoly::var(&s, 2, 2)).unwrap();
    c.bench_function("twist product symbolic linear forms", |bch| bch.iter(|| ring.twist_mul(black_box(&x), black_box(&x))));
}

fn certificates(c: &mut Criterion) {
    let (_, phi, pt) = generic_diag(3);
    let w = OrbitWindow::contiguous(phi, pt, -20, 20);
    c.bench_function("position certificate t=3 d=3 window 20", |bch| bch.iter(|| position_certificate(&w, 3).rank));
}

fn euler_words(c: &mut Criterion) {
    let gens = vec![EulerOp::D(Fq::new(5, Q61)), EulerOp::D(Fq::new(7, Q61))];
    let mut g = c.benchmark_group("euler word rank");
    for n in [3, 5] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |bch, &n| bch.iter(|| algebra_dimension(&Q61, &gens, n, 20).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, rational_functions, closed_pieces, twisted_products, certificates, euler_words);
criterion_main!(benches);
