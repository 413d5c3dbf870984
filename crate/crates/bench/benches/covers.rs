use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;
use surfcover::groebner::shape_basis;
use surfcover::srf::parse_input;
use surfcover::{three_patch, two_patch, Param};

fn load(name: &str) -> Param {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_input(&std::fs::read_to_string(path).unwrap()).unwrap().param.unwrap()
}

fn covers(c: &mut Criterion) {
    let whitney = load("whitney.srf");
    let clebsch = load("clebsch.srf");
    c.bench_function("three_patch/whitney", |b| b.iter(|| three_patch(black_box(&whitney)).unwrap()));
    c.bench_function("two_patch/whitney", |b| b.iter(|| two_patch(black_box(&whitney)).unwrap()));
    c.bench_function("shape_basis/clebsch", |b| b.iter(|| shape_basis(black_box(&clebsch), 1).unwrap()));
    let mut slow = c.benchmark_group("clebsch");
    slow.sample_size(10);
    slow.bench_function("three_patch", |b| b.iter(|| three_patch(black_box(&clebsch)).unwrap()));
    slow.finish();
}

criterion_group!(benches, covers);
criterion_main!(benches);
