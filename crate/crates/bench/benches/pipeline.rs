use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use crepant_core::arith::Constants;
use crepant_core::rmatrix_kp4::{chain_rows, solve_q_sequence};
use crepant_core::rmatrix_orb::solve_e2;
use crepant_core::verify::crc::verify_crc;
use crepant_core::{compute_hg_data, Geometry};

fn series(c: &mut Criterion) {
    for g in Geometry::ALL {
        c.bench_function(&format!("compute_hg_data/{g}/20"), |b| {
            b.iter(|| compute_hg_data(black_box(g), 20).unwrap())
        });
    }
}

fn rmatrices(c: &mut Criterion) {
    c.bench_function("solve_q_sequence/4", |b| b.iter(|| solve_q_sequence(black_box(4)).unwrap()));
    c.bench_function("solve_e2/3/15", |b| b.iter(|| solve_e2(black_box(3), 15).unwrap()));
}

fn ratio(c: &mut Criterion) {
    let kp4 = chain_rows(3).unwrap();
    let orb = solve_e2(3, 15).unwrap();
    let consts = Constants::exact();
    let mut group = c.benchmark_group("crc");
    group.sample_size(10);
    group.bench_function("z3/15", |b| b.iter(|| verify_crc(&kp4, &orb, 3, &consts).unwrap()));
    group.finish();
}

criterion_group!(benches, series, rmatrices, ratio);
criterion_main!(benches);
