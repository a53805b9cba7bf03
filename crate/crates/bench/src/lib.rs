//! Criterion benchmarks for the expensive stages.

use std::hint::black_box;

use criterion::Criterion;
use modreg_core::eis::{parse_curves, CurveModel, LSeries};
use modreg_core::goncharov::ModularComplex;
use modreg_core::mahler::{elliptic_integral_gamma_e, inner_max_log, mahler_measure, LaurentPoly};
use modreg_core::msym::ManinSpace;
use modreg_core::units::verify_parametrisation;
use num_complex::Complex64;

fn e15() -> CurveModel {
    parse_curves("15a8 1 1 1 0 0 15\n")
        .unwrap()
        .remove("15a8")
        .unwrap()
}

pub fn qseries(c: &mut Criterion) {
    c.bench_function("parametrisation_q100", |b| {
        b.iter(|| verify_parametrisation(black_box(100)).unwrap())
    });
}

pub fn complexes(c: &mut Criterion) {
    let mut g = c.benchmark_group("modular_complex");
    g.sample_size(10);
    g.bench_function("build_n11", |b| {
        b.iter(|| ModularComplex::build(black_box(11), true).unwrap())
    });
    g.finish();
}

pub fn manin_symbols(c: &mut Criterion) {
    c.bench_function("manin_space_n15", |b| {
        b.iter(|| ManinSpace::new(black_box(15)))
    });
    let m = ManinSpace::new(15);
    c.bench_function("hecke_eigenvalue_p997", |b| {
        b.iter(|| m.cuspidal_eigenvalue(black_box(997)).unwrap())
    });
}

pub fn curves(c: &mut Criterion) {
    let e = e15();
    c.bench_function("ap_table_1000", |b| {
        b.iter(|| e.ap_table(black_box(1000)).unwrap())
    });
    let ls = LSeries::from_curve(&e).unwrap();
    c.bench_function("l_derivative_15a8", |b| {
        b.iter(|| ls.derivative_at_left_edge(black_box(-1)).unwrap())
    });
}

pub fn mahler(c: &mut Criterion) {
    let a = [Complex64::new(1.0, 0.3), Complex64::new(-0.4, 2.0)];
    let bb = [Complex64::new(0.7, -1.1), Complex64::new(1.5, 0.2)];
    c.bench_function("inner_max_log", |b| {
        b.iter(|| inner_max_log(black_box(&a), black_box(&bb)))
    });
    c.bench_function("elliptic_integral", |b| b.iter(elliptic_integral_gamma_e));
    let p = LaurentPoly::parse("(1+x)(1+y)+z").unwrap();
    let mut g = c.benchmark_group("mahler_measure");
    g.sample_size(10);
    g.bench_function("main_1e-8", |b| {
        b.iter(|| mahler_measure(black_box(&p), 1e-8).unwrap())
    });
    g.finish();
}
