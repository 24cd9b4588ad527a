use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pam_statics::actuator::{init_contraction, sweep_inverse_with, Execution, Grid};
use pam_statics::muscle::RationalFestoParams;
use pam_statics::units::{bar, cm, deg};
use pam_statics::{Actuator, ActuatorConfig, MuscleGeometry};

fn festo() -> Actuator<RationalFestoParams> {
    let g = MuscleGeometry::new(cm(1.09), cm(40.0), deg(25.5)).unwrap();
    let m = RationalFestoParams::new(g, 0.0, bar(-10.5), -779e10).unwrap();
    let eps0 = init_contraction(&m, bar(5.0)).unwrap();
    Actuator::new_festo(m, ActuatorConfig::with_defaults(cm(2.0), eps0).unwrap()).unwrap()
}

fn bench_sweep(c: &mut Criterion) {
    let a = festo();
    let mut group = c.benchmark_group("festo_sweep");
    // 5° × 1 N·m/rad grid, then a dense one
    for (label, k_step, th_step) in [("coarse", 1.0, 5.0), ("dense", 0.05, 0.25)] {
        let ks = Grid::new(6.0, 9.0, k_step).unwrap();
        let th = Grid::new(deg(-125.0), deg(125.0), deg(th_step)).unwrap();
        for (name, mode) in [
            ("sequential", Execution::Sequential),
            ("parallel", Execution::Parallel),
        ] {
            group.bench_with_input(BenchmarkId::new(name, label), &(ks, th), |b, &(ks, th)| {
                b.iter(|| sweep_inverse_with(black_box(&a), ks, th, mode).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_sweep);
criterion_main!(benches);
