use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use nsfd_core::problems::{self, Params};
use nsfd_core::scalar::integrate;
use nsfd_core::system::integrate_system;
use nsfd_core::{SystemSchemeConfig, Weights};

fn scalar_steps(c: &mut Criterion) {
    let p = problems::logistic().unwrap();
    for label in ["snsfd1", "snsfd2", "wood", "rk2"] {
        let s = problems::scalar_scheme(&p, label, &Params::new()).unwrap();
        c.bench_function(&format!("logistic/{label}/step"), |b| {
            b.iter(|| s.map.step(black_box(0.5), black_box(0.01)).unwrap())
        });
        c.bench_function(&format!("logistic/{label}/integrate-1e3"), |b| {
            b.iter(|| integrate(&*s.map, black_box(0.5), 1e-3, 1.0).unwrap())
        });
    }
}

fn system_steps(c: &mut Criterion) {
    let w = Weights::new(0.0, 1.0).unwrap();
    for name in ["lv", "sirs"] {
        let sys = problems::system_problem(name, &Params::new()).unwrap();
        let x0 = problems::default_initial_state(&sys);
        let cfg = SystemSchemeConfig::second_order(&sys, w).unwrap();
        c.bench_function(&format!("{name}/nsfd-2/integrate-1e3"), |b| {
            b.iter(|| integrate_system(&sys, &cfg, black_box(&x0), 1e-2, 10.0).unwrap())
        });
    }
}

criterion_group!(benches, scalar_steps, system_steps);
criterion_main!(benches);
