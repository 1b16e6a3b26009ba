use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use octograv::action::{self, CouplingConstants, LagrangianForm};
use octograv::frame::DerivativeProvider;
use octograv::parallel::Execution;
use octograv::scenarios::Scenario;
use octograv::tables::StructureTables;
use octograv::verify::{verify_algebra, VerifyConfig};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn lagrangian_sweeps(c: &mut Criterion) {
    let tables = StructureTables::build().unwrap();
    let kappa = CouplingConstants::default();
    let cases = [
        (Scenario::Schwarzschild { mass: 1.0 }, LagrangianForm::DoubleDual4, DerivativeProvider::finite_difference()),
        (
            Scenario::RandomSmooth8 {
                amplitude: 0.04,
                seed: 0,
            },
            LagrangianForm::ChiDual8,
            DerivativeProvider::Analytic,
        ),
    ];
    let mut group = c.benchmark_group("lagrangian-sweep");
    group.sample_size(10);
    for (scenario, form, provider) in cases {
        let field = scenario.frame_field(provider);
        let points = scenario.sample_points(64, 1);
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(format!("{}/{form}", scenario.name()), name), &exec, |b, &exec| {
                b.iter(|| action::sweep(form, &field, &points, &kappa, &tables, exec))
            });
        }
    }
    group.finish();
}

fn algebra_suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify-algebra");
    group.sample_size(10);
    for (name, exec) in MODES {
        let cfg = VerifyConfig {
            seed: 3,
            samples: 2_000,
            exec,
            fault: None,
        };
        group.bench_function(name, |b| b.iter(|| verify_algebra(&cfg).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, lagrangian_sweeps, algebra_suite);
criterion_main!(benches);
