//! Benchmarks comparing the rayon-parallel execution paths against the
//! sequential fallback on the three data-parallel workloads: Monte Carlo
//! replications, network construction, and a single full test (which is
//! sequential either way and serves as the unit-cost baseline).
//!
//! Run with `cargo bench -p hdgc`; build with `--no-default-features` to
//! measure the sequential-only binary.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hdgc::lag::LagConfig;
use hdgc::montecarlo::{run_size_power, McCell, McExperiment};
use hdgc::network::network_both;
use hdgc::pds::{pds_la_test, ExtraLagPolicy, PdsConfig, TestVariant};
use hdgc::simulate::{simulate_levels, DgpKind, DgpSpec};

fn mc_config() -> PdsConfig {
    PdsConfig {
        lag: LagConfig {
            p: 2,
            d: 2,
            trim_initial: true,
            intercept: false,
        },
        extra_lag: ExtraLagPolicy::Off,
        ..PdsConfig::default()
    }
}

fn bench_single_test(c: &mut Criterion) {
    let spec = DgpSpec {
        seed: 1,
        ..DgpSpec::new(DgpKind::Dgp1, 10, 500)
    };
    let panel = simulate_levels(&spec).unwrap();
    let cfg = mc_config();
    c.bench_function("pds_la_test/K10_T500", |b| {
        b.iter(|| pds_la_test(&panel, 1, 0, &cfg, TestVariant::LmF).unwrap())
    });
}

fn bench_montecarlo_cell(c: &mut Criterion) {
    let mut group = c.benchmark_group("montecarlo_cell");
    group.sample_size(10);
    for parallel in [false, true] {
        let label = if parallel { "parallel" } else { "sequential" };
        group.bench_with_input(BenchmarkId::from_parameter(label), &parallel, |b, &par| {
            let cells = vec![McCell {
                dgp: DgpKind::Dgp1,
                rho: 0.0,
                k: 6,
                t: 200,
                power: false,
            }];
            let mut exp = McExperiment::new(cells, 40, 11);
            exp.parallel = par;
            b.iter(|| run_size_power(&exp).unwrap())
        });
    }
    group.finish();
}

fn bench_network(c: &mut Criterion) {
    let spec = DgpSpec {
        seed: 3,
        ..DgpSpec::new(DgpKind::Dgp1, 12, 200)
    };
    let panel = simulate_levels(&spec).unwrap();
    let cfg = mc_config();
    let mut group = c.benchmark_group("network_both_K12");
    group.sample_size(10);
    for parallel in [false, true] {
        let label = if parallel { "parallel" } else { "sequential" };
        group.bench_with_input(BenchmarkId::from_parameter(label), &parallel, |b, &par| {
            b.iter(|| network_both(&panel, "z1", &cfg, TestVariant::LmF, par).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_single_test,
    bench_montecarlo_cell,
    bench_network
);
criterion_main!(benches);
