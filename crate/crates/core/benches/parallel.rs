use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cran_cost::config::{Config, ModelInputs};
use cran_cost::decoder::{outage_demand, snr_thresholds, ComplexityProfile, OutageRun};
use cran_cost::geometry::Window;
use cran_cost::quadrature::QuadratureSettings;
use cran_cost::sim::{estimate_mean_dc_cost, SimSettings};
use cran_cost::sweep::{run_sweep, SweepAxis, SweepSpec};
use cran_cost::Execution;

const MODES: [(&str, Execution); 2] = [("parallel", Execution::Parallel), ("sequential", Execution::Sequential)];

fn monte_carlo(c: &mut Criterion) {
    let scenario = Config::new(ModelInputs::reference()).scenario().unwrap();
    let mut group = c.benchmark_group("mean_dc_cost");
    group.sample_size(10);
    for (name, execution) in MODES {
        let settings = SimSettings {
            execution,
            ..SimSettings::new(Window::torus(5.0).unwrap(), 64, 1)
        };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| estimate_mean_dc_cost(&scenario, &settings).unwrap())
        });
    }
    group.finish();
}

fn outage(c: &mut Criterion) {
    let profile = ComplexityProfile::default();
    let mcs = snr_thresholds(&profile.rates, &profile.decoder).unwrap();
    let mut group = c.benchmark_group("outage_demand");
    group.sample_size(10);
    for (name, execution) in MODES {
        let run = OutageRun {
            execution,
            ..OutageRun::new(profile.eps_comp, profile.n_mc, 1)
        };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| outage_demand(50, &profile.snr, &mcs, &profile.decoder, &run).unwrap())
        });
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let spec = SweepSpec::standard(SweepAxis::Lambda3);
    let quad = QuadratureSettings::default();
    let mut group = c.benchmark_group("sweep_lambda3");
    group.sample_size(10);
    for (name, execution) in MODES {
        let mut config = Config::new(ModelInputs {
            pooling_ratio: Some(1.64),
            ..ModelInputs::reference()
        });
        config.execution = execution;
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| run_sweep(&spec, &config, &quad).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, monte_carlo, outage, sweep);
criterion_main!(benches);
