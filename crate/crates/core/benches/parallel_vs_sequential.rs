use std::hint::black_box;

use bcconf::awgn::{awgn_region_with, AwgnParams};
use bcconf::regions::{sample_region_with, RegionReport};
use bcconf::sim::{estimate_errors_with, CodeParams, SimOptions};
use bcconf::{AuxJoint, ChannelLaw, ConferenceCapacity, Execution, RateTriple, Tolerances};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn region(c: &mut Criterion) {
    let ch = ChannelLaw::bsc_pair(0.05, 0.15).unwrap();
    let c1 = ConferenceCapacity::new(0.25).unwrap();
    let mut g = c.benchmark_group("region_2000_samples");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                let r = sample_region_with(&ch, c1, 2000, (5, 5), 7, exec).unwrap();
                black_box(RegionReport::new(&r, &Tolerances::default(), exec).all_checks_passed)
            })
        });
    }
    g.finish();
}

fn awgn(c: &mut Criterion) {
    let p = AwgnParams::new(10.0, 1.0, 4.0, ConferenceCapacity::new(0.25).unwrap()).unwrap();
    let mut g = c.benchmark_group("awgn_grid_101");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(awgn_region_with(&p, 101, exec).unwrap().hull_vertices().len()))
        });
    }
    g.finish();
}

fn simulate(c: &mut Criterion) {
    let aux = AuxJoint::from_fn(2, 2, 2, |u, v, x| {
        0.5 * if v == u { 0.9 } else { 0.1 } * if x == v { 0.9 } else { 0.1 }
    })
    .unwrap();
    let p = CodeParams {
        n: 60,
        rates: RateTriple::new(0.1, 0.05, 0.05).unwrap(),
        c1: ConferenceCapacity::new(0.05).unwrap(),
        aux,
        ch: ChannelLaw::bsc_pair(0.05, 0.15).unwrap(),
        eps: 0.15,
        seed: 1,
    };
    let mut g = c.benchmark_group("simulate_1000_trials");
    g.sample_size(10);
    for (name, exec) in MODES {
        let opts = SimOptions { exec, ..SimOptions::default() };
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(estimate_errors_with(&p, 1000, &opts).unwrap().pe_conf))
        });
    }
    g.finish();
}

criterion_group!(benches, region, awgn, simulate);
criterion_main!(benches);
