use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use thetazeta::exec::ExecPolicy;
use thetazeta::primes::{generate_primes, generate_primes_with, SieveConfig};
use thetazeta::theta::{task1_scan, theta, RadiusMethod, ScanSettings};
use thetazeta::{Complex64, PrecisionConfig};

const POLICIES: [(&str, ExecPolicy); 2] = [("sequential", ExecPolicy::Sequential), ("parallel", ExecPolicy::Parallel)];

fn sieve(c: &mut Criterion) {
    let mut g = c.benchmark_group("sieve_1e7");
    g.sample_size(10);
    for (name, exec) in POLICIES {
        let cfg = SieveConfig { exec, ..SieveConfig::default() };
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| generate_primes_with(black_box(10_000_000), &cfg).unwrap())
        });
    }
    g.finish();
}

fn theta_value(c: &mut Criterion) {
    let table = generate_primes(1_000_000).unwrap();
    let z = Complex64::new(2.0, 1.0);
    let mut g = c.benchmark_group("theta_dd_1e6");
    g.sample_size(10);
    for (name, exec) in POLICIES {
        let cfg = PrecisionConfig { exec, ..PrecisionConfig::default() };
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| theta(black_box(z), &table, &cfg, 1e6).unwrap())
        });
    }
    g.finish();
}

fn scan(c: &mut Criterion) {
    let table = generate_primes(100_000).unwrap();
    let bs: Vec<f64> = (0..8).map(f64::from).collect();
    let settings = ScanSettings { epsilon: 0.1, order: 16, truncation_t: 1e5, method: RadiusMethod::Regression };
    let mut g = c.benchmark_group("scan_8pts_1e5");
    g.sample_size(10);
    for (name, exec) in POLICIES {
        let cfg = PrecisionConfig { digits: 16, exec, ..PrecisionConfig::default() };
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| task1_scan(black_box(&bs), &settings, &table, &cfg).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, sieve, theta_value, scan);
criterion_main!(benches);
