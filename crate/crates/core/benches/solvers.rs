use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use wakexp::dsbs::{dsbs_source, figure2_sweep};
use wakexp::exec;
use wakexp::optim::{grid_search, Block, FnProblem, SearchDomain};
use wakexp::probkit::{binary_entropy, kl_divergence, Pmf};
use wakexp::wak::wak_exponent;
use wakexp::{RatePair, SolverConfig};

/// Runs `f` under both execution strategies.
fn both<F: Fn() + Copy>(c: &mut Criterion, name: &str, f: F) {
    let mut group = c.benchmark_group(name);
    group.sample_size(10);
    group.bench_function(BenchmarkId::from_parameter("parallel"), |b| b.iter(f));
    group.bench_function(BenchmarkId::from_parameter("sequential"), |b| {
        b.iter(|| exec::sequential(f))
    });
    group.finish();
}

fn grid(c: &mut Criterion) {
    let target = Pmf::new(vec![0.4, 0.3, 0.2, 0.1]).unwrap();
    let domain = SearchDomain::new(vec![Block::Simplex(4), Block::Simplex(3)]).unwrap();
    let problem = FnProblem(|x: &[f64]| {
        let q = Pmf::with_tolerance(x[..4].to_vec(), 1e-9).unwrap();
        kl_divergence(&q, &target).unwrap() + x[4] * x[5]
    });
    both(c, "grid_search_res24", || {
        black_box(grid_search(&domain, &problem, 24).unwrap());
    });
}

fn exponent(c: &mut Criterion) {
    let src = dsbs_source(0.1).unwrap();
    let rates = RatePair::new(0.5, 1.0 - binary_entropy(0.2)).unwrap();
    let cfg = SolverConfig::default().with_starts(64);
    both(c, "wak_exponent_dsbs", || {
        black_box(wak_exponent(&src, rates, &cfg, 4).unwrap());
    });
}

fn sweep(c: &mut Criterion) {
    let r2 = 1.0 - binary_entropy(0.2);
    let grid: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
    let cfg = SolverConfig::default();
    both(c, "figure2_sweep", || {
        black_box(figure2_sweep(0.1, r2, &grid, &cfg).unwrap());
    });
}

criterion_group!(benches, grid, exponent, sweep);
criterion_main!(benches);
