use bbp_core::digit_extract::extract_digits;
use bbp_core::verify::{run_family, run_generator_grid};
use bbp_core::{eval_p, instantiate, PFormula};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn pi_formula() -> PFormula {
    PFormula::from_i64(1, 16, &[8, 8, 4, 0, -2, -2, -1, 0]).unwrap()
}

fn eval(c: &mut Criterion) {
    let mut g = c.benchmark_group("eval_p");
    for bits in [256u32, 1024, 4096] {
        g.bench_with_input(BenchmarkId::new("pi", bits), &bits, |b, &bits| {
            b.iter(|| eval_p(black_box(&pi_formula()), bits).unwrap())
        });
    }
    let l12 = instantiate("log.pi6.ratio", 3).unwrap().formula;
    g.bench_function("log7/1024", |b| b.iter(|| eval_p(black_box(&l12), 1024).unwrap()));
    g.finish();
}

fn digits(c: &mut Criterion) {
    let mut g = c.benchmark_group("extract_digits");
    g.sample_size(20);
    for pos in [1_000u64, 10_000, 100_000] {
        g.bench_with_input(BenchmarkId::new("pi_hex", pos), &pos, |b, &pos| {
            b.iter(|| extract_digits(black_box(&pi_formula()), pos, 8).unwrap())
        });
    }
    g.finish();
}

fn verify(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify");
    g.sample_size(10);
    g.bench_function("family_sweep_L12_n25_F256", |b| b.iter(|| run_family("log.pi6.ratio", 256, 25).unwrap()));
    g.bench_function("generator_grid_F128", |b| b.iter(|| run_generator_grid(128)));
    g.finish();
}

criterion_group!(benches, eval, digits, verify);
criterion_main!(benches);
