use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use cycbase::control::control_subgroup;
use cycbase::corpus::{scaling_family, sym5_wr_c2};
use cycbase::cycle_base::cycle_base;
use cycbase::Group;

fn control_scaling(c: &mut Criterion) {
    let mut g = c.benchmark_group("control_subgroup");
    g.sample_size(10);
    for levels in 1..=4 {
        let k = scaling_family(levels);
        g.bench_with_input(BenchmarkId::from_parameter(k.degree()), &k, |b, k| {
            b.iter(|| control_subgroup(black_box(k), 0).unwrap())
        });
    }
    g.finish();
}

fn cycle_bases(c: &mut Criterion) {
    let mut g = c.benchmark_group("cycle_base");
    g.sample_size(10);
    let cases = [
        ("Sym5 wr C2", sym5_wr_c2()),
        ("Sym8", Group::symmetric(8)),
        ("M11", cycbase::corpus::m11()),
    ];
    for (name, k) in &cases {
        g.bench_function(*name, |b| b.iter(|| cycle_base(black_box(k), 0).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, control_scaling, cycle_bases);
criterion_main!(benches);
