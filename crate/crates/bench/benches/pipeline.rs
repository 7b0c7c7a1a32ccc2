use criterion::{black_box, criterion_group, criterion_main, Criterion};
use graham_bench::synthetic_universe;
use graham_core::{
    fit_eps_trend, load_universe_from_reader, screen_tier, summarize, universe_to_json,
    FileFormat, GrahamConstants, GroupBy, MarketCapTier, MoneyPerShare,
};

fn bench_fit(c: &mut Criterion) {
    let points: Vec<(i32, MoneyPerShare)> = (0..8)
        .map(|k| (2014 + k, MoneyPerShare::usd(3.0 + 0.7 * k as f64 + (k % 3) as f64 * 0.1)))
        .collect();
    c.bench_function("fit_eps_trend_8_points", |b| {
        b.iter(|| fit_eps_trend(black_box(&points)).unwrap())
    });
}

fn bench_screen(c: &mut Criterion) {
    let universe = synthetic_universe(7, 2000);
    let constants = GrahamConstants::default();
    c.bench_function("screen_tier_big_2000_stocks", |b| {
        b.iter(|| screen_tier(black_box(&universe), MarketCapTier::Big, &constants, 10))
    });
}

fn bench_summary(c: &mut Criterion) {
    let universe = synthetic_universe(7, 2000);
    let constants = GrahamConstants::default();
    c.bench_function("summarize_sectors_2000_stocks", |b| {
        b.iter(|| summarize(black_box(&universe), GroupBy::Sector, &constants).unwrap())
    });
}

fn bench_load(c: &mut Criterion) {
    let json = universe_to_json(&synthetic_universe(7, 2000));
    c.bench_function("load_json_2000_stocks", |b| {
        b.iter(|| load_universe_from_reader(black_box(json.as_bytes()), FileFormat::Json).unwrap())
    });
}

criterion_group!(benches, bench_fit, bench_screen, bench_summary, bench_load);
criterion_main!(benches);
