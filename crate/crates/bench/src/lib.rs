//! Synthetic data for the pipeline benchmarks.

use chrono::NaiveDate;
use graham_core::{CurrencyCode, EpsPoint, MoneyPerShare, Percent, StockSnapshot, Universe};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Builds a universe of plausible snapshots, deterministic per seed.
pub fn synthetic_universe(seed: u64, size: usize) -> Universe {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut universe = Universe::new(NaiveDate::from_ymd_opt(2020, 3, 15).unwrap());
    let sectors = ["Technology", "Healthcare", "Energy", "Utilities", "Finance"];
    let industries = ["Software", "Biotechnology", "Oil & Gas E&P", "Semiconductors", "Banks"];
    for i in 0..size {
        let currency = CurrencyCode::USD;
        let base: f64 = rng.gen_range(0.5..15.0);
        let step: f64 = rng.gen_range(-1.0..3.0);
        let eps_history: Vec<EpsPoint> = (0..rng.gen_range(2usize..6))
            .map(|k| EpsPoint {
                year: 2014 + k as i32,
                eps: MoneyPerShare::new(base + step * k as f64, currency),
            })
            .collect();
        let snapshot = StockSnapshot {
            ticker: format!("T{i:04}"),
            name: format!("Company {i}"),
            sector: sectors[rng.gen_range(0..sectors.len())].to_string(),
            industry: industries[rng.gen_range(0..industries.len())].to_string(),
            currency,
            as_of: universe.as_of,
            price: MoneyPerShare::new(rng.gen_range(5.0..1500.0), currency),
            market_cap_usd: 10f64.powf(rng.gen_range(7.5..12.5)),
            analyst_count: rng.gen_range(0..60),
            growth_5y_est: Percent(rng.gen_range(-20.0..120.0)),
            past_growth_5y: Percent(rng.gen_range(-40.0..120.0)),
            eps_history,
            eps_fy0_est: Some(MoneyPerShare::new(base + step * 5.0, currency)),
            eps_fy1_est: Some(MoneyPerShare::new(base + step * 6.0, currency)),
            current_ratio: rng.gen_range(0.2..8.0),
        };
        universe.insert(snapshot).expect("synthetic snapshot is valid");
    }
    universe
}
