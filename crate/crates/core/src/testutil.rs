//! Snapshot builders shared by the module tests.

use chrono::NaiveDate;

use crate::model::{CurrencyCode, EpsPoint, MoneyPerShare, Percent, StockSnapshot};

pub fn date(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).unwrap()
}

pub fn sample_snapshot(ticker: &str) -> StockSnapshot {
    StockSnapshot {
        ticker: ticker.to_string(),
        name: format!("{ticker} Inc"),
        sector: "Technology".to_string(),
        industry: "Software".to_string(),
        currency: CurrencyCode::USD,
        as_of: date(2020, 3, 15),
        price: MoneyPerShare::usd(100.0),
        market_cap_usd: 5e9,
        analyst_count: 20,
        growth_5y_est: Percent(12.0),
        past_growth_5y: Percent(8.0),
        eps_history: vec![
            EpsPoint { year: 2017, eps: MoneyPerShare::usd(2.0) },
            EpsPoint { year: 2018, eps: MoneyPerShare::usd(3.0) },
        ],
        eps_fy0_est: Some(MoneyPerShare::usd(4.0)),
        eps_fy1_est: Some(MoneyPerShare::usd(5.0)),
        current_ratio: 1.5,
    }
}

/// Snapshot whose implied 5-year annualized return computes to `target_r5`
/// (within float noise): collinear EPS 2014..2020 from `eps0` stepping by
/// `eps_step`, priced by inverting the compounding at the target rate.
#[allow(clippy::too_many_arguments)]
pub fn engineered(
    ticker: &str,
    sector: &str,
    industry: &str,
    cap: f64,
    analysts: u32,
    growth: f64,
    past: f64,
    current_ratio: f64,
    eps0: f64,
    eps_step: f64,
    target_r5: f64,
) -> StockSnapshot {
    let eps_5y = eps0 + 10.0 * eps_step;
    let iv5 = (8.5 + 2.0 * growth) * eps_5y;
    let price = iv5 / (1.0 + target_r5 / 100.0).powi(5);
    StockSnapshot {
        ticker: ticker.to_string(),
        name: format!("{ticker} Inc"),
        sector: sector.to_string(),
        industry: industry.to_string(),
        currency: CurrencyCode::USD,
        as_of: date(2020, 3, 15),
        price: MoneyPerShare::usd(price),
        market_cap_usd: cap,
        analyst_count: analysts,
        growth_5y_est: Percent(growth),
        past_growth_5y: Percent(past),
        eps_history: (0..5)
            .map(|i| EpsPoint { year: 2014 + i, eps: MoneyPerShare::usd(eps0 + eps_step * i as f64) })
            .collect(),
        eps_fy0_est: Some(MoneyPerShare::usd(eps0 + 5.0 * eps_step)),
        eps_fy1_est: Some(MoneyPerShare::usd(eps0 + 6.0 * eps_step)),
        current_ratio,
    }
}
