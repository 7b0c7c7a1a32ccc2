//! Shared domain types: quantities, model constants, stock snapshots, and the
//! validated universe they live in.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use chrono::{Datelike, NaiveDate};
use serde::Serialize;

/// A percentage expressed in points: `Percent(15.0)` means 15%.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Percent(pub f64);

impl Percent {
    /// The same quantity as a plain fraction (15% -> 0.15).
    pub fn as_fraction(self) -> f64 {
        self.0 / 100.0
    }
}

/// Three-letter ISO 4217 style currency code, stored uppercase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurrencyCode([u8; 3]);

impl CurrencyCode {
    pub const USD: CurrencyCode = CurrencyCode(*b"USD");

    pub fn as_str(&self) -> &str {
        // construction guarantees ASCII letters
        std::str::from_utf8(&self.0).unwrap()
    }
}

impl fmt::Display for CurrencyCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("currency code must be three ASCII letters, got {0:?}")]
pub struct BadCurrencyCode(pub String);

impl FromStr for CurrencyCode {
    type Err = BadCurrencyCode;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let b = s.as_bytes();
        if b.len() == 3 && b.iter().all(|c| c.is_ascii_alphabetic()) {
            Ok(CurrencyCode([
                b[0].to_ascii_uppercase(),
                b[1].to_ascii_uppercase(),
                b[2].to_ascii_uppercase(),
            ]))
        } else {
            Err(BadCurrencyCode(s.to_string()))
        }
    }
}

/// A per-share money amount tagged with its currency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoneyPerShare {
    pub value: f64,
    pub currency: CurrencyCode,
}

impl MoneyPerShare {
    pub fn new(value: f64, currency: CurrencyCode) -> Self {
        Self { value, currency }
    }

    pub fn usd(value: f64) -> Self {
        Self::new(value, CurrencyCode::USD)
    }
}

/// Tunable constants of the valuation model, defaulting to the classic values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrahamConstants {
    /// Fair P/E of a company with zero expected growth.
    pub base_pe: f64,
    /// Multiplier applied to the expected growth percentage.
    pub growth_multiplier: f64,
    /// Minimum implied 5-year annualized return for a buy candidate.
    pub buy_growth_threshold: Percent,
    /// Forecast horizon in years.
    pub horizon_years: u32,
    /// Analyst coverage a stock needs to enter market summaries.
    pub summary_min_analysts: u32,
}

impl Default for GrahamConstants {
    fn default() -> Self {
        Self {
            base_pe: 8.5,
            growth_multiplier: 2.0,
            buy_growth_threshold: Percent(15.0),
            horizon_years: 5,
            summary_min_analysts: 10,
        }
    }
}

impl GrahamConstants {
    /// Checks the invariants that overrides must keep.
    pub fn validate(&self) -> Result<(), String> {
        if !(self.base_pe.is_finite() && self.base_pe > 0.0) {
            return Err(format!("base P/E must be positive and finite, got {}", self.base_pe));
        }
        if !(self.growth_multiplier.is_finite() && self.growth_multiplier > 0.0) {
            return Err(format!(
                "growth multiplier must be positive and finite, got {}",
                self.growth_multiplier
            ));
        }
        if !self.buy_growth_threshold.0.is_finite() {
            return Err("buy threshold must be finite".to_string());
        }
        if self.horizon_years < 1 {
            return Err("horizon must be at least one year".to_string());
        }
        Ok(())
    }
}

/// One fiscal year of realized earnings per share.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsPoint {
    pub year: i32,
    pub eps: MoneyPerShare,
}

/// Why a record may not enter a [`Universe`]. The set is closed so ingest
/// reports stay machine-readable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RejectReason {
    /// A required field is absent, or the record could not be read at all.
    MissingField,
    NonPositivePrice,
    NegativeCap,
    /// Earnings history years are not strictly increasing.
    BadYearOrder,
    /// A numeric field is not a finite number of the required kind.
    NonFiniteNumber,
    BadCurrencyCode,
    /// Ticker already present; the earlier record wins.
    DuplicateTicker,
}

impl RejectReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            RejectReason::MissingField => "missing-field",
            RejectReason::NonPositivePrice => "non-positive-price",
            RejectReason::NegativeCap => "negative-cap",
            RejectReason::BadYearOrder => "bad-year-order",
            RejectReason::NonFiniteNumber => "non-finite-number",
            RejectReason::BadCurrencyCode => "bad-currency-code",
            RejectReason::DuplicateTicker => "duplicate-ticker",
        }
    }
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Point-in-time fundamentals for one ticker.
#[derive(Debug, Clone, PartialEq)]
pub struct StockSnapshot {
    pub ticker: String,
    pub name: String,
    pub sector: String,
    pub industry: String,
    pub currency: CurrencyCode,
    /// Date the snapshot was taken; anchors forecast years when history is empty.
    pub as_of: NaiveDate,
    pub price: MoneyPerShare,
    pub market_cap_usd: f64,
    pub analyst_count: u32,
    /// Consensus growth estimate for the next five years, percent per year.
    pub growth_5y_est: Percent,
    /// Realized growth over the past five years, as supplied by the source.
    pub past_growth_5y: Percent,
    /// Realized EPS by fiscal year, oldest first.
    pub eps_history: Vec<EpsPoint>,
    /// Consensus EPS estimate for the current fiscal year.
    pub eps_fy0_est: Option<MoneyPerShare>,
    /// Consensus EPS estimate for the next fiscal year.
    pub eps_fy1_est: Option<MoneyPerShare>,
    pub current_ratio: f64,
}

impl StockSnapshot {
    /// First forecast year: the year after the last history point, or the
    /// snapshot's own year when no history exists.
    pub fn fy0_year(&self) -> i32 {
        self.eps_history
            .last()
            .map(|p| p.year + 1)
            .unwrap_or_else(|| self.as_of.year())
    }

    /// Checks every universe invariant. `Err` carries the reason plus a
    /// human-readable detail.
    pub fn validate(&self) -> Result<(), (RejectReason, String)> {
        use RejectReason::*;
        let finite = |v: f64, what: &str| {
            if v.is_finite() {
                Ok(())
            } else {
                Err((NonFiniteNumber, format!("{what} is {v}")))
            }
        };
        if self.ticker.is_empty() {
            return Err((MissingField, "ticker is empty".to_string()));
        }
        finite(self.price.value, "price")?;
        if self.price.value <= 0.0 {
            return Err((NonPositivePrice, format!("price is {}", self.price.value)));
        }
        if self.price.currency != self.currency {
            return Err((BadCurrencyCode, "price currency differs from snapshot currency".to_string()));
        }
        finite(self.market_cap_usd, "market_cap_usd")?;
        if self.market_cap_usd < 0.0 {
            return Err((NegativeCap, format!("market cap is {}", self.market_cap_usd)));
        }
        finite(self.growth_5y_est.0, "growth_5y_est")?;
        finite(self.past_growth_5y.0, "past_growth_5y")?;
        finite(self.current_ratio, "current_ratio")?;
        if self.current_ratio < 0.0 {
            return Err((NonFiniteNumber, format!("current_ratio must be non-negative, got {}", self.current_ratio)));
        }
        for pair in self.eps_history.windows(2) {
            if pair[1].year <= pair[0].year {
                return Err((BadYearOrder, format!("year {} follows {}", pair[1].year, pair[0].year)));
            }
        }
        for point in &self.eps_history {
            finite(point.eps.value, "eps_history value")?;
            if point.eps.currency != self.currency {
                return Err((BadCurrencyCode, format!("eps for {} in a different currency", point.year)));
            }
        }
        for (est, what) in [(self.eps_fy0_est, "eps_fy0_est"), (self.eps_fy1_est, "eps_fy1_est")] {
            if let Some(v) = est {
                finite(v.value, what)?;
                if v.currency != self.currency {
                    return Err((BadCurrencyCode, format!("{what} in a different currency")));
                }
            }
        }
        Ok(())
    }
}

/// Validated snapshots keyed by ticker.
#[derive(Debug, Clone, PartialEq)]
pub struct Universe {
    pub as_of: NaiveDate,
    snapshots: BTreeMap<String, StockSnapshot>,
}

impl Universe {
    pub fn new(as_of: NaiveDate) -> Self {
        Self { as_of, snapshots: BTreeMap::new() }
    }

    /// Validates and inserts. The first record for a ticker wins.
    pub fn insert(&mut self, snapshot: StockSnapshot) -> Result<(), (RejectReason, String)> {
        snapshot.validate()?;
        if self.snapshots.contains_key(&snapshot.ticker) {
            return Err((
                RejectReason::DuplicateTicker,
                format!("{} already present", snapshot.ticker),
            ));
        }
        self.snapshots.insert(snapshot.ticker.clone(), snapshot);
        Ok(())
    }

    pub fn get(&self, ticker: &str) -> Option<&StockSnapshot> {
        self.snapshots.get(ticker)
    }

    /// Snapshots in ticker order.
    pub fn stocks(&self) -> impl Iterator<Item = &StockSnapshot> {
        self.snapshots.values()
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }
}

/// `WK nn` label for a date, per ISO week numbering.
pub fn week_label(date: NaiveDate) -> String {
    format!("WK {:02}", date.iso_week().week())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::sample_snapshot;

    #[test]
    fn default_constants() {
        let c = GrahamConstants::default();
        assert_eq!(c.base_pe, 8.5);
        assert_eq!(c.growth_multiplier, 2.0);
        assert_eq!(c.buy_growth_threshold, Percent(15.0));
        assert_eq!(c.horizon_years, 5);
        assert_eq!(c.summary_min_analysts, 10);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn constants_invariants() {
        let mut c = GrahamConstants { base_pe: 0.0, ..Default::default() };
        assert!(c.validate().is_err());
        c.base_pe = 8.5;
        c.horizon_years = 0;
        assert!(c.validate().is_err());
        c.horizon_years = 5;
        c.growth_multiplier = -1.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn currency_parsing() {
        assert_eq!("usd".parse::<CurrencyCode>().unwrap(), CurrencyCode::USD);
        assert_eq!("EUR".parse::<CurrencyCode>().unwrap().as_str(), "EUR");
        assert!("US".parse::<CurrencyCode>().is_err());
        assert!("USDX".parse::<CurrencyCode>().is_err());
        assert!("U$D".parse::<CurrencyCode>().is_err());
    }

    #[test]
    fn fy0_year_follows_history_or_as_of() {
        let mut s = sample_snapshot("AAA");
        assert_eq!(s.fy0_year(), 2019);
        s.eps_history.clear();
        assert_eq!(s.fy0_year(), 2020);
    }

    type Mutation = Box<dyn Fn(&mut StockSnapshot)>;

    #[test]
    fn validate_rejects_each_violation() {
        let cases: Vec<(Mutation, RejectReason)> = vec![
            (Box::new(|s| s.ticker.clear()), RejectReason::MissingField),
            (Box::new(|s| s.price.value = 0.0), RejectReason::NonPositivePrice),
            (Box::new(|s| s.price.value = -3.0), RejectReason::NonPositivePrice),
            (Box::new(|s| s.market_cap_usd = -5.0), RejectReason::NegativeCap),
            (Box::new(|s| s.market_cap_usd = f64::NAN), RejectReason::NonFiniteNumber),
            (Box::new(|s| s.growth_5y_est = Percent(f64::INFINITY)), RejectReason::NonFiniteNumber),
            (Box::new(|s| s.current_ratio = -0.1), RejectReason::NonFiniteNumber),
            (Box::new(|s| s.eps_history.swap(0, 1)), RejectReason::BadYearOrder),
            (Box::new(|s| s.eps_history[1].year = 2017), RejectReason::BadYearOrder),
            (
                Box::new(|s| s.eps_fy0_est = Some(MoneyPerShare::new(1.0, "EUR".parse().unwrap()))),
                RejectReason::BadCurrencyCode,
            ),
        ];
        for (mutate, expected) in cases {
            let mut s = sample_snapshot("AAA");
            mutate(&mut s);
            let (reason, _) = s.validate().unwrap_err();
            assert_eq!(reason, expected);
        }
    }

    #[test]
    fn universe_first_record_wins() {
        let mut u = Universe::new(NaiveDate::from_ymd_opt(2020, 3, 15).unwrap());
        let mut first = sample_snapshot("AAA");
        first.name = "first".to_string();
        u.insert(first).unwrap();
        let (reason, _) = u.insert(sample_snapshot("AAA")).unwrap_err();
        assert_eq!(reason, RejectReason::DuplicateTicker);
        assert_eq!(u.len(), 1);
        assert_eq!(u.get("AAA").unwrap().name, "first");
    }

    #[test]
    fn universe_rejects_invalid_snapshot() {
        let mut u = Universe::new(NaiveDate::from_ymd_opt(2020, 3, 15).unwrap());
        let mut s = sample_snapshot("BBB");
        s.price.value = -1.0;
        assert!(u.insert(s).is_err());
        assert!(u.is_empty());
    }

    #[test]
    fn week_labels() {
        assert_eq!(week_label(NaiveDate::from_ymd_opt(2020, 3, 15).unwrap()), "WK 11");
        assert_eq!(week_label(NaiveDate::from_ymd_opt(2020, 3, 8).unwrap()), "WK 10");
        assert_eq!(week_label(NaiveDate::from_ymd_opt(2021, 1, 15).unwrap()), "WK 02");
    }
}
