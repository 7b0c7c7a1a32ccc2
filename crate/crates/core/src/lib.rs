//! Growth-stock valuation and screening.
//!
//! The pipeline: [`ingest`] loads a validated [`model::Universe`] from JSON or
//! CSV, [`forecast`] fits a linear trend to each stock's earnings line,
//! [`valuation`] prices the trend with the growth-multiple rule and turns
//! prices into implied returns, [`classification`] buckets stocks by market
//! cap, and [`screener`] / [`aggregation`] build the buy/sell tables and
//! cap-weighted market summaries on top.

pub mod aggregation;
pub mod classification;
pub mod forecast;
pub mod ingest;
pub mod model;
pub mod screener;
pub mod valuation;

#[cfg(test)]
pub(crate) mod testutil;

pub use aggregation::{summarize, AggregationError, GroupBy, SummaryRow, ALL_SECTORS};
pub use classification::{
    classify_market_cap, min_analysts_for_tier, ClassificationError, MarketCapTier, TierScheme,
};
pub use forecast::{
    assemble_fit_points, eps_horizon_estimate, extrapolate_eps, fit_eps_trend, ForecastError,
    LinearFit,
};
pub use ingest::{
    load_universe, load_universe_from_reader, universe_to_json, FileFormat, IngestError,
    IngestReport, Rejection,
};
pub use model::{
    week_label, BadCurrencyCode, CurrencyCode, EpsPoint, GrahamConstants, MoneyPerShare, Percent,
    RejectReason, StockSnapshot, Universe,
};
pub use screener::{
    screen_all_tiers, screen_tier, screen_tier_with_diagnostics, ScreenDiagnostics, ScreenResult,
    ScreenRow,
};
pub use valuation::{
    annualized_return, build_valuation_report, compound_value, graham_intrinsic_value,
    graham_multiplier, snapshot_valuation, ValuationError, ValuationReport,
};
