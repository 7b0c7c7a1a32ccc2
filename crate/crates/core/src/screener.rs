//! Tier-scoped buy/sell screening on top of the valuation pipeline.

use chrono::NaiveDate;
use serde::Serialize;

use crate::classification::{MarketCapTier, TierScheme};
use crate::model::{week_label, GrahamConstants, Percent, Universe};
use crate::valuation;

/// One screened stock, carrying the values the report tables show.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScreenRow {
    pub ticker: String,
    /// Implied annualized return over the forecast horizon.
    pub ret_5y_annualized: Percent,
    /// Implied simple return against the next-year estimate.
    pub ret_1y: Option<Percent>,
    /// Implied simple return against the current-year estimate.
    pub ret_0y: Option<Percent>,
    pub past_growth_5y: Percent,
    pub analyst_count: u32,
    pub current_ratio: f64,
}

/// Buy and sell candidates for one tier.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScreenResult {
    pub tier: MarketCapTier,
    pub week_label: String,
    pub as_of: NaiveDate,
    /// Highest implied 5-year return first.
    pub buys: Vec<ScreenRow>,
    /// Most negative implied 5-year return first.
    pub sells: Vec<ScreenRow>,
}

/// Where tier candidates fell out before filtering; surfaced on stderr.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ScreenDiagnostics {
    /// Stocks in the tier before any gate.
    pub in_tier: usize,
    /// Dropped for thin analyst coverage.
    pub below_analyst_floor: usize,
    /// Dropped because no horizon could be valued.
    pub valuation_unavailable: usize,
}

/// Screens one tier: tier members with enough analyst coverage and a workable
/// valuation, split into buys (implied 5-year return at or above the threshold
/// and positive past growth) and sells (negative implied 5-year return), each
/// truncated to `top_n`. Ties in the sort break by ticker.
pub fn screen_tier(
    universe: &Universe,
    tier: MarketCapTier,
    constants: &GrahamConstants,
    top_n: usize,
) -> ScreenResult {
    screen_tier_with_diagnostics(universe, tier, constants, top_n).0
}

pub fn screen_tier_with_diagnostics(
    universe: &Universe,
    tier: MarketCapTier,
    constants: &GrahamConstants,
    top_n: usize,
) -> (ScreenResult, ScreenDiagnostics) {
    let scheme = TierScheme::default();
    let mut diagnostics = ScreenDiagnostics::default();
    let mut buys = Vec::new();
    let mut sells = Vec::new();

    for snapshot in universe.stocks() {
        if scheme.classify(snapshot.market_cap_usd) != Ok(tier) {
            continue;
        }
        diagnostics.in_tier += 1;
        if snapshot.analyst_count < scheme.min_analysts_for(tier) {
            diagnostics.below_analyst_floor += 1;
            continue;
        }
        let report = match valuation::snapshot_valuation(snapshot, constants) {
            Ok(report) => report,
            Err(_) => {
                diagnostics.valuation_unavailable += 1;
                continue;
            }
        };
        // both filters key off the 5-year figure; without it the stock is out
        let Some(ret_5y) = report.implied_return_5y_annualized else { continue };
        let row = ScreenRow {
            ticker: snapshot.ticker.clone(),
            ret_5y_annualized: ret_5y,
            ret_1y: report.implied_return_1y,
            ret_0y: report.implied_return_0y,
            past_growth_5y: snapshot.past_growth_5y,
            analyst_count: snapshot.analyst_count,
            current_ratio: snapshot.current_ratio,
        };
        if ret_5y.0 >= constants.buy_growth_threshold.0 && snapshot.past_growth_5y.0 > 0.0 {
            buys.push(row);
        } else if ret_5y.0 < 0.0 {
            sells.push(row);
        }
    }

    buys.sort_by(|a, b| {
        b.ret_5y_annualized.0.total_cmp(&a.ret_5y_annualized.0).then_with(|| a.ticker.cmp(&b.ticker))
    });
    sells.sort_by(|a, b| {
        a.ret_5y_annualized.0.total_cmp(&b.ret_5y_annualized.0).then_with(|| a.ticker.cmp(&b.ticker))
    });
    buys.truncate(top_n);
    sells.truncate(top_n);

    let result = ScreenResult {
        tier,
        week_label: week_label(universe.as_of),
        as_of: universe.as_of,
        buys,
        sells,
    };
    (result, diagnostics)
}

/// One [`ScreenResult`] per tier, largest tier first.
pub fn screen_all_tiers(
    universe: &Universe,
    constants: &GrahamConstants,
    top_n: usize,
) -> Vec<ScreenResult> {
    MarketCapTier::DESCENDING
        .into_iter()
        .map(|tier| screen_tier(universe, tier, constants, top_n))
        .collect()
}
