//! Cap-weighted sector and industry summaries of implied returns.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::model::{GrahamConstants, Universe};
use crate::valuation;

/// Group name used for the whole-universe row.
pub const ALL_SECTORS: &str = "All Sectors";

/// How to bucket stocks for a summary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupBy {
    Sector,
    Industry,
    /// Single bucket across the whole universe.
    All,
}

/// Cap-weighted averages for one group of stocks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub group_name: String,
    /// Cap-weighted implied 5-year annualized return.
    pub weighted_5y_est: f64,
    /// Cap-weighted trailing 5-year growth.
    pub weighted_past_5y: f64,
    /// Stocks contributing to the averages.
    pub count: usize,
}

#[derive(Debug, Error, PartialEq)]
pub enum AggregationError {
    /// Every eligible stock in the group has zero market cap, so a
    /// cap-weighted average is undefined.
    #[error("group {0:?} has eligible stocks but zero total market cap")]
    DegenerateGroup(String),
}

struct Accumulator {
    cap: f64,
    cap_ret5: f64,
    cap_past: f64,
    count: usize,
}

/// Cap-weighted summary rows for a universe. A stock contributes when it has
/// broad enough analyst coverage and its 5-year implied return is computable;
/// groups with no contributors are dropped. Rows come back by descending
/// count, then name.
pub fn summarize(
    universe: &Universe,
    group_by: GroupBy,
    constants: &GrahamConstants,
) -> Result<Vec<SummaryRow>, AggregationError> {
    let mut groups: BTreeMap<String, Accumulator> = BTreeMap::new();

    for snapshot in universe.stocks() {
        if snapshot.analyst_count < constants.summary_min_analysts {
            continue;
        }
        let Ok(report) = valuation::snapshot_valuation(snapshot, constants) else { continue };
        let Some(ret_5y) = report.implied_return_5y_annualized else { continue };

        let name = match group_by {
            GroupBy::Sector => snapshot.sector.clone(),
            GroupBy::Industry => snapshot.industry.clone(),
            GroupBy::All => ALL_SECTORS.to_string(),
        };
        let acc = groups.entry(name).or_insert(Accumulator {
            cap: 0.0,
            cap_ret5: 0.0,
            cap_past: 0.0,
            count: 0,
        });
        acc.cap += snapshot.market_cap_usd;
        acc.cap_ret5 += snapshot.market_cap_usd * ret_5y.0;
        acc.cap_past += snapshot.market_cap_usd * snapshot.past_growth_5y.0;
        acc.count += 1;
    }

    let mut rows = Vec::with_capacity(groups.len());
    for (name, acc) in groups {
        if acc.cap <= 0.0 {
            return Err(AggregationError::DegenerateGroup(name));
        }
        rows.push(SummaryRow {
            group_name: name,
            weighted_5y_est: acc.cap_ret5 / acc.cap,
            weighted_past_5y: acc.cap_past / acc.cap,
            count: acc.count,
        });
    }
    rows.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.group_name.cmp(&b.group_name)));
    Ok(rows)
}
