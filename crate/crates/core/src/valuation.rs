//! The growth-stock valuation formula and the compounding math around it.

use crate::forecast;
use crate::model::{GrahamConstants, MoneyPerShare, Percent, StockSnapshot};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ValuationError {
    /// An argument fell outside the operation's domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// The formula has no meaning for zero or negative earnings.
    #[error("earnings must be positive, got {0}")]
    NonPositiveEarnings(f64),
    /// No forecast horizon had usable earnings.
    #[error("no horizon has a usable earnings estimate")]
    Unavailable,
}

/// Fair price-to-earnings multiple for an expected growth rate: affine in the
/// growth estimate, with no clamping (negative results come back as-is).
pub fn graham_multiplier(
    growth_5y_est: Percent,
    constants: &GrahamConstants,
) -> Result<f64, ValuationError> {
    if !growth_5y_est.0.is_finite() {
        return Err(ValuationError::InvalidInput(format!(
            "growth estimate must be finite, got {}",
            growth_5y_est.0
        )));
    }
    Ok(constants.base_pe + constants.growth_multiplier * growth_5y_est.0)
}

/// Intrinsic value per share: the growth multiple times earnings.
pub fn graham_intrinsic_value(
    growth_5y_est: Percent,
    eps: MoneyPerShare,
    constants: &GrahamConstants,
) -> Result<MoneyPerShare, ValuationError> {
    let multiple = graham_multiplier(growth_5y_est, constants)?;
    if !eps.value.is_finite() {
        return Err(ValuationError::InvalidInput(format!("eps must be finite, got {}", eps.value)));
    }
    if eps.value <= 0.0 {
        return Err(ValuationError::NonPositiveEarnings(eps.value));
    }
    Ok(MoneyPerShare::new(multiple * eps.value, eps.currency))
}

/// Value of `principal` after `years` of compounding at `rate` percent.
pub fn compound_value(principal: f64, rate: Percent, years: u32) -> Result<f64, ValuationError> {
    if !principal.is_finite() {
        return Err(ValuationError::InvalidInput(format!("principal must be finite, got {principal}")));
    }
    if !rate.0.is_finite() || rate.0 <= -100.0 {
        return Err(ValuationError::InvalidInput(format!(
            "rate must be finite and above -100%, got {}",
            rate.0
        )));
    }
    Ok(principal * (1.0 + rate.as_fraction()).powi(years as i32))
}

/// The constant annual rate that grows `start` into `end` over `years`.
/// Inverse of [`compound_value`] in the rate argument.
pub fn annualized_return(start: f64, end: f64, years: u32) -> Result<Percent, ValuationError> {
    if years == 0 {
        return Err(ValuationError::InvalidInput("years must be at least 1".to_string()));
    }
    if !start.is_finite() || start <= 0.0 {
        return Err(ValuationError::InvalidInput(format!("start must be positive, got {start}")));
    }
    if !end.is_finite() || end < 0.0 {
        return Err(ValuationError::InvalidInput(format!("end must be non-negative, got {end}")));
    }
    Ok(Percent(100.0 * ((end / start).powf(1.0 / years as f64) - 1.0)))
}

/// Intrinsic values and implied returns for the three forecast horizons.
/// Horizons without positive earnings stay `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct ValuationReport {
    pub ticker: String,
    pub intrinsic_value_0y: Option<MoneyPerShare>,
    pub intrinsic_value_1y: Option<MoneyPerShare>,
    pub intrinsic_value_5y: Option<MoneyPerShare>,
    /// Simple return from price to the current-year value, in percent.
    pub implied_return_0y: Option<Percent>,
    /// Simple return from price to the next-year value, in percent.
    pub implied_return_1y: Option<Percent>,
    /// Annualized return from price to the horizon value; `None` when that
    /// value is missing or not positive.
    pub implied_return_5y_annualized: Option<Percent>,
}

/// Values one stock at every horizon. `eps_5y` is the trend estimate
/// `horizon_years` out; pass `None` when no trend could be fitted.
///
/// Errors with [`ValuationError::Unavailable`] when no horizon has positive
/// earnings to value.
pub fn build_valuation_report(
    snapshot: &StockSnapshot,
    eps_5y: Option<MoneyPerShare>,
    constants: &GrahamConstants,
) -> Result<ValuationReport, ValuationError> {
    let growth = snapshot.growth_5y_est;
    if !growth.0.is_finite() {
        return Err(ValuationError::InvalidInput(format!(
            "growth estimate must be finite, got {}",
            growth.0
        )));
    }
    let price = snapshot.price.value;
    if !price.is_finite() || price <= 0.0 {
        return Err(ValuationError::InvalidInput(format!("price must be positive, got {price}")));
    }

    // Non-positive earnings leave the horizon unvalued rather than failing.
    let value = |eps: Option<MoneyPerShare>| {
        eps.and_then(|e| graham_intrinsic_value(growth, e, constants).ok())
    };
    let iv0 = value(snapshot.eps_fy0_est);
    let iv1 = value(snapshot.eps_fy1_est);
    let iv5 = value(eps_5y);
    if iv0.is_none() && iv1.is_none() && iv5.is_none() {
        return Err(ValuationError::Unavailable);
    }

    let simple = |iv: Option<MoneyPerShare>| iv.map(|v| Percent(100.0 * (v.value / price - 1.0)));
    Ok(ValuationReport {
        ticker: snapshot.ticker.clone(),
        intrinsic_value_0y: iv0,
        intrinsic_value_1y: iv1,
        intrinsic_value_5y: iv5,
        implied_return_0y: simple(iv0),
        implied_return_1y: simple(iv1),
        implied_return_5y_annualized: iv5
            .and_then(|v| annualized_return(price, v.value, constants.horizon_years).ok()),
    })
}

/// Full per-stock pipeline: fit the earnings trend, extrapolate to the
/// horizon, and value every estimate.
pub fn snapshot_valuation(
    snapshot: &StockSnapshot,
    constants: &GrahamConstants,
) -> Result<ValuationReport, ValuationError> {
    let eps_5y = forecast::eps_horizon_estimate(snapshot, constants).ok();
    build_valuation_report(snapshot, eps_5y, constants)
}
