//! Least-squares earnings trend and extrapolation to the forecast horizon.

use crate::model::{CurrencyCode, GrahamConstants, MoneyPerShare, StockSnapshot};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum ForecastError {
    /// Fewer than two distinct fiscal years to fit a line through.
    #[error("need at least two distinct years of earnings, got {0}")]
    InsufficientData(usize),
}

/// Least-squares line through `(year, eps)` points. The x axis is indexed
/// years (`year - base_year`), anchored at the earliest input year to keep
/// the normal equations well conditioned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    /// Earnings change per year.
    pub slope: f64,
    /// Fitted earnings at `base_year`.
    pub intercept: f64,
    pub n_points: usize,
    /// Sum of squared residuals; ~0 for collinear input.
    pub sse: f64,
    /// Earliest input year.
    pub base_year: i32,
    pub currency: CurrencyCode,
}

/// Fits the trend line by least squares, centered form.
pub fn fit_eps_trend(points: &[(i32, MoneyPerShare)]) -> Result<LinearFit, ForecastError> {
    let mut years: Vec<i32> = points.iter().map(|p| p.0).collect();
    years.sort_unstable();
    years.dedup();
    if years.len() < 2 {
        return Err(ForecastError::InsufficientData(years.len()));
    }
    let base_year = years[0];
    let n = points.len() as f64;
    let x_of = |year: i32| (year - base_year) as f64;
    let x_mean = points.iter().map(|p| x_of(p.0)).sum::<f64>() / n;
    let y_mean = points.iter().map(|p| p.1.value).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (year, eps) in points {
        let dx = x_of(*year) - x_mean;
        sxx += dx * dx;
        sxy += dx * (eps.value - y_mean);
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let sse = points
        .iter()
        .map(|(year, eps)| {
            let r = eps.value - (intercept + slope * x_of(*year));
            r * r
        })
        .sum();
    Ok(LinearFit {
        slope,
        intercept,
        n_points: points.len(),
        sse,
        base_year,
        currency: points[0].1.currency,
    })
}

/// Fitted earnings at `target_year`; negative results come back as-is.
pub fn extrapolate_eps(fit: &LinearFit, target_year: i32) -> MoneyPerShare {
    let x = (target_year - fit.base_year) as f64;
    MoneyPerShare::new(fit.intercept + fit.slope * x, fit.currency)
}

/// History plus both forecast estimates, as fit input. Forecast years follow
/// the last history year, or the snapshot year when history is empty.
pub fn assemble_fit_points(
    snapshot: &StockSnapshot,
) -> Result<Vec<(i32, MoneyPerShare)>, ForecastError> {
    let (fy0, fy1) = match (snapshot.eps_fy0_est, snapshot.eps_fy1_est) {
        (Some(fy0), Some(fy1)) => (fy0, fy1),
        (a, b) => {
            let have = snapshot.eps_history.len() + a.iter().count() + b.iter().count();
            return Err(ForecastError::InsufficientData(have));
        }
    };
    let fy0_year = snapshot.fy0_year();
    let mut points: Vec<(i32, MoneyPerShare)> =
        snapshot.eps_history.iter().map(|p| (p.year, p.eps)).collect();
    points.push((fy0_year, fy0));
    points.push((fy0_year + 1, fy1));
    Ok(points)
}

/// Trend-extrapolated earnings `horizon_years` past the first forecast year.
/// Feeds the 5-year intrinsic value.
pub fn eps_horizon_estimate(
    snapshot: &StockSnapshot,
    constants: &GrahamConstants,
) -> Result<MoneyPerShare, ForecastError> {
    let points = assemble_fit_points(snapshot)?;
    let fit = fit_eps_trend(&points)?;
    Ok(extrapolate_eps(&fit, snapshot.fy0_year() + constants.horizon_years as i32))
}
