//! Loading stock universes from JSON or CSV, with per-record rejection
//! reporting, and writing them back out as canonical JSON.
//!
//! Values are carried as binary doubles end to end. Parsing is correctly
//! rounded and serialization uses the shortest round-tripping decimal form,
//! so a load/save cycle reproduces the numbers bit for bit and diffs of
//! saved universes stay stable.

use std::collections::HashMap;
use std::io::Read;
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    CurrencyCode, EpsPoint, MoneyPerShare, Percent, RejectReason, StockSnapshot, Universe,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileFormat {
    Csv,
    Json,
}

impl FileFormat {
    /// Picks the format from the file extension.
    pub fn from_path(path: &Path) -> Result<FileFormat, IngestError> {
        let ext = path
            .extension()
            .map(|e| e.to_string_lossy().to_ascii_lowercase())
            .unwrap_or_default();
        match ext.as_str() {
            "json" => Ok(FileFormat::Json),
            "csv" => Ok(FileFormat::Csv),
            _ => Err(IngestError::UnknownFormat(path.display().to_string())),
        }
    }
}

/// Errors that sink a whole load. Problems scoped to one record become
/// [`Rejection`]s instead.
#[derive(Debug, Error)]
pub enum IngestError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    /// The file as a whole does not fit the expected shape.
    #[error("bad input file: {0}")]
    Schema(String),
    #[error("cannot tell input format of {0:?}; expected a .json or .csv file")]
    UnknownFormat(String),
}

/// One record that failed to enter the universe.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rejection {
    /// Where the record sat in the file, like `line 7` or `stocks[3]`.
    pub record: String,
    pub reason: RejectReason,
    pub detail: String,
}

/// A loaded universe plus everything that fell out along the way.
#[derive(Debug, Clone, PartialEq)]
pub struct IngestReport {
    pub universe: Universe,
    pub rejections: Vec<Rejection>,
}

impl IngestReport {
    pub fn accepted(&self) -> usize {
        self.universe.len()
    }
}

/// Loads a universe from a file, picking the format from the extension.
pub fn load_universe(path: &Path) -> Result<IngestReport, IngestError> {
    let format = FileFormat::from_path(path)?;
    let file = std::fs::File::open(path)?;
    load_universe_from_reader(std::io::BufReader::new(file), format)
}

pub fn load_universe_from_reader<R: Read>(
    reader: R,
    format: FileFormat,
) -> Result<IngestReport, IngestError> {
    match format {
        FileFormat::Json => load_json(reader),
        FileFormat::Csv => load_csv(reader),
    }
}

type Violation = (RejectReason, String);

/// A stock record as it sits on the wire, before any validation. Every field
/// is optional so that absence is reported per field, not as a parse failure.
#[derive(Debug, Default, Deserialize)]
#[serde(default)]
struct RawStock {
    ticker: Option<String>,
    name: Option<String>,
    sector: Option<String>,
    industry: Option<String>,
    currency: Option<String>,
    price: Option<f64>,
    market_cap_usd: Option<f64>,
    analyst_count: Option<f64>,
    growth_5y_est_pct: Option<f64>,
    past_growth_5y_pct: Option<f64>,
    current_ratio: Option<f64>,
    eps_history: Option<Vec<RawEpsPoint>>,
    eps_fy0_est: Option<f64>,
    eps_fy1_est: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default)]
struct RawEpsPoint {
    year: Option<f64>,
    eps: Option<f64>,
}

fn req_str(value: Option<String>, what: &str) -> Result<String, Violation> {
    match value {
        Some(s) if !s.trim().is_empty() => Ok(s.trim().to_string()),
        _ => Err((RejectReason::MissingField, format!("{what} is required"))),
    }
}

fn req_num(value: Option<f64>, what: &str) -> Result<f64, Violation> {
    match value {
        Some(v) if v.is_finite() => Ok(v),
        Some(v) => Err((RejectReason::NonFiniteNumber, format!("{what} is {v}"))),
        None => Err((RejectReason::MissingField, format!("{what} is required"))),
    }
}

fn opt_money(
    value: Option<f64>,
    currency: CurrencyCode,
    what: &str,
) -> Result<Option<MoneyPerShare>, Violation> {
    match value {
        None => Ok(None),
        Some(v) if v.is_finite() => Ok(Some(MoneyPerShare::new(v, currency))),
        Some(v) => Err((RejectReason::NonFiniteNumber, format!("{what} is {v}"))),
    }
}

fn int_in_range(value: f64, lo: f64, hi: f64, what: &str) -> Result<f64, Violation> {
    if value.fract() == 0.0 && (lo..=hi).contains(&value) {
        Ok(value)
    } else {
        Err((
            RejectReason::NonFiniteNumber,
            format!("{what} must be an integer in [{lo}, {hi}], got {value}"),
        ))
    }
}

/// Turns a raw record into a validated snapshot dated `as_of`.
fn validate_record(raw: RawStock, as_of: NaiveDate) -> Result<StockSnapshot, Violation> {
    let currency: CurrencyCode = req_str(raw.currency, "currency")?
        .parse()
        .map_err(|e: crate::model::BadCurrencyCode| {
            (RejectReason::BadCurrencyCode, e.to_string())
        })?;

    let analyst_count = int_in_range(
        req_num(raw.analyst_count, "analyst_count")?,
        0.0,
        u32::MAX as f64,
        "analyst_count",
    )? as u32;

    let mut eps_history = Vec::new();
    for (i, point) in raw.eps_history.unwrap_or_default().into_iter().enumerate() {
        let year = int_in_range(
            req_num(point.year, &format!("eps_history[{i}].year"))?,
            i32::MIN as f64,
            i32::MAX as f64,
            &format!("eps_history[{i}].year"),
        )? as i32;
        let eps = req_num(point.eps, &format!("eps_history[{i}].eps"))?;
        eps_history.push(EpsPoint { year, eps: MoneyPerShare::new(eps, currency) });
    }

    let snapshot = StockSnapshot {
        ticker: req_str(raw.ticker, "ticker")?,
        name: req_str(raw.name, "name")?,
        sector: req_str(raw.sector, "sector")?,
        industry: req_str(raw.industry, "industry")?,
        currency,
        as_of,
        price: MoneyPerShare::new(req_num(raw.price, "price")?, currency),
        market_cap_usd: req_num(raw.market_cap_usd, "market_cap_usd")?,
        analyst_count,
        growth_5y_est: Percent(req_num(raw.growth_5y_est_pct, "growth_5y_est_pct")?),
        past_growth_5y: Percent(req_num(raw.past_growth_5y_pct, "past_growth_5y_pct")?),
        eps_history,
        eps_fy0_est: opt_money(raw.eps_fy0_est, currency, "eps_fy0_est")?,
        eps_fy1_est: opt_money(raw.eps_fy1_est, currency, "eps_fy1_est")?,
        current_ratio: req_num(raw.current_ratio, "current_ratio")?,
    };
    snapshot.validate()?;
    Ok(snapshot)
}

#[derive(Deserialize)]
struct WireFile {
    as_of: Option<String>,
    #[serde(default)]
    stocks: Vec<serde_json::Value>,
}

fn load_json<R: Read>(mut reader: R) -> Result<IngestReport, IngestError> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    let wire: WireFile =
        serde_json::from_str(&text).map_err(|e| IngestError::Schema(e.to_string()))?;
    let as_of = wire
        .as_of
        .ok_or_else(|| IngestError::Schema("missing as_of".to_string()))?
        .parse::<NaiveDate>()
        .map_err(|e| IngestError::Schema(format!("bad as_of: {e}")))?;

    let mut universe = Universe::new(as_of);
    let mut rejections = Vec::new();
    for (i, value) in wire.stocks.into_iter().enumerate() {
        let record = format!("stocks[{i}]");
        let raw: RawStock = match serde_json::from_value(value) {
            Ok(raw) => raw,
            Err(e) => {
                rejections.push(Rejection {
                    record,
                    reason: RejectReason::MissingField,
                    detail: format!("unreadable record: {e}"),
                });
                continue;
            }
        };
        match validate_record(raw, as_of).and_then(|s| universe.insert(s)) {
            Ok(()) => {}
            Err((reason, detail)) => rejections.push(Rejection { record, reason, detail }),
        }
    }
    Ok(IngestReport { universe, rejections })
}

const CSV_COLUMNS: [&str; 20] = [
    "as_of",
    "ticker",
    "name",
    "sector",
    "industry",
    "currency",
    "price",
    "market_cap_usd",
    "analyst_count",
    "growth_5y_est_pct",
    "past_growth_5y_pct",
    "current_ratio",
    "eps_year1",
    "eps_y1",
    "eps_y2",
    "eps_y3",
    "eps_y4",
    "eps_y5",
    "eps_fy0_est",
    "eps_fy1_est",
];

const CSV_EPS_COLUMNS: [&str; 5] = ["eps_y1", "eps_y2", "eps_y3", "eps_y4", "eps_y5"];

fn load_csv<R: Read>(reader: R) -> Result<IngestReport, IngestError> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| IngestError::Schema(format!("unreadable header: {e}")))?
        .clone();
    let mut column: HashMap<&str, usize> = HashMap::new();
    for (i, h) in headers.iter().enumerate() {
        column.entry(h).or_insert(i);
    }
    let missing: Vec<&str> =
        CSV_COLUMNS.iter().copied().filter(|c| !column.contains_key(c)).collect();
    if !missing.is_empty() {
        return Err(IngestError::Schema(format!("missing columns: {}", missing.join(", "))));
    }

    // rows are read up front because the file-level date comes from the rows
    let mut rows: Vec<(String, Result<csv::StringRecord, csv::Error>)> = Vec::new();
    for (i, result) in rdr.records().enumerate() {
        let record = match &result {
            Ok(rec) => rec.position().map(|p| p.line()),
            Err(e) => e.position().map(|p| p.line()),
        }
        .map(|line| format!("line {line}"))
        .unwrap_or_else(|| format!("row {}", i + 1));
        rows.push((record, result));
    }

    let field = |rec: &csv::StringRecord, name: &str| -> Option<String> {
        rec.get(column[name]).map(str::trim).filter(|s| !s.is_empty()).map(str::to_string)
    };

    // every parseable as_of in the file must agree; the first one dates the universe
    let mut as_of: Option<NaiveDate> = None;
    for (record, result) in &rows {
        let Ok(rec) = result else { continue };
        let Some(date) = field(rec, "as_of").and_then(|s| s.parse::<NaiveDate>().ok()) else {
            continue;
        };
        match as_of {
            None => as_of = Some(date),
            Some(seen) if seen != date => {
                return Err(IngestError::Schema(format!(
                    "conflicting as_of dates: {seen} and {date} ({record})"
                )));
            }
            Some(_) => {}
        }
    }
    let Some(as_of) = as_of else {
        return Err(IngestError::Schema("no row carries a parseable as_of date".to_string()));
    };

    let mut universe = Universe::new(as_of);
    let mut rejections = Vec::new();
    for (record, result) in rows {
        let rec = match result {
            Ok(rec) => rec,
            Err(e) => {
                rejections.push(Rejection {
                    record,
                    reason: RejectReason::MissingField,
                    detail: format!("unreadable record: {e}"),
                });
                continue;
            }
        };
        match csv_record_to_raw(&rec, &field)
            .and_then(|raw| validate_record(raw, as_of))
            .and_then(|s| universe.insert(s))
        {
            Ok(()) => {}
            Err((reason, detail)) => rejections.push(Rejection { record, reason, detail }),
        }
    }
    Ok(IngestReport { universe, rejections })
}

fn parse_csv_num(value: Option<String>, what: &str) -> Result<Option<f64>, Violation> {
    match value {
        None => Ok(None),
        Some(s) => s.parse::<f64>().map(Some).map_err(|_| {
            (RejectReason::NonFiniteNumber, format!("{what} is not a number: {s:?}"))
        }),
    }
}

fn csv_record_to_raw(
    rec: &csv::StringRecord,
    field: &dyn Fn(&csv::StringRecord, &str) -> Option<String>,
) -> Result<RawStock, Violation> {
    // a row whose as_of is missing or unparseable cannot be dated, so it is
    // rejected even when the rest of the file loads
    let as_of_field = req_str(field(rec, "as_of"), "as_of")?;
    as_of_field.parse::<NaiveDate>().map_err(|e| {
        (RejectReason::MissingField, format!("as_of is not a date: {as_of_field:?} ({e})"))
    })?;

    let mut eps_values = Vec::new();
    for name in CSV_EPS_COLUMNS {
        eps_values.push(parse_csv_num(field(rec, name), name)?);
    }
    let eps_history = if eps_values.iter().any(Option::is_some) {
        let anchor = req_num(parse_csv_num(field(rec, "eps_year1"), "eps_year1")?, "eps_year1")?;
        Some(
            eps_values
                .into_iter()
                .enumerate()
                .filter_map(|(k, v)| {
                    v.map(|eps| RawEpsPoint {
                        year: Some(anchor + k as f64),
                        eps: Some(eps),
                    })
                })
                .collect(),
        )
    } else {
        None
    };

    Ok(RawStock {
        ticker: field(rec, "ticker"),
        name: field(rec, "name"),
        sector: field(rec, "sector"),
        industry: field(rec, "industry"),
        currency: field(rec, "currency"),
        price: parse_csv_num(field(rec, "price"), "price")?,
        market_cap_usd: parse_csv_num(field(rec, "market_cap_usd"), "market_cap_usd")?,
        analyst_count: parse_csv_num(field(rec, "analyst_count"), "analyst_count")?,
        growth_5y_est_pct: parse_csv_num(field(rec, "growth_5y_est_pct"), "growth_5y_est_pct")?,
        past_growth_5y_pct: parse_csv_num(field(rec, "past_growth_5y_pct"), "past_growth_5y_pct")?,
        current_ratio: parse_csv_num(field(rec, "current_ratio"), "current_ratio")?,
        eps_history,
        eps_fy0_est: parse_csv_num(field(rec, "eps_fy0_est"), "eps_fy0_est")?,
        eps_fy1_est: parse_csv_num(field(rec, "eps_fy1_est"), "eps_fy1_est")?,
    })
}

#[derive(Serialize)]
struct WireEpsOut {
    year: i32,
    eps: f64,
}

#[derive(Serialize)]
struct WireStockOut<'a> {
    ticker: &'a str,
    name: &'a str,
    sector: &'a str,
    industry: &'a str,
    currency: &'a str,
    price: f64,
    market_cap_usd: f64,
    analyst_count: u32,
    growth_5y_est_pct: f64,
    past_growth_5y_pct: f64,
    current_ratio: f64,
    eps_history: Vec<WireEpsOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eps_fy0_est: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eps_fy1_est: Option<f64>,
}

#[derive(Serialize)]
struct WireFileOut<'a> {
    as_of: String,
    stocks: Vec<WireStockOut<'a>>,
}

/// Canonical pretty-printed JSON for a universe. Loading the result back
/// reproduces the universe exactly.
pub fn universe_to_json(universe: &Universe) -> String {
    let doc = WireFileOut {
        as_of: universe.as_of.to_string(),
        stocks: universe
            .stocks()
            .map(|s| WireStockOut {
                ticker: &s.ticker,
                name: &s.name,
                sector: &s.sector,
                industry: &s.industry,
                currency: s.currency.as_str(),
                price: s.price.value,
                market_cap_usd: s.market_cap_usd,
                analyst_count: s.analyst_count,
                growth_5y_est_pct: s.growth_5y_est.0,
                past_growth_5y_pct: s.past_growth_5y.0,
                current_ratio: s.current_ratio,
                eps_history: s
                    .eps_history
                    .iter()
                    .map(|p| WireEpsOut { year: p.year, eps: p.eps.value })
                    .collect(),
                eps_fy0_est: s.eps_fy0_est.map(|m| m.value),
                eps_fy1_est: s.eps_fy1_est.map(|m| m.value),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("universe serializes")
}
