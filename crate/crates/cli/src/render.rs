//! Report rendering: text tables in the weekly-report style, plus CSV and
//! JSON with the same rows.

use chrono::NaiveDate;
use graham_core::{MoneyPerShare, Percent, ScreenResult, ScreenRow, SummaryRow, ValuationReport};
use serde_json::json;

pub const SCREEN_LEGEND: &str = "5Y%: 5-Year Ann Ret Est, 1Y%: 1-Year Ret Est, 0Y%: Curr Year Ret Est, P5%: Past 5Y Ret, AN#: Curr Year # of Analysts, CR: Current Ratio";
pub const SCREEN_DISCLAIMER: &str =
    "These are predictions based on Earnings & Growth and intended for information purposes only";
pub const SUMMARY_LEGEND: &str =
    "W5Y%: Weighted 5-Year Ann Ret Est, WP5%: Weighted Past 5Y Ret, #'s: Number of Stocks";

/// Rounds to `dp` decimals, halves away from zero.
pub fn round_dp(x: f64, dp: u32) -> f64 {
    let m = 10f64.powi(dp as i32);
    (x * m).round() / m
}

/// One decimal, dropped when the rounded value is whole. Matches the report
/// columns, which show "121" and "4.4" alike.
pub fn fmt_num1(x: f64) -> String {
    let tenths = (x * 10.0).round();
    if tenths == 0.0 {
        return "0".to_string();
    }
    if tenths % 10.0 == 0.0 {
        format!("{}", tenths / 10.0)
    } else {
        format!("{:.1}", tenths / 10.0)
    }
}

pub fn fmt_pct_opt(p: Option<Percent>) -> String {
    p.map(|v| fmt_num1(v.0)).unwrap_or_else(|| "-".to_string())
}

/// Two decimals, for money and table cells.
pub fn fmt_money(x: f64) -> String {
    format!("{:.2}", round_dp(x, 2))
}

fn zip_blocks(left: &[String], right: &[String], left_width: usize, gutter: &str) -> Vec<String> {
    let rows = left.len().max(right.len());
    (0..rows)
        .map(|i| {
            let l = left.get(i).map(String::as_str).unwrap_or("");
            let r = right.get(i).map(String::as_str).unwrap_or("");
            format!("{l:<left_width$}{gutter}{r}").trim_end().to_string()
        })
        .collect()
}

// ---- screen ----

fn screen_row_line(row: &ScreenRow) -> String {
    format!(
        "{:<8}{:>7}{:>7}{:>7}{:>7}{:>5}{:>6}",
        row.ticker,
        fmt_num1(row.ret_5y_annualized.0),
        fmt_pct_opt(row.ret_1y),
        fmt_pct_opt(row.ret_0y),
        fmt_num1(row.past_growth_5y.0),
        row.analyst_count,
        fmt_num1(row.current_ratio),
    )
}

fn screen_side(label: &str, rows: &[ScreenRow]) -> Vec<String> {
    let mut lines = vec![
        label.to_string(),
        format!("{:<8}{:>7}{:>7}{:>7}{:>7}{:>5}{:>6}", "TICKER", "5Y%", "1Y%", "0Y%", "P5%", "AN#", "CR"),
    ];
    if rows.is_empty() {
        lines.push("(none)".to_string());
    }
    lines.extend(rows.iter().map(screen_row_line));
    lines
}

pub fn screen_text(result: &ScreenResult) -> String {
    let mut out = format!(
        "({}) Graham's Growth {} Buy/Sell\n\n",
        result.week_label,
        result.tier.title_word()
    );
    let left = screen_side("BUY", &result.buys);
    let right = screen_side("SELL", &result.sells);
    for line in zip_blocks(&left, &right, 47, "   ") {
        out.push_str(&line);
        out.push('\n');
    }
    out.push('\n');
    out.push_str(SCREEN_LEGEND);
    out.push('\n');
    out.push_str(SCREEN_DISCLAIMER);
    out.push('\n');
    out
}

fn csv_string(write: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    write(&mut w).expect("csv to memory");
    String::from_utf8(w.into_inner().expect("csv flush")).expect("csv is utf8")
}

fn opt_pct_field(p: Option<Percent>) -> String {
    p.map(|v| v.0.to_string()).unwrap_or_default()
}

pub fn screen_csv(results: &[ScreenResult]) -> String {
    csv_string(|w| {
        w.write_record([
            "tier",
            "side",
            "ticker",
            "ret_5y_annualized_pct",
            "ret_1y_pct",
            "ret_0y_pct",
            "past_growth_5y_pct",
            "analyst_count",
            "current_ratio",
        ])?;
        for result in results {
            for (side, rows) in [("buy", &result.buys), ("sell", &result.sells)] {
                for row in rows {
                    w.write_record([
                        result.tier.name().to_string(),
                        side.to_string(),
                        row.ticker.clone(),
                        row.ret_5y_annualized.0.to_string(),
                        opt_pct_field(row.ret_1y),
                        opt_pct_field(row.ret_0y),
                        row.past_growth_5y.0.to_string(),
                        row.analyst_count.to_string(),
                        row.current_ratio.to_string(),
                    ])?;
                }
            }
        }
        Ok(())
    })
}

pub fn screen_json(results: &[ScreenResult], as_of: NaiveDate, stamp: Option<&str>) -> String {
    let mut doc = json!({
        "as_of": as_of.to_string(),
        "results": results,
    });
    if let Some(stamp) = stamp {
        doc["generated_at"] = json!(stamp);
    }
    serde_json::to_string_pretty(&doc).expect("report serializes")
}

// ---- summary ----

fn block_name_width(header: &str, rows: &[SummaryRow]) -> usize {
    rows.iter()
        .map(|r| r.group_name.len())
        .chain([header.len()])
        .max()
        .unwrap_or(header.len())
        + 2
}

fn summary_block(header: &str, rows: &[SummaryRow]) -> Vec<String> {
    summary_block_sized(header, rows, block_name_width(header, rows))
}

fn summary_block_sized(header: &str, rows: &[SummaryRow], name_width: usize) -> Vec<String> {
    let mut lines =
        vec![format!("{:<name_width$}{:>7}{:>7}{:>6}", header, "W5Y%", "WP5%", "#'s")];
    if rows.is_empty() {
        lines.push("(none)".to_string());
    }
    for row in rows {
        lines.push(format!(
            "{:<name_width$}{:>7}{:>7}{:>6}",
            row.group_name,
            fmt_num1(row.weighted_5y_est),
            fmt_num1(row.weighted_past_5y),
            row.count,
        ));
    }
    lines
}

pub fn summary_text_combined(
    week_label: &str,
    sectors: &[SummaryRow],
    industries: &[SummaryRow],
    all: &[SummaryRow],
    min_analysts: u32,
) -> String {
    let mut out = format!("({week_label}) Graham's Growth Summary\n\n");
    let left = summary_block("SECTOR", sectors);
    // the total row sits under the industry block, so both share one width
    let right_width =
        block_name_width("INDUSTRY", industries).max(block_name_width("TOTAL", all));
    let mut right = summary_block_sized("INDUSTRY", industries, right_width);
    right.push(String::new());
    right.extend(summary_block_sized("TOTAL", all, right_width).into_iter().skip(1));
    let left_width = left.iter().map(String::len).max().unwrap_or(0).max(26);
    for line in zip_blocks(&left, &right, left_width, "     ") {
        out.push_str(&line);
        out.push('\n');
    }
    out.push('\n');
    out.push_str(SUMMARY_LEGEND);
    out.push('\n');
    out.push_str(&format!("we only select >={min_analysts} analysts\n"));
    out
}

pub fn summary_text_single(
    week_label: &str,
    header: &str,
    rows: &[SummaryRow],
    min_analysts: u32,
) -> String {
    let mut out = format!("({week_label}) Graham's Growth Summary\n\n");
    for line in summary_block(header, rows) {
        out.push_str(&line);
        out.push('\n');
    }
    out.push('\n');
    out.push_str(SUMMARY_LEGEND);
    out.push('\n');
    out.push_str(&format!("we only select >={min_analysts} analysts\n"));
    out
}

pub fn summary_csv(groups: &[(&str, &[SummaryRow])]) -> String {
    csv_string(|w| {
        w.write_record([
            "group_by",
            "group_name",
            "weighted_5y_est_pct",
            "weighted_past_5y_pct",
            "count",
        ])?;
        for (group_by, rows) in groups {
            for row in *rows {
                w.write_record([
                    group_by.to_string(),
                    row.group_name.clone(),
                    row.weighted_5y_est.to_string(),
                    row.weighted_past_5y.to_string(),
                    row.count.to_string(),
                ])?;
            }
        }
        Ok(())
    })
}

pub fn summary_json(
    groups: &[(&str, &[SummaryRow])],
    as_of: NaiveDate,
    stamp: Option<&str>,
) -> String {
    let rows: Vec<serde_json::Value> = groups
        .iter()
        .flat_map(|(group_by, rows)| {
            rows.iter().map(move |row| {
                json!({
                    "group_by": group_by,
                    "group_name": row.group_name,
                    "weighted_5y_est_pct": row.weighted_5y_est,
                    "weighted_past_5y_pct": row.weighted_past_5y,
                    "count": row.count,
                })
            })
        })
        .collect();
    let mut doc = json!({ "as_of": as_of.to_string(), "rows": rows });
    if let Some(stamp) = stamp {
        doc["generated_at"] = json!(stamp);
    }
    serde_json::to_string_pretty(&doc).expect("report serializes")
}

// ---- value ----

fn fmt_money_opt(m: Option<MoneyPerShare>) -> String {
    m.map(|v| format!("{} {}", fmt_money(v.value), v.currency)).unwrap_or_else(|| "n/a".to_string())
}

fn fmt_pct2_opt(p: Option<Percent>) -> String {
    p.map(|v| format!("{}%", fmt_money(v.0))).unwrap_or_else(|| "n/a".to_string())
}

pub fn value_text(
    report: &ValuationReport,
    price: MoneyPerShare,
    growth: Percent,
    as_of: NaiveDate,
) -> String {
    let mut out = format!("{} valuation (as of {as_of})\n", report.ticker);
    out.push_str(&format!("  price:                {} {}\n", fmt_money(price.value), price.currency));
    out.push_str(&format!("  growth estimate:      {}%\n", fmt_money(growth.0)));
    out.push_str(&format!("  intrinsic value (0Y): {}\n", fmt_money_opt(report.intrinsic_value_0y)));
    out.push_str(&format!("  intrinsic value (1Y): {}\n", fmt_money_opt(report.intrinsic_value_1y)));
    out.push_str(&format!("  intrinsic value (5Y): {}\n", fmt_money_opt(report.intrinsic_value_5y)));
    out.push_str(&format!("  implied return (0Y):  {}\n", fmt_pct2_opt(report.implied_return_0y)));
    out.push_str(&format!("  implied return (1Y):  {}\n", fmt_pct2_opt(report.implied_return_1y)));
    out.push_str(&format!(
        "  implied return (5Y):  {} annualized\n",
        fmt_pct2_opt(report.implied_return_5y_annualized)
    ));
    out
}

fn opt_money_field(m: Option<MoneyPerShare>) -> String {
    m.map(|v| v.value.to_string()).unwrap_or_default()
}

pub fn value_csv(report: &ValuationReport, price: MoneyPerShare) -> String {
    csv_string(|w| {
        w.write_record([
            "ticker",
            "currency",
            "price",
            "intrinsic_value_0y",
            "intrinsic_value_1y",
            "intrinsic_value_5y",
            "implied_return_0y_pct",
            "implied_return_1y_pct",
            "implied_return_5y_annualized_pct",
        ])?;
        w.write_record([
            report.ticker.clone(),
            price.currency.to_string(),
            price.value.to_string(),
            opt_money_field(report.intrinsic_value_0y),
            opt_money_field(report.intrinsic_value_1y),
            opt_money_field(report.intrinsic_value_5y),
            opt_pct_field(report.implied_return_0y),
            opt_pct_field(report.implied_return_1y),
            opt_pct_field(report.implied_return_5y_annualized),
        ])?;
        Ok(())
    })
}

pub fn value_json(
    report: &ValuationReport,
    price: MoneyPerShare,
    as_of: NaiveDate,
    stamp: Option<&str>,
) -> String {
    let mut doc = json!({
        "as_of": as_of.to_string(),
        "ticker": report.ticker,
        "currency": price.currency.to_string(),
        "price": price.value,
        "intrinsic_value_0y": report.intrinsic_value_0y.map(|m| m.value),
        "intrinsic_value_1y": report.intrinsic_value_1y.map(|m| m.value),
        "intrinsic_value_5y": report.intrinsic_value_5y.map(|m| m.value),
        "implied_return_0y_pct": report.implied_return_0y.map(|p| p.0),
        "implied_return_1y_pct": report.implied_return_1y.map(|p| p.0),
        "implied_return_5y_annualized_pct": report.implied_return_5y_annualized.map(|p| p.0),
    });
    if let Some(stamp) = stamp {
        doc["generated_at"] = json!(stamp);
    }
    serde_json::to_string_pretty(&doc).expect("report serializes")
}

// ---- growth table ----

/// One compounded cell: (year, rate in percent, value).
pub type GrowthCell = (u32, f64, f64);

pub fn growth_table_text(principal: f64, rates: &[f64], years: u32, cells: &[GrowthCell]) -> String {
    let mut out = format!("Growth of {} compounded annually\n\n", fmt_money(principal));
    out.push_str(&format!("{:>4}", "YEAR"));
    for rate in rates {
        out.push_str(&format!("{:>10}", format!("{}%", fmt_num1(*rate))));
    }
    out.push('\n');
    for year in 1..=years {
        out.push_str(&format!("{year:>4}"));
        for (_, _, value) in cells.iter().filter(|(y, _, _)| *y == year) {
            out.push_str(&format!("{:>10}", fmt_money(*value)));
        }
        out.push('\n');
    }
    out
}

pub fn growth_table_csv(cells: &[GrowthCell]) -> String {
    csv_string(|w| {
        w.write_record(["year", "rate_pct", "value"])?;
        for (year, rate, value) in cells {
            w.write_record([year.to_string(), rate.to_string(), value.to_string()])?;
        }
        Ok(())
    })
}

pub fn growth_table_json(
    principal: f64,
    rates: &[f64],
    years: u32,
    cells: &[GrowthCell],
    stamp: Option<&str>,
) -> String {
    let cell_values: Vec<serde_json::Value> = cells
        .iter()
        .map(|(year, rate, value)| json!({ "year": year, "rate_pct": rate, "value": value }))
        .collect();
    let mut doc = json!({
        "principal": principal,
        "rates_pct": rates,
        "years": years,
        "cells": cell_values,
    });
    if let Some(stamp) = stamp {
        doc["generated_at"] = json!(stamp);
    }
    serde_json::to_string_pretty(&doc).expect("report serializes")
}
