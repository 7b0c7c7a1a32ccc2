//! Command line entry point: loads a snapshot file and renders valuation,
//! screen, summary, and growth tables as text, CSV, or JSON.

mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use graham_core::{
    compound_value, load_universe, screen_tier_with_diagnostics, snapshot_valuation, summarize,
    week_label, GrahamConstants, GroupBy, MarketCapTier, Percent, ScreenResult, SummaryRow,
    Universe, ValuationError,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Csv,
    Json,
}

#[derive(Parser)]
#[command(name = "graham", version, about = "Growth-stock screens, valuations, and market summaries")]
struct Cli {
    /// Snapshot file to load (.json or .csv)
    #[arg(long, global = true, env = "GRAHAM_INPUT", value_name = "PATH")]
    input: Option<PathBuf>,

    /// Output format
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: OutputFormat,

    /// Leave the generation timestamp off the output
    #[arg(long, global = true)]
    no_timestamp: bool,

    /// Fair price-to-earnings multiple at zero growth
    #[arg(long, global = true, default_value_t = 8.5, value_name = "PE")]
    base_pe: f64,

    /// Multiplier applied to the growth percentage
    #[arg(long, global = true, default_value_t = 2.0, value_name = "K")]
    growth_mult: f64,

    /// Minimum implied 5-year annualized return for a buy, in percent
    #[arg(long, global = true, default_value_t = 15.0, value_name = "PCT")]
    buy_threshold: f64,

    /// Forecast horizon in years
    #[arg(long, global = true, default_value_t = 5, value_name = "YEARS")]
    horizon: u32,

    /// Analyst coverage a stock needs to enter summaries
    #[arg(long, global = true, default_value_t = 10, value_name = "N")]
    summary_min_analysts: u32,

    /// Week label to print instead of the one derived from the snapshot date
    #[arg(long, global = true, value_name = "LABEL")]
    week_label: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Valuation detail for one ticker
    Value { ticker: String },
    /// Buy/sell screen for a market-cap tier
    Screen {
        /// mega, big, mid, small, micro, nano, or all
        #[arg(long, default_value = "all")]
        tier: String,
        /// Rows kept on each side of the screen
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    /// Cap-weighted sector and industry growth summary
    Summary {
        /// sector, industry, or all; omit for the combined layout
        #[arg(long)]
        group: Option<String>,
        /// Industries shown in the combined layout
        #[arg(long, default_value_t = 10)]
        top_industries: usize,
    },
    /// Compound-growth table for a principal
    GrowthTable {
        /// Comma-separated annual growth rates in percent
        #[arg(long, required = true, value_delimiter = ',', value_name = "PCT,...")]
        rates: Vec<f64>,
        /// Number of years to compound
        #[arg(long, value_name = "N")]
        years: u32,
        /// Starting amount
        #[arg(long, default_value_t = 100.0)]
        principal: f64,
    },
}

/// Failures mapped to exit codes: bad usage or input is 2, loaded-but-unusable
/// data is 3.
enum Failure {
    Input(String),
    Data(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Data(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let constants = GrahamConstants {
        base_pe: cli.base_pe,
        growth_multiplier: cli.growth_mult,
        buy_growth_threshold: Percent(cli.buy_threshold),
        horizon_years: cli.horizon,
        summary_min_analysts: cli.summary_min_analysts,
    };
    constants.validate().map_err(Failure::Input)?;

    let stamp = if cli.no_timestamp {
        None
    } else {
        Some(chrono::Local::now().format("%Y-%m-%d %H:%M:%S").to_string())
    };

    // the growth table is pure math and needs no snapshot
    if let Command::GrowthTable { rates, years, principal } = &cli.command {
        return cmd_growth_table(rates, *years, *principal, cli.format, stamp.as_deref());
    }

    let path = cli.input.as_ref().ok_or_else(|| {
        Failure::Input("no input file; pass --input or set GRAHAM_INPUT".to_string())
    })?;
    let report = load_universe(path).map_err(|e| Failure::Input(e.to_string()))?;
    for rejection in &report.rejections {
        eprintln!("skipped {}: {} ({})", rejection.record, rejection.reason, rejection.detail);
    }
    let universe = report.universe;
    if universe.is_empty() {
        eprintln!("warning: no stocks loaded from {}", path.display());
    }
    let week = cli.week_label.clone().unwrap_or_else(|| week_label(universe.as_of));

    match &cli.command {
        Command::Value { ticker } => cmd_value(&universe, ticker, &constants, cli.format, stamp.as_deref()),
        Command::Screen { tier, top } => {
            cmd_screen(&universe, tier, *top, &constants, &week, cli.format, stamp.as_deref())
        }
        Command::Summary { group, top_industries } => cmd_summary(
            &universe,
            group.as_deref(),
            *top_industries,
            &constants,
            &week,
            cli.format,
            stamp.as_deref(),
        ),
        Command::GrowthTable { .. } => unreachable!("handled before loading"),
    }
}

/// Writes to stdout, exiting quietly when the reading end has gone away
/// (for example `graham ... | head`).
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if out.write_all(text.as_bytes()).and_then(|()| out.flush()).is_err() {
        std::process::exit(0);
    }
}

fn emitln(text: &str) {
    emit(text);
    emit("\n");
}

fn print_text(body: String, stamp: Option<&str>) {
    emit(&body);
    if let Some(stamp) = stamp {
        emitln(&format!("Generated {stamp}"));
    }
}

fn cmd_value(
    universe: &Universe,
    ticker: &str,
    constants: &GrahamConstants,
    format: OutputFormat,
    stamp: Option<&str>,
) -> Result<(), Failure> {
    let snapshot = universe
        .get(ticker)
        .ok_or_else(|| Failure::Input(format!("ticker {ticker:?} is not in the input")))?;
    let report = snapshot_valuation(snapshot, constants).map_err(|e| match e {
        ValuationError::Unavailable => Failure::Data(format!("{ticker}: {e}")),
        other => Failure::Input(format!("{ticker}: {other}")),
    })?;
    match format {
        OutputFormat::Text => print_text(
            render::value_text(&report, snapshot.price, snapshot.growth_5y_est, snapshot.as_of),
            stamp,
        ),
        OutputFormat::Csv => emit(&render::value_csv(&report, snapshot.price)),
        OutputFormat::Json => {
            emitln(&render::value_json(&report, snapshot.price, snapshot.as_of, stamp))
        }
    }
    Ok(())
}

fn cmd_screen(
    universe: &Universe,
    tier_arg: &str,
    top: usize,
    constants: &GrahamConstants,
    week: &str,
    format: OutputFormat,
    stamp: Option<&str>,
) -> Result<(), Failure> {
    if top == 0 {
        return Err(Failure::Input("--top must be at least 1".to_string()));
    }
    let tiers: Vec<MarketCapTier> = if tier_arg == "all" {
        MarketCapTier::DESCENDING.to_vec()
    } else {
        vec![tier_arg.parse().map_err(Failure::Input)?]
    };

    let mut results: Vec<ScreenResult> = Vec::new();
    for tier in &tiers {
        let (mut result, diagnostics) =
            screen_tier_with_diagnostics(universe, *tier, constants, top);
        result.week_label = week.to_string();
        if diagnostics.below_analyst_floor > 0 || diagnostics.valuation_unavailable > 0 {
            eprintln!(
                "{}: {} in tier, {} below the analyst floor, {} without a usable valuation",
                tier.name(),
                diagnostics.in_tier,
                diagnostics.below_analyst_floor,
                diagnostics.valuation_unavailable
            );
        }
        results.push(result);
    }

    match format {
        OutputFormat::Text => {
            // in "all" mode empty tiers are noise; a named tier prints either way
            let printable: Vec<&ScreenResult> = if tiers.len() > 1 {
                results.iter().filter(|r| !r.buys.is_empty() || !r.sells.is_empty()).collect()
            } else {
                results.iter().collect()
            };
            if printable.is_empty() {
                emitln("no candidates in any tier");
                if let Some(stamp) = stamp {
                    emitln(&format!("Generated {stamp}"));
                }
                return Ok(());
            }
            let mut body = String::new();
            for (i, result) in printable.iter().enumerate() {
                if i > 0 {
                    body.push('\n');
                }
                body.push_str(&render::screen_text(result));
            }
            print_text(body, stamp);
        }
        OutputFormat::Csv => emit(&render::screen_csv(&results)),
        OutputFormat::Json => emitln(&render::screen_json(&results, universe.as_of, stamp)),
    }
    Ok(())
}

fn summarize_or_fail(
    universe: &Universe,
    group_by: GroupBy,
    constants: &GrahamConstants,
) -> Result<Vec<SummaryRow>, Failure> {
    summarize(universe, group_by, constants).map_err(|e| Failure::Data(e.to_string()))
}

fn cmd_summary(
    universe: &Universe,
    group: Option<&str>,
    top_industries: usize,
    constants: &GrahamConstants,
    week: &str,
    format: OutputFormat,
    stamp: Option<&str>,
) -> Result<(), Failure> {
    let single = match group {
        None => None,
        Some("sector") => Some((GroupBy::Sector, "SECTOR")),
        Some("industry") => Some((GroupBy::Industry, "INDUSTRY")),
        Some("all") => Some((GroupBy::All, "TOTAL")),
        Some(other) => {
            return Err(Failure::Input(format!(
                "unknown group {other:?}; expected sector, industry, or all"
            )))
        }
    };

    match single {
        Some((group_by, header)) => {
            let rows = summarize_or_fail(universe, group_by, constants)?;
            let name = match group_by {
                GroupBy::Sector => "sector",
                GroupBy::Industry => "industry",
                GroupBy::All => "all",
            };
            match format {
                OutputFormat::Text => print_text(
                    render::summary_text_single(week, header, &rows, constants.summary_min_analysts),
                    stamp,
                ),
                OutputFormat::Csv => emit(&render::summary_csv(&[(name, &rows)])),
                OutputFormat::Json => {
                    emitln(&render::summary_json(&[(name, &rows)], universe.as_of, stamp))
                }
            }
        }
        None => {
            let sectors = summarize_or_fail(universe, GroupBy::Sector, constants)?;
            let mut industries = summarize_or_fail(universe, GroupBy::Industry, constants)?;
            let all = summarize_or_fail(universe, GroupBy::All, constants)?;
            match format {
                OutputFormat::Text => {
                    industries.truncate(top_industries);
                    print_text(
                        render::summary_text_combined(
                            week,
                            &sectors,
                            &industries,
                            &all,
                            constants.summary_min_analysts,
                        ),
                        stamp,
                    );
                }
                OutputFormat::Csv => emit(&render::summary_csv(&[
                    ("sector", &sectors),
                    ("industry", &industries),
                    ("all", &all),
                ])),
                OutputFormat::Json => emitln(&render::summary_json(
                    &[("sector", &sectors), ("industry", &industries), ("all", &all)],
                    universe.as_of,
                    stamp,
                )),
            }
        }
    }
    Ok(())
}

fn cmd_growth_table(
    rates: &[f64],
    years: u32,
    principal: f64,
    format: OutputFormat,
    stamp: Option<&str>,
) -> Result<(), Failure> {
    if years == 0 {
        return Err(Failure::Input("--years must be at least 1".to_string()));
    }
    let mut cells: Vec<render::GrowthCell> = Vec::new();
    for year in 1..=years {
        for &rate in rates {
            let value = compound_value(principal, Percent(rate), year)
                .map_err(|e| Failure::Input(e.to_string()))?;
            cells.push((year, rate, value));
        }
    }
    match format {
        OutputFormat::Text => {
            print_text(render::growth_table_text(principal, rates, years, &cells), stamp)
        }
        OutputFormat::Csv => emit(&render::growth_table_csv(&cells)),
        OutputFormat::Json => {
            emitln(&render::growth_table_json(principal, rates, years, &cells, stamp))
        }
    }
    Ok(())
}
