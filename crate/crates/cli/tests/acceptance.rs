//! Release acceptance suite. Each test checks one criterion end to end and
//! prints a single PASS or FAIL line; run with `--nocapture` to see them.
//! Tolerances live in the constants below.

use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;

use chrono::NaiveDate;
use graham_core::{
    annualized_return, classify_market_cap, compound_value, extrapolate_eps, fit_eps_trend,
    graham_intrinsic_value, graham_multiplier, load_universe, load_universe_from_reader,
    min_analysts_for_tier, screen_tier, snapshot_valuation, summarize, universe_to_json,
    CurrencyCode, EpsPoint, FileFormat, GrahamConstants, GroupBy, MarketCapTier, MoneyPerShare,
    Percent, StockSnapshot, SummaryRow, Universe,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Money anchors from published worked examples.
const MONEY_TOL: f64 = 0.005;
/// Compounded-value anchors quoted to the cent.
const COMPOUND_TOL: f64 = 0.01;
/// One anchor was published with a truncation error of its own.
const COMPOUND_TOL_WIDE: f64 = 0.02;
/// Relative tolerance for fits, with a unit floor for near-zero values.
const FIT_REL_TOL: f64 = 1e-9;
/// Weighted summary rows are checked to the cent.
const SUMMARY_TOL: f64 = 0.01;
/// Random cases per property suite.
const CASES: usize = 1000;

fn criterion(number: u32, summary: &str, body: impl FnOnce()) {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(()) => println!("criterion {number} PASS: {summary}"),
        Err(cause) => {
            println!("criterion {number} FAIL: {summary}");
            resume_unwind(cause);
        }
    }
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn criterion_1_multiplier_endpoints() {
    criterion(1, "multiplier endpoints 8.5 and 12.5, exact", || {
        let constants = GrahamConstants::default();
        assert_eq!(graham_multiplier(Percent(0.0), &constants).unwrap(), 8.5);
        assert_eq!(graham_multiplier(Percent(2.0), &constants).unwrap(), 12.5);
    });
}

#[test]
fn criterion_2_intrinsic_value_anchors() {
    criterion(2, "intrinsic-value anchors, \u{b1}0.005 and integer truncation", || {
        let constants = GrahamConstants::default();
        let eps = MoneyPerShare::usd(27.12);
        let full = graham_intrinsic_value(Percent(101.0), eps, &constants).unwrap();
        assert!((full.value - 5708.76).abs() <= MONEY_TOL, "got {}", full.value);
        let halved = graham_intrinsic_value(Percent(50.5), eps, &constants).unwrap();
        assert_eq!(halved.value.trunc() as i64, 2969, "got {}", halved.value);
    });
}

#[test]
fn criterion_3_growth_table_cells() {
    criterion(3, "compound-growth anchors, \u{b1}0.01 (\u{b1}0.02 at 5%), and the rendered table", || {
        assert!((compound_value(100.0, Percent(15.0), 5).unwrap() - 201.14).abs() <= COMPOUND_TOL);
        assert!((compound_value(100.0, Percent(3.0), 5).unwrap() - 115.93).abs() <= COMPOUND_TOL);
        assert!(
            (compound_value(100.0, Percent(5.0), 5).unwrap() - 127.62).abs() <= COMPOUND_TOL_WIDE
        );

        let out = Command::new(env!("CARGO_BIN_EXE_graham"))
            .args(["--no-timestamp", "growth-table", "--rates", "3,5,15", "--years", "5"])
            .output()
            .expect("binary runs");
        assert!(out.status.success());
        let text = String::from_utf8(out.stdout).unwrap();
        for year in 1..=5 {
            assert!(
                text.lines().any(|l| l.trim_start().starts_with(&year.to_string())),
                "missing year {year} row in:\n{text}"
            );
        }
        let row5 = text
            .lines()
            .find(|l| l.trim_start().starts_with('5'))
            .expect("year 5 row");
        for cell in ["115.93", "127.63", "201.14"] {
            assert!(row5.contains(cell), "year 5 row {row5:?} lacks {cell}");
        }
    });
}

#[test]
fn criterion_4_mega_cap_ordering() {
    criterion(4, "mega-cap fixture buy list order with tie-break, threshold exclusions", || {
        let report = load_universe(&fixture("mega_week11.json")).unwrap();
        assert!(report.rejections.is_empty());
        let constants = GrahamConstants::default();
        let result = screen_tier(&report.universe, MarketCapTier::Mega, &constants, 10);
        let buys: Vec<&str> = result.buys.iter().map(|r| r.ticker.as_str()).collect();
        assert_eq!(buys, ["BABA", "FB", "JPM", "AMZN", "AAPL", "MSFT", "V"]);
        let sells: Vec<&str> = result.sells.iter().map(|r| r.ticker.as_str()).collect();
        for excluded in ["GOOGL", "WMT"] {
            assert!(!buys.contains(&excluded), "{excluded} must stay below the buy threshold");
            assert!(!sells.contains(&excluded), "{excluded} must not be a sell");
        }
    });
}

#[test]
fn criterion_5_fit_matches_normal_equations() {
    criterion(5, "trend fit matches the normal-equations oracle, 1e-9 relative, 1000 series", || {
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        for case in 0..CASES {
            let len = rng.gen_range(2usize..=10);
            let mut year = rng.gen_range(1990..=2015);
            let mut points: Vec<(i32, MoneyPerShare)> = Vec::with_capacity(len);
            for _ in 0..len {
                points.push((year, MoneyPerShare::usd(rng.gen_range(-10.0..=50.0))));
                year += rng.gen_range(1..=3);
            }

            let base_year = points[0].0;
            let n = len as f64;
            let mut sum_x = 0.0;
            let mut sum_y = 0.0;
            let mut sum_xx = 0.0;
            let mut sum_xy = 0.0;
            for (py, eps) in &points {
                let x = (py - base_year) as f64;
                sum_x += x;
                sum_y += eps.value;
                sum_xx += x * x;
                sum_xy += x * eps.value;
            }
            let oracle_slope = (n * sum_xy - sum_x * sum_y) / (n * sum_xx - sum_x * sum_x);
            let oracle_intercept = (sum_y - oracle_slope * sum_x) / n;

            let fit = fit_eps_trend(&points).unwrap();
            assert!(
                rel_close(fit.slope, oracle_slope, FIT_REL_TOL),
                "case {case}: slope {} vs {oracle_slope}",
                fit.slope
            );
            assert!(
                rel_close(fit.intercept, oracle_intercept, FIT_REL_TOL),
                "case {case}: intercept {} vs {oracle_intercept}",
                fit.intercept
            );
            let target = points[len - 1].0 + rng.gen_range(1..=7);
            let oracle_value = oracle_intercept + oracle_slope * (target - base_year) as f64;
            let fitted = extrapolate_eps(&fit, target).value;
            assert!(
                rel_close(fitted, oracle_value, FIT_REL_TOL),
                "case {case}: extrapolation {fitted} vs {oracle_value} at {target}"
            );
        }
    });
}

// ---- random inputs for criterion 6 ----

fn snapshot_from_rng(rng: &mut ChaCha8Rng, index: usize) -> StockSnapshot {
    let currency = CurrencyCode::USD;
    let base: f64 = rng.gen_range(-5.0..20.0);
    let step: f64 = rng.gen_range(-2.0..4.0);
    let eps_history: Vec<EpsPoint> = (0..rng.gen_range(0usize..6))
        .map(|i| EpsPoint {
            year: 2014 + i as i32,
            eps: MoneyPerShare::new(base + step * i as f64, currency),
        })
        .collect();
    let sectors = ["Technology", "Healthcare", "Energy", "Utilities"];
    let industries = ["Software", "Biotechnology", "Oil & Gas E&P", "Semiconductors"];
    StockSnapshot {
        ticker: format!("S{index:03}"),
        name: format!("Stock {index}"),
        sector: sectors[rng.gen_range(0..sectors.len())].to_string(),
        industry: industries[rng.gen_range(0..industries.len())].to_string(),
        currency,
        as_of: NaiveDate::from_ymd_opt(2020, 3, 15).unwrap(),
        price: MoneyPerShare::new(rng.gen_range(1.0..2000.0), currency),
        market_cap_usd: 10f64.powf(rng.gen_range(7.0..12.5)),
        analyst_count: rng.gen_range(0..60),
        growth_5y_est: Percent(rng.gen_range(-30.0..150.0)),
        past_growth_5y: Percent(rng.gen_range(-50.0..150.0)),
        eps_history,
        eps_fy0_est: if rng.gen_bool(0.85) {
            Some(MoneyPerShare::new(base + step * 5.0 + rng.gen_range(-1.0..1.0), currency))
        } else {
            None
        },
        eps_fy1_est: if rng.gen_bool(0.85) {
            Some(MoneyPerShare::new(base + step * 6.0 + rng.gen_range(-1.0..1.0), currency))
        } else {
            None
        },
        current_ratio: rng.gen_range(0.0..10.0),
    }
}

fn universe_from_rng(rng: &mut ChaCha8Rng, size: usize) -> Universe {
    let mut universe = Universe::new(NaiveDate::from_ymd_opt(2020, 3, 15).unwrap());
    for i in 0..size {
        universe.insert(snapshot_from_rng(rng, i)).unwrap();
    }
    universe
}

type Side = Vec<(String, f64)>;

/// Flat restatement of the screen definition, kept deliberately naive.
fn brute_force_sides(
    universe: &Universe,
    tier: MarketCapTier,
    constants: &GrahamConstants,
) -> (Side, Side) {
    let mut buys = Vec::new();
    let mut sells = Vec::new();
    for stock in universe.stocks() {
        if classify_market_cap(stock.market_cap_usd) != Ok(tier) {
            continue;
        }
        if stock.analyst_count < min_analysts_for_tier(tier) {
            continue;
        }
        let Ok(report) = snapshot_valuation(stock, constants) else { continue };
        let Some(ret) = report.implied_return_5y_annualized else { continue };
        if ret.0 >= constants.buy_growth_threshold.0 && stock.past_growth_5y.0 > 0.0 {
            buys.push((stock.ticker.clone(), ret.0));
        } else if ret.0 < 0.0 {
            sells.push((stock.ticker.clone(), ret.0));
        }
    }
    buys.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    sells.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    (buys, sells)
}

fn multiplier_affinity_cases(rng: &mut ChaCha8Rng, constants: &GrahamConstants) {
    let m = |g: f64| graham_multiplier(Percent(g), constants).unwrap();
    for _ in 0..CASES {
        let a = rng.gen_range(-50.0..300.0);
        let b = rng.gen_range(-50.0..300.0);
        let residual = m(a + b) - m(a) - m(b) + m(0.0);
        let scale = m(a + b).abs().max(m(a).abs()).max(m(b).abs()).max(1.0);
        assert!(residual.abs() <= FIT_REL_TOL * scale, "affinity broke at a={a} b={b}");
    }
}

fn intrinsic_value_linearity_cases(rng: &mut ChaCha8Rng, constants: &GrahamConstants) {
    for _ in 0..CASES {
        let g = rng.gen_range(-50.0..300.0);
        let e1 = rng.gen_range(0.01..100.0);
        let e2 = rng.gen_range(0.01..100.0);
        let k = rng.gen_range(0.1..10.0);
        let iv = |e: f64| graham_intrinsic_value(Percent(g), MoneyPerShare::usd(e), constants)
            .unwrap()
            .value;
        assert!(rel_close(iv(k * e1), k * iv(e1), FIT_REL_TOL), "scaling broke at g={g} e={e1}");
        assert!(
            rel_close(iv(e1 + e2), iv(e1) + iv(e2), FIT_REL_TOL),
            "additivity broke at g={g} e1={e1} e2={e2}"
        );

        let g_lo = rng.gen_range(-50.0..300.0);
        let g_hi = g_lo + rng.gen_range(0.0..100.0);
        let lo = graham_intrinsic_value(Percent(g_lo), MoneyPerShare::usd(e1), constants)
            .unwrap()
            .value;
        let hi = graham_intrinsic_value(Percent(g_hi), MoneyPerShare::usd(e1), constants)
            .unwrap()
            .value;
        assert!(hi >= lo, "monotonicity broke: iv({g_hi})={hi} < iv({g_lo})={lo} at eps {e1}");
    }
}

fn compounding_cases(rng: &mut ChaCha8Rng) {
    for _ in 0..CASES {
        let principal = rng.gen_range(1.0..10_000.0);
        let rate = Percent(rng.gen_range(-50.0..200.0));
        let y1 = rng.gen_range(1u32..15);
        let y2 = rng.gen_range(1u32..15);
        let joined = compound_value(principal, rate, y1 + y2).unwrap();
        let staged =
            compound_value(compound_value(principal, rate, y1).unwrap(), rate, y2).unwrap();
        assert!(rel_close(joined, staged, FIT_REL_TOL), "semigroup broke at rate {}", rate.0);

        let end = compound_value(principal, rate, y1).unwrap();
        let back = annualized_return(principal, end, y1).unwrap();
        assert!((back.0 - rate.0).abs() <= 1e-9, "round trip broke: {} vs {}", back.0, rate.0);
    }
}

fn tier_cases(rng: &mut ChaCha8Rng) {
    let bounds = [
        (MarketCapTier::Nano, 0.0, 50e6),
        (MarketCapTier::Micro, 50e6, 300e6),
        (MarketCapTier::Small, 300e6, 2e9),
        (MarketCapTier::Mid, 2e9, 10e9),
        (MarketCapTier::Big, 10e9, 300e9),
        (MarketCapTier::Mega, 300e9, f64::INFINITY),
    ];
    for _ in 0..CASES {
        let cap = rng.gen_range(0.0..1e13);
        let tier = classify_market_cap(cap).unwrap();
        let matching = bounds.iter().filter(|(t, lo, hi)| *t == tier && *lo <= cap && cap < *hi);
        assert_eq!(matching.count(), 1, "cap {cap} landed outside its tier bounds");

        let other = rng.gen_range(0.0..1e13);
        let (small, large) = if cap <= other { (cap, other) } else { (other, cap) };
        assert!(
            classify_market_cap(small).unwrap() <= classify_market_cap(large).unwrap(),
            "classification not monotone between {small} and {large}"
        );
    }
    for (_, boundary, _) in &bounds[1..] {
        let below = classify_market_cap(boundary.next_down()).unwrap();
        let at = classify_market_cap(*boundary).unwrap();
        let above = classify_market_cap(boundary.next_up()).unwrap();
        assert!(below < at, "boundary {boundary} is not lower-inclusive");
        assert_eq!(at, above, "boundary {boundary} splits its own tier");
    }
}

fn screener_cases(rng: &mut ChaCha8Rng, constants: &GrahamConstants) {
    for case in 0..CASES {
        let size = rng.gen_range(0usize..=200);
        let universe = universe_from_rng(rng, size);
        let tier = MarketCapTier::DESCENDING[rng.gen_range(0..MarketCapTier::DESCENDING.len())];
        let (buys, sells) = brute_force_sides(&universe, tier, constants);

        let full = screen_tier(&universe, tier, constants, usize::MAX);
        let got_buys: Vec<(String, f64)> =
            full.buys.iter().map(|r| (r.ticker.clone(), r.ret_5y_annualized.0)).collect();
        let got_sells: Vec<(String, f64)> =
            full.sells.iter().map(|r| (r.ticker.clone(), r.ret_5y_annualized.0)).collect();
        assert_eq!(got_buys, buys, "case {case}: buy side diverged");
        assert_eq!(got_sells, sells, "case {case}: sell side diverged");
        assert!(
            !full.buys.iter().any(|b| full.sells.iter().any(|s| s.ticker == b.ticker)),
            "case {case}: a ticker sits on both sides"
        );

        let top = rng.gen_range(1usize..=5);
        let cut = screen_tier(&universe, tier, constants, top);
        let cut_buys: Vec<(String, f64)> =
            cut.buys.iter().map(|r| (r.ticker.clone(), r.ret_5y_annualized.0)).collect();
        let take = top.min(buys.len());
        assert_eq!(cut_buys, buys[..take], "case {case}: truncation is not a prefix");
    }
}

fn aggregation_cases(rng: &mut ChaCha8Rng, constants: &GrahamConstants) {
    for case in 0..CASES {
        let size = rng.gen_range(0usize..=60);
        let mut universe = universe_from_rng(rng, size);

        // bounding: every weighted average sits inside its contributors' range
        let rows = summarize(&universe, GroupBy::Sector, constants).unwrap();
        for row in &rows {
            let contributions: Vec<(f64, f64)> = universe
                .stocks()
                .filter(|s| s.sector == row.group_name)
                .filter(|s| s.analyst_count >= constants.summary_min_analysts)
                .filter_map(|s| {
                    let report = snapshot_valuation(s, constants).ok()?;
                    let ret = report.implied_return_5y_annualized?;
                    Some((ret.0, s.past_growth_5y.0))
                })
                .collect();
            assert_eq!(contributions.len(), row.count, "case {case}: contributor count");
            let check_between = |value: f64, pick: fn(&(f64, f64)) -> f64| {
                let lo = contributions.iter().map(pick).fold(f64::INFINITY, f64::min);
                let hi = contributions.iter().map(pick).fold(f64::NEG_INFINITY, f64::max);
                let slack = FIT_REL_TOL * lo.abs().max(hi.abs()).max(1.0);
                assert!(
                    value >= lo - slack && value <= hi + slack,
                    "case {case}: {value} outside [{lo}, {hi}] for {}",
                    row.group_name
                );
            };
            check_between(row.weighted_5y_est, |c| c.0);
            check_between(row.weighted_past_5y, |c| c.1);
        }

        // equal caps reduce to the plain mean
        let snapshots: Vec<StockSnapshot> = universe
            .stocks()
            .map(|s| StockSnapshot { market_cap_usd: 8e9, ..s.clone() })
            .collect();
        let mut flat = Universe::new(universe.as_of);
        for snapshot in snapshots {
            flat.insert(snapshot).unwrap();
        }
        for row in summarize(&flat, GroupBy::Sector, constants).unwrap() {
            let rets: Vec<f64> = flat
                .stocks()
                .filter(|s| s.sector == row.group_name)
                .filter(|s| s.analyst_count >= constants.summary_min_analysts)
                .filter_map(|s| {
                    snapshot_valuation(s, constants).ok()?.implied_return_5y_annualized
                })
                .map(|p| p.0)
                .collect();
            let mean = rets.iter().sum::<f64>() / rets.len() as f64;
            assert!(
                rel_close(row.weighted_5y_est, mean, FIT_REL_TOL),
                "case {case}: equal caps should give the plain mean"
            );
        }

        // doubling every cap changes nothing
        let before = summarize(&universe, GroupBy::Industry, constants).unwrap();
        let doubled: Vec<StockSnapshot> = universe
            .stocks()
            .map(|s| StockSnapshot { market_cap_usd: s.market_cap_usd * 2.0, ..s.clone() })
            .collect();
        universe = Universe::new(universe.as_of);
        for snapshot in doubled {
            universe.insert(snapshot).unwrap();
        }
        let after = summarize(&universe, GroupBy::Industry, constants).unwrap();
        assert_eq!(before, after, "case {case}: cap scaling moved a summary");
    }
}

#[test]
fn criterion_6_property_suites() {
    criterion(6, "property suites, 1000 random cases each, zero counterexamples", || {
        let constants = GrahamConstants::default();
        multiplier_affinity_cases(&mut ChaCha8Rng::seed_from_u64(61), &constants);
        intrinsic_value_linearity_cases(&mut ChaCha8Rng::seed_from_u64(62), &constants);
        compounding_cases(&mut ChaCha8Rng::seed_from_u64(63));
        tier_cases(&mut ChaCha8Rng::seed_from_u64(64));
        screener_cases(&mut ChaCha8Rng::seed_from_u64(65), &constants);
        aggregation_cases(&mut ChaCha8Rng::seed_from_u64(66), &constants);
    });
}

#[test]
fn criterion_7_summary_fixture_oracle() {
    criterion(7, "12-stock summary fixture matches the hand oracle, \u{b1}0.01", || {
        let report = load_universe(&fixture("summary12.json")).unwrap();
        assert!(report.rejections.is_empty());
        let universe = report.universe;
        let constants = GrahamConstants::default();

        let check = |rows: &[SummaryRow], expected: &[(&str, f64, f64, usize)]| {
            assert_eq!(rows.len(), expected.len());
            for (row, (name, w5y, wp5, count)) in rows.iter().zip(expected) {
                assert_eq!(row.group_name, *name);
                assert_eq!(row.count, *count, "{name} count");
                assert!(
                    (row.weighted_5y_est - w5y).abs() <= SUMMARY_TOL,
                    "{name} 5Y: {} vs {w5y}",
                    row.weighted_5y_est
                );
                assert!(
                    (row.weighted_past_5y - wp5).abs() <= SUMMARY_TOL,
                    "{name} past: {} vs {wp5}",
                    row.weighted_past_5y
                );
            }
        };

        check(
            &summarize(&universe, GroupBy::Sector, &constants).unwrap(),
            &[
                ("Technology", 17.0, 16.0, 4),
                ("Healthcare", 9.5, 11.5, 3),
                ("Energy", -2.0, -15.0, 2),
            ],
        );
        check(
            &summarize(&universe, GroupBy::Industry, &constants).unwrap(),
            &[
                ("Biotechnology", 23.0, 22.0, 2),
                ("Oil & Gas E&P", -2.0, -15.0, 2),
                ("Semiconductors", 35.0, 10.0, 2),
                ("Software", 12.5, 17.5, 2),
                ("Pharmaceuticals", 5.0, 8.0, 1),
            ],
        );
        check(
            &summarize(&universe, GroupBy::All, &constants).unwrap(),
            &[("All Sectors", 12.75, 11.0, 9)],
        );
    });
}

#[test]
fn criterion_8_determinism_and_round_trip() {
    criterion(8, "untimestamped JSON screens are byte-identical; universes round-trip", || {
        let input = fixture("mega_week11.json");
        let run = || {
            let out = Command::new(env!("CARGO_BIN_EXE_graham"))
                .args([
                    "--input",
                    input.to_str().unwrap(),
                    "--no-timestamp",
                    "screen",
                    "--format",
                    "json",
                ])
                .output()
                .expect("binary runs");
            assert!(out.status.success());
            out.stdout
        };
        assert_eq!(run(), run(), "two runs differ");

        for name in ["mega_week11.json", "amzn_retro.json", "summary12.json"] {
            let original = load_universe(&fixture(name)).unwrap().universe;
            let json = universe_to_json(&original);
            let reloaded =
                load_universe_from_reader(json.as_bytes(), FileFormat::Json).unwrap();
            assert!(reloaded.rejections.is_empty(), "{name} reload rejected records");
            assert_eq!(reloaded.universe, original, "{name} did not round-trip");
        }
    });
}
