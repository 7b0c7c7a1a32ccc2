//! Market-cap tiers and the analyst-coverage floor attached to each tier.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

/// Size bucket for a stock. Declared smallest-first so the derived order
/// agrees with company size: `Nano < Micro < ... < Mega`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MarketCapTier {
    Nano,
    Micro,
    Small,
    Mid,
    Big,
    Mega,
}

impl MarketCapTier {
    /// Every tier, largest first (the order reports are printed in).
    pub const DESCENDING: [MarketCapTier; 6] = [
        MarketCapTier::Mega,
        MarketCapTier::Big,
        MarketCapTier::Mid,
        MarketCapTier::Small,
        MarketCapTier::Micro,
        MarketCapTier::Nano,
    ];

    /// Lowercase spelling used on the command line and in JSON.
    pub fn name(&self) -> &'static str {
        match self {
            MarketCapTier::Mega => "mega",
            MarketCapTier::Big => "big",
            MarketCapTier::Mid => "mid",
            MarketCapTier::Small => "small",
            MarketCapTier::Micro => "micro",
            MarketCapTier::Nano => "nano",
        }
    }

    /// Spelling used in report titles.
    pub fn title_word(&self) -> &'static str {
        match self {
            MarketCapTier::Mega => "MegaCap",
            MarketCapTier::Big => "BigCap",
            MarketCapTier::Mid => "MidCap",
            MarketCapTier::Small => "SmallCap",
            MarketCapTier::Micro => "MicroCap",
            MarketCapTier::Nano => "NanoCap",
        }
    }

    fn index_desc(self) -> usize {
        match self {
            MarketCapTier::Mega => 0,
            MarketCapTier::Big => 1,
            MarketCapTier::Mid => 2,
            MarketCapTier::Small => 3,
            MarketCapTier::Micro => 4,
            MarketCapTier::Nano => 5,
        }
    }
}

impl fmt::Display for MarketCapTier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MarketCapTier {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MarketCapTier::DESCENDING
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown tier {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum ClassificationError {
    #[error("market cap must be a finite non-negative dollar amount, got {0}")]
    InvalidCap(f64),
}

/// Tier boundaries and analyst floors. Lower bounds are inclusive; anything
/// under `micro_min` is Nano. Defaults are the conventional cuts.
#[derive(Debug, Clone, PartialEq)]
pub struct TierScheme {
    pub mega_min: f64,
    pub big_min: f64,
    pub mid_min: f64,
    pub small_min: f64,
    pub micro_min: f64,
    /// Analyst-coverage floor per tier, aligned with [`MarketCapTier::DESCENDING`].
    pub min_analysts: [u32; 6],
}

impl Default for TierScheme {
    fn default() -> Self {
        Self {
            mega_min: 300e9,
            big_min: 10e9,
            mid_min: 2e9,
            small_min: 300e6,
            micro_min: 50e6,
            min_analysts: [25, 20, 15, 10, 5, 3],
        }
    }
}

impl TierScheme {
    pub fn classify(&self, cap_usd: f64) -> Result<MarketCapTier, ClassificationError> {
        if !cap_usd.is_finite() || cap_usd < 0.0 {
            return Err(ClassificationError::InvalidCap(cap_usd));
        }
        Ok(if cap_usd >= self.mega_min {
            MarketCapTier::Mega
        } else if cap_usd >= self.big_min {
            MarketCapTier::Big
        } else if cap_usd >= self.mid_min {
            MarketCapTier::Mid
        } else if cap_usd >= self.small_min {
            MarketCapTier::Small
        } else if cap_usd >= self.micro_min {
            MarketCapTier::Micro
        } else {
            MarketCapTier::Nano
        })
    }

    pub fn min_analysts_for(&self, tier: MarketCapTier) -> u32 {
        self.min_analysts[tier.index_desc()]
    }
}

/// Classify a market cap with the default scheme.
pub fn classify_market_cap(cap_usd: f64) -> Result<MarketCapTier, ClassificationError> {
    TierScheme::default().classify(cap_usd)
}

/// Analyst floor for a tier under the default scheme.
pub fn min_analysts_for_tier(tier: MarketCapTier) -> u32 {
    TierScheme::default().min_analysts_for(tier)
}
