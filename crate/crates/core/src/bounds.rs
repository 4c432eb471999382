//! How many repeated biased cuts keep `|P(c_I = I | c_F = F) - 1/2| <= C`.
//!
//! With `x = (a - b)^T` the worst posterior deviation is
//! `20|x| / (16 + 24x)`. Solving for `T` gives two sufficient conditions:
//!
//! 1. `T` even or `a > b`, and `T >= ln(16C / (20 - 24C)) / ln|a - b|`;
//! 2. `T` odd and `a < b`, and `T >= ln(16C / (20 + 24C)) / ln|a - b|`.
//!
//! Both are tight: rounding the threshold up to the required parity gives
//! the smallest admissible `T`, which [`minimal_shuffles`] confirms by a
//! direct scan.

use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::leakage::case1_posteriors;
use crate::scalar::Scalar;
use crate::shuffle_model::{drift, CutChain};

/// Upper limit on the number of cuts tried by [`minimal_shuffles`].
pub const SCAN_CAP: u32 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    #[default]
    Any,
    Even,
    Odd,
}

impl Parity {
    pub fn admits(self, cuts: u32) -> bool {
        match self {
            Parity::Any => true,
            Parity::Even => cuts.is_multiple_of(2),
            Parity::Odd => cuts % 2 == 1,
        }
    }

    /// Smallest admissible integer at or above `x` (`x >= 0`).
    fn ceil(self, x: f64) -> u32 {
        let t = x.max(0.0).ceil() as u32;
        if self.admits(t) {
            t
        } else {
            t + 1
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Any => "any",
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundQuery {
    a: f64,
    level: f64,
    parity: Parity,
}

impl BoundQuery {
    pub fn new(a: f64, level: f64, parity: Parity) -> Result<Self> {
        CutChain::new(a, 0)?;
        if !(level > 0.0 && level < 0.5) {
            return Err(Error::LevelOutOfRange(level));
        }
        Ok(BoundQuery { a, level, parity })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// The confidentiality level `C`.
    pub fn level(&self) -> f64 {
        self.level
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn with_parity(&self, parity: Parity) -> Self {
        BoundQuery { parity, ..*self }
    }
}

/// A real-valued threshold on `T`, or one of the two degenerate chains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    Value(f64),
    /// `a = b`: one cut already mixes completely.
    Any,
    /// `a = 1`: the cards never move.
    Unreachable,
}

impl Serialize for Threshold {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Threshold::Value(x) => serializer.serialize_f64(*x),
            Threshold::Any => serializer.serialize_str("any"),
            Threshold::Unreachable => serializer.serialize_str("unreachable"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticBound {
    pub cond1: Threshold,
    pub cond2: Threshold,
}

impl AnalyticBound {
    /// The threshold rounded up to the smallest `T` of the requested parity
    /// for which one of the two conditions applies.
    pub fn integer_bound(&self, query: &BoundQuery) -> Option<u32> {
        let (Threshold::Value(t1), Threshold::Value(t2)) = (self.cond1, self.cond2) else {
            return match self.cond1 {
                Threshold::Any => Some(0),
                _ => None,
            };
        };
        let mixing_up = drift(query.a) > 0.0;
        Some(match (query.parity, mixing_up) {
            (Parity::Even, _) => Parity::Even.ceil(t1),
            (Parity::Odd, true) => Parity::Odd.ceil(t1),
            (Parity::Odd, false) => Parity::Odd.ceil(t2),
            (Parity::Any, true) => Parity::Any.ceil(t1),
            (Parity::Any, false) => Parity::Even.ceil(t1).min(Parity::Odd.ceil(t2)),
        })
    }
}

pub fn analytic_bound(query: &BoundQuery) -> AnalyticBound {
    let d = drift(query.a);
    if d == 0.0 {
        return AnalyticBound {
            cond1: Threshold::Any,
            cond2: Threshold::Any,
        };
    }
    if d == 1.0 {
        return AnalyticBound {
            cond1: Threshold::Unreachable,
            cond2: Threshold::Unreachable,
        };
    }
    // With a < b, |a - b| <= 1/4 keeps 16 - 24|a - b|^T positive for T >= 1.
    debug_assert!(d > 0.0 || 24.0 * d.abs() < 16.0);
    let c = query.level;
    let log_rate = d.abs().ln();
    AnalyticBound {
        cond1: Threshold::Value((16.0 * c / (20.0 - 24.0 * c)).ln() / log_rate),
        cond2: Threshold::Value((16.0 * c / (20.0 + 24.0 * c)).ln() / log_rate),
    }
}

/// `20|a - b|^T / (16 + 24 (a - b)^T)`.
pub fn deviation_formula(a: f64, cuts: u32) -> f64 {
    let x = drift(a).powu(cuts);
    20.0 * x.abs() / (16.0 + 24.0 * x)
}

/// Largest `|posterior - 1/2|` over the closed-form posteriors after
/// `cuts` steps. Case 2 finals contribute zero.
pub fn max_deviation_after(a: f64, cuts: u32) -> f64 {
    let epsilon = -0.8 * drift(a).powu(cuts);
    let (same, other) = case1_posteriors(&epsilon);
    (same - 0.5).abs().max((other - 0.5).abs())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimalShuffles {
    pub cuts: u32,
    pub deviation: f64,
}

/// Smallest admissible `T` whose worst-case deviation is at most `C`.
pub fn minimal_shuffles(query: &BoundQuery) -> Result<MinimalShuffles> {
    let d = drift(query.a);
    if d == 0.0 {
        return Ok(MinimalShuffles {
            cuts: 0,
            deviation: 0.0,
        });
    }
    if d == 1.0 {
        return Err(Error::Unreachable);
    }
    let start = if query.parity == Parity::Odd { 1 } else { 0 };
    let step = if query.parity == Parity::Any { 1 } else { 2 };
    let mut t = start;
    while t <= SCAN_CAP {
        let deviation = max_deviation_after(query.a, t);
        if deviation <= query.level {
            return Ok(MinimalShuffles { cuts: t, deviation });
        }
        t += step;
    }
    Err(Error::TooManyCuts {
        requested: t as u64,
        cap: SCAN_CAP as u64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MinimalT {
    Finite(u32),
    Unreachable,
}

impl Serialize for MinimalT {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            MinimalT::Finite(t) => serializer.serialize_u32(*t),
            MinimalT::Unreachable => serializer.serialize_str("unreachable"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundResult {
    pub a: f64,
    #[serde(rename = "C")]
    pub level: f64,
    pub parity: Parity,
    #[serde(rename = "analytic_T_cond1")]
    pub analytic_t_cond1: Threshold,
    #[serde(rename = "analytic_T_cond2")]
    pub analytic_t_cond2: Threshold,
    #[serde(rename = "minimal_T")]
    pub minimal_t: MinimalT,
    pub achieved_deviation: Option<f64>,
}

/// Analytic thresholds together with the scanned minimum.
pub fn solve(query: &BoundQuery) -> Result<BoundResult> {
    let analytic = analytic_bound(query);
    let (minimal_t, achieved_deviation) = match minimal_shuffles(query) {
        Ok(m) => (MinimalT::Finite(m.cuts), Some(m.deviation)),
        Err(Error::Unreachable) => (MinimalT::Unreachable, None),
        Err(e) => return Err(e),
    };
    Ok(BoundResult {
        a: query.a,
        level: query.level,
        parity: query.parity,
        analytic_t_cond1: analytic.cond1,
        analytic_t_cond2: analytic.cond2,
        minimal_t,
        achieved_deviation,
    })
}
