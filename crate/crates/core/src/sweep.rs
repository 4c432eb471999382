//! Case 1 posterior curves over a grid of ε (single cut) or `T` (repeated
//! cuts), written as CSV for plotting.

use std::io;
use std::str::FromStr;

use serde::Serialize;

use crate::arrangement::{restricted_initial_set, CutIndex};
use crate::error::{Error, Result};
use crate::format::format_sig;
use crate::leakage::{final_marginal_case1, posterior_closed_repeated, posterior_closed_single};
use crate::shuffle_model::{effective_epsilon, BiasSpec, CutChain};

/// `start:stop:step`; the stop is included when the grid lands within half
/// a step of it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl RealRange {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        let ok = [start, stop, step].iter().all(|x| x.is_finite()) && step > 0.0 && stop >= start;
        if !ok {
            return Err(Error::InvalidRange(format!("{start}:{stop}:{step}")));
        }
        Ok(RealRange { start, stop, step })
    }

    /// Grid points; the last one snaps to `stop` when it is within half a step.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 0.5).floor() as usize;
        (0..=n)
            .map(|i| {
                let x = self.start + i as f64 * self.step;
                if (x - self.stop).abs() <= self.step / 2.0 {
                    self.stop
                } else {
                    x
                }
            })
            .collect()
    }
}

impl FromStr for RealRange {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::InvalidRange(text.to_string());
        let parts: Vec<f64> = text
            .split(':')
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        match parts[..] {
            [start, stop, step] => RealRange::new(start, stop, step).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

/// `start:stop` with unit step, both ends included.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountRange {
    pub start: u32,
    pub stop: u32,
}

impl CountRange {
    pub fn new(start: u32, stop: u32) -> Result<Self> {
        if stop < start {
            return Err(Error::InvalidRange(format!("{start}:{stop}")));
        }
        Ok(CountRange { start, stop })
    }

    pub fn points(&self) -> impl Iterator<Item = u32> {
        self.start..=self.stop
    }
}

impl FromStr for CountRange {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::InvalidRange(text.to_string());
        let parts: Vec<u32> = text
            .split(':')
            .map(|p| p.trim().parse::<u32>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        match parts[..] {
            [start, stop] => CountRange::new(start, stop).map_err(|_| bad()),
            [single] => CountRange::new(single, single),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepVariable {
    Epsilon,
    #[serde(rename = "T")]
    Cuts,
}

impl SweepVariable {
    pub fn column(self) -> &'static str {
        match self {
            SweepVariable::Epsilon => "epsilon",
            SweepVariable::Cuts => "T",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    /// ε or `T`, depending on the sweep.
    pub x: f64,
    /// Posterior of `I` when `F = f(I, s*)`.
    pub posterior_same: f64,
    /// Posterior of `I` for the other Case 1 final.
    pub posterior_other: f64,
    pub case2: f64,
    pub final_marginal_case1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep {
    pub variable: SweepVariable,
    pub rows: Vec<SweepRow>,
}

fn read_case1(table: &crate::leakage::PosteriorTable, s_star: CutIndex) -> (f64, f64) {
    let [i, other] = restricted_initial_set();
    let f = i.rotate(s_star);
    (
        *table.get(&i, &f).expect("Case 1 final is reachable"),
        *table.get(&other, &f).expect("Case 1 final is reachable"),
    )
}

pub fn epsilon_sweep(range: &RealRange, s_star: CutIndex) -> Result<Sweep> {
    let rows = range
        .points()
        .into_iter()
        .map(|eps| {
            let bias = BiasSpec::new(eps, s_star)?;
            let (same, other) = read_case1(&posterior_closed_single(&bias), s_star);
            Ok(SweepRow {
                x: eps,
                posterior_same: same,
                posterior_other: other,
                case2: 0.5,
                final_marginal_case1: final_marginal_case1(&eps)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(Sweep {
        variable: SweepVariable::Epsilon,
        rows,
    })
}

pub fn chain_sweep(a: f64, cuts: &CountRange) -> Result<Sweep> {
    let rows = cuts
        .points()
        .map(|t| {
            let chain = CutChain::new(a, t)?;
            let (same, other) = read_case1(&posterior_closed_repeated(&chain), CutIndex::ZERO);
            Ok(SweepRow {
                x: t as f64,
                posterior_same: same,
                posterior_other: other,
                case2: 0.5,
                final_marginal_case1: final_marginal_case1(&effective_epsilon(&chain))?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(Sweep {
        variable: SweepVariable::Cuts,
        rows,
    })
}

impl Sweep {
    pub const COLUMNS: [&'static str; 4] = [
        "posterior_same",
        "posterior_other",
        "case2",
        "final_marginal_case1",
    ];

    pub fn write_csv<W: io::Write>(&self, writer: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        let mut header = vec![self.variable.column()];
        header.extend(Self::COLUMNS);
        out.write_record(&header)?;
        for row in &self.rows {
            let x = match self.variable {
                SweepVariable::Epsilon => format_sig(row.x),
                SweepVariable::Cuts => (row.x as u32).to_string(),
            };
            out.write_record([
                x,
                format_sig(row.posterior_same),
                format_sig(row.posterior_other),
                format_sig(row.case2),
                format_sig(row.final_marginal_case1),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}
