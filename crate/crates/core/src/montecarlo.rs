//! Seeded sampling of the protocol, independent of every closed form.
//!
//! Sample `i` draws from its own ChaCha8 stream (`stream = i`) keyed by the
//! configured seed, so the result is a pure function of [`SimConfig`] no
//! matter how the samples are split across threads.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arrangement::{Arrangement, CutIndex, DECK_SIZE};
use crate::error::{Error, Result};
use crate::leakage::{CaseLabel, FinalPosterior, PosteriorTable, PriorSpec};
use crate::shuffle_model::{ShiftDistribution, ShuffleSpec};

/// Identifier of the generator and stream layout recorded in every result.
pub const RNG_ALGORITHM: &str = "chacha8/stream-per-sample";

const CHUNK: u64 = 1 << 14;

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    prior: PriorSpec,
    shuffle: ShuffleSpec,
    n_samples: u64,
    seed: u64,
}

impl SimConfig {
    pub fn new(prior: PriorSpec, shuffle: ShuffleSpec, n_samples: u64, seed: u64) -> Result<Self> {
        if n_samples == 0 {
            return Err(Error::NoSamples);
        }
        Ok(SimConfig {
            prior,
            shuffle,
            n_samples,
            seed,
        })
    }

    pub fn prior(&self) -> &PriorSpec {
        &self.prior
    }

    pub fn shuffle(&self) -> &ShuffleSpec {
        &self.shuffle
    }

    pub fn n_samples(&self) -> u64 {
        self.n_samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    pub n_samples: u64,
    pub seed: u64,
    pub rng_algorithm: String,
    /// `initial -> final -> count`.
    pub joint_counts: BTreeMap<Arrangement, BTreeMap<Arrangement, u64>>,
    /// Histogram of the total cut index.
    pub shift_counts: [u64; DECK_SIZE],
    pub empirical_posterior: PosteriorTable,
    pub empirical_and_rate: f64,
    /// `1 / (2 sqrt(n))`, the largest standard error of a binomial proportion.
    pub std_error_bound: f64,
}

impl SimResult {
    pub fn empirical_shift_distribution(&self) -> ShiftDistribution {
        let n = self.n_samples as f64;
        ShiftDistribution::renormalized(self.shift_counts.map(|c| c as f64 / n))
            .expect("at least one sample")
    }

    /// Number of samples that ended on `final_arrangement`.
    pub fn final_count(&self, final_arrangement: &Arrangement) -> u64 {
        self.joint_counts
            .values()
            .filter_map(|row| row.get(final_arrangement))
            .sum()
    }

    /// `1 / (2 sqrt(n_F))`: the largest standard error of an empirical
    /// posterior, which only uses the `n_F` samples that ended on `F`.
    /// `None` when no sample reached `F`.
    pub fn conditional_std_error(&self, final_arrangement: &Arrangement) -> Option<f64> {
        match self.final_count(final_arrangement) {
            0 => None,
            n => Some(0.5 / (n as f64).sqrt()),
        }
    }

    /// Largest `|empirical - exact|` in units of the conditional standard
    /// error of each entry.
    pub fn max_sigma_multiple(&self, exact: &PosteriorTable) -> Option<f64> {
        let mut worst: Option<f64> = None;
        for (initial, final_arrangement, p) in self.empirical_posterior.entries() {
            let q = exact.get(initial, final_arrangement)?;
            let se = self.conditional_std_error(final_arrangement)?;
            let z = (p - q).abs() / se;
            worst = Some(worst.map_or(z, |w| w.max(z)));
        }
        worst
    }

    pub fn count(&self, initial: &Arrangement, final_arrangement: &Arrangement) -> u64 {
        self.joint_counts
            .get(initial)
            .and_then(|row| row.get(final_arrangement))
            .copied()
            .unwrap_or(0)
    }
}

/// Counts indexed by (initial index in the prior support, total cut index).
#[derive(Clone)]
struct Tally(Vec<[u64; DECK_SIZE]>);

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        for (mine, theirs) in self.0.iter_mut().zip(other.0) {
            for (x, y) in mine.iter_mut().zip(theirs) {
                *x += y;
            }
        }
        self
    }
}

enum Sampler {
    Single([f64; DECK_SIZE]),
    Chain { stay: f64, cuts: u32 },
}

impl Sampler {
    fn new(shuffle: &ShuffleSpec) -> Self {
        match shuffle {
            ShuffleSpec::Single(bias) => Sampler::Single(*bias.distribution().probs()),
            ShuffleSpec::Chain(chain) => Sampler::Chain {
                stay: chain.a(),
                cuts: chain.cuts(),
            },
        }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> usize {
        match self {
            Sampler::Single(probs) => pick(probs.iter().copied(), rng.random::<f64>()),
            Sampler::Chain { stay, cuts } => {
                let mut state = 0;
                for _ in 0..*cuts {
                    if !rng.random_bool(*stay) {
                        state = (state + rng.random_range(1..DECK_SIZE)) % DECK_SIZE;
                    }
                }
                state
            }
        }
    }
}

/// Inverse-CDF draw; rounding slack falls on the last positive weight.
fn pick(weights: impl Iterator<Item = f64>, u: f64) -> usize {
    let mut acc = 0.0;
    let mut last = 0;
    for (i, w) in weights.enumerate() {
        if w <= 0.0 {
            continue;
        }
        acc += w;
        last = i;
        if u < acc {
            return i;
        }
    }
    last
}

pub fn simulate(config: &SimConfig) -> SimResult {
    let support: Vec<(Arrangement, f64)> = config.prior.support().map(|(i, w)| (*i, *w)).collect();
    let sampler = Sampler::new(&config.shuffle);
    let base = ChaCha8Rng::seed_from_u64(config.seed);
    let n = config.n_samples;
    let chunks = n.div_ceil(CHUNK);

    let tally = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut tally = Tally(vec![[0; DECK_SIZE]; support.len()]);
            for i in chunk * CHUNK..((chunk + 1) * CHUNK).min(n) {
                let mut rng = base.clone();
                rng.set_stream(i);
                let initial = pick(support.iter().map(|(_, w)| *w), rng.random::<f64>());
                let shift = sampler.draw(&mut rng);
                tally.0[initial][shift] += 1;
            }
            tally
        })
        .reduce(|| Tally(vec![[0; DECK_SIZE]; support.len()]), Tally::merge);

    let mut joint_counts: BTreeMap<Arrangement, BTreeMap<Arrangement, u64>> = BTreeMap::new();
    let mut shift_counts = [0; DECK_SIZE];
    let mut and_ones = 0u64;
    for ((initial, _), row) in support.iter().zip(&tally.0) {
        for (k, count) in CutIndex::all().zip(row) {
            if *count == 0 {
                continue;
            }
            let final_arrangement = initial.rotate(k);
            *joint_counts
                .entry(*initial)
                .or_default()
                .entry(final_arrangement)
                .or_default() += count;
            shift_counts[k.get()] += count;
            if final_arrangement.evaluate_and().value() == 1 {
                and_ones += count;
            }
        }
    }

    SimResult {
        n_samples: n,
        seed: config.seed,
        rng_algorithm: RNG_ALGORITHM.to_string(),
        empirical_posterior: empirical_posterior(&joint_counts, config.shuffle.s_star()),
        joint_counts,
        shift_counts,
        empirical_and_rate: and_ones as f64 / n as f64,
        std_error_bound: 0.5 / (n as f64).sqrt(),
    }
}

fn empirical_posterior(
    joint_counts: &BTreeMap<Arrangement, BTreeMap<Arrangement, u64>>,
    s_star: CutIndex,
) -> PosteriorTable {
    let mut by_final: BTreeMap<Arrangement, BTreeMap<Arrangement, u64>> = BTreeMap::new();
    for (initial, row) in joint_counts {
        for (final_arrangement, count) in row {
            by_final
                .entry(*final_arrangement)
                .or_default()
                .insert(*initial, *count);
        }
    }
    let initials: Vec<Arrangement> = joint_counts.keys().copied().collect();
    let rows = by_final
        .into_iter()
        .map(|(final_arrangement, counts)| {
            let total: u64 = counts.values().sum();
            FinalPosterior {
                final_arrangement,
                case: CaseLabel::of_final(&final_arrangement, s_star),
                posteriors: initials
                    .iter()
                    .map(|i| {
                        (
                            *i,
                            counts.get(i).copied().unwrap_or(0) as f64 / total as f64,
                        )
                    })
                    .collect(),
            }
        })
        .collect();
    PosteriorTable::from_rows(rows).expect("empirical frequencies form distributions")
}
