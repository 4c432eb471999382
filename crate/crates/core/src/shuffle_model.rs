//! Laws of the cut index: biased single cuts and repeated cuts driven by a
//! five-state Markov chain.
//!
//! A single biased cut puts probability `1/5 - ε` on a distinguished index
//! `s*` and spreads the remainder evenly over the other four. Repeating a cut
//! `T` times with "stay" probability `a` and "move" probability
//! `b = (1 - a) / 4` to each other index gives
//!
//! ```text
//! P(r(T) = 0) = 1/5 + 4/5 (a - b)^T
//! P(r(T) = i) = 1/5 - 1/5 (a - b)^T,   i != 0
//! ```
//!
//! which is again a single biased cut with `ε = -4/5 (a - b)^T`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arrangement::{CutIndex, DECK_SIZE};
use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

/// Tolerance on the total mass of a distribution built from floats.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// Largest `T` accepted by [`chain_distribution_power`] unless overridden.
pub const DEFAULT_POWER_CAP: u32 = 1_000_000;

pub type Matrix5 = [[f64; DECK_SIZE]; DECK_SIZE];

/// Probability law of the cut index over Z5.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftDistribution<T = f64>([T; DECK_SIZE]);

impl<T: Scalar> ShiftDistribution<T> {
    pub fn new(probs: [T; DECK_SIZE]) -> Result<Self> {
        if let Some(bad) = probs.iter().find(|p| !scalar::is_probability(*p)) {
            return Err(Error::InvalidDistribution(format!(
                "entry {} outside [0, 1]",
                bad.to_f64()
            )));
        }
        let total = scalar::sum(&probs);
        if !total.approx_eq(&T::one(), SUM_TOLERANCE) {
            return Err(Error::InvalidDistribution(format!(
                "entries sum to {}",
                total.to_f64()
            )));
        }
        Ok(ShiftDistribution(probs))
    }

    /// Rescales nonnegative weights to unit mass.
    pub fn renormalized(weights: [T; DECK_SIZE]) -> Result<Self> {
        if weights.iter().any(|w| *w < T::zero()) {
            return Err(Error::InvalidDistribution("negative weight".into()));
        }
        let total = scalar::sum(&weights);
        if scalar::is_zero(&total) {
            return Err(Error::InvalidDistribution("weights sum to zero".into()));
        }
        Self::new(weights.map(|w| w / total.clone()))
    }

    pub fn uniform() -> Self {
        ShiftDistribution(std::array::from_fn(|_| T::fifth()))
    }

    /// All mass on cut index `k`.
    pub fn point(k: CutIndex) -> Self {
        ShiftDistribution(std::array::from_fn(|i| {
            if i == k.get() {
                T::one()
            } else {
                T::zero()
            }
        }))
    }

    pub fn prob(&self, k: CutIndex) -> &T {
        &self.0[k.get()]
    }

    pub fn probs(&self) -> &[T; DECK_SIZE] {
        &self.0
    }

    /// Law of the sum (mod 5) of two independent cut indices.
    pub fn compose(&self, other: &Self) -> Self {
        let out = std::array::from_fn(|k| {
            (0..DECK_SIZE).fold(T::zero(), |acc, j| {
                acc + self.0[j].clone() * other.0[(k + DECK_SIZE - j) % DECK_SIZE].clone()
            })
        });
        ShiftDistribution(out)
    }

    pub fn max_abs_difference(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(x, y)| (x.clone() - y.clone()).abs().to_f64())
            .fold(0.0, f64::max)
    }

    pub fn to_f64(&self) -> ShiftDistribution<f64> {
        ShiftDistribution(self.0.clone().map(|p| p.to_f64()))
    }
}

pub fn compose<T: Scalar>(
    d1: &ShiftDistribution<T>,
    d2: &ShiftDistribution<T>,
) -> ShiftDistribution<T> {
    d1.compose(d2)
}

impl Serialize for ShiftDistribution<f64> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ShiftDistribution<f64> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let probs = <[f64; DECK_SIZE]>::deserialize(deserializer)?;
        ShiftDistribution::new(probs).map_err(serde::de::Error::custom)
    }
}

/// A single biased cut: `P(s = s*) = 1/5 - ε`, `P(s = j) = 1/5 + ε/4`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BiasSpec<T = f64> {
    epsilon: T,
    s_star: CutIndex,
}

impl<T: Scalar> BiasSpec<T> {
    pub fn new(epsilon: T, s_star: CutIndex) -> Result<Self> {
        if epsilon < T::ratio(-4, 5) || epsilon > T::fifth() {
            return Err(Error::EpsilonOutOfRange(epsilon.to_f64()));
        }
        Ok(BiasSpec { epsilon, s_star })
    }

    pub fn unbiased() -> Self {
        BiasSpec {
            epsilon: T::zero(),
            s_star: CutIndex::ZERO,
        }
    }

    pub fn epsilon(&self) -> &T {
        &self.epsilon
    }

    pub fn s_star(&self) -> CutIndex {
        self.s_star
    }

    pub fn distribution(&self) -> ShiftDistribution<T> {
        bias_to_distribution(self)
    }
}

pub fn bias_to_distribution<T: Scalar>(spec: &BiasSpec<T>) -> ShiftDistribution<T> {
    let favoured = T::fifth() - spec.epsilon.clone();
    let other = T::fifth() + spec.epsilon.clone() / T::ratio(4, 1);
    ShiftDistribution(std::array::from_fn(|j| {
        if j == spec.s_star.get() {
            favoured.clone()
        } else {
            other.clone()
        }
    }))
}

/// `T` repeated cuts; each stays put with probability `a` and otherwise
/// moves uniformly to one of the four other indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutChain {
    a: f64,
    #[serde(rename = "T")]
    cuts: u32,
}

impl CutChain {
    pub fn new(a: f64, cuts: u32) -> Result<Self> {
        if !(0.0..=1.0).contains(&a) {
            return Err(Error::DiagonalOutOfRange(a));
        }
        Ok(CutChain { a, cuts })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// Off-diagonal transition probability, always derived from `a`.
    pub fn b(&self) -> f64 {
        (1.0 - self.a) / 4.0
    }

    pub fn cuts(&self) -> u32 {
        self.cuts
    }

    pub fn with_cuts(&self, cuts: u32) -> Self {
        CutChain { cuts, ..*self }
    }

    /// `a - b`, the non-unit eigenvalue of the transition matrix.
    pub fn drift(&self) -> f64 {
        drift(self.a)
    }

    /// Whether the chain is already uniform after one step (`a = b`).
    pub fn is_memoryless(&self) -> bool {
        self.drift() == 0.0
    }
}

impl<'de> Deserialize<'de> for CutChain {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            a: f64,
            #[serde(rename = "T")]
            cuts: u32,
        }
        let raw = Raw::deserialize(deserializer)?;
        CutChain::new(raw.a, raw.cuts).map_err(serde::de::Error::custom)
    }
}

/// `a - b` written as `(5a - 1) / 4` so that `a = 1/5` yields exactly zero.
pub(crate) fn drift(a: f64) -> f64 {
    (5.0 * a - 1.0) / 4.0
}

pub fn transition_matrix(a: f64) -> Result<Matrix5> {
    let chain = CutChain::new(a, 1)?;
    let b = chain.b();
    Ok(std::array::from_fn(|i| {
        std::array::from_fn(|j| if i == j { a } else { b })
    }))
}

/// Distribution of the cut index after `chain.cuts()` steps from index 0.
pub fn chain_distribution_closed(chain: &CutChain) -> ShiftDistribution<f64> {
    let x = chain.drift().powu(chain.cuts);
    ShiftDistribution(std::array::from_fn(|i| {
        if i == 0 {
            0.2 + 0.8 * x
        } else {
            0.2 - 0.2 * x
        }
    }))
}

/// Same as [`chain_distribution_closed`], computed by multiplying the start
/// vector by the transition matrix `T` times.
pub fn chain_distribution_power(chain: &CutChain) -> Result<ShiftDistribution<f64>> {
    chain_distribution_power_capped(chain, DEFAULT_POWER_CAP)
}

pub fn chain_distribution_power_capped(
    chain: &CutChain,
    cap: u32,
) -> Result<ShiftDistribution<f64>> {
    if chain.cuts > cap {
        return Err(Error::TooManyCuts {
            requested: chain.cuts as u64,
            cap: cap as u64,
        });
    }
    let matrix = transition_matrix(chain.a)?;
    let mut state = [1.0, 0.0, 0.0, 0.0, 0.0];
    for _ in 0..chain.cuts {
        state = std::array::from_fn(|j| (0..DECK_SIZE).map(|i| state[i] * matrix[i][j]).sum());
    }
    Ok(ShiftDistribution(state))
}

/// The single-cut bias equivalent to the whole chain: `-4/5 (a - b)^T`.
pub fn effective_epsilon(chain: &CutChain) -> f64 {
    -0.8 * chain.drift().powu(chain.cuts)
}

impl CutChain {
    pub fn effective_bias(&self) -> BiasSpec<f64> {
        BiasSpec {
            epsilon: effective_epsilon(self),
            s_star: CutIndex::ZERO,
        }
    }
}

/// Either a single biased cut or a chain of repeated cuts.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ShuffleSpec {
    Single(BiasSpec<f64>),
    Chain(CutChain),
}

impl ShuffleSpec {
    /// The distinguished cut index; chains start from index 0.
    pub fn s_star(&self) -> CutIndex {
        match self {
            ShuffleSpec::Single(bias) => bias.s_star,
            ShuffleSpec::Chain(_) => CutIndex::ZERO,
        }
    }

    pub fn bias(&self) -> BiasSpec<f64> {
        match self {
            ShuffleSpec::Single(bias) => bias.clone(),
            ShuffleSpec::Chain(chain) => chain.effective_bias(),
        }
    }

    /// Law of the final cut index. Chains are propagated step by step
    /// through the transition matrix rather than through the closed form.
    pub fn distribution(&self) -> Result<ShiftDistribution<f64>> {
        match self {
            ShuffleSpec::Single(bias) => Ok(bias_to_distribution(bias)),
            ShuffleSpec::Chain(chain) => chain_distribution_power(chain),
        }
    }
}

impl From<BiasSpec<f64>> for ShuffleSpec {
    fn from(bias: BiasSpec<f64>) -> Self {
        ShuffleSpec::Single(bias)
    }
}

impl From<CutChain> for ShuffleSpec {
    fn from(chain: CutChain) -> Self {
        ShuffleSpec::Chain(chain)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use proptest::prelude::*;

    fn k(i: u64) -> CutIndex {
        CutIndex::new(i).unwrap()
    }

    fn assert_dist(d: &ShiftDistribution, expected: [f64; 5], tol: f64) {
        for (x, y) in d.probs().iter().zip(expected) {
            assert!((x - y).abs() <= tol, "{:?} vs {:?}", d.probs(), expected);
        }
    }

    #[test]
    fn bias_examples() {
        let d = bias_to_distribution(&BiasSpec::new(0.0, k(0)).unwrap());
        assert_dist(&d, [0.2; 5], 1e-15);
        let d = bias_to_distribution(&BiasSpec::new(0.2, k(0)).unwrap());
        assert_dist(&d, [0.0, 0.25, 0.25, 0.25, 0.25], 1e-15);
        let d = bias_to_distribution(&BiasSpec::new(0.1, k(2)).unwrap());
        assert_dist(&d, [0.225, 0.225, 0.1, 0.225, 0.225], 1e-15);
        assert_eq!(BiasSpec::new(0.3, k(0)), Err(Error::EpsilonOutOfRange(0.3)));
        assert!(BiasSpec::new(-0.81, k(0)).is_err());
        assert!(BiasSpec::new(-0.8, k(0)).is_ok());
    }

    #[test]
    fn bias_is_exact_in_rationals() {
        let spec = BiasSpec::new(Rational::ratio(1, 10), k(2)).unwrap();
        let d = ShiftDistribution::new(bias_to_distribution(&spec).probs().clone()).unwrap();
        assert_eq!(d.prob(k(2)), &Rational::ratio(1, 10));
        assert_eq!(d.prob(k(0)), &Rational::ratio(9, 40));
    }

    #[test]
    fn distribution_validation() {
        assert!(ShiftDistribution::new([0.5, 0.5, 0.1, 0.0, 0.0]).is_err());
        assert!(ShiftDistribution::new([1.5, -0.5, 0.0, 0.0, 0.0]).is_err());
        let d = ShiftDistribution::renormalized([2.0, 2.0, 0.0, 0.0, 0.0]).unwrap();
        assert_dist(&d, [0.5, 0.5, 0.0, 0.0, 0.0], 0.0);
        assert!(ShiftDistribution::<f64>::renormalized([0.0; 5]).is_err());
    }

    #[test]
    fn matrix_examples() {
        let id = transition_matrix(1.0).unwrap();
        for (i, row) in id.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert_eq!(*x, if i == j { 1.0 } else { 0.0 });
            }
        }
        let m = transition_matrix(0.2).unwrap();
        assert!(m.iter().flatten().all(|x| (x - 0.2).abs() < 1e-15));
        let m = transition_matrix(0.0).unwrap();
        assert_eq!(m[0], [0.0, 0.25, 0.25, 0.25, 0.25]);
        assert_eq!(transition_matrix(1.1), Err(Error::DiagonalOutOfRange(1.1)));
        for a in (0..=20).map(|i| i as f64 / 20.0) {
            for row in transition_matrix(a).unwrap() {
                assert!((row.iter().sum::<f64>() - 1.0).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn closed_chain_examples() {
        let c = chain_distribution_closed(&CutChain::new(0.37, 0).unwrap());
        assert_eq!(c.probs(), &[1.0, 0.0, 0.0, 0.0, 0.0]);
        let c = chain_distribution_closed(&CutChain::new(0.2, 1).unwrap());
        assert_dist(&c, [0.2; 5], 1e-15);
        let c = chain_distribution_closed(&CutChain::new(0.0, 1).unwrap());
        assert_dist(&c, [0.0, 0.25, 0.25, 0.25, 0.25], 1e-15);
    }

    #[test]
    fn power_chain_examples() {
        let p = chain_distribution_power(&CutChain::new(1.0, 7).unwrap()).unwrap();
        assert_eq!(p.probs(), &[1.0, 0.0, 0.0, 0.0, 0.0]);
        let p = chain_distribution_power(&CutChain::new(0.0, 2).unwrap()).unwrap();
        assert_dist(&p, [0.25, 0.1875, 0.1875, 0.1875, 0.1875], 1e-15);
        let p = chain_distribution_power(&CutChain::new(0.2, 3).unwrap()).unwrap();
        assert_dist(&p, [0.2; 5], 1e-15);
        let err = chain_distribution_power_capped(&CutChain::new(0.5, 11).unwrap(), 10);
        assert_eq!(
            err,
            Err(Error::TooManyCuts {
                requested: 11,
                cap: 10
            })
        );
    }

    #[test]
    fn compose_examples() {
        let d = bias_to_distribution(&BiasSpec::new(0.1, k(3)).unwrap());
        let u = ShiftDistribution::uniform();
        assert_dist(&u.compose(&d), [0.2; 5], 1e-15);
        assert_eq!(ShiftDistribution::point(k(0)).compose(&d), d);
        let r = ShiftDistribution::<f64>::point(k(2)).compose(&ShiftDistribution::point(k(4)));
        assert_eq!(r, ShiftDistribution::point(k(1)));
    }

    #[test]
    fn effective_epsilon_examples() {
        assert!((effective_epsilon(&CutChain::new(0.0, 1).unwrap()) - 0.2).abs() < 1e-15);
        assert_eq!(effective_epsilon(&CutChain::new(0.63, 0).unwrap()), -0.8);
        for t in 1..10 {
            assert_eq!(effective_epsilon(&CutChain::new(0.2, t).unwrap()), 0.0);
        }
        let chain = CutChain::new(0.0, 1).unwrap();
        let via_bias = bias_to_distribution(&chain.effective_bias());
        assert!(via_bias.max_abs_difference(&chain_distribution_closed(&chain)) < 1e-15);
    }

    #[test]
    fn chain_json_shape() {
        let chain = CutChain::new(0.25, 3).unwrap();
        let json = serde_json::to_string(&chain).unwrap();
        assert_eq!(json, r#"{"a":0.25,"T":3}"#);
        assert_eq!(serde_json::from_str::<CutChain>(&json).unwrap(), chain);
        assert!(serde_json::from_str::<CutChain>(r#"{"a":2.0,"T":3}"#).is_err());
        let d = ShiftDistribution::new([0.0, 0.25, 0.25, 0.25, 0.25]).unwrap();
        assert_eq!(
            serde_json::to_string(&d).unwrap(),
            "[0.0,0.25,0.25,0.25,0.25]"
        );
        assert!(serde_json::from_str::<ShiftDistribution>("[1.0,1.0,0.0,0.0,0.0]").is_err());
    }

    fn arb_dist() -> impl Strategy<Value = ShiftDistribution<f64>> {
        prop::array::uniform5(0.0f64..1.0)
            .prop_filter("nonzero", |w| w.iter().sum::<f64>() > 1e-3)
            .prop_map(|w| ShiftDistribution::renormalized(w).unwrap())
    }

    proptest! {
        #[test]
        fn compose_is_commutative_and_associative(x in arb_dist(), y in arb_dist(), z in arb_dist()) {
            prop_assert!(x.compose(&y).max_abs_difference(&y.compose(&x)) < 1e-14);
            let left = x.compose(&y).compose(&z);
            let right = x.compose(&y.compose(&z));
            prop_assert!(left.max_abs_difference(&right) < 1e-14);
            prop_assert!(x.compose(&ShiftDistribution::point(CutIndex::ZERO)).max_abs_difference(&x) == 0.0);
            prop_assert!(ShiftDistribution::new(*x.compose(&y).probs()).is_ok());
        }

        #[test]
        fn chain_is_iterated_composition(a in 0.0f64..=1.0, t in 0u32..12) {
            let chain = CutChain::new(a, t).unwrap();
            let step = chain_distribution_closed(&chain.with_cuts(1));
            let mut acc = ShiftDistribution::point(CutIndex::ZERO);
            for _ in 0..t {
                acc = acc.compose(&step);
            }
            prop_assert!(acc.max_abs_difference(&chain_distribution_power(&chain).unwrap()) < 1e-12);
        }

        #[test]
        fn effective_epsilon_stays_in_range(a in 0.0f64..=1.0, t in 0u32..60) {
            let eps = effective_epsilon(&CutChain::new(a, t).unwrap());
            prop_assert!((-0.8..=0.2).contains(&eps));
        }

        #[test]
        fn chain_converges_to_uniform(a in 0.0f64..0.999, t in 1u32..200) {
            let chain = CutChain::new(a, t).unwrap();
            let d = chain_distribution_closed(&chain);
            let dev = d.max_abs_difference(&ShiftDistribution::uniform());
            prop_assert!(dev <= 10.0 * chain.drift().abs().powi(t as i32) + 1e-16);
        }
    }

    #[test]
    fn parity_of_the_cut_count() {
        // Deviations below one ulp of 0.2 vanish in floating point, so the
        // grid stops before (a - b)^T underflows against 0.2.
        for (a, max_t) in [(0.0, 20), (0.05, 20), (0.1, 12), (0.15, 10)] {
            for t in 1..=max_t {
                let d = chain_distribution_closed(&CutChain::new(a, t).unwrap());
                let p0 = d.probs()[0];
                if t % 2 == 1 {
                    assert!(p0 < 0.2 && d.probs()[1..].iter().all(|p| *p > 0.2));
                } else {
                    assert!(p0 > 0.2);
                }
            }
        }
    }
}
