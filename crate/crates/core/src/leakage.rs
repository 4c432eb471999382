//! Posterior probability of the initial arrangement given the revealed one.
//!
//! Bob fixes `b = 0`, so the initial arrangement is `rBBrB` (Alice chose 1)
//! or `BrBrB` (Alice chose 0). After a single cut whose index is biased at
//! `s*`, the two finals `f(I, s*)` are informative:
//!
//! ```text
//! P(c_I = I | c_F = F) = (4 - 20ε) / (8 - 15ε)   if F = f(I, s*)
//!                        (4 +  5ε) / (8 - 15ε)   otherwise
//! ```
//!
//! and every other final gives exactly 1/2. After `T` repeated cuts the
//! informative posteriors become `(4 + 16x) / (8 + 12x)` and
//! `(4 - 4x) / (8 + 12x)` with `x = (a - b)^T`.
//!
//! [`posterior_exact`] does not use any of this; it enumerates initial
//! arrangements and cut indices and applies Bayes' rule directly.

use std::collections::BTreeMap;
use std::io;

use serde::{Deserialize, Deserializer, Serialize};

use crate::arrangement::{
    all_arrangements, leaky_finals, restricted_final_set, restricted_initial_set, Arrangement,
    CutIndex,
};
use crate::error::{Error, Result};
use crate::format::format_sig;
use crate::scalar::{self, Scalar};
use crate::shuffle_model::{BiasSpec, CutChain, ShiftDistribution, SUM_TOLERANCE};

/// Distribution of the initial arrangement.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorSpec<T = f64> {
    weights: BTreeMap<Arrangement, T>,
}

impl<T: Scalar> PriorSpec<T> {
    pub fn new(weights: BTreeMap<Arrangement, T>) -> Result<Self> {
        if weights.values().any(|w| *w < T::zero()) {
            return Err(Error::InvalidPrior("negative weight".into()));
        }
        if weights.values().all(scalar::is_zero) {
            return Err(Error::EmptyPrior);
        }
        let total = scalar::sum(weights.values());
        if !total.approx_eq(&T::one(), SUM_TOLERANCE) {
            return Err(Error::InvalidPrior(format!(
                "weights sum to {}",
                total.to_f64()
            )));
        }
        Ok(PriorSpec { weights })
    }

    /// Alice's bit is a fair coin and Bob's bit is 0.
    pub fn restricted_default() -> Self {
        PriorSpec {
            weights: restricted_initial_set()
                .into_iter()
                .map(|i| (i, T::half()))
                .collect(),
        }
    }

    /// All mass on one initial arrangement.
    pub fn point(initial: Arrangement) -> Self {
        PriorSpec {
            weights: BTreeMap::from([(initial, T::one())]),
        }
    }

    pub fn weight(&self, initial: &Arrangement) -> T {
        self.weights.get(initial).cloned().unwrap_or_else(T::zero)
    }

    /// Arrangements with positive weight, in lexicographic order.
    pub fn support(&self) -> impl Iterator<Item = (&Arrangement, &T)> {
        self.weights.iter().filter(|(_, w)| !scalar::is_zero(*w))
    }

    pub fn is_restricted_default(&self) -> bool {
        *self == Self::restricted_default()
    }
}

impl<T: Scalar> Default for PriorSpec<T> {
    fn default() -> Self {
        Self::restricted_default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseLabel {
    /// `F = f(I, s*)` for some restricted initial `I`.
    Case1,
    /// Reachable but not of the form `f(I, s*)`.
    Case2,
    /// Zero marginal probability; the posterior is undefined.
    Unreachable,
}

impl CaseLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseLabel::Case1 => "Case1",
            CaseLabel::Case2 => "Case2",
            CaseLabel::Unreachable => "Unreachable",
        }
    }

    /// Label of a reachable final relative to the distinguished index.
    pub fn of_final(final_arrangement: &Arrangement, s_star: CutIndex) -> CaseLabel {
        if leaky_finals(s_star).contains(final_arrangement) {
            CaseLabel::Case1
        } else {
            CaseLabel::Case2
        }
    }
}

/// Posteriors over initial arrangements for one observed final.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinalPosterior<T = f64> {
    #[serde(rename = "final")]
    pub final_arrangement: Arrangement,
    pub case: CaseLabel,
    pub posteriors: BTreeMap<Arrangement, T>,
}

/// `P(c_I = I | c_F = F)` for every final, ordered by final arrangement.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct PosteriorTable<T = f64> {
    rows: Vec<FinalPosterior<T>>,
}

impl<T: Scalar> PosteriorTable<T> {
    pub fn from_rows(mut rows: Vec<FinalPosterior<T>>) -> Result<Self> {
        rows.sort_by_key(|r| r.final_arrangement);
        let table = PosteriorTable { rows };
        table.validate()?;
        Ok(table)
    }

    fn validate(&self) -> Result<()> {
        for pair in self.rows.windows(2) {
            if pair[0].final_arrangement == pair[1].final_arrangement {
                return Err(Error::TableMismatch(pair[0].final_arrangement.to_string()));
            }
        }
        for row in &self.rows {
            let bad =
                || Error::InvalidDistribution(format!("posterior row {}", row.final_arrangement));
            if row.case == CaseLabel::Unreachable {
                if !row.posteriors.is_empty() {
                    return Err(bad());
                }
                continue;
            }
            if row.posteriors.values().any(|p| !scalar::is_probability(p)) {
                return Err(bad());
            }
            if !scalar::sum(row.posteriors.values()).approx_eq(&T::one(), SUM_TOLERANCE) {
                return Err(bad());
            }
        }
        Ok(())
    }

    pub fn rows(&self) -> &[FinalPosterior<T>] {
        &self.rows
    }

    pub fn row(&self, final_arrangement: &Arrangement) -> Option<&FinalPosterior<T>> {
        self.rows
            .binary_search_by_key(final_arrangement, |r| r.final_arrangement)
            .ok()
            .map(|i| &self.rows[i])
    }

    pub fn get(&self, initial: &Arrangement, final_arrangement: &Arrangement) -> Option<&T> {
        self.row(final_arrangement)?.posteriors.get(initial)
    }

    /// Case label of a final; finals absent from the table are unreachable.
    pub fn case_of(&self, final_arrangement: &Arrangement) -> CaseLabel {
        self.row(final_arrangement)
            .map_or(CaseLabel::Unreachable, |r| r.case)
    }

    pub fn reachable(&self) -> impl Iterator<Item = &FinalPosterior<T>> {
        self.rows
            .iter()
            .filter(|r| r.case != CaseLabel::Unreachable)
    }

    /// Every `(initial, final, posterior)` triple over reachable finals.
    pub fn entries(&self) -> impl Iterator<Item = (&Arrangement, &Arrangement, &T)> {
        self.reachable().flat_map(|r| {
            r.posteriors
                .iter()
                .map(move |(i, p)| (i, &r.final_arrangement, p))
        })
    }

    /// `max |posterior - 1/2|` over reachable entries.
    pub fn max_deviation(&self) -> T {
        self.entries()
            .map(|(_, _, p)| (p.clone() - T::half()).abs())
            .fold(T::zero(), |acc, d| if d > acc { d } else { acc })
    }

    /// Largest entrywise difference. Both tables must agree on which finals
    /// are reachable, on their case labels and on the initial arrangements
    /// listed for each.
    pub fn max_abs_difference(&self, other: &Self) -> Result<T> {
        let mut finals: Vec<Arrangement> = self
            .rows
            .iter()
            .chain(&other.rows)
            .map(|r| r.final_arrangement)
            .collect();
        finals.sort();
        finals.dedup();
        let mut worst = T::zero();
        for f in finals {
            let mismatch = || Error::TableMismatch(f.to_string());
            if self.case_of(&f) != other.case_of(&f) {
                return Err(mismatch());
            }
            let (Some(mine), Some(theirs)) = (self.row(&f), other.row(&f)) else {
                continue;
            };
            if !mine.posteriors.keys().eq(theirs.posteriors.keys()) {
                return Err(mismatch());
            }
            for (p, q) in mine.posteriors.values().zip(theirs.posteriors.values()) {
                let d = (p.clone() - q.clone()).abs();
                if d > worst {
                    worst = d;
                }
            }
        }
        Ok(worst)
    }

    /// Entrywise agreement within `tol` (exact equality for rationals).
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_difference(other)
            .map(|d| d.approx_eq(&T::zero(), tol))
            .unwrap_or(false)
    }

    pub fn to_f64(&self) -> PosteriorTable<f64> {
        PosteriorTable {
            rows: self
                .rows
                .iter()
                .map(|r| FinalPosterior {
                    final_arrangement: r.final_arrangement,
                    case: r.case,
                    posteriors: r.posteriors.iter().map(|(i, p)| (*i, p.to_f64())).collect(),
                })
                .collect(),
        }
    }
}

impl PosteriorTable<f64> {
    /// Flat CSV with columns `initial,final,case,posterior`.
    pub fn write_csv<W: io::Write>(&self, writer: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["initial", "final", "case", "posterior"])?;
        for row in &self.rows {
            for (initial, p) in &row.posteriors {
                out.write_record([
                    initial.to_string(),
                    row.final_arrangement.to_string(),
                    row.case.as_str().to_string(),
                    format_sig(*p),
                ])?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

impl<'de> Deserialize<'de> for PosteriorTable<f64> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<FinalPosterior<f64>>::deserialize(deserializer)?;
        PosteriorTable::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// `P(f(I, s) = F)` by enumerating the cut indices.
fn transition_probability<T: Scalar>(
    initial: &Arrangement,
    final_arrangement: &Arrangement,
    dist: &ShiftDistribution<T>,
) -> T {
    CutIndex::all()
        .filter(|k| initial.rotate(*k) == *final_arrangement)
        .fold(T::zero(), |acc, k| acc + dist.prob(k).clone())
}

/// `P(c_F = F)` for every one of the ten arrangements.
pub fn final_marginals<T: Scalar>(
    prior: &PriorSpec<T>,
    dist: &ShiftDistribution<T>,
) -> BTreeMap<Arrangement, T> {
    all_arrangements()
        .into_iter()
        .map(|f| {
            let mass = prior.support().fold(T::zero(), |acc, (i, w)| {
                acc + w.clone() * transition_probability(i, &f, dist)
            });
            (f, mass)
        })
        .collect()
}

/// Bayes' rule by exhaustive enumeration; Case 1 is taken relative to
/// `s* = 0`. See [`posterior_exact_labeled`].
pub fn posterior_exact<T: Scalar>(
    prior: &PriorSpec<T>,
    dist: &ShiftDistribution<T>,
) -> PosteriorTable<T> {
    posterior_exact_labeled(prior, dist, CutIndex::ZERO)
}

/// Bayes' rule by exhaustive enumeration over initial arrangements and cut
/// indices. Reachable finals are labelled Case 1 when they equal `f(I, s*)`
/// for a restricted initial `I`, Case 2 otherwise.
pub fn posterior_exact_labeled<T: Scalar>(
    prior: &PriorSpec<T>,
    dist: &ShiftDistribution<T>,
    s_star: CutIndex,
) -> PosteriorTable<T> {
    let rows = all_arrangements()
        .into_iter()
        .map(|f| {
            let joint: BTreeMap<Arrangement, T> = prior
                .support()
                .map(|(i, w)| (*i, w.clone() * transition_probability(i, &f, dist)))
                .collect();
            let marginal = scalar::sum(joint.values());
            if scalar::is_zero(&marginal) {
                FinalPosterior {
                    final_arrangement: f,
                    case: CaseLabel::Unreachable,
                    posteriors: BTreeMap::new(),
                }
            } else {
                FinalPosterior {
                    final_arrangement: f,
                    case: CaseLabel::of_final(&f, s_star),
                    posteriors: joint
                        .into_iter()
                        .map(|(i, j)| (i, j / marginal.clone()))
                        .collect(),
                }
            }
        })
        .collect();
    PosteriorTable { rows }
}

/// The two informative posteriors after a single biased cut:
/// `(same, other)` where `same` is for `F = f(I, s*)`.
pub fn case1_posteriors<T: Scalar>(epsilon: &T) -> (T, T) {
    let den = T::ratio(8, 1) - T::ratio(15, 1) * epsilon.clone();
    let same = (T::ratio(4, 1) - T::ratio(20, 1) * epsilon.clone()) / den.clone();
    let other = (T::ratio(4, 1) + T::ratio(5, 1) * epsilon.clone()) / den;
    (same, other)
}

/// Builds a table over the five restricted finals from the Case 1 pair.
fn closed_table<T: Scalar>(
    s_star: CutIndex,
    same: T,
    other: T,
    case2_reachable: bool,
) -> PosteriorTable<T> {
    let initials = restricted_initial_set();
    let rows = restricted_final_set()
        .into_iter()
        .map(|f| {
            let case = CaseLabel::of_final(&f, s_star);
            let posteriors = match case {
                CaseLabel::Case1 => initials
                    .iter()
                    .map(|i| {
                        let p = if i.rotate(s_star) == f {
                            same.clone()
                        } else {
                            other.clone()
                        };
                        (*i, p)
                    })
                    .collect(),
                _ if case2_reachable => initials.iter().map(|i| (*i, T::half())).collect(),
                _ => BTreeMap::new(),
            };
            let case = if posteriors.is_empty() {
                CaseLabel::Unreachable
            } else {
                case
            };
            FinalPosterior {
                final_arrangement: f,
                case,
                posteriors,
            }
        })
        .collect();
    PosteriorTable { rows }
}

/// Closed-form posteriors after one cut biased at `s*`, under the default
/// prior.
pub fn posterior_closed_single<T: Scalar>(bias: &BiasSpec<T>) -> PosteriorTable<T> {
    let (same, other) = case1_posteriors(bias.epsilon());
    let case2_reachable = !scalar::is_zero(&case2_marginal(bias.epsilon()));
    closed_table(bias.s_star(), same, other, case2_reachable)
}

/// Closed-form posteriors after `T` chain steps, given `a - b` directly.
pub fn posterior_closed_repeated_drift<T: Scalar>(drift: &T, cuts: u32) -> PosteriorTable<T> {
    let x = drift.powu(cuts);
    let den = T::ratio(8, 1) + T::ratio(12, 1) * x.clone();
    let same = (T::ratio(4, 1) + T::ratio(16, 1) * x.clone()) / den.clone();
    let other = (T::ratio(4, 1) - T::ratio(4, 1) * x.clone()) / den;
    // Case 2 finals have marginal (1 - x) / 5.
    closed_table(CutIndex::ZERO, same, other, x != T::one())
}

/// Closed-form posteriors after the repeated cuts of `chain`, under the
/// default prior.
pub fn posterior_closed_repeated(chain: &CutChain) -> PosteriorTable<f64> {
    posterior_closed_repeated_drift(&chain.drift(), chain.cuts())
}

fn check_epsilon<T: Scalar>(epsilon: &T) -> Result<()> {
    BiasSpec::new(epsilon.clone(), CutIndex::ZERO).map(|_| ())
}

/// `P(c_F = F)` for either Case 1 final: `(1/2)(2/5 - 3ε/4)`.
pub fn final_marginal_case1<T: Scalar>(epsilon: &T) -> Result<T> {
    check_epsilon(epsilon)?;
    Ok(T::half() * (T::ratio(2, 5) - T::ratio(3, 4) * epsilon.clone()))
}

/// `P(c_F = F) = P(f(I, s) = F) = 1/5 + ε/4` for any Case 2 final.
pub fn case2_marginal<T: Scalar>(epsilon: &T) -> T {
    T::fifth() + epsilon.clone() / T::ratio(4, 1)
}

/// `P(f(i, s) = f(j, 0))` for `i, j` in the restricted initial set, by
/// enumeration over the cut indices.
pub fn shift_match_probability<T: Scalar>(
    i: &Arrangement,
    j: &Arrangement,
    dist: &ShiftDistribution<T>,
) -> Result<T> {
    for x in [i, j] {
        if !x.is_restricted_initial() {
            return Err(Error::NotRestrictedInitial(x.to_string()));
        }
    }
    Ok(transition_probability(i, &j.rotate(CutIndex::ZERO), dist))
}

/// Posterior bounds Bob can state when he only knows `ε >= eps_lower`:
/// `(upper bound for F = f(I, s*), lower bound for the other Case 1 final)`.
pub fn level2_bounds<T: Scalar>(eps_lower: &T) -> Result<(T, T)> {
    if *eps_lower <= T::zero() || *eps_lower > T::fifth() {
        return Err(Error::EpsilonLowerBoundOutOfRange(eps_lower.to_f64()));
    }
    Ok(case1_posteriors(eps_lower))
}

/// What Bob learns when he guesses Alice's input by maximum a posteriori.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeakageReport<T = f64> {
    pub posterior: PosteriorTable<T>,
    pub final_marginals: BTreeMap<Arrangement, T>,
    /// MAP guess per reachable final; ties go to the lexicographically
    /// smallest arrangement.
    pub map_guesses: BTreeMap<Arrangement, Arrangement>,
    pub map_guess_success: T,
    pub max_deviation: T,
}

pub fn adversary_report<T: Scalar>(
    prior: &PriorSpec<T>,
    dist: &ShiftDistribution<T>,
) -> LeakageReport<T> {
    let posterior = posterior_exact(prior, dist);
    let final_marginals: BTreeMap<_, _> = final_marginals(prior, dist)
        .into_iter()
        .filter(|(_, m)| !scalar::is_zero(m))
        .collect();
    let mut map_guesses = BTreeMap::new();
    let mut success = T::zero();
    for row in posterior.reachable() {
        // posteriors iterate in lexicographic order; strict `>` keeps the first.
        let mut best: Option<(&Arrangement, &T)> = None;
        for (i, p) in &row.posteriors {
            if best.is_none_or(|(_, q)| p > q) {
                best = Some((i, p));
            }
        }
        if let Some((guess, p)) = best {
            map_guesses.insert(row.final_arrangement, *guess);
            success = success + final_marginals[&row.final_arrangement].clone() * p.clone();
        }
    }
    LeakageReport {
        max_deviation: posterior.max_deviation(),
        posterior,
        final_marginals,
        map_guesses,
        map_guess_success: success,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn arr(s: &str) -> Arrangement {
        s.parse().unwrap()
    }

    fn k(i: u64) -> CutIndex {
        CutIndex::new(i).unwrap()
    }

    fn bias(eps: f64, s: u64) -> BiasSpec {
        BiasSpec::new(eps, k(s)).unwrap()
    }

    #[test]
    fn prior_validation() {
        assert_eq!(
            PriorSpec::<f64>::new(BTreeMap::new()),
            Err(Error::EmptyPrior)
        );
        let zero = BTreeMap::from([(arr("rBBrB"), 0.0)]);
        assert_eq!(PriorSpec::new(zero), Err(Error::EmptyPrior));
        let short = BTreeMap::from([(arr("rBBrB"), 0.4), (arr("BrBrB"), 0.4)]);
        assert!(matches!(PriorSpec::new(short), Err(Error::InvalidPrior(_))));
        let neg = BTreeMap::from([(arr("rBBrB"), 1.5), (arr("BrBrB"), -0.5)]);
        assert!(matches!(PriorSpec::new(neg), Err(Error::InvalidPrior(_))));
        let prior = PriorSpec::<f64>::default();
        assert_eq!(prior.weight(&arr("rBBrB")), 0.5);
        assert_eq!(prior.weight(&arr("rBBBr")), 0.0);
        assert!(prior.is_restricted_default());
    }

    #[test]
    fn exact_uniform_is_uninformative() {
        let table = posterior_exact(&PriorSpec::<f64>::default(), &ShiftDistribution::uniform());
        assert_eq!(table.reachable().count(), 5);
        for (_, _, p) in table.entries() {
            assert!((p - 0.5).abs() < 1e-15);
        }
        assert_eq!(table.case_of(&arr("rBBBr")), CaseLabel::Unreachable);
    }

    #[test]
    fn exact_biased_example() {
        let table = posterior_exact(&PriorSpec::default(), &bias(0.1, 0).distribution());
        let p = table.get(&arr("rBBrB"), &arr("rBBrB")).unwrap();
        assert!((p - 4.0 / 13.0).abs() < 1e-15);
        let p = table.get(&arr("BrBrB"), &arr("rBBrB")).unwrap();
        assert!((p - 9.0 / 13.0).abs() < 1e-15);
    }

    #[test]
    fn exact_point_prior() {
        let prior = PriorSpec::point(arr("rBBrB"));
        let table = posterior_exact(&prior, &bias(0.15, 3).distribution());
        assert_eq!(table.reachable().count(), 5);
        for row in table.reachable() {
            assert_eq!(row.posteriors.len(), 1);
            assert_eq!(row.posteriors[&arr("rBBrB")], 1.0);
        }
    }

    #[test]
    fn closed_single_examples() {
        for (_, _, p) in posterior_closed_single(&bias(0.0, 2)).entries() {
            assert_eq!(*p, 0.5);
        }
        let t = posterior_closed_single(&BiasSpec::new(Rational::ratio(1, 5), k(0)).unwrap());
        let one = Rational::ratio(1, 1);
        let zero = Rational::ratio(0, 1);
        assert_eq!(t.get(&arr("rBBrB"), &arr("rBBrB")), Some(&zero));
        assert_eq!(t.get(&arr("BrBrB"), &arr("rBBrB")), Some(&one));
        assert_eq!(t.get(&arr("BrBrB"), &arr("BrBrB")), Some(&zero));
        let t = posterior_closed_single(&bias(0.1, 0));
        assert_eq!(t.case_of(&arr("rBrBB")), CaseLabel::Case2);
        assert_eq!(t.get(&arr("rBBrB"), &arr("rBrBB")), Some(&0.5));
    }

    #[test]
    fn closed_single_at_no_shuffle_limit() {
        let t = posterior_closed_single(&bias(-0.8, 0));
        assert_eq!(t.reachable().count(), 2);
        assert_eq!(t.get(&arr("rBBrB"), &arr("rBBrB")), Some(&1.0));
        assert_eq!(t.get(&arr("BrBrB"), &arr("rBBrB")), Some(&0.0));
    }

    #[test]
    fn closed_repeated_examples() {
        for t in 1..6 {
            let table = posterior_closed_repeated(&CutChain::new(0.2, t).unwrap());
            assert!(table.entries().all(|(_, _, p)| *p == 0.5));
        }
        let table = posterior_closed_repeated(&CutChain::new(0.43, 0).unwrap());
        assert_eq!(table.get(&arr("rBBrB"), &arr("rBBrB")), Some(&1.0));
        assert_eq!(table.get(&arr("BrBrB"), &arr("rBBrB")), Some(&0.0));
        let table = posterior_closed_repeated(&CutChain::new(0.0, 1).unwrap());
        assert_eq!(table.get(&arr("rBBrB"), &arr("rBBrB")), Some(&0.0));
        assert_eq!(table.get(&arr("BrBrB"), &arr("rBBrB")), Some(&1.0));
    }

    #[test]
    fn marginal_examples() {
        assert!((final_marginal_case1(&0.0).unwrap() - 0.2).abs() < 1e-15);
        assert!((final_marginal_case1(&0.2).unwrap() - 0.125).abs() < 1e-15);
        assert!((final_marginal_case1(&-0.8).unwrap() - 0.5).abs() < 1e-15);
        assert!(final_marginal_case1(&0.25).is_err());
        let m = final_marginals(&PriorSpec::default(), &bias(0.2, 0).distribution());
        let reachable: f64 = m.values().sum();
        assert!((reachable - 1.0).abs() < 1e-15);
        assert!((m[&arr("rBBrB")] - 0.125).abs() < 1e-15);
    }

    #[test]
    fn shift_match_examples() {
        let d = bias(0.1, 0).distribution();
        let (x, y) = (arr("rBBrB"), arr("BrBrB"));
        assert!((shift_match_probability(&x, &x, &d).unwrap() - 0.1).abs() < 1e-15);
        assert!((shift_match_probability(&x, &y, &d).unwrap() - 0.225).abs() < 1e-15);
        // rBBrB reaches BrBrB at cut index 3.
        assert_eq!(x.cut_to(&y), Some(k(3)));
        let u = ShiftDistribution::<f64>::uniform();
        assert!((shift_match_probability(&y, &y, &u).unwrap() - 0.2).abs() < 1e-15);
        assert!(shift_match_probability(&arr("rBBBr"), &x, &u).is_err());
    }

    #[test]
    fn level2_examples() {
        let (hi, lo) = level2_bounds(&0.2).unwrap();
        assert!(hi.abs() < 1e-15 && (lo - 1.0).abs() < 1e-15);
        let (hi, lo) = level2_bounds(&1e-9).unwrap();
        assert!((hi - 0.5).abs() < 1e-8 && (lo - 0.5).abs() < 1e-8);
        let (hi, lo) = level2_bounds(&Rational::ratio(1, 10)).unwrap();
        assert_eq!((hi, lo), (Rational::ratio(4, 13), Rational::ratio(9, 13)));
        assert!(level2_bounds(&0.0).is_err());
        assert!(level2_bounds(&0.3).is_err());
    }

    #[test]
    fn adversary_examples() {
        let prior = PriorSpec::<f64>::default();
        let r = adversary_report(&prior, &ShiftDistribution::uniform());
        assert!((r.map_guess_success - 0.5).abs() < 1e-15);
        assert_eq!(r.max_deviation, 0.0);
        // Ties resolve to the lexicographically smallest arrangement.
        assert!(r.map_guesses.values().all(|g| *g == arr("BrBrB")));

        // Two Case 1 finals with mass 1/8 guessed surely, three Case 2 finals
        // with mass 1/4 each guessed at 1/2: 2/8 + 3/8 = 5/8.
        let r = adversary_report(&prior, &bias(0.2, 0).distribution());
        assert!((r.map_guess_success - 0.625).abs() < 1e-15);

        let r = adversary_report(&prior, &ShiftDistribution::point(CutIndex::ZERO));
        assert_eq!(r.map_guess_success, 1.0);
        assert_eq!(r.map_guesses[&arr("rBBrB")], arr("rBBrB"));
    }

    #[test]
    fn table_json_and_csv() {
        let table = posterior_closed_single(&bias(0.1, 0));
        let json = serde_json::to_value(&table).unwrap();
        let first = &json[0];
        assert_eq!(first["final"], "BBrBr");
        assert_eq!(first["case"], "Case2");
        assert_eq!(first["posteriors"]["BrBrB"], 0.5);
        let back: PosteriorTable = serde_json::from_value(json).unwrap();
        assert_eq!(back, table);

        let mut buf = Vec::new();
        table.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("initial,final,case,posterior"));
        assert!(text.contains("rBBrB,rBBrB,Case1,0.307692307692\n"));
        assert_eq!(text.lines().count(), 11);
    }

    #[test]
    fn mismatched_tables_are_rejected() {
        let a = posterior_closed_single(&bias(0.1, 0));
        let b = posterior_closed_single(&bias(0.1, 1));
        assert!(matches!(
            a.max_abs_difference(&b),
            Err(Error::TableMismatch(_))
        ));
        assert_eq!(a.max_abs_difference(&a), Ok(0.0));
    }
}
