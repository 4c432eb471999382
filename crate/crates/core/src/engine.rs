//! Interchangeable posterior engines, selected by name at runtime.
//!
//! Every engine answers the same question for a [`Scenario`]: the table of
//! `P(c_I = I | c_F = F)`. The closed forms, the exhaustive enumeration and
//! the sampler are independent routes to it, so any two can be compared.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::leakage::{
    posterior_closed_repeated, posterior_closed_single, posterior_exact_labeled, PosteriorTable,
    PriorSpec,
};
use crate::montecarlo::{simulate, SimConfig};
use crate::shuffle_model::ShuffleSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub prior: PriorSpec,
    pub shuffle: ShuffleSpec,
}

impl Scenario {
    /// Default prior (Alice uniform, Bob fixed to 0).
    pub fn new(shuffle: impl Into<ShuffleSpec>) -> Self {
        Scenario {
            prior: PriorSpec::default(),
            shuffle: shuffle.into(),
        }
    }

    pub fn with_prior(prior: PriorSpec, shuffle: impl Into<ShuffleSpec>) -> Self {
        Scenario {
            prior,
            shuffle: shuffle.into(),
        }
    }
}

pub trait PosteriorEngine: Send + Sync {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    fn posterior(&self, scenario: &Scenario) -> Result<PosteriorTable>;
}

/// Bayes' rule over every initial arrangement and cut index. Chains are
/// propagated through the transition matrix.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactEnumeration;

impl PosteriorEngine for ExactEnumeration {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn description(&self) -> &'static str {
        "exhaustive Bayes enumeration over arrangements and cut indices"
    }

    fn posterior(&self, scenario: &Scenario) -> Result<PosteriorTable> {
        let dist = scenario.shuffle.distribution()?;
        Ok(posterior_exact_labeled(
            &scenario.prior,
            &dist,
            scenario.shuffle.s_star(),
        ))
    }
}

/// Closed-form posteriors; only defined for the default prior.
#[derive(Debug, Clone, Copy, Default)]
pub struct ClosedForm;

impl PosteriorEngine for ClosedForm {
    fn name(&self) -> &'static str {
        "closed"
    }

    fn description(&self) -> &'static str {
        "closed-form posteriors for single and repeated biased cuts"
    }

    fn posterior(&self, scenario: &Scenario) -> Result<PosteriorTable> {
        if !scenario.prior.is_restricted_default() {
            return Err(Error::Unsupported {
                engine: self.name().into(),
                reason: "closed forms assume a uniform bit for Alice and b = 0".into(),
            });
        }
        Ok(match &scenario.shuffle {
            ShuffleSpec::Single(bias) => posterior_closed_single(bias),
            ShuffleSpec::Chain(chain) => posterior_closed_repeated(chain),
        })
    }
}

/// Empirical posteriors from seeded sampling.
#[derive(Debug, Clone, Copy)]
pub struct MonteCarlo {
    pub n_samples: u64,
    pub seed: u64,
}

impl Default for MonteCarlo {
    fn default() -> Self {
        MonteCarlo {
            n_samples: 100_000,
            seed: 0,
        }
    }
}

impl PosteriorEngine for MonteCarlo {
    fn name(&self) -> &'static str {
        "montecarlo"
    }

    fn description(&self) -> &'static str {
        "empirical posteriors from seeded protocol sampling"
    }

    fn posterior(&self, scenario: &Scenario) -> Result<PosteriorTable> {
        let config = SimConfig::new(
            scenario.prior.clone(),
            scenario.shuffle.clone(),
            self.n_samples,
            self.seed,
        )?;
        Ok(simulate(&config).empirical_posterior)
    }
}

pub struct EngineRegistry {
    engines: BTreeMap<&'static str, Box<dyn PosteriorEngine>>,
}

impl EngineRegistry {
    pub fn empty() -> Self {
        EngineRegistry {
            engines: BTreeMap::new(),
        }
    }

    /// `closed`, `exact` and `montecarlo` with default sampling settings.
    pub fn with_defaults() -> Self {
        let mut registry = Self::empty();
        registry.register(Box::new(ClosedForm));
        registry.register(Box::new(ExactEnumeration));
        registry.register(Box::new(MonteCarlo::default()));
        registry
    }

    /// Adds an engine, returning any previous engine with the same name.
    pub fn register(
        &mut self,
        engine: Box<dyn PosteriorEngine>,
    ) -> Option<Box<dyn PosteriorEngine>> {
        self.engines.insert(engine.name(), engine)
    }

    pub fn get(&self, name: &str) -> Result<&dyn PosteriorEngine> {
        self.engines
            .get(name)
            .map(|e| e.as_ref())
            .ok_or_else(|| Error::UnknownEngine(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.engines.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn PosteriorEngine> {
        self.engines.values().map(|e| e.as_ref())
    }

    pub fn compare(
        &self,
        reference: &str,
        candidate: &str,
        scenario: &Scenario,
    ) -> Result<Comparison> {
        let left = self.get(reference)?.posterior(scenario)?;
        let right = self.get(candidate)?.posterior(scenario)?;
        let max_abs_difference = left.max_abs_difference(&right)?;
        Ok(Comparison {
            reference: left,
            candidate: right,
            max_abs_difference,
        })
    }
}

impl Default for EngineRegistry {
    fn default() -> Self {
        Self::with_defaults()
    }
}

impl std::fmt::Debug for EngineRegistry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.engines.keys()).finish()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub reference: PosteriorTable,
    pub candidate: PosteriorTable,
    pub max_abs_difference: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::CutIndex;
    use crate::shuffle_model::{BiasSpec, CutChain};

    #[test]
    fn default_registry() {
        let registry = EngineRegistry::with_defaults();
        assert_eq!(
            registry.names().collect::<Vec<_>>(),
            ["closed", "exact", "montecarlo"]
        );
        assert!(matches!(registry.get("nope"), Err(Error::UnknownEngine(_))));
    }

    #[test]
    fn closed_and_exact_agree() {
        let registry = EngineRegistry::default();
        let single = Scenario::new(BiasSpec::new(0.1, CutIndex::new(3).unwrap()).unwrap());
        assert!(
            registry
                .compare("closed", "exact", &single)
                .unwrap()
                .max_abs_difference
                < 1e-15
        );
        let chain = Scenario::new(CutChain::new(0.05, 3).unwrap());
        assert!(
            registry
                .compare("closed", "exact", &chain)
                .unwrap()
                .max_abs_difference
                < 1e-15
        );
    }

    #[test]
    fn closed_rejects_custom_prior() {
        let prior = PriorSpec::point("rBBBr".parse().unwrap());
        let scenario = Scenario::with_prior(prior, CutChain::new(0.5, 2).unwrap());
        assert!(matches!(
            ClosedForm.posterior(&scenario),
            Err(Error::Unsupported { .. })
        ));
        assert!(ExactEnumeration.posterior(&scenario).is_ok());
    }

    #[test]
    fn registering_replaces_by_name() {
        let mut registry = EngineRegistry::with_defaults();
        let old = registry.register(Box::new(MonteCarlo {
            n_samples: 10,
            seed: 3,
        }));
        assert_eq!(old.map(|e| e.name()), Some("montecarlo"));
        assert_eq!(registry.names().count(), 3);
    }
}
