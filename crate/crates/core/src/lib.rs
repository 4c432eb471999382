//! Information leakage of the Five Card Trick under biased random cuts.
//!
//! * [`arrangement`]: cards, the cut function and the AND decoding rule.
//! * [`shuffle_model`]: laws of the cut index, single and repeated.
//! * [`leakage`]: posteriors of Alice's input given the revealed cards.
//! * [`bounds`]: how many repeated cuts reach a confidentiality level.
//! * [`montecarlo`]: seeded sampling of the whole protocol.
//! * [`sweep`]: Case 1 posterior curves over a grid of ε or `T`.
//! * [`engine`]: the posterior engines behind a common trait, by name.
//!
//! Probability code is generic over [`Scalar`], so identities can be checked
//! exactly with [`Rational`] as well as in `f64`.

pub mod arrangement;
pub mod bounds;
pub mod engine;
pub mod error;
pub mod format;
pub mod leakage;
pub mod montecarlo;
pub mod scalar;
pub mod shuffle_model;
pub mod sweep;

pub use arrangement::{encode_initial, Arrangement, Bit, Card, CutIndex};
pub use bounds::{BoundQuery, BoundResult, Parity};
pub use engine::{EngineRegistry, PosteriorEngine, Scenario};
pub use error::{Error, Result};
pub use leakage::{CaseLabel, LeakageReport, PosteriorTable, PriorSpec};
pub use montecarlo::{simulate, SimConfig, SimResult};
pub use scalar::{Rational, Scalar};
pub use shuffle_model::{BiasSpec, CutChain, ShiftDistribution, ShuffleSpec};
