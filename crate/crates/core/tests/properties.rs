use std::collections::BTreeSet;

use fivecard_core::arrangement::{
    all_arrangements, final_set, initial_set, leaky_finals, restricted_final_set,
    restricted_initial_set,
};
use fivecard_core::leakage::{
    adversary_report, case2_marginal, final_marginals, posterior_closed_single,
    posterior_exact_labeled,
};
use fivecard_core::scalar::Rational;
use fivecard_core::shuffle_model::bias_to_distribution;
use fivecard_core::{
    encode_initial, Arrangement, BiasSpec, Bit, CaseLabel, CutIndex, PriorSpec, Scalar,
    ShiftDistribution,
};
use proptest::prelude::*;

fn cut() -> impl Strategy<Value = CutIndex> {
    (0u64..5).prop_map(|k| CutIndex::new(k).unwrap())
}

fn arrangement() -> impl Strategy<Value = Arrangement> {
    prop::sample::select(all_arrangements())
}

fn epsilon() -> impl Strategy<Value = f64> {
    -0.8f64..=0.2
}

fn bit() -> impl Strategy<Value = Bit> {
    prop::bool::ANY.prop_map(|b| if b { Bit::One } else { Bit::Zero })
}

proptest! {
    #[test]
    fn rotations_compose(x in arrangement(), j in cut(), k in cut()) {
        prop_assert_eq!(x.rotate(j).rotate(k), x.rotate(j.then(k)));
        prop_assert_eq!(x.rotate(k).evaluate_and(), x.evaluate_and());
    }

    #[test]
    fn encoding_computes_and(a in bit(), b in bit(), k in cut()) {
        let initial = encode_initial(a, b);
        prop_assert_eq!(initial.rotate(k).evaluate_and(), a.and(b));
        prop_assert!(initial_set().contains(&initial));
    }

    #[test]
    fn text_round_trip(x in arrangement()) {
        let text = x.to_string();
        prop_assert_eq!(text.parse::<Arrangement>().unwrap(), x);
    }

    #[test]
    fn closed_single_matches_enumeration(eps in epsilon(), s in cut()) {
        let bias = BiasSpec::new(eps, s).unwrap();
        let exact = posterior_exact_labeled(&PriorSpec::default(), &bias.distribution(), s);
        let closed = posterior_closed_single(&bias);
        prop_assert!(closed.max_abs_difference(&exact).unwrap() < 1e-12);
    }

    #[test]
    fn case1_rows_are_complementary(eps in epsilon(), s in cut()) {
        let table = posterior_closed_single(&BiasSpec::new(eps, s).unwrap());
        for row in table.reachable() {
            let total: f64 = row.posteriors.values().sum();
            prop_assert!((total - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn sign_structure(eps in -0.8f64..=0.2, s in cut()) {
        prop_assume!(eps.abs() > 1e-9);
        let table = posterior_closed_single(&BiasSpec::new(eps, s).unwrap());
        for initial in restricted_initial_set() {
            let same = *table.get(&initial, &initial.rotate(s)).unwrap();
            let partner = initial.partner().unwrap();
            let other = *table.get(&initial, &partner.rotate(s)).unwrap();
            if eps > 0.0 {
                prop_assert!(same < 0.5 && 0.5 < other);
            } else {
                prop_assert!(same > 0.5 && 0.5 > other);
            }
        }
    }

    /// `P(f(I, s) = f(I, r))` is the probability of the single matching index.
    #[test]
    fn cut_function_is_one_to_one(eps in epsilon(), s in cut(), r in cut()) {
        let dist = bias_to_distribution(&BiasSpec::new(eps, s).unwrap());
        for initial in restricted_initial_set() {
            let target = initial.rotate(r);
            let matches: Vec<CutIndex> =
                CutIndex::all().filter(|k| initial.rotate(*k) == target).collect();
            prop_assert_eq!(&matches, &vec![r]);
            let p: f64 = matches.iter().map(|k| dist.prob(*k)).sum();
            prop_assert_eq!(p, *dist.prob(r));
        }
    }

    #[test]
    fn map_guess_beats_coin_flip(eps in epsilon(), s in cut()) {
        let report = adversary_report(&PriorSpec::default(), &bias_to_distribution(&BiasSpec::new(eps, s).unwrap()));
        prop_assert!(report.map_guess_success >= 0.5 - 1e-15);
        let total: f64 = report.final_marginals.values().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        if report.max_deviation > 1e-12 {
            prop_assert!(report.map_guess_success > 0.5);
        }
    }

    #[test]
    fn exact_handles_arbitrary_priors(w in prop::array::uniform4(0.0f64..1.0), eps in epsilon(), s in cut()) {
        prop_assume!(w.iter().sum::<f64>() > 1e-3);
        let total: f64 = w.iter().sum();
        let weights = initial_set().into_iter().zip(w).map(|(i, x)| (i, x / total)).collect();
        let prior = PriorSpec::new(weights).unwrap();
        let dist = bias_to_distribution(&BiasSpec::new(eps, s).unwrap());
        let table = posterior_exact_labeled(&prior, &dist, s);
        for row in table.reachable() {
            let sum: f64 = row.posteriors.values().sum();
            prop_assert!((sum - 1.0).abs() < 1e-12);
        }
        let marginal: f64 = final_marginals(&prior, &dist).values().sum();
        prop_assert!((marginal - 1.0).abs() < 1e-12);
    }
}

#[test]
fn full_and_restricted_sets() {
    let images: BTreeSet<_> = [Bit::Zero, Bit::One]
        .into_iter()
        .flat_map(|a| [Bit::Zero, Bit::One].map(|b| encode_initial(a, b)))
        .collect();
    assert_eq!(images, initial_set());
    assert_eq!(final_set().len(), 10);
    let rotations: BTreeSet<_> = restricted_initial_set()
        .iter()
        .flat_map(|i| CutIndex::all().map(|k| i.rotate(k)))
        .collect();
    assert_eq!(rotations, restricted_final_set());
    assert_eq!(rotations.len(), 5);
}

#[test]
fn case2_posteriors_are_exactly_half() {
    for num in -16..=4i64 {
        let eps = Rational::ratio(num, 20);
        for s in CutIndex::all() {
            let bias = BiasSpec::new(eps.clone(), s).unwrap();
            let table = posterior_exact_labeled(&PriorSpec::default(), &bias.distribution(), s);
            let leaky = leaky_finals(s);
            for f in restricted_final_set() {
                if leaky.contains(&f) {
                    continue;
                }
                if case2_marginal(&eps) == Rational::ratio(0, 1) {
                    assert_eq!(table.case_of(&f), CaseLabel::Unreachable);
                } else {
                    assert!(table
                        .row(&f)
                        .unwrap()
                        .posteriors
                        .values()
                        .all(|p| *p == Rational::half()));
                }
            }
        }
    }
}

#[test]
fn uniform_cut_leaks_nothing_for_any_prior_over_restricted_inputs() {
    let u = ShiftDistribution::<f64>::uniform();
    let prior = PriorSpec::default();
    let report = adversary_report(&prior, &u);
    assert_eq!(report.max_deviation, 0.0);
    assert_eq!(report.map_guess_success, 0.5);
}
