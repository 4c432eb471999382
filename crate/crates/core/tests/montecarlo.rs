use fivecard_core::leakage::posterior_exact_labeled;
use fivecard_core::shuffle_model::chain_distribution_power;
use fivecard_core::{simulate, BiasSpec, CutChain, CutIndex, PriorSpec, SimConfig};

const N: u64 = 1_000_000;

#[test]
fn unbiased_posteriors_are_half() {
    let config = SimConfig::new(PriorSpec::default(), BiasSpec::unbiased().into(), N, 42).unwrap();
    let result = simulate(&config);
    for (_, _, p) in result.empirical_posterior.entries() {
        assert!((p - 0.5).abs() <= 3.0 * result.std_error_bound, "{p}");
    }
}

#[test]
fn biased_posterior_matches_exact_value() {
    let bias = BiasSpec::new(0.1, CutIndex::ZERO).unwrap();
    let result = simulate(&SimConfig::new(PriorSpec::default(), bias.into(), N, 7).unwrap());
    let rbbrb = "rBBrB".parse().unwrap();
    let p = result.empirical_posterior.get(&rbbrb, &rbbrb).unwrap();
    let se = result.conditional_std_error(&rbbrb).unwrap();
    assert!((p - 4.0 / 13.0).abs() <= 3.0 * se, "{p}");
}

#[test]
fn empirical_posteriors_converge_on_the_grid() {
    for eps in [-0.4, 0.0, 0.1, 0.2] {
        for s in CutIndex::all() {
            let bias = BiasSpec::new(eps, s).unwrap();
            let exact = posterior_exact_labeled(&PriorSpec::default(), &bias.distribution(), s);
            let seed = 1000 + s.get() as u64;
            let result =
                simulate(&SimConfig::new(PriorSpec::default(), bias.into(), N, seed).unwrap());
            assert_eq!(result.empirical_and_rate, 0.0);
            // Same support on both sides.
            result
                .empirical_posterior
                .max_abs_difference(&exact)
                .unwrap();
            let z = result.max_sigma_multiple(&exact).unwrap();
            assert!(z < 5.0, "eps {eps} s* {s}: {z} sigma");
        }
    }
}

#[test]
fn chain_histogram_matches_matrix_power() {
    for (a, t) in [(0.0, 3), (0.1, 1), (0.6, 5), (0.9, 12)] {
        let chain = CutChain::new(a, t).unwrap();
        let result =
            simulate(&SimConfig::new(PriorSpec::default(), chain.into(), 200_000, 3).unwrap());
        let expected = chain_distribution_power(&chain).unwrap();
        let diff = result
            .empirical_shift_distribution()
            .max_abs_difference(&expected);
        assert!(diff < 5.0 * result.std_error_bound, "a {a} T {t}: {diff}");
    }
}
