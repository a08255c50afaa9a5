//! Exact Wilcoxon p-values checked against direct sign enumeration.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wsn_core::stats::{normal_approx_p, Method};
use wsn_core::{wilcoxon_signed_rank, Alternative, PairedSample};

fn average_ranks(abs: &[f64]) -> Vec<f64> {
    let n = abs.len();
    let mut ranks = vec![0.0; n];
    for i in 0..n {
        let below = abs.iter().filter(|&&v| v < abs[i]).count();
        let equal = abs.iter().filter(|&&v| v == abs[i]).count();
        ranks[i] = below as f64 + (equal as f64 + 1.0) / 2.0;
    }
    ranks
}

/// p-value by listing all 2^n sign assignments of the observed ranks.
fn enumeration_p(diffs: &[f64], alternative: Alternative) -> f64 {
    let d: Vec<f64> = diffs.iter().copied().filter(|&v| v != 0.0).collect();
    let n = d.len();
    let ranks = average_ranks(&d.iter().map(|v| v.abs()).collect::<Vec<_>>());
    let observed: f64 = d.iter().zip(&ranks).filter(|(v, _)| **v > 0.0).map(|(_, r)| r).sum();
    let (mut ge, mut le) = (0u64, 0u64);
    for mask in 0u64..(1 << n) {
        let w: f64 = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| ranks[i]).sum();
        if w >= observed {
            ge += 1;
        }
        if w <= observed {
            le += 1;
        }
    }
    let total = (1u64 << n) as f64;
    let (upper, lower) = (ge as f64 / total, le as f64 / total);
    match alternative {
        Alternative::Greater => upper,
        Alternative::Less => lower,
        Alternative::TwoSided => (2.0 * upper.min(lower)).min(1.0),
    }
}

fn sample(d: &[f64]) -> PairedSample {
    PairedSample::from_differences(("a".into(), "b".into()), d.iter().copied())
}

const ALTERNATIVES: [Alternative; 3] = [Alternative::TwoSided, Alternative::Less, Alternative::Greater];

#[test]
fn all_positive_eight_is_one_over_256() {
    let d: Vec<f64> = (1..=8).map(f64::from).collect();
    let r = wilcoxon_signed_rank(&sample(&d), Alternative::Greater).unwrap();
    assert_eq!(r.p_value, 1.0 / 256.0);
    assert_eq!(enumeration_p(&d, Alternative::Greater), 1.0 / 256.0);
}

#[test]
fn exact_p_matches_enumeration_for_small_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..400 {
        let n = rng.gen_range(1..=12);
        // half the cases draw small integers so ties and zeros are common
        let d: Vec<f64> = (0..n)
            .map(|_| if case % 2 == 0 { f64::from(rng.gen_range(-4i32..=4)) } else { rng.gen_range(-10.0..10.0) })
            .collect();
        if d.iter().all(|&v| v == 0.0) {
            continue;
        }
        for alt in ALTERNATIVES {
            let r = wilcoxon_signed_rank(&sample(&d), alt).unwrap();
            assert_eq!(r.method, Method::Exact);
            let oracle = enumeration_p(&d, alt);
            assert!((r.p_value - oracle).abs() <= 1e-12, "{d:?} {alt:?}: {} vs {oracle}", r.p_value);
        }
    }
}

#[test]
fn exact_and_normal_approximation_agree_for_moderate_n() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let n = rng.gen_range(15..=25);
        let shift = rng.gen_range(-1.0..1.0);
        let d: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0) + shift).collect();
        for alt in ALTERNATIVES {
            let exact = wilcoxon_signed_rank(&sample(&d), alt).unwrap().p_value;
            let approx = normal_approx_p(&d, alt);
            assert!((exact - approx).abs() <= 0.02, "n={n} {alt:?}: {exact} vs {approx}");
        }
    }
}

#[test]
fn large_samples_use_normal_approximation() {
    let d: Vec<f64> = (1..=30).map(|i| if i % 3 == 0 { -f64::from(i) } else { f64::from(i) }).collect();
    let r = wilcoxon_signed_rank(&sample(&d), Alternative::TwoSided).unwrap();
    assert_eq!(r.method, Method::NormalApproximation);
    assert!((0.0..=1.0).contains(&r.p_value));
}

proptest! {
    #[test]
    fn p_invariant_under_positive_rescaling(
        d in prop::collection::vec(-50i32..50, 1..16),
        scale in 0.01f64..1000.0,
    ) {
        prop_assume!(d.iter().any(|&v| v != 0));
        let base: Vec<f64> = d.iter().map(|&v| f64::from(v)).collect();
        let scaled: Vec<f64> = base.iter().map(|v| v * scale).collect();
        for alt in ALTERNATIVES {
            let p1 = wilcoxon_signed_rank(&sample(&base), alt).unwrap().p_value;
            let p2 = wilcoxon_signed_rank(&sample(&scaled), alt).unwrap().p_value;
            prop_assert_eq!(p1, p2);
        }
    }

    #[test]
    fn sign_flip_swaps_one_sided_p(d in prop::collection::vec(-50i32..50, 1..40)) {
        prop_assume!(d.iter().any(|&v| v != 0));
        let pos: Vec<f64> = d.iter().map(|&v| f64::from(v)).collect();
        let neg: Vec<f64> = pos.iter().map(|v| -v).collect();
        let p = |x: &[f64], alt| wilcoxon_signed_rank(&sample(x), alt).unwrap().p_value;
        prop_assert!((p(&pos, Alternative::Greater) - p(&neg, Alternative::Less)).abs() <= 1e-15);
        prop_assert!((p(&pos, Alternative::Less) - p(&neg, Alternative::Greater)).abs() <= 1e-15);
        prop_assert!((p(&pos, Alternative::TwoSided) - p(&neg, Alternative::TwoSided)).abs() <= 1e-15);
    }

    #[test]
    fn p_value_is_a_probability(d in prop::collection::vec(-1e3f64..1e3, 1..60)) {
        prop_assume!(d.iter().any(|&v| v != 0.0));
        for alt in ALTERNATIVES {
            let r = wilcoxon_signed_rank(&sample(&d), alt).unwrap();
            prop_assert!((0.0..=1.0).contains(&r.p_value));
            prop_assert_eq!(r.method == Method::Exact, r.n_effective <= 25);
        }
    }
}
