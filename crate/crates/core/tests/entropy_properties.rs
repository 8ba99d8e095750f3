use entropic_core::entropy::*;
use proptest::prelude::*;

fn distribution(max_len: usize) -> impl Strategy<Value = DiscreteDistribution> {
    prop::collection::vec(0.0f64..1.0, 1..=max_len).prop_filter_map("all-zero weights", |w| {
        let sum: f64 = w.iter().sum();
        (sum > 1e-6)
            .then(|| DiscreteDistribution::new(w.iter().map(|x| x / sum).collect()).unwrap())
    })
}

const ORDERS: [f64; 5] = [0.25, 0.5, 2.0, 3.0, 10.0];

proptest! {
    #[test]
    fn pnorm_identity(d in distribution(16)) {
        for alpha in ORDERS {
            let direct = renyi_entropy(&d, alpha, LogBase::Two).unwrap();
            let pnorm = renyi_entropy_pnorm(&d, alpha, LogBase::Two).unwrap();
            prop_assert!((direct - pnorm).abs() <= 1e-10, "α={alpha}: {direct} vs {pnorm}");
        }
    }

    #[test]
    fn renyi_approaches_shannon(d in distribution(16)) {
        let h = shannon_entropy(&d, LogBase::Two);
        for alpha in [1.0 - 1e-3, 1.0 + 1e-3] {
            let r = renyi_entropy(&d, alpha, LogBase::Two).unwrap();
            prop_assert!((r - h).abs() <= 5e-3, "α={alpha}: {r} vs {h}");
        }
    }

    #[test]
    fn shannon_bounded_by_log_n(d in distribution(16)) {
        let h = shannon_entropy(&d, LogBase::Two);
        let max = (d.len() as f64).log2();
        prop_assert!(h >= 0.0);
        prop_assert!(h <= max + 1e-9);
    }

    #[test]
    fn renyi_non_increasing_in_order(d in distribution(16), a in 0.0f64..5.0, b in 0.0f64..5.0) {
        prop_assume!(a != 1.0 && b != 1.0);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let h_lo = renyi_entropy(&d, lo, LogBase::Two).unwrap();
        let h_hi = renyi_entropy(&d, hi, LogBase::Two).unwrap();
        prop_assert!(h_lo >= h_hi - 1e-12, "H_{lo}={h_lo} < H_{hi}={h_hi}");
    }

    #[test]
    fn thermodynamic_is_scaled_natural_shannon(d in distribution(16)) {
        let s = thermodynamic_entropy(&d);
        prop_assert!((s - BOLTZMANN * shannon_entropy(&d, LogBase::E)).abs() <= 1e-30);
    }

    #[test]
    fn histogram_distribution_normalized(counts in prop::collection::vec(0u64..1000, 1..20)) {
        prop_assume!(counts.iter().any(|&c| c > 0));
        let edges: Vec<f64> = (0..=counts.len()).map(|i| i as f64).collect();
        let h = Histogram::new(edges, counts).unwrap();
        let d = distribution_from_histogram(&h).unwrap();
        prop_assert!((d.probs().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn uniform_attains_log_n() {
    for n in 1..=16 {
        let u = DiscreteDistribution::uniform(n).unwrap();
        let max = (n as f64).log2();
        assert!((shannon_entropy(&u, LogBase::Two) - max).abs() <= 1e-9);
        for alpha in ORDERS {
            assert!((renyi_entropy(&u, alpha, LogBase::Two).unwrap() - max).abs() <= 1e-9);
        }
    }
    // Non-uniform stays strictly below the bound.
    let d = DiscreteDistribution::new(vec![0.5, 0.3, 0.2]).unwrap();
    assert!(shannon_entropy(&d, LogBase::Two) < 3f64.log2() - 1e-9);
}
