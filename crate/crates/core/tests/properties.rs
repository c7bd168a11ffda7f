use proptest::prelude::*;

use quantcap::capacity::gaussian::normal_cdf;
use quantcap::capacity::{mutual_information_bits, ChannelMatrix};
use quantcap::code::{balanced_gray, construct_code, reflected_gray, TransitionSpec};
use quantcap::polynomial::{RealPolynomial, RootList};
use quantcap::quantizer::Quantizer;

fn spaced_roots(max: usize) -> impl Strategy<Value = Vec<f64>> {
    (-5.0..0.0f64, prop::collection::vec(0.2..2.0f64, 1..=max)).prop_map(|(x0, gaps)| {
        gaps.iter()
            .scan(x0, |x, g| {
                *x += g;
                Some(*x)
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn roots_are_recovered(roots in spaced_roots(6), lead in prop_oneof![-3.0..-0.5f64, 0.5..3.0f64]) {
        let p = RealPolynomial::from_roots(&RootList::new(roots.clone()), lead);
        let got = p.real_roots(1e-9).unwrap();
        prop_assert_eq!(got.len(), roots.len());
        for (g, r) in got.as_slice().iter().zip(&roots) {
            prop_assert!((g - r).abs() < 1e-7, "{} vs {}", g, r);
        }
    }

    #[test]
    fn partition_labels_match_quantize(r1 in spaced_roots(3), r2 in spaced_roots(3), t in -0.5..0.5f64) {
        let polys = vec![
            RealPolynomial::from_roots(&RootList::new(r1), 1.0),
            RealPolynomial::from_roots(&RootList::new(r2), -1.0),
        ];
        let delta = polys.iter().map(RealPolynomial::degree).max().unwrap();
        let q = Quantizer::new(2, delta, polys, vec![vec![t], vec![-t]]).unwrap();
        let part = q.partition().unwrap();
        for (iv, label) in part.intervals.iter().zip(&part.labels) {
            let y = match (iv.lo.is_finite(), iv.hi.is_finite()) {
                (true, true) => 0.5 * (iv.lo + iv.hi),
                (true, false) => iv.lo + 1.0,
                (false, true) => iv.hi - 1.0,
                (false, false) => 0.0,
            };
            prop_assert_eq!(&q.quantize(y), label);
        }
    }

    #[test]
    fn constructed_counts(n_q in 1usize..=6, base in 0usize..=3, bumps in prop::collection::vec(any::<bool>(), 6)) {
        let kappas: Vec<usize> = (0..n_q).map(|j| 2 * base + if bumps[j] { 2 } else { 0 }).collect();
        let code = construct_code(&TransitionSpec::binary(kappas.clone())).unwrap();
        prop_assert_eq!(code.transition_counts(), kappas.clone());
        // zero counts leave a single codeword
        prop_assert!(code.len() == 1 || code.is_closed());
        let total: usize = kappas.iter().sum();
        prop_assert_eq!(code.code_size(), total.min(1 << n_q).max(1));
        for w in code.codewords().windows(2) {
            prop_assert_eq!(w[0].l1_distance(&w[1]), 1);
        }
    }

    #[test]
    fn mutual_information_is_bounded(rows in prop::collection::vec(prop::collection::vec(0.01..1.0f64, 3), 2..6),
                                     weights in prop::collection::vec(0.01..1.0f64, 6)) {
        let rows: Vec<Vec<f64>> = rows.iter().map(|r| {
            let s: f64 = r.iter().sum();
            r.iter().map(|v| v / s).collect()
        }).collect();
        let n = rows.len();
        let w = ChannelMatrix::from_rows(rows).unwrap();
        let s: f64 = weights[..n].iter().sum();
        let p: Vec<f64> = weights[..n].iter().map(|v| v / s).collect();
        let i = mutual_information_bits(&w, &p);
        prop_assert!(i >= -1e-12);
        prop_assert!(i <= (3f64).log2().min((n as f64).log2()) + 1e-12);
    }
}

#[test]
fn gray_codes_visit_every_word_once() {
    for n in 1..=8 {
        for code in [reflected_gray(n), balanced_gray(n)] {
            assert_eq!(code.len(), (1 << n) + 1);
            assert!(code.is_closed());
            assert_eq!(code.code_size(), 1 << n);
            let counts = code.transition_counts();
            assert_eq!(counts.iter().sum::<usize>(), 1 << n);
        }
        let b = balanced_gray(n).transition_counts();
        assert!(b.iter().max().unwrap() - b.iter().min().unwrap() <= 2, "n = {n}: {b:?}");
    }
}

#[test]
fn normal_cdf_symmetry() {
    for k in -80..=80 {
        let z = k as f64 * 0.1;
        assert!((normal_cdf(z) + normal_cdf(-z) - 1.0).abs() < 1e-15);
    }
}
