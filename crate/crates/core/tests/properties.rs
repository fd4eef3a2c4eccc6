use nageo::graded::{check_submultiplicative, generate_from_weights, SectionRing};
use nageo::norms::{distance, spectrum, volume, DiagNorm, Exponent};
use nageo::rational::{frac, Q};
use nageo::toric::{fs_from_weights, supnorm_weights};
use proptest::prelude::*;

fn q() -> impl Strategy<Value = Q> {
    (-12i64..=12, 1i64..=4).prop_map(|(n, d)| frac(n, d))
}

fn qs(len: usize) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec(q(), len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn swapping_norms_negates_spectrum((a, b) in (1usize..=5).prop_flat_map(|d| (qs(d), qs(d)))) {
        let (n0, n1) = (DiagNorm::<Q>::diagonal(a), DiagNorm::<Q>::diagonal(b));
        let s = spectrum(&n0, &n1).unwrap();
        let back: Vec<Q> = spectrum(&n1, &n0).unwrap().values().iter().rev().map(|x| -x).collect();
        prop_assert_eq!(s.values(), back.as_slice());
        prop_assert_eq!(volume(&n0, &n1).unwrap(), -volume(&n1, &n0).unwrap());
        for p in [Exponent::Finite(1), Exponent::Finite(3), Exponent::Infinity] {
            prop_assert_eq!(distance(&n0, &n1, p).unwrap(), distance(&n1, &n0, p).unwrap());
        }
    }

    #[test]
    fn degree_one_generation_is_submultiplicative(w in qs(3)) {
        let ring = SectionRing { n: 1, m: 2 };
        let g = generate_from_weights(ring, &w, 5).unwrap();
        prop_assert!(check_submultiplicative(&g, 5).unwrap().is_ok());
    }

    #[test]
    fn supnorm_of_fs_dominates_weights(w in qs(6), k in 1usize..=2) {
        let ring = SectionRing { n: 2, m: 1 };
        let beta = if k == 1 { w[..3].to_vec() } else { w };
        let back = supnorm_weights(k, &fs_from_weights(ring, k, &beta).unwrap()).unwrap();
        prop_assert!(back.iter().zip(&beta).all(|(a, b)| a >= b));
    }
}
