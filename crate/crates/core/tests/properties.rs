use fehd_core::encoder::{encode_window, ItemMemory};
use fehd_core::gates::{self, GateKind};
use fehd_core::hv::{bundle, BundleAccumulator};
use fehd_core::{Hypervector, HvRng};
use proptest::prelude::*;

fn hv(dim: usize, seed: u64) -> Hypervector {
    Hypervector::random(dim, &mut HvRng::new(seed)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn bind_is_self_inverse(dim in 1usize..600, s1: u64, s2: u64) {
        let (a, b) = (hv(dim, s1), hv(dim, s2));
        prop_assert_eq!(a.bind(&b).unwrap().bind(&b).unwrap(), a);
    }

    #[test]
    fn bind_commutes_and_associates(dim in 1usize..300, s1: u64, s2: u64, s3: u64) {
        let (a, b, c) = (hv(dim, s1), hv(dim, s2), hv(dim, s3));
        prop_assert_eq!(a.bind(&b).unwrap(), b.bind(&a).unwrap());
        prop_assert_eq!(
            a.bind(&b).unwrap().bind(&c).unwrap(),
            a.bind(&b.bind(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn bind_preserves_distance(dim in 1usize..400, s1: u64, s2: u64, s3: u64) {
        let (a, b, c) = (hv(dim, s1), hv(dim, s2), hv(dim, s3));
        prop_assert_eq!(
            a.bind(&c).unwrap().hamming(&b.bind(&c).unwrap()).unwrap(),
            a.hamming(&b).unwrap()
        );
    }

    #[test]
    fn permute_is_an_isometry(dim in 1usize..400, k in 0usize..1000, s1: u64, s2: u64) {
        let (a, b) = (hv(dim, s1), hv(dim, s2));
        prop_assert_eq!(a.permute(k).hamming(&b.permute(k)).unwrap(), a.hamming(&b).unwrap());
        prop_assert_eq!(a.permute(k).count_ones(), a.count_ones());
        prop_assert!(a.permute(k).is_canonical());
    }

    #[test]
    fn permute_composes_and_wraps(dim in 1usize..300, j in 0usize..500, k in 0usize..500, s: u64) {
        let a = hv(dim, s);
        prop_assert_eq!(a.permute(j).permute(k), a.permute(j + k));
        prop_assert_eq!(a.permute(dim), a.clone());
        prop_assert_eq!(a.permute(k).permute(dim - k % dim), a);
    }

    #[test]
    fn permute_matches_index_map(dim in 1usize..200, k in 0usize..400, s: u64) {
        let a = hv(dim, s);
        let p = a.permute(k);
        for i in 0..dim {
            prop_assert_eq!(p.bit((i + k) % dim), a.bit(i));
        }
    }

    #[test]
    fn bundle_of_identical_copies(dim in 1usize..500, copies in 1usize..12, s: u64, t: u64) {
        let a = hv(dim, s);
        let xs = vec![a.clone(); copies];
        prop_assert_eq!(bundle(&xs, &mut HvRng::new(t)).unwrap(), a);
    }

    #[test]
    fn bundle_is_order_independent_for_odd_counts(n in 0usize..6, s: u64) {
        let xs: Vec<_> = (0..2 * n as u64 + 1).map(|i| hv(130, s ^ i)).collect();
        let mut rev = xs.clone();
        rev.reverse();
        prop_assert_eq!(
            bundle(&xs, &mut HvRng::new(1)).unwrap(),
            bundle(&rev, &mut HvRng::new(2)).unwrap()
        );
    }

    #[test]
    fn bundle_is_a_componentwise_majority(dim in 1usize..200, n in 1usize..20, s: u64) {
        let xs: Vec<_> = (0..n as u64).map(|i| hv(dim, s.wrapping_add(i))).collect();
        let out = bundle(&xs, &mut HvRng::new(s)).unwrap();
        for i in 0..dim {
            let ones = xs.iter().filter(|x| x.bit(i)).count();
            if 2 * ones > n {
                prop_assert!(out.bit(i));
            } else if 2 * ones < n {
                prop_assert!(!out.bit(i));
            }
        }
    }

    #[test]
    fn accumulator_counts(dim in 1usize..150, n in 1usize..40, s: u64) {
        let xs: Vec<_> = (0..n as u64).map(|i| hv(dim, s ^ (i << 7))).collect();
        let mut acc = BundleAccumulator::new(dim).unwrap();
        for x in &xs {
            acc.add(x).unwrap();
        }
        for i in 0..dim {
            prop_assert_eq!(acc.count_at(i), xs.iter().filter(|x| x.bit(i)).count());
        }
    }

    #[test]
    fn text_and_binary_roundtrip(dim in 1usize..300, s: u64) {
        let a = hv(dim, s);
        prop_assert_eq!(a.to_string().parse::<Hypervector>().unwrap(), a.clone());
        prop_assert_eq!(Hypervector::from_bytes(&a.to_bytes()).unwrap(), a);
    }

    #[test]
    fn window_encoding_is_deterministic(text in "[ -~]{4}", seed: u64) {
        let im = ItemMemory::with_default_alphabet(256, seed).unwrap();
        let w: Vec<char> = text.chars().collect();
        prop_assert_eq!(encode_window(&w, &im).unwrap(), encode_window(&w, &im).unwrap());
    }

    #[test]
    fn gate_current_is_monotone_in_vt(dvt1 in -0.2f64..0.2, dvt2 in -0.2f64..0.2) {
        prop_assume!(dvt1 < dvt2);
        for kind in [GateKind::Xor2, GateKind::Majority3] {
            for (a, b) in gates::truth_table(kind, dvt1).iter().zip(gates::truth_table(kind, dvt2)) {
                prop_assert!(a.current >= b.current);
            }
        }
    }
}
