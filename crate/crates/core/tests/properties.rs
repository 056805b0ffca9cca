use proptest::prelude::*;

use gamma_core::homological::{homology, ChainComplex};
use gamma_core::localization::{close_multiplicative, localize};
use gamma_core::module::GammaModule;
use gamma_core::obstruction::{binary_fraction_equal, shadow_search, BinaryRing, ShadowOptions};
use gamma_core::snf::invariant_factors;
use gamma_core::GammaSemiring;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn det3(m: &[Vec<i64>]) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn snf_invariant_under_row_and_column_operations(
        entries in prop::collection::vec(-9i64..10, 9),
        ops in prop::collection::vec((0usize..3, 0usize..3, -3i64..4, any::<bool>()), 0..6),
    ) {
        let m: Vec<Vec<i64>> = entries.chunks(3).map(|r| r.to_vec()).collect();
        let mut n = m.clone();
        for (i, j, k, on_rows) in ops {
            if i == j {
                continue;
            }
            for x in 0..3 {
                if on_rows {
                    n[j][x] += k * n[i][x];
                } else {
                    n[x][j] += k * n[x][i];
                }
            }
        }
        prop_assert_eq!(invariant_factors(&m, 3).unwrap(), invariant_factors(&n, 3).unwrap());
    }

    #[test]
    fn snf_order_is_determinant(entries in prop::collection::vec(-9i64..10, 9)) {
        let m: Vec<Vec<i64>> = entries.chunks(3).map(|r| r.to_vec()).collect();
        let d = det3(&m).unsigned_abs();
        prop_assume!(d != 0);
        let f = invariant_factors(&m, 3).unwrap();
        prop_assert_eq!(f.iter().product::<u64>(), d);
        prop_assert!(f.windows(2).all(|w| w[1] % w[0] == 0));
    }

    #[test]
    fn binary_fraction_equality_is_reflexive_and_symmetric(
        n in 2usize..13, a in 0usize..13, b in 0usize..13, si in 0usize..13, ti in 0usize..13,
    ) {
        let r = BinaryRing::cyclic(n).unwrap();
        let units: Vec<usize> = (1..n).filter(|&x| gcd(x as u64, n as u64) == 1).collect();
        let simg = r.multiplicative_closure(&units);
        let (a, b) = (a % n, b % n);
        let (s, t) = (simg[si % simg.len()], simg[ti % simg.len()]);
        prop_assert!(binary_fraction_equal(&r, &simg, a, s, a, s).unwrap().is_some());
        prop_assert_eq!(
            binary_fraction_equal(&r, &simg, a, s, b, t).unwrap().is_some(),
            binary_fraction_equal(&r, &simg, b, t, a, s).unwrap().is_some()
        );
    }

    /// `Z_n --c--> Z_n`: kernel and cokernel both have order gcd(c, n).
    #[test]
    fn homology_of_multiplication(n in 1usize..9, c in 0usize..9) {
        let t = GammaSemiring::standard_family(3, &[1]).unwrap();
        let z = GammaModule::cyclic_zero_action(&t, n).unwrap();
        let k = ChainComplex::new(0, vec![z.clone(), z], vec![vec![0; n], (0..n).map(|x| x * c % n).collect()]).unwrap();
        let g = gcd(c as u64, n as u64) as usize;
        prop_assert_eq!(homology(&k, 0).unwrap().module.size(), g);
        prop_assert_eq!(homology(&k, 1).unwrap().module.size(), g);
        prop_assert!(homology(&k, 2).unwrap().is_zero());
    }

    #[test]
    fn localization_never_splits_raw_classes(n in 2usize..7, g in 1usize..6, seed in 1usize..6) {
        let t = GammaSemiring::standard_family(n, &[g % n]).unwrap();
        if let Ok(sys) = close_multiplicative(&t, &[seed % n]) {
            let l = localize(&t, &sys).unwrap();
            prop_assert!(l.class_count() <= l.raw_class_count());
            prop_assert!(!l.raw_equals_closure() || l.class_count() == l.raw_class_count());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// Enlarging the ring family only adds rings; earlier verdicts persist.
    #[test]
    fn shadow_search_is_monotone(n in 2usize..7, bound in 2usize..11) {
        let t = GammaSemiring::standard_family(n, &[1]).unwrap();
        let sys = close_multiplicative(&t, &[1]).unwrap();
        let small = shadow_search(&t, &sys, &ShadowOptions { max_ring: bound, ..ShadowOptions::default() }).unwrap();
        let large = shadow_search(&t, &sys, &ShadowOptions { max_ring: bound + 1, ..ShadowOptions::default() }).unwrap();
        prop_assert!(small.candidates <= large.candidates);
        prop_assert!(small.satisfying.len() <= large.satisfying.len());
        prop_assert!(small.satisfying.iter().all(|c| large.satisfying.contains(c)));
        for r in &small.rings {
            prop_assert!(large.rings.contains(r));
        }
    }
}
