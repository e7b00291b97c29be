//! Property checks over random inputs.

use proptest::prelude::*;

use crepant_core::arith::{cyc_inverse, parse_rational, rat, rational_to_string, zeta_power, Cyclotomic5};
use crepant_core::verify::properties::{leibniz, t_intertwining};
use crepant_core::{Ring, Series, Var};

fn cyclotomic() -> impl Strategy<Value = Cyclotomic5> {
    proptest::array::uniform4((-40i64..40, 1i64..9))
        .prop_map(|a| Cyclotomic5::from_coeffs(a.map(|(n, d)| rat(n, d))))
}

fn unit_series(order: i64) -> impl Strategy<Value = Series> {
    proptest::collection::vec((-30i64..30, 1i64..7), order as usize).prop_map(move |v| {
        let mut coeffs = vec![rat(1, 1)];
        coeffs.extend(v.into_iter().map(|(n, d)| rat(n, d)));
        Series::from_rationals(Var::Q, coeffs, order)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn leibniz_holds_for_any_seed(seed in any::<u64>()) {
        let r = leibniz(4, seed);
        prop_assert!(r.passed(), "{}", r);
    }

    #[test]
    fn t_intertwines_derivations(seed in any::<u64>()) {
        let r = t_intertwining(4, seed).unwrap();
        prop_assert!(r.passed(), "{}", r);
    }

    #[test]
    fn cyclotomic_inverse(a in cyclotomic()) {
        prop_assume!(!a.is_zero());
        let inv = cyc_inverse(&a).unwrap();
        prop_assert_eq!(a.times(&inv), Cyclotomic5::one());
    }

    #[test]
    fn galois_conjugates_multiply_to_norm(a in cyclotomic()) {
        let prod = (1..5).fold(Cyclotomic5::one(), |acc, m| acc.times(&a.galois(m)));
        prop_assert_eq!(prod, Cyclotomic5::from_rational(a.norm()));
    }

    #[test]
    fn zeta_is_a_fifth_root(k in -20i64..20) {
        prop_assert_eq!(zeta_power(k).times(&zeta_power(5 - k)), Cyclotomic5::one());
    }

    #[test]
    fn series_inverse(f in unit_series(12)) {
        let g = f.inverse().unwrap();
        prop_assert_eq!(f.times(&g), Series::rational_constant(Var::Q, rat(1, 1), 12));
    }

    #[test]
    fn series_exp_of_derivative_sum(f in unit_series(10), g in unit_series(10)) {
        let f0 = f.minus(&Series::rational_constant(Var::Q, rat(1, 1), 10));
        let g0 = g.minus(&Series::rational_constant(Var::Q, rat(1, 1), 10));
        let lhs = f0.plus(&g0).exp().unwrap();
        let rhs = f0.exp().unwrap().times(&g0.exp().unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rational_text_roundtrip(n in -10_000i64..10_000, d in 1i64..10_000) {
        let r = rat(n, d);
        prop_assert_eq!(parse_rational(&rational_to_string(&r)).unwrap(), r);
    }
}
