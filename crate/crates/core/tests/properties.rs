use num_complex::Complex64;
use proptest::prelude::*;

use goodbsq_core::estimates::{bilinear_resonance, quadruple_expansion, quadruple_resonance, QuadCase};
use goodbsq_core::spectral::{apply_multiplier, bracket, quadratic_product, sobolev_norm};
use goodbsq_core::{MultiplierId, Sign, SpectralField};

fn field(trunc: usize) -> impl Strategy<Value = SpectralField> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2 * trunc + 1).prop_map(move |v| {
        let coeffs = v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
        SpectralField::from_coeffs(trunc, coeffs).unwrap()
    })
}

fn real_field(trunc: usize) -> impl Strategy<Value = SpectralField> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), trunc + 1).prop_map(move |v| {
        let mut half: Vec<Complex64> = v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
        half[0].im = 0.0;
        SpectralField::real_from_half(trunc, &half).unwrap()
    })
}

fn sign() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Plus), Just(Sign::Minus)]
}

fn case() -> impl Strategy<Value = QuadCase> {
    prop_oneof![Just(QuadCase::Pm), Just(QuadCase::Pp)]
}

proptest! {
    #[test]
    fn product_equals_truncated_convolution(u in field(6), v in field(6)) {
        let p = quadratic_product(&u, &v).unwrap();
        let n = 6i64;
        for k in -n..=n {
            let mut want = Complex64::new(0.0, 0.0);
            for m in -n..=n {
                if (k - m).abs() <= n {
                    want += u.get(m) * v.get(k - m);
                }
            }
            prop_assert!((p.get(k) - want).norm() <= 1e-12 * (1.0 + want.norm()));
        }
    }

    #[test]
    fn product_of_real_fields_is_real(u in real_field(8), v in real_field(8)) {
        let p = quadratic_product(&u, &v).unwrap();
        prop_assert!(p.hermitian_defect() <= 1e-13 * (1.0 + p.l2_norm()));
        let q = quadratic_product(&v, &u).unwrap();
        prop_assert!(p.l2_distance(&q).unwrap() <= 1e-13 * (1.0 + p.l2_norm()));
    }

    #[test]
    fn sobolev_norms_are_monotone(u in field(10), s in -2.0f64..2.0, ds in 0.0f64..1.0) {
        prop_assert!(sobolev_norm(&u, s) <= sobolev_norm(&u, s + ds) * (1.0 + 1e-14));
        prop_assert!((sobolev_norm(&u, 0.0) - u.l2_norm()).abs() <= 1e-14 * (1.0 + u.l2_norm()));
    }

    #[test]
    fn bracket_powers_invert(u in field(10), s in -3.0f64..3.0) {
        let up = apply_multiplier(&u, MultiplierId::BracketPow(s)).unwrap();
        let back = apply_multiplier(&up, MultiplierId::BracketPow(-s)).unwrap();
        prop_assert!(back.l2_distance(&u).unwrap() <= 1e-12 * (1.0 + u.l2_norm()));
        let lifted = sobolev_norm(&u, s);
        prop_assert!((up.l2_norm() - lifted).abs() <= 1e-12 * (1.0 + lifted));
    }

    #[test]
    fn bytes_round_trip(u in field(7)) {
        prop_assert_eq!(SpectralField::from_bytes(&u.to_bytes()).unwrap(), u);
    }

    #[test]
    fn brackets_are_even_and_at_least_one(n in -1_000_000i64..1_000_000) {
        prop_assert_eq!(bracket(n), bracket(-n));
        prop_assert!(bracket(n) >= 1.0);
    }

    #[test]
    fn bilinear_resonance_identities(
        x1 in -1_000_000i64..1_000_000,
        x2 in -1_000_000i64..1_000_000,
        e1 in sign(),
        e2 in sign(),
    ) {
        prop_assert_eq!(bilinear_resonance(x1, x2, e1, e2), bilinear_resonance(x2, x1, e2, e1));
        prop_assert_eq!(bilinear_resonance(x1, x2, Sign::Plus, Sign::Plus), 2 * x1 * x2);
        prop_assert_eq!(
            bilinear_resonance(x1, x2, Sign::Minus, Sign::Minus),
            2 * (x1 * x1 + x1 * x2 + x2 * x2)
        );
    }

    #[test]
    fn quadruple_factorisations(
        x1 in -1_000_000i64..1_000_000,
        x2 in -1_000_000i64..1_000_000,
        x3 in -1_000_000i64..1_000_000,
        e3 in sign(),
        c in case(),
    ) {
        let xi = [x1, x2, x3, -(x1 + x2 + x3)];
        prop_assert_eq!(quadruple_resonance(xi, e3, c).unwrap(), quadruple_expansion(xi, e3, c).unwrap());
        let off = [x1, x2, x3, 1 - (x1 + x2 + x3)];
        prop_assert!(quadruple_resonance(off, e3, c).is_err());
    }
}
