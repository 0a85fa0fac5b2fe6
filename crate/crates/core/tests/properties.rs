use ffstat::biquad::{curve_counts, genus_length, zeta_numerator};
use ffstat::eulerprod::PowerFraction;
use ffstat::ffpoly::{is_squarefree, jacobi_symbol, parse_poly};
use ffstat::lfunc::{complete_l, explicit_formula_trace, frobenius_traces, l_polynomial, rh_max_deviation};
use ffstat::moments::sample_family;
use ffstat::newton::{coeffs_from_power_sums, power_sums};
use ffstat::{CurveTriple, FiniteField, Poly, QuadChar, Sign, Variant};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn field(q: u32) -> FiniteField {
    match q {
        9 => FiniteField::prime_power(3, 2).unwrap(),
        p => FiniteField::prime(p).unwrap(),
    }
}

fn poly_strategy(max_deg: usize) -> impl Strategy<Value = (u32, Vec<u32>)> {
    prop_oneof![Just(3u32), Just(5), Just(7), Just(9)]
        .prop_flat_map(move |q| (Just(q), prop::collection::vec(0..q, 0..=max_deg + 1)))
}

fn monic(field: &FiniteField, mut coeffs: Vec<u32>) -> Poly {
    coeffs.push(1);
    Poly::from_coeffs(field, coeffs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn text_roundtrip((q, coeffs) in poly_strategy(6)) {
        let f = field(q);
        let p = Poly::from_coeffs(&f, coeffs).unwrap();
        prop_assert_eq!(parse_poly(&f, &p.to_string()).unwrap(), p.clone());
        let csv: Vec<String> = p.coeffs().iter().map(|c| c.to_string()).collect();
        if !p.is_zero() {
            prop_assert_eq!(parse_poly(&f, &csv.join(",")).unwrap(), p);
        }
    }

    #[test]
    fn division_identity((q, a) in poly_strategy(8), b in prop::collection::vec(0u32..3, 1..5)) {
        let f = field(q);
        let a = Poly::from_coeffs(&f, a).unwrap();
        let b = monic(&f, b);
        let (quo, rem) = a.div_rem(&b).unwrap();
        prop_assert!(rem.degree().map_or(true, |d| d < b.degree().unwrap()));
        prop_assert_eq!(quo.try_mul(&b).unwrap().try_add(&rem).unwrap(), a.clone());
        let g = a.gcd(&b).unwrap();
        prop_assert!(a.rem(&g).unwrap().is_zero() && b.rem(&g).unwrap().is_zero());
    }

    #[test]
    fn jacobi_is_multiplicative(a in prop::collection::vec(0u32..5, 1..6), c in prop::collection::vec(0u32..5, 1..6),
                                d in prop::collection::vec(0u32..5, 1..5)) {
        let f = field(5);
        let d = monic(&f, d);
        prop_assume!(is_squarefree(&d).unwrap());
        let (a, c) = (Poly::from_coeffs(&f, a).unwrap(), Poly::from_coeffs(&f, c).unwrap());
        prop_assume!(!a.is_zero() && !c.is_zero());
        let ac = a.try_mul(&c).unwrap();
        prop_assert_eq!(
            jacobi_symbol(&ac, &d).unwrap(),
            jacobi_symbol(&a, &d).unwrap() * jacobi_symbol(&c, &d).unwrap()
        );
    }

    #[test]
    fn lfunction_identities(q in prop_oneof![Just(3u32), Just(5), Just(7)], coeffs in prop::collection::vec(0u32..7, 1..7),
                            minus in any::<bool>()) {
        let f = field(q);
        let coeffs: Vec<u32> = coeffs.into_iter().map(|c| c % q).collect();
        let d = monic(&f, coeffs);
        prop_assume!(is_squarefree(&d).unwrap());
        let sign = if minus { Sign::Minus } else { Sign::Plus };
        let chi = QuadChar::new(&d, sign).unwrap();
        let lstar = complete_l(&l_polynomial(&chi).unwrap()).unwrap();
        prop_assert!(lstar.satisfies_functional_equation());
        prop_assert!(rh_max_deviation(lstar.coeffs(), q).unwrap() < 1e-9);
        let traces = frobenius_traces(&lstar, 6).unwrap();
        for n in 1..=6 {
            prop_assert_eq!(explicit_formula_trace(&chi, n).unwrap(), -traces.t(n));
        }
    }

    #[test]
    fn newton_roundtrip(tail in prop::collection::vec(-50i128..50, 0..8)) {
        let mut c = vec![1i128];
        c.extend(tail);
        let k = c.len() - 1;
        let t = power_sums(&c, k).unwrap();
        prop_assert_eq!(coeffs_from_power_sums(&t, k).unwrap(), c);
    }

    #[test]
    fn genus_length_is_symmetric(d in prop::array::uniform3(0usize..12)) {
        let l = genus_length(d[0], d[1], d[2]);
        prop_assert_eq!(l, genus_length(d[1], d[0], d[2]));
        prop_assert_eq!(l, genus_length(d[2], d[1], d[0]));
        prop_assert!(l >= d[0] + d[1] + d[2]);
    }

    #[test]
    fn power_fraction_matches_rationals(a in -1000i64..1000, b in -1000i64..1000, ea in 0u64..6, eb in 0u64..6) {
        let x = PowerFraction::new(BigInt::from(a), 3, ea);
        let y = PowerFraction::new(BigInt::from(b), 3, eb);
        let r = |v: i64, e: u64| BigRational::new(BigInt::from(v), BigInt::from(3).pow(e as u32));
        prop_assert_eq!(x.add(&y).to_rational(), r(a, ea) + r(b, eb));
        prop_assert_eq!(x.mul(&y).to_rational(), r(a, ea) * r(b, eb));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Sampled curves: the zeta numerator has degree 2g, satisfies RH, and reproduces
    /// the direct point counts past the degrees it was built from.
    #[test]
    fn sampled_curves_are_consistent(q in prop_oneof![Just(3u32), Just(5)], g in 0usize..4, seed in any::<u64>(),
                                     full in any::<bool>()) {
        let f = field(q);
        let variant = if full { Variant::Full } else { Variant::Monic };
        let sample = sample_family(&f, g, variant, 3, seed).unwrap();
        prop_assert_eq!(sample.clone(), sample_family(&f, g, variant, 3, seed).unwrap());
        for t in &sample {
            let rebuilt = CurveTriple::new(t.f1.clone(), t.f2.clone(), t.f3.clone(), variant);
            prop_assert!(rebuilt.is_ok());
            let data = zeta_numerator(t, 1).unwrap();
            let p_c = data.p_c.clone().unwrap();
            prop_assert_eq!(p_c.len(), 2 * g + 1);
            prop_assert!(rh_max_deviation(&p_c, q).unwrap() < 1e-9);
            let n_max = g + 3;
            let t_pc = power_sums(&p_c, n_max).unwrap();
            let direct = curve_counts(t, n_max).unwrap();
            for n in 1..=n_max {
                prop_assert_eq!(direct.trace(n), t_pc[n - 1]);
            }
        }
    }
}
