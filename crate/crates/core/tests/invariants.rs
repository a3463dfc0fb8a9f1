use airy_core::ff::{build_field, embed, field_hom, FieldElement, DEFAULT_BUDGET};
use airy_core::fiber::{fiber_l_poly, AiryFamily};
use airy_core::polyser::{poly_from_power_sums, power_sums_from_poly, series_exp, series_log, TruncSeries};
use airy_core::ring::Ring;
use airy_core::swan::{count_s, gen_f, infinity_model, list_s, predicted_degree, swan_sym, sym_rank, SCountKey};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn small_field() -> impl Strategy<Value = (u64, usize)> {
    (prop::sample::select(vec![3u64, 5, 7]), 1usize..=3)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms((p, n) in small_field(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let f = build_field(p, n).unwrap();
        let el = |x: u64| FieldElement::from_index(&f, x as u128 % f.size()).unwrap();
        let (a, b, c) = (el(a), el(b), el(c));
        prop_assert_eq!(a.mul_ref(&b).mul_ref(&c), a.mul_ref(&b.mul_ref(&c)));
        prop_assert_eq!(a.mul_ref(&b.add_ref(&c)), a.mul_ref(&b).add_ref(&a.mul_ref(&c)));
        prop_assert_eq!(a.pow_big(f.size()), a.clone());
        prop_assert_eq!(a.add_ref(&b).frobenius(), a.frobenius().add_ref(&b.frobenius()));
        prop_assert_eq!(a.mul_ref(&b).frobenius(), a.frobenius().mul_ref(&b.frobenius()));
        if let Some(inv) = a.inv() {
            prop_assert!(a.mul_ref(&inv).is_one());
        } else {
            prop_assert!(a.is_zero());
        }
        prop_assert_eq!(a.absolute_trace(), a.absolute_trace_by_frobenius());
    }

    #[test]
    fn embeddings_are_ring_maps((p, n) in small_field(), m in 2usize..=3, a in any::<u64>(), b in any::<u64>()) {
        let hom = field_hom(p, n, n * m).unwrap();
        let f = hom.source().clone();
        let el = |x: u64| FieldElement::from_index(&f, x as u128 % f.size()).unwrap();
        let (a, b) = (el(a), el(b));
        let (ea, eb) = (embed(&a, &hom).unwrap(), embed(&b, &hom).unwrap());
        prop_assert_eq!(embed(&a.add_ref(&b), &hom).unwrap(), ea.add_ref(&eb));
        prop_assert_eq!(embed(&a.mul_ref(&b), &hom).unwrap(), ea.mul_ref(&eb));
        prop_assert_eq!(hom.preimage(&ea), Some(a));
    }

    #[test]
    fn log_inverts_exp(c in prop::collection::vec((-20i64..20, 1i64..6), 1..8)) {
        let mut coeffs = vec![rat(0, 1)];
        coeffs.extend(c.iter().map(|&(n, d)| rat(n, d)));
        let s = TruncSeries::new(coeffs);
        let back = series_log(&series_exp(&s).unwrap()).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn power_sums_round_trip(c in prop::collection::vec(-30i64..30, 1..7)) {
        let mut coeffs = vec![rat(1, 1)];
        coeffs.extend(c.iter().map(|&n| rat(n, 1)));
        let poly = airy_core::polyser::Poly::new(coeffs);
        let r = poly.degree().unwrap();
        let ps = power_sums_from_poly(&poly, r).unwrap();
        prop_assert_eq!(poly_from_power_sums(&ps, &rat(1, 1)).unwrap(), poly);
    }
}

fn family() -> impl Strategy<Value = AiryFamily> {
    (prop::sample::select(vec![(7u64, 3usize), (11, 3), (11, 4), (13, 4), (13, 5), (11, 5)]), prop::collection::vec(0i64..13, 6))
        .prop_map(|((p, d), mut c)| {
            c.truncate(d + 1);
            if c[d] % p as i64 == 0 {
                c[d] = 1;
            }
            AiryFamily::from_ints(p, 1, &c).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn swan_of_standard_representation_is_degree(fam in family()) {
        prop_assert_eq!(swan_sym(&fam, 1).unwrap() as usize, fam.degree());
        prop_assert_eq!(predicted_degree(&fam, 0).unwrap(), -1);
    }

    #[test]
    fn predicted_degree_is_swan_minus_rank(fam in family(), k in 0usize..8) {
        let d = fam.degree();
        prop_assert_eq!(
            predicted_degree(&fam, k).unwrap(),
            swan_sym(&fam, k).unwrap() as i64 - sym_rank(d, k) as i64
        );
    }

    #[test]
    fn gaps_telescope_to_largest_exponent(fam in family()) {
        let model = infinity_model(&fam).unwrap();
        let total: usize = model.gaps.iter().map(|&(_, h)| h).sum();
        prop_assert_eq!(total, *model.support.last().unwrap());
    }

    #[test]
    fn counts_agree_with_listing_and_generating_function(fam in family(), k in 0usize..7) {
        let model = infinity_model(&fam).unwrap();
        let dm1 = fam.degree() - 1;
        for &(j, _) in &model.gaps {
            let set = model.support_from(j);
            let key = SCountKey::new(dm1, k, &set);
            let n = count_s(&key, &model.zeta);
            prop_assert_eq!(n as usize, list_s(&key, &model.zeta).len());
            // the character sum runs over F_Q^#I and is skipped past the budget
            match gen_f(&set, dm1, k + 1, &model.zeta, 1 << 20) {
                Ok(series) => prop_assert_eq!(series.coeffs()[k].clone(), BigInt::from(n)),
                Err(airy_core::Error::TooLarge { .. }) => {}
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        }
    }

    #[test]
    fn fibers_are_pure_of_degree_d_minus_one(fam in family(), t in 0u64..13) {
        let t = FieldElement::from_int(fam.base(), t as i64);
        let fiber = fiber_l_poly(&fam, 1, &t, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(fiber.l.degree(), Some(fam.degree() - 1));
        prop_assert!(fiber.weight_deviation() < 1e-9);
    }
}
