use kdf_reductions::reductions::{coeff_t1, coeff_t2, coeff_t3};
use kdf_reductions::verify::{brute_coefficient, sample_params, VerifyConfig};
use kdf_reductions::{
    build_identity, eval_float, make_kdf, make_pfq, make_sd, pochhammer, pole_check, taylor_coeffs, term_coeff,
    ArgMonomial, EvalOptions, IdentityId, KdfShape, Rational, ReductionParams, SdParam, SdShape, SeriesSpec,
    WeightedParam,
};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(p, q)| Rational::from(p) / Rational::from(q))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |r| !r.is_zero())
}

/// Never a nonpositive integer, so safe in a denominator.
fn safe_den() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 2i64..=6)
        .prop_filter("non-integer", |(p, q)| p % q != 0)
        .prop_map(|(p, q)| Rational::from(p) / Rational::from(q))
}

fn weights(n: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..=2, n).prop_filter("not all zero", |w| w.iter().any(|&x| x > 0))
}

fn arg() -> impl Strategy<Value = ArgMonomial> {
    (nonzero_rational(), 1u32..=2).prop_map(|(c, d)| ArgMonomial::new(c, d))
}

/// Random series over 1 to 3 indices with non-polar denominators.
fn spec() -> impl Strategy<Value = SeriesSpec> {
    (1usize..=3).prop_flat_map(|n| {
        let num = prop::collection::vec((rational(), weights(n)), 0..=3);
        let den = prop::collection::vec((safe_den(), weights(n)), 0..=2);
        let args = prop::collection::vec(arg(), n);
        (Just(n), num, den, args).prop_map(|(n, num, den, args)| {
            let wp = |v: Vec<(Rational, Vec<u32>)>| v.into_iter().map(|(a, w)| WeightedParam::new(a, w)).collect();
            SeriesSpec::new(n, wp(num), wp(den), args).unwrap()
        })
    })
}

fn small_vec(s: impl Strategy<Value = Rational>) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(s, 0..=2)
}

fn kdf_shape() -> impl Strategy<Value = KdfShape> {
    (
        small_vec(rational()),
        small_vec(rational()),
        small_vec(rational()),
        small_vec(safe_den()),
        small_vec(safe_den()),
        small_vec(safe_den()),
        arg(),
        arg(),
    )
        .prop_map(|(cn, rn, coln, cd, rd, cold, arg1, arg2)| KdfShape {
            coupled_num: cn,
            row_num: rn,
            col_num: coln,
            coupled_den: cd,
            row_den: rd,
            col_den: cold,
            arg1,
            arg2,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_field_laws(a in rational(), b in nonzero_rational()) {
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&(&a * &b) / &b, a.clone());
    }

    #[test]
    fn rational_text_round_trip(a in rational()) {
        prop_assert_eq!(a.to_string().parse::<Rational>().unwrap(), a);
    }

    #[test]
    fn pochhammer_recurrence(a in rational(), n in 0usize..=50) {
        prop_assert_eq!(pochhammer(&a, n + 1), pochhammer(&a, n) * a.add_int(n as i64));
    }

    #[test]
    fn pochhammer_addition_law(a in rational(), m in 0usize..=20, n in 0usize..=20) {
        prop_assert_eq!(pochhammer(&a, m + n), pochhammer(&a, m) * pochhammer(&a.add_int(m as i64), n));
    }

    #[test]
    fn pochhammer_negative_integer_vanishes(m in 0i64..=15, j in 0usize..=30) {
        prop_assert_eq!(pochhammer(&Rational::from(-m), j).is_zero(), j as i64 > m);
    }

    #[test]
    fn taylor_linear_in_prefactor(s in spec(), c in rational()) {
        let base = taylor_coeffs(&s, 6).unwrap();
        let scaled = taylor_coeffs(&s.clone().with_prefactor(c.clone(), 0), 6).unwrap();
        for (a, b) in base.iter().zip(&scaled) {
            prop_assert_eq!(a * &c, b.clone());
        }
    }

    #[test]
    fn walker_matches_brute_force(s in spec()) {
        let fast = taylor_coeffs(&s, 6).unwrap();
        for (t, c) in fast.iter().enumerate() {
            prop_assert_eq!(c.clone(), brute_coefficient(&s, t).unwrap());
        }
    }

    #[test]
    fn term_ratio_recurrence(s in spec(), raw in prop::collection::vec(0usize..=4, 3), i in 0usize..3) {
        let n = s.indices();
        let k: Vec<usize> = raw[..n].to_vec();
        let i = i % n;
        let mut next = k.clone();
        next[i] += 1;
        let (c0, _) = term_coeff(&s, &k).unwrap();
        let (c1, _) = term_coeff(&s, &next).unwrap();
        let mut ratio = s.args()[i].coeff.clone() / Rational::from((k[i] + 1) as i64);
        for p in s.num() {
            ratio = ratio * pochhammer(&p.value.add_int(p.lag(&k) as i64), p.weights[i] as usize);
        }
        for p in s.den() {
            ratio = ratio / pochhammer(&p.value.add_int(p.lag(&k) as i64), p.weights[i] as usize);
        }
        prop_assert_eq!(c1, c0 * ratio);
    }

    #[test]
    fn degree_one_scaling(s in spec(), c in nonzero_rational(), raw in prop::collection::vec(0usize..=4, 3), i in 0usize..3) {
        let n = s.indices();
        let i = i % n;
        let k: Vec<usize> = raw[..n].to_vec();
        let mut args = s.args().to_vec();
        args[i].coeff = &args[i].coeff * &c;
        let scaled = SeriesSpec::new(n, s.num().to_vec(), s.den().to_vec(), args).unwrap();
        let (a, _) = term_coeff(&s, &k).unwrap();
        let (b, _) = term_coeff(&scaled, &k).unwrap();
        prop_assert_eq!(b, a * c.pow(k[i] as u32));
    }

    #[test]
    fn pole_check_matches_term_enumeration(v in -6i64..=2, w in weights(2), order in 0usize..=6) {
        let den = vec![WeightedParam::new(Rational::from(v), w)];
        let s = SeriesSpec::new(2, vec![], den, vec![ArgMonomial::x(), ArgMonomial::x()]).unwrap();
        let polar = (0..=order).any(|a| (0..=order - a).any(|b| term_coeff(&s, &[a, b]).is_err()));
        prop_assert_eq!(pole_check(&s, order).is_empty(), !polar);
    }

    #[test]
    fn kdf_second_argument_zero_is_pfq(mut shape in kdf_shape()) {
        shape.arg2 = ArgMonomial::zero();
        let num = [shape.coupled_num.clone(), shape.row_num.clone()].concat();
        let den = [shape.coupled_den.clone(), shape.row_den.clone()].concat();
        prop_assert_eq!(
            taylor_coeffs(&make_kdf(&shape), 12).unwrap(),
            taylor_coeffs(&make_pfq(&num, &den, shape.arg1.clone()), 12).unwrap()
        );
    }

    #[test]
    fn sd_unit_weights_is_kdf(shape in kdf_shape()) {
        let w = |v: &[Rational], weights| v.iter().map(|x| SdParam::new(x.clone(), weights)).collect();
        let sd = SdShape {
            coupled_num: w(&shape.coupled_num, [1, 1]),
            row_num: w(&shape.row_num, [1, 0]),
            col_num: w(&shape.col_num, [0, 1]),
            coupled_den: w(&shape.coupled_den, [1, 1]),
            row_den: w(&shape.row_den, [1, 0]),
            col_den: w(&shape.col_den, [0, 1]),
            arg1: shape.arg1.clone(),
            arg2: shape.arg2.clone(),
        };
        prop_assert_eq!(
            taylor_coeffs(&make_sd(&sd).unwrap(), 12).unwrap(),
            taylor_coeffs(&make_kdf(&shape), 12).unwrap()
        );
    }
}

fn sampled(id: IdentityId, trial: usize) -> ReductionParams {
    sample_params(3, trial, id, &VerifyConfig::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn float_matches_exact_partial_sum(slot in 0usize..16, trial in 0usize..50, xn in -4i64..=4) {
        let id = IdentityId::ALL[slot];
        let p = sampled(id, trial);
        let x = Rational::from(xn) / Rational::from(16);
        let case = build_identity(id, &p).unwrap();
        let coeffs = taylor_coeffs(&case.lhs, 40).unwrap();
        let mut exact = Rational::zero();
        for c in coeffs.iter().rev() {
            exact = exact * &x + c;
        }
        let exact = exact.to_f64().unwrap();
        let r = eval_float(&case.lhs, x.to_f64().unwrap(), &EvalOptions::default()).unwrap();
        let rel = (r.value - exact).abs() / exact.abs().max(f64::MIN_POSITIVE);
        prop_assert!(rel < 1e-12, "{id} x={x}: {} vs {exact} (rel {rel:e})", r.value);
    }

    #[test]
    fn rhs_has_one_term_per_j_k(slot in 0usize..12, trial in 0usize..50) {
        let id = IdentityId::ALL[slot];
        let p = sampled(id, trial);
        let case = build_identity(id, &p).unwrap();
        prop_assert_eq!(case.rhs.terms.len(), (p.m as usize + 1) * (p.n as usize + 1));
    }

    #[test]
    fn theorem3_prefactor_degenerates(trial in 0usize..50, j in 0usize..=4, k in 0usize..=4) {
        let mut p = sampled(IdentityId::T3E9, trial);
        let check = |p: &ReductionParams, other: fn(usize, usize, &ReductionParams) -> kdf_reductions::Result<Rational>| {
            match (coeff_t3(j, k, p), other(j, k, p)) {
                (Ok(a), Ok(b)) => a == b,
                (Err(_), Err(_)) => true,
                _ => false,
            }
        };
        p.n = 0;
        prop_assert!(check(&p, coeff_t1));
        p.n = p.m;
        p.m = 0;
        prop_assert!(check(&p, coeff_t2));
        p.n = 0;
        prop_assert!(check(&p, coeff_t1) && check(&p, coeff_t2));
    }
}
