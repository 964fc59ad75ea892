use super::*;

fn s(primes: &[u64]) -> SIntegerSpec {
    SIntegerSpec::new(primes.iter().copied()).unwrap()
}

/// Repeated multiplication, independent of the factor evaluator.
fn naive_power(b: u64, e: u64) -> BigInt {
    let mut acc = BigInt::one();
    for _ in 0..e {
        acc *= b;
    }
    acc
}

/// `log10` from the decimal expansion: digits beyond the 17th cannot move
/// the value by more than `10^{-16}`.
fn log10_from_decimal(v: &BigInt) -> f64 {
    let s = v.to_string();
    let lead: f64 = s[..s.len().min(17)].parse().unwrap();
    (s.len() - s.len().min(17)) as f64 + lead.log10()
}

/// `⌊e log10 b⌋ + 1` in floating point, refusing if the fractional part is
/// too close to an integer for double precision to decide.
fn digits_by_float(terms: &[(f64, f64)]) -> u64 {
    let l: f64 = terms.iter().map(|(b, e)| e * b.log10()).sum();
    let frac = l - l.floor();
    assert!(frac > 1e-6 && frac < 1.0 - 1e-6, "float oracle inconclusive");
    l.floor() as u64 + 1
}

#[test]
fn s_integer_values() {
    assert_eq!(s(&[]).n_value(), BigInt::one());
    assert_eq!(s(&[2, 3, 7]).n_value(), BigInt::from(42));
    assert_eq!(radical(120), 30);
    assert_eq!(n_u(&s(&[2, 3]), &s(&[5, 2])).n_value(), BigInt::from(30));
    let e = SIntegerSpec::new([2, 9]).unwrap_err();
    assert_eq!(e.kind, ErrorKind::NotPrime("9".into()));
    assert!(is_prime_u64(1_000_000_007));
    assert!(!is_prime_u64(3_215_031_751));
    assert!(is_prime_u64(18_446_744_073_709_551_557));
}

#[test]
fn small_heights_are_exact() {
    let b = thm_main_height(1, &s(&[]), EvalMode::Auto).unwrap();
    let v = naive_power(3, 144);
    assert!(b.exact_flag);
    assert_eq!(b.exact_value.as_ref(), Some(&v));
    assert_eq!(b.digit_count, BigInt::from(69));
    assert_eq!(v.to_string().len(), 69);
    assert!((b.log10_f64() - log10_from_decimal(&v)).abs() < 1e-12);

    let a = thm_a_height(1, &BigInt::from(6), &s(&[]), EvalMode::Auto).unwrap();
    let v = naive_power(3, 144) * naive_power(6, 24);
    assert_eq!(a.exact_value.as_ref(), Some(&v));
    assert_eq!(a.digit_count, BigInt::from(v.to_string().len()));
    assert!((a.log10_f64() - log10_from_decimal(&v)).abs() < 1e-12);

    let b = thm_main_height(1, &s(&[2]), EvalMode::Auto).unwrap();
    assert_eq!(b.exact_value, Some(naive_power(3, 144) * naive_power(2, 24)));
    let b = thm_main_height(2, &s(&[]), EvalMode::Auto).unwrap();
    assert_eq!(b.digit_count, BigInt::from(225));
}

#[test]
fn log_only_matches_exact() {
    for (g, primes) in [(1u64, vec![]), (1, vec![2, 3]), (2, vec![7])] {
        let e = thm_main_height(g, &s(&primes), EvalMode::Auto).unwrap();
        let l = thm_main_height(g, &s(&primes), EvalMode::LogOnly).unwrap();
        assert!(!l.exact_flag && l.exact_value.is_none());
        assert_eq!(e.digit_count, l.digit_count);
        assert!(l.log10_agrees(&e.log10, 12));
        assert!(l.log10.width() < 1e-6);
    }
}

#[test]
fn exponent_constants() {
    assert_eq!(e_g(1), BigInt::from(16_777_216u64));
    assert_eq!(e_g(2), BigInt::from(4_294_967_296u64));
}

#[test]
fn huge_counts_by_logarithm() {
    let (head, sharp) = thm_main_count(1, &s(&[]), &BigInt::one(), Some(&BigInt::one()), EvalMode::LogOnly).unwrap();
    let CountBound::Finite(head) = head else { panic!() };
    let CountBound::Finite(sharp) = sharp else { panic!() };
    assert_eq!(head.digit_count, BigInt::from(5_050_446));
    assert_eq!(head.digit_count, BigInt::from(digits_by_float(&[(2.0, 16_777_216.0)])));
    assert_eq!(sharp.cmp_certified(&head), Some(Ordering::Less));

    let b = thm_b(1, &s(&[3]), &BigInt::one(), EvalMode::Auto).unwrap();
    assert!(!b.exact_flag, "more than 10^7 digits stays logarithmic");
    assert_eq!(b.digit_count, BigInt::from(digits_by_float(&[(6.0, 16_777_216.0)])));

    let b2 = thm_b(2, &s(&[]), &BigInt::one(), EvalMode::Auto).unwrap();
    assert_eq!(b2.digit_count, BigInt::from(digits_by_float(&[(2.0, 4_294_967_296.0)])));
}

#[test]
fn exact_headline_count() {
    let b = thm_b(1, &s(&[]), &BigInt::one(), EvalMode::Auto).unwrap();
    assert!(b.exact_flag);
    assert_eq!(b.exact_value, Some(BigInt::one() << 16_777_216u32));
    assert_eq!(b.digit_count, BigInt::from(5_050_446));
}

#[test]
fn infinite_level_has_no_count() {
    let (a, b) = thm_main_count(1, &s(&[]), &BigInt::one(), None, EvalMode::LogOnly).unwrap();
    assert_eq!((a, b), (CountBound::Unbounded, CountBound::Unbounded));
    // heights still evaluate
    let inputs = BoundInputs { max_level: None, ..BoundInputs::default() };
    assert!(matches!(evaluate("thm-main-height", &inputs, EvalMode::Auto).unwrap(), CountBound::Finite(_)));
    assert_eq!(evaluate("thm-main-count", &inputs, EvalMode::Auto).unwrap(), CountBound::Unbounded);
}

#[test]
fn pic_scaling_is_linear() {
    let one = thm_b(1, &s(&[]), &BigInt::one(), EvalMode::LogOnly).unwrap();
    let two = thm_b(1, &s(&[]), &BigInt::from(2), EvalMode::LogOnly).unwrap();
    let diff = two.log10_f64() - one.log10_f64();
    assert!((diff - 2f64.log10()).abs() < 1e-9);
    assert_eq!(two.digit_count, one.digit_count);
}

#[test]
fn elliptic_curve_bounds() {
    let b = es_gl2_bounds(1, &s(&[]), EvalMode::LogOnly).unwrap();
    assert_eq!(b.height.factors, vec![(BigInt::from(3), BigInt::from(144))]);
    assert_eq!(b.count.factors, vec![(BigInt::from(14), BigInt::from(531_441))]);
    assert_eq!(b.isogeny.factors, vec![(BigInt::from(14), BigInt::from(248_832))]);
    assert_eq!(b.count.digit_count, BigInt::from(digits_by_float(&[(14.0, 531_441.0)])));
    assert_eq!(b.isogeny.digit_count, BigInt::from(digits_by_float(&[(14.0, 248_832.0)])));
    let b2 = es_gl2_bounds(2, &s(&[5]), EvalMode::LogOnly).unwrap();
    assert!(b2.count.factors.contains(&(BigInt::from(28), BigInt::from(34_012_224))));
    assert!(b2.isogeny.factors.contains(&(BigInt::from(5), BigInt::from(74u64.pow(3)))));
}

#[test]
fn endomorphism_structure_bound() {
    let one = BigInt::one();
    let b = thm_endobound(1, &s(&[]), &one, &one, &one, None, EvalMode::LogOnly).unwrap();
    assert_eq!(b.factors, vec![(BigInt::from(14), BigInt::from(248_832 * 3))]);
    let b = thm_endobound(1, &s(&[]), &one, &one, &one, Some(&one), EvalMode::Auto).unwrap();
    assert_eq!(b.exact_value, Some(one.clone()));
    assert_eq!(b.digit_count, one);
    let b = thm_endobound(2, &s(&[]), &BigInt::from(4), &one, &BigInt::from(2), Some(&one), EvalMode::Auto).unwrap();
    assert_eq!(b.exact_value, Some(BigInt::from(128)));
}

#[test]
fn level_and_degree_bounds() {
    let p = cor_p1n(1, &BigInt::from(5), &s(&[]), &BigInt::one(), EvalMode::Auto).unwrap();
    assert_eq!(p.height.exact_value, Some(naive_power(3, 144) * naive_power(5, 24)));
    let a = thm_a_height(3, &BigInt::one(), &s(&[]), EvalMode::Auto).unwrap();
    let c = cor_p1n(3, &BigInt::one(), &s(&[]), &BigInt::one(), EvalMode::Auto).unwrap();
    assert_eq!(c.height, a);
    assert_eq!(cor_p1n(2, &BigInt::from(5), &s(&[]), &BigInt::one(), EvalMode::LogOnly).unwrap().level, BigInt::from(625));
    assert_eq!(level_structure_bound(LevelKind::PrincipalN, &BigInt::from(3), 1), BigInt::from(81));
    assert_eq!(level_structure_bound(LevelKind::P1N, &BigInt::from(4), 1), BigInt::from(16));
    assert_eq!(level_structure_bound(LevelKind::MordellA, &BigInt::zero(), 0), BigInt::from(24));
    assert_eq!(pol_degree_bound(1), BigInt::from(2));
    assert_eq!(pol_degree_bound(3), BigInt::from(8));
    assert_eq!(composite_degree_bound(&BigInt::from(16), 2, &BigInt::from(7)), BigInt::from(16 * 4 * 7));
}

#[test]
fn conventions_agree() {
    // ν, N_S squarefree and coprime: N_U = rad(ν N_S)
    for g in 1..=3 {
        for (nu, primes) in [(6u64, vec![5u64]), (1, vec![2, 3]), (35, vec![])] {
            let a = thm_a_height(g, &BigInt::from(nu), &s(&primes), EvalMode::LogOnly).unwrap();
            let u = n_u(&SIntegerSpec::of_radical(nu), &s(&primes));
            let m = thm_main_height(g, &u, EvalMode::LogOnly).unwrap();
            assert_eq!(a.cmp_certified(&m), Some(Ordering::Equal));
            assert_eq!(a.digit_count, m.digit_count);
        }
    }
}

#[test]
fn monotone_on_grids() {
    let sets = [s(&[]), s(&[2]), s(&[2, 3]), s(&[2, 3, 5])];
    for g in 1..=3u64 {
        for w in sets.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let m = EvalMode::LogOnly;
            assert!(thm_main_height(g, a, m).unwrap().not_above(&thm_main_height(g, b, m).unwrap()));
            assert!(thm_b(g, a, &BigInt::one(), m).unwrap().not_above(&thm_b(g, b, &BigInt::one(), m).unwrap()));
            let (ea, eb) = (es_gl2_bounds(g, a, m).unwrap(), es_gl2_bounds(g, b, m).unwrap());
            assert!(ea.count.not_above(&eb.count) && ea.isogeny.not_above(&eb.isogeny));
        }
        let m = EvalMode::LogOnly;
        let next = g + 1;
        assert!(thm_main_height(g, &sets[1], m).unwrap().not_above(&thm_main_height(next, &sets[1], m).unwrap()));
        assert!(thm_b(g, &sets[0], &BigInt::one(), m).unwrap().not_above(&thm_b(next, &sets[0], &BigInt::one(), m).unwrap()));
        for (lo, hi) in [(1u64, 2u64), (2, 5)] {
            let (lo, hi) = (BigInt::from(lo), BigInt::from(hi));
            let c = |pic: &BigInt, lvl: &BigInt| match thm_main_count(g, &sets[1], pic, Some(lvl), m).unwrap().1 {
                CountBound::Finite(b) => b,
                CountBound::Unbounded => unreachable!(),
            };
            assert!(c(&lo, &lo).not_above(&c(&hi, &lo)));
            assert!(c(&lo, &lo).not_above(&c(&lo, &hi)));
            let p = |n: &BigInt| cor_p1n(g, n, &sets[1], &BigInt::one(), m).unwrap();
            assert!(p(&lo).height.not_above(&p(&hi).height));
            assert!(p(&lo).count.not_above(&p(&hi).count));
            let a = |nu: &BigInt| thm_a_height(g, nu, &sets[0], m).unwrap();
            assert!(a(&lo).not_above(&a(&hi)));
        }
    }
}

#[test]
fn powers_of_ten_are_certified() {
    let b = BigBound::from_factors(&[(BigInt::from(2), BigInt::from(5)), (BigInt::from(5), BigInt::from(5))], EvalMode::LogOnly)
        .unwrap();
    assert_eq!(b.digit_count, BigInt::from(6));
    let b = BigBound::from_factors(&[(BigInt::from(10), BigInt::from(1000))], EvalMode::LogOnly).unwrap();
    assert_eq!(b.digit_count, BigInt::from(1001));
    let b = BigBound::exact(&BigInt::from(999_999)).unwrap();
    assert_eq!(b.digit_count, BigInt::from(6));
    assert_eq!(BigBound::exact(&BigInt::one()).unwrap().digit_count, BigInt::one());
}

#[test]
fn decimal_rendering() {
    let b = BigBound::from_factors(&[(BigInt::from(2), BigInt::from(16_777_216u64))], EvalMode::LogOnly).unwrap();
    assert!(b.log10_decimal().starts_with("5050445.2"));
    assert_eq!(BigBound::exact(&BigInt::from(10)).unwrap().log10_decimal(), "1.000000000000000");
}

#[test]
fn evaluate_by_id() {
    let inputs = BoundInputs { nu: BigInt::from(6), ..BoundInputs::default() };
    let CountBound::Finite(b) = evaluate("thm-a-height", &inputs, EvalMode::Auto).unwrap() else { panic!() };
    assert_eq!(b.exact_value, Some(naive_power(3, 144) * naive_power(6, 24)));
    for id in FORMULA_IDS {
        assert!(evaluate(id, &inputs, EvalMode::LogOnly).is_ok(), "{id}");
    }
    assert!(evaluate("nope", &inputs, EvalMode::LogOnly).is_err());
    let bad = BoundInputs { g: 0, ..BoundInputs::default() };
    assert!(matches!(evaluate("thm-b", &bad, EvalMode::LogOnly).unwrap_err().kind, ErrorKind::InvalidInput(_)));
}
