use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orderkit::ideals::{class_monoid, maximal_of, picard_group};
use orderkit::intmat::{hnf, snf};
use orderkit::numberfield::make_field_i64;
use orderkit::orders::{quadratic_order, unit_square_quotient};
use orderkit::IntMatrix;

fn leibniz(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|c| {
            let minor: Vec<Vec<i64>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| *x).collect()).collect();
            let sign = if c % 2 == 0 { 1 } else { -1 };
            sign * m[0][c] * leibniz(&minor)
        })
        .sum()
}

#[test]
fn normal_forms_preserve_the_determinant() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let n = rng.gen_range(1..=4);
        let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let det = BigInt::from(leibniz(&rows).abs());
        let m = IntMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect());
        let (h, u) = hnf(&m);
        assert_eq!(u.mul(&m), h);
        assert_eq!(u.det().abs(), BigInt::from(1));
        let (d, _, _) = snf(&m);
        let diag_h: BigInt = (0..n).map(|i| h.get(i, i).clone()).product();
        let diag_d: BigInt = (0..n).map(|i| d.get(i, i).clone()).product();
        assert_eq!(diag_h.abs(), det);
        assert_eq!(diag_d, det);
        for i in 1..n {
            let (a, b) = (d.get(i - 1, i - 1), d.get(i, i));
            assert!(b.is_zero() || (!a.is_zero() && (b % a).is_zero()));
        }
    }
}

/// Reduced primitive positive definite forms of discriminant `d < 0`.
fn form_class_number(d: i64) -> u64 {
    let gcd = |mut a: i64, mut b: i64| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a.abs()
    };
    let mut h = 0;
    let mut a = 1;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) || gcd(gcd(a, b), c) != 1 {
                continue;
            }
            h += 1;
        }
        a += 1;
    }
    h
}

#[test]
fn picard_groups_match_reduced_forms() {
    for m in [1i64, 2, 3, 5, 6, 7, 11, 14, 15, 23] {
        let k = make_field_i64(&[m, 0, 1]).unwrap();
        for f in 1..=4u64 {
            let gamma = quadratic_order(&k, f).unwrap();
            let maximal = maximal_of(&gamma).unwrap();
            let d: i64 = gamma.discriminant().try_into().unwrap();
            let pic = picard_group(&gamma, &maximal).unwrap();
            assert_eq!(pic.order() as u64, form_class_number(d), "disc {d}");
        }
    }
}

#[test]
fn class_monoid_contains_picard_group() {
    let k = make_field_i64(&[1, 0, 1]).unwrap();
    for f in 1..=5u64 {
        let gamma = quadratic_order(&k, f).unwrap();
        let maximal = maximal_of(&gamma).unwrap();
        let cm = class_monoid(&gamma, &maximal).unwrap();
        cm.verify().unwrap();
        assert_eq!(cm.picard.len(), picard_group(&gamma, &maximal).unwrap().order());
        assert!(cm.size() >= cm.picard.len());
        assert_eq!(cm.size() == cm.picard.len(), f == 1);
        assert_eq!(cm.conductor_norm, BigInt::from(f * f));
    }
}

#[test]
fn pell_units() {
    let k = make_field_i64(&[-2, 0, 1]).unwrap();
    let o = quadratic_order(&k, 1).unwrap();
    let u = unit_square_quotient(&o).unwrap();
    assert_eq!(u.torsion_order, 2);
    assert!(u.fundamental_unit.is_some());
    assert_eq!(u.square_class_count, 4);
    assert!(o.discriminant().is_positive());
}
