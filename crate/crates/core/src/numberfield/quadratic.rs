//! Exact arithmetic with quadratic surds `a + b·sqrt(m)`.
//!
//! Real-quadratic comparisons, floors and continued-fraction steps are done
//! with integer square roots only, never with floating point.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::FieldElement;
use crate::intmat::{rat, rat_int};

/// Data of a quadratic field `Q(sqrt(m))` with `m` squarefree, relative to
/// the defining polynomial `x^2 + p x + q` with `p^2 - 4q = k^2 m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticInfo {
    pub squarefree: BigInt,
    pub k: BigInt,
    pub p: BigInt,
    pub q: BigInt,
}

/// The number `a + b·sqrt(m)` for the `m` of an ambient [`QuadraticInfo`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Surd {
    pub a: BigRational,
    pub b: BigRational,
}

impl Surd {
    pub fn new(a: BigRational, b: BigRational) -> Surd {
        Surd { a, b }
    }

    pub fn rational(a: BigRational) -> Surd {
        Surd { a, b: rat(0) }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn conj(&self) -> Surd {
        Surd::new(self.a.clone(), -&self.b)
    }

    pub fn neg(&self) -> Surd {
        Surd::new(-&self.a, -&self.b)
    }

    pub fn add(&self, o: &Surd) -> Surd {
        Surd::new(&self.a + &o.a, &self.b + &o.b)
    }

    pub fn sub(&self, o: &Surd) -> Surd {
        Surd::new(&self.a - &o.a, &self.b - &o.b)
    }

    pub fn scale(&self, q: &BigRational) -> Surd {
        Surd::new(&self.a * q, &self.b * q)
    }
}

impl QuadraticInfo {
    /// The fundamental discriminant `d_K`.
    pub fn field_discriminant(&self) -> BigInt {
        let m = &self.squarefree;
        if m.mod_floor(&BigInt::from(4)) == BigInt::one() {
            m.clone()
        } else {
            m * 4
        }
    }

    pub fn is_real(&self) -> bool {
        self.squarefree.is_positive()
    }

    /// Writes `e = a + b sqrt(m)`.
    pub fn to_surd(&self, e: &FieldElement) -> Surd {
        let two = rat(2);
        let a = &e.coords[0] - &e.coords[1] * rat_int(&self.p) / &two;
        let b = &e.coords[1] * rat_int(&self.k) / &two;
        Surd::new(a, b)
    }

    pub fn from_surd(&self, s: &Surd) -> FieldElement {
        let c1 = &s.b * rat(2) / rat_int(&self.k);
        let c0 = &s.a + &c1 * rat_int(&self.p) / rat(2);
        FieldElement::new(vec![c0, c1])
    }

    pub fn sqrt_m(&self) -> FieldElement {
        self.from_surd(&Surd::new(rat(0), rat(1)))
    }

    /// `(1 + sqrt m)/2` or `sqrt m`: the second basis element of the maximal order.
    pub fn omega(&self) -> Surd {
        if self.field_discriminant() == self.squarefree {
            Surd::new(BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 2.into()))
        } else {
            Surd::new(rat(0), rat(1))
        }
    }

    pub fn mul(&self, x: &Surd, y: &Surd) -> Surd {
        let m = rat_int(&self.squarefree);
        Surd::new(&x.a * &y.a + &x.b * &y.b * m, &x.a * &y.b + &x.b * &y.a)
    }

    pub fn norm(&self, x: &Surd) -> BigRational {
        &x.a * &x.a - &x.b * &x.b * rat_int(&self.squarefree)
    }

    pub fn trace(&self, x: &Surd) -> BigRational {
        &x.a * rat(2)
    }

    pub fn inv(&self, x: &Surd) -> Surd {
        let n = self.norm(x);
        x.conj().scale(&n.recip())
    }

    pub fn div(&self, x: &Surd, y: &Surd) -> Surd {
        self.mul(x, &self.inv(y))
    }

    pub fn pow(&self, x: &Surd, mut e: u64) -> Surd {
        let mut base = x.clone();
        let mut acc = Surd::rational(rat(1));
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Sign of the real number `x` under `sqrt(m) > 0` (real fields only).
    pub fn sign(&self, x: &Surd) -> Ordering {
        debug_assert!(self.is_real());
        let sa = x.a.cmp(&rat(0));
        let sb = x.b.cmp(&rat(0));
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        // opposite signs: compare a^2 with b^2 m
        let lhs = &x.a * &x.a;
        let rhs = &x.b * &x.b * rat_int(&self.squarefree);
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn cmp(&self, x: &Surd, y: &Surd) -> Ordering {
        self.sign(&x.sub(y))
    }

    /// `floor(x)` for real `x`, exactly.
    pub fn floor(&self, x: &Surd) -> BigInt {
        // x = (A + B sqrt m)/C with C > 0
        let c = x.a.denom().lcm(x.b.denom());
        let a = (&x.a * rat_int(&c)).to_integer();
        let b = (&x.b * rat_int(&c)).to_integer();
        let disc = &b * &b * &self.squarefree;
        let s = disc.sqrt();
        let exact = &s * &s == disc;
        let numer = if !b.is_negative() {
            &a + &s
        } else if exact {
            &a - &s
        } else {
            &a - &s - 1
        };
        numer.div_floor(&c)
    }

    /// Nearest integer to the real part, ties rounded down (so that the
    /// reduced real part lies in `[-1/2, 1/2)`).
    pub fn round_real_part(&self, x: &Surd) -> BigInt {
        (&x.a + BigRational::new(1.into(), 2.into())).floor().to_integer()
    }

    /// Squared absolute value `|x|^2` for imaginary fields.
    pub fn abs2(&self, x: &Surd) -> BigRational {
        debug_assert!(!self.is_real());
        self.norm(x)
    }

    /// Whether a real surd `tau` is reduced: `tau > 1` and `-1 < tau' < 0`.
    pub fn is_reduced(&self, tau: &Surd) -> bool {
        let one = Surd::rational(rat(1));
        let c = tau.conj();
        self.cmp(tau, &one) == Ordering::Greater
            && self.sign(&c) == Ordering::Less
            && self.cmp(&c, &one.neg()) == Ordering::Greater
    }

    /// One continued-fraction step `tau -> 1/(tau - floor tau)`; returns the
    /// multiplier `tau - floor tau` and the next complete quotient.
    ///
    /// `Z + Z tau = mu (Z + Z tau')` for the returned `(mu, tau')`.
    pub fn cf_step(&self, tau: &Surd) -> (Surd, Surd) {
        let a = self.floor(tau);
        let mu = tau.sub(&Surd::rational(rat_int(&a)));
        let next = self.inv(&mu);
        (mu, next)
    }

    /// Reduces a real irrational `tau` by continued-fraction steps. Returns
    /// the reduced quotient and the product `mu` of multipliers, so that
    /// `Z + Z tau = mu (Z + Z tau_red)`.
    pub fn reduce_real(&self, tau: &Surd) -> (Surd, Surd) {
        let mut t = tau.clone();
        let mut mu = Surd::rational(rat(1));
        while !self.is_reduced(&t) {
            let (m, next) = self.cf_step(&t);
            mu = self.mul(&mu, &m);
            t = next;
        }
        (t, mu)
    }

    /// The cycle of reduced quotients starting at a reduced `tau`, each with
    /// the accumulated multiplier from `tau`: `Z + Z tau = mu_i (Z + Z tau_i)`.
    /// The final multiplier returned separately is the one closing the period.
    pub fn real_cycle(&self, tau: &Surd) -> (Vec<(Surd, Surd)>, Surd) {
        let mut out = vec![(tau.clone(), Surd::rational(rat(1)))];
        let mut t = tau.clone();
        let mut mu = Surd::rational(rat(1));
        loop {
            let (m, next) = self.cf_step(&t);
            mu = self.mul(&mu, &m);
            if next == *tau {
                return (out, mu);
            }
            out.push((next.clone(), mu.clone()));
            t = next;
        }
    }

    /// The smallest unit `eps > 1` with `eps (Z + Z tau) = Z + Z tau`, i.e.
    /// the fundamental unit of the multiplier ring of that lattice.
    pub fn lattice_fundamental_unit(&self, tau: &Surd) -> Surd {
        let (red, _) = self.reduce_real(tau);
        let (_, period) = self.real_cycle(&red);
        // every multiplier lies in (0, 1), so the product is below 1
        self.inv(&period)
    }

    /// Fundamental unit `eps > 1` of the maximal order.
    pub fn fundamental_unit(&self) -> Surd {
        self.lattice_fundamental_unit(&self.omega())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn info(m: i64) -> QuadraticInfo {
        QuadraticInfo { squarefree: m.into(), k: 2.into(), p: 0.into(), q: (-m).into() }
    }

    fn s(a: i64, b: i64) -> Surd {
        Surd::new(rat(a), rat(b))
    }

    /// Smallest solution of x^2 - D y^2 = ±4 with x, y > 0 (D = d_K), giving
    /// the fundamental unit (x + y sqrt D)/2.
    fn pell_unit(m: i64) -> Surd {
        let q = info(m);
        let d = q.field_discriminant().to_string().parse::<i64>().unwrap();
        for y in 1i64.. {
            for sign in [-4i64, 4] {
                let x2 = d * y * y + sign;
                if x2 > 0 {
                    let x = (x2 as f64).sqrt().round() as i64;
                    for xx in [x - 1, x, x + 1] {
                        if xx > 0 && xx * xx == x2 {
                            // (xx + y sqrt d)/2, with sqrt d = sqrt m or 2 sqrt m
                            let half = BigRational::new(1.into(), 2.into());
                            let b = if d == m { rat(y) * &half } else { rat(y) };
                            return Surd::new(rat(xx) * half, b);
                        }
                    }
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn floors_are_exact() {
        let q = info(2);
        assert_eq!(q.floor(&s(0, 1)), BigInt::from(1));
        assert_eq!(q.floor(&s(0, -1)), BigInt::from(-2));
        assert_eq!(q.floor(&s(1, 1)), BigInt::from(2));
        let q3 = info(3);
        assert_eq!(q3.floor(&Surd::new(BigRational::new(1.into(), 3.into()), rat(-1))), BigInt::from(-2));
        for a in -7..7 {
            for b in -7..7 {
                for c in 1..5 {
                    let x = Surd::new(BigRational::new(a.into(), c.into()), BigRational::new(b.into(), c.into()));
                    let approx = (a as f64 + b as f64 * 2f64.sqrt()) / c as f64;
                    assert_eq!(q.floor(&x), BigInt::from(approx.floor() as i64));
                }
            }
        }
    }

    #[test]
    fn sign_and_order() {
        let q = info(2);
        assert_eq!(q.sign(&s(-1, 1)), Ordering::Greater);
        assert_eq!(q.sign(&s(2, -1)), Ordering::Greater);
        assert_eq!(q.sign(&s(1, -1)), Ordering::Less);
        assert_eq!(q.cmp(&s(3, 0), &s(1, 1)), Ordering::Greater);
    }

    #[test]
    fn fundamental_units_match_pell() {
        assert_eq!(info(2).fundamental_unit(), s(1, 1));
        for m in [2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23, 26, 29, 31, 33, 37, 41, 43, 46, 47] {
            let q = info(m);
            let e = q.fundamental_unit();
            assert_eq!(e, pell_unit(m), "m = {m}");
            assert!(q.norm(&e).abs() == rat(1));
        }
    }

    #[test]
    fn non_maximal_lattice_units() {
        // Z[sqrt 5] = Z + Z sqrt5 has fundamental unit 2 + sqrt 5 = eps^3
        let q = info(5);
        let e = q.lattice_fundamental_unit(&s(0, 1));
        assert_eq!(e, s(2, 1));
        assert_eq!(q.pow(&q.fundamental_unit(), 3), e);
    }
}
