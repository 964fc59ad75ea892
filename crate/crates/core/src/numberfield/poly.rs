//! Dense univariate polynomials over Q, constant term first.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::intmat::{rat, rat_int, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> QPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[BigInt]) -> QPoly {
        QPoly::new(coeffs.iter().map(rat_int).collect())
    }

    pub fn from_i64(coeffs: &[i64]) -> QPoly {
        QPoly::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> QPoly {
        QPoly { coeffs: vec![] }
    }

    pub fn one() -> QPoly {
        QPoly { coeffs: vec![rat(1)] }
    }

    /// The monomial `c * x^k`.
    pub fn monomial(c: BigRational, k: usize) -> QPoly {
        let mut v = vec![rat(0); k + 1];
        v[k] = c;
        QPoly::new(v)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(|| rat(0))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(|| rat(0))
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, k: &BigRational) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![rat(0); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = d.lead().recip();
        let mut rem = self.coeffs.clone();
        let n = self.coeffs.len();
        if n <= dd {
            return (QPoly::zero(), self.clone());
        }
        let mut q = vec![rat(0); n - dd];
        for k in (dd..n).rev() {
            let c = &rem[k] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let s = &c * dc;
                rem[k - dd + j] -= s;
            }
            q[k - dd] = c;
        }
        rem.truncate(dd);
        (QPoly::new(q), QPoly::new(rem))
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        self.div_rem(d).1
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * rat(i as i64)).collect())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = rat(0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
        }
        acc
    }

    /// Integer coefficients, if every coefficient is integral.
    pub fn to_integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }

    /// Number of distinct real roots, by a Sturm sequence.
    pub fn real_root_count(&self) -> usize {
        let sq = {
            let g = self.gcd(&self.derivative());
            self.div_rem(&g).0
        };
        if sq.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let mut seq = vec![sq.clone(), sq.derivative()];
        loop {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(r.neg());
        }
        let changes = |signs: Vec<i8>| -> usize {
            let s: Vec<i8> = signs.into_iter().filter(|&x| x != 0).collect();
            s.windows(2).filter(|w| w[0] != w[1]).count()
        };
        let sign = |q: &BigRational| -> i8 {
            if q.is_positive() {
                1
            } else if q.is_negative() {
                -1
            } else {
                0
            }
        };
        let at_pos: Vec<i8> = seq.iter().map(|p| sign(&p.lead())).collect();
        let at_neg: Vec<i8> = seq
            .iter()
            .map(|p| {
                let s = sign(&p.lead());
                if p.degree().unwrap_or(0) % 2 == 1 {
                    -s
                } else {
                    s
                }
            })
            .collect();
        changes(at_neg) - changes(at_pos)
    }

    /// All complex roots (simple roots assumed), by Durand–Kerner iteration
    /// followed by Newton polishing. Sorted by (re, im) for determinism.
    pub fn complex_roots(&self) -> Vec<Complex64> {
        let n = self.degree().unwrap_or(0);
        if n == 0 {
            return vec![];
        }
        let monic = self.monic();
        let bound = 1.0
            + monic.coeffs[..n]
                .iter()
                .map(|c| c.to_f64().unwrap_or(0.0).abs())
                .fold(0.0, f64::max);
        let seed = Complex64::new(0.4, 0.9);
        let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * (bound / 2.0).max(1.0)).collect();
        for _ in 0..2000 {
            let mut delta = 0.0f64;
            for i in 0..n {
                let mut denom = Complex64::new(1.0, 0.0);
                for j in 0..n {
                    if i != j {
                        denom *= z[i] - z[j];
                    }
                }
                let step = monic.eval_complex(z[i]) / denom;
                z[i] -= step;
                delta = delta.max(step.norm());
            }
            if delta < 1e-15 {
                break;
            }
        }
        let d = monic.derivative();
        for r in z.iter_mut() {
            for _ in 0..5 {
                let dv = d.eval_complex(*r);
                if dv.norm() == 0.0 {
                    break;
                }
                *r -= monic.eval_complex(*r) / dv;
            }
        }
        z.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        z
    }
}

/// Discriminant of a monic integer polynomial, via the Sylvester resultant
/// `disc(p) = (-1)^{n(n-1)/2} Res(p, p')`.
pub fn discriminant(p: &[BigInt]) -> BigInt {
    let n = p.len() - 1;
    if n == 1 {
        return BigInt::one();
    }
    let dp: Vec<BigInt> = (1..=n).map(|i| &p[i] * BigInt::from(i)).collect();
    let res = resultant(p, &dp);
    if (n * (n - 1) / 2) % 2 == 1 {
        -res
    } else {
        res
    }
}

/// Resultant of two integer polynomials (constant term first) as the
/// determinant of their Sylvester matrix.
pub fn resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    let mut s = IntMatrix::zeros(size, size);
    for i in 0..n {
        for (k, c) in a.iter().rev().enumerate() {
            s.set(i, i + k, c.clone());
        }
    }
    for i in 0..m {
        for (k, c) in b.iter().rev().enumerate() {
            s.set(n + i, i + k, c.clone());
        }
    }
    s.det()
}

/// Positive divisors of a nonzero integer.
pub fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            small.push(d.clone());
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// A nontrivial monic integer factor of a monic integer polynomial, or `None`
/// if it is irreducible over Q (Gauss's lemma lets us stay over Z).
///
/// Rational roots are tried first; higher-degree factors by Kronecker's
/// evaluation/interpolation method.
pub fn find_factor(p: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = p.len() - 1;
    if n <= 1 {
        return None;
    }
    let qp = QPoly::from_ints(p);
    if p[0].is_zero() {
        return Some(vec![BigInt::zero(), BigInt::one()]);
    }
    for d in divisors(&p[0]) {
        for r in [d.clone(), -d] {
            if qp.eval(&rat_int(&r)).is_zero() {
                return Some(vec![-r, BigInt::one()]);
            }
        }
    }
    for k in 2..=n / 2 {
        if let Some(f) = kronecker_factor(&qp, k) {
            return Some(f);
        }
    }
    None
}

fn kronecker_factor(p: &QPoly, k: usize) -> Option<Vec<BigInt>> {
    // k+1 evaluation points with small values, none of them roots
    let mut points: Vec<(BigInt, BigInt)> = Vec::new();
    let mut t: i64 = 0;
    while points.len() < k + 1 {
        for x in [t, -t] {
            if points.len() < k + 1 && (t != 0 || x == 0) && !points.iter().any(|(a, _)| a == &BigInt::from(x)) {
                let v = p.eval(&rat(x)).to_integer();
                points.push((BigInt::from(x), v));
            }
        }
        t += 1;
    }
    let choices: Vec<Vec<BigInt>> = points
        .iter()
        .map(|(_, v)| divisors(v).into_iter().flat_map(|d| [d.clone(), -d]).collect())
        .collect();
    let mut idx = vec![0usize; k + 1];
    loop {
        let values: Vec<BigInt> = idx.iter().enumerate().map(|(i, &j)| choices[i][j].clone()).collect();
        if let Some(f) = interpolate(&points.iter().map(|(x, _)| x.clone()).collect::<Vec<_>>(), &values) {
            if f.degree() == Some(k) && f.lead().is_one() && p.rem(&f).is_zero() {
                return f.to_integer_coeffs();
            }
        }
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return None;
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Lagrange interpolation through integer points; `None` if not integral.
fn interpolate(xs: &[BigInt], ys: &[BigInt]) -> Option<QPoly> {
    let mut acc = QPoly::zero();
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        let mut basis = QPoly::one();
        let mut denom = BigInt::one();
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                basis = basis.mul(&QPoly::new(vec![rat_int(&-xj), rat(1)]));
                denom *= xi - xj;
            }
        }
        acc = acc.add(&basis.scale(&BigRational::new(yi.clone(), denom)));
    }
    acc.to_integer_coeffs().map(|_| acc)
}
