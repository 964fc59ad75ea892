//! Number fields `Q[x]/(p)` for monic irreducible integer `p`.
//!
//! Elements are coordinate vectors in the power basis `1, x, ..., x^{g-1}`.
//! The rational field is the degree-one field with `p = x`.

pub mod poly;
pub mod quadratic;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{err, ErrorKind, Result};
use crate::intmat::{rat, rat_int, rational_det, rational_inverse};
use poly::QPoly;
pub use quadratic::{QuadraticInfo, Surd};

const MODULE: &str = "numberfield";

/// Largest degree accepted by the irreducibility test.
pub const MAX_DEGREE: usize = 8;

/// Cap on root assignments tried by [`embeddings`].
pub const EMBEDDING_SEARCH_BUDGET: usize = 1_000_000;

#[derive(Debug)]
struct Inner {
    min_poly: Vec<BigInt>,
    degree: usize,
    poly_disc: BigInt,
    signature: (usize, usize),
    // x^{g+k} in the power basis, k = 0..g-2
    reduction: Vec<Vec<BigRational>>,
}

/// A number field presented by a monic irreducible integer polynomial.
#[derive(Clone)]
pub struct NumberField(Arc<Inner>);

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.0.min_poly == other.0.min_poly
    }
}

impl Eq for NumberField {}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[x]/({})", format_poly(&self.0.min_poly))
    }
}

/// Human-readable polynomial, highest degree first.
pub fn format_poly(p: &[BigInt]) -> String {
    let mut terms = Vec::new();
    for (k, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match k {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{k}"),
        };
        let term = if k == 0 {
            c.to_string()
        } else if c.is_one() {
            mono
        } else if *c == -BigInt::one() {
            format!("-{mono}")
        } else {
            format!("{c}*{mono}")
        };
        terms.push(term);
    }
    if terms.is_empty() {
        return "0".into();
    }
    terms.join(" + ").replace("+ -", "- ")
}

/// An element of a number field in power-basis coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    pub coords: Vec<BigRational>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl FieldElement {
    pub fn new(coords: Vec<BigRational>) -> Self {
        FieldElement { coords }
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        FieldElement::new(coords.iter().map(|&c| rat(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Whether the element lies in Q (all non-constant coordinates vanish).
    pub fn as_rational(&self) -> Option<BigRational> {
        self.coords[1..].iter().all(|c| c.is_zero()).then(|| self.coords[0].clone())
    }
}

/// Squarefree part and square factor: `n = k^2 * m` with `m` squarefree
/// (sign carried by `m`).
pub fn squarefree_decomposition(n: &BigInt) -> (BigInt, BigInt) {
    assert!(!n.is_zero());
    let mut m = n.abs();
    let mut k = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        let p2 = &p * &p;
        while m.is_multiple_of(&p2) {
            m /= &p2;
            k *= &p;
        }
        p += 1;
    }
    if n.is_negative() {
        m = -m;
    }
    (m, k)
}

/// Exact integer square root if `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

impl NumberField {
    pub fn min_poly(&self) -> &[BigInt] {
        &self.0.min_poly
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn poly_disc(&self) -> &BigInt {
        &self.0.poly_disc
    }

    pub fn signature(&self) -> (usize, usize) {
        self.0.signature
    }

    pub fn is_totally_real(&self) -> bool {
        self.0.signature.0 == self.0.degree
    }

    pub fn is_rational(&self) -> bool {
        self.0.degree == 1
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::new(vec![rat(0); self.degree()])
    }

    pub fn one(&self) -> FieldElement {
        self.from_rational(&rat(1))
    }

    pub fn from_rational(&self, q: &BigRational) -> FieldElement {
        let mut v = vec![rat(0); self.degree()];
        v[0] = q.clone();
        FieldElement::new(v)
    }

    /// The class of `x` (zero in the rational field).
    pub fn generator(&self) -> FieldElement {
        if self.degree() == 1 {
            return self.zero();
        }
        let mut v = vec![rat(0); self.degree()];
        v[1] = rat(1);
        FieldElement::new(v)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement::new(a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement::new(a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect())
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement::new(a.coords.iter().map(|x| -x).collect())
    }

    pub fn scale(&self, a: &FieldElement, q: &BigRational) -> FieldElement {
        FieldElement::new(a.coords.iter().map(|x| x * q).collect())
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement::new(self.mul_coords(&a.coords, &b.coords))
    }

    /// Product of coordinate vectors.
    pub fn mul_coords(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let g = self.degree();
        let mut prod = vec![rat(0); 2 * g - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let mut out: Vec<BigRational> = prod[..g].to_vec();
        for (k, c) in prod[g..].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, r) in self.0.reduction[k].iter().enumerate() {
                if !r.is_zero() {
                    out[j] += c * r;
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Matrix of `y -> e*y` acting on row vectors: row `i` holds `e * x^i`.
    pub fn mult_matrix(&self, e: &FieldElement) -> Vec<Vec<BigRational>> {
        let g = self.degree();
        (0..g)
            .map(|i| {
                let mut xi = vec![rat(0); g];
                xi[i] = rat(1);
                self.mul_coords(&e.coords, &xi)
            })
            .collect()
    }

    pub fn inverse(&self, e: &FieldElement) -> Option<FieldElement> {
        let inv = rational_inverse(&self.mult_matrix(e))?;
        Some(FieldElement::new(inv[0].clone()))
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Option<FieldElement> {
        Some(self.mul(a, &self.inverse(b)?))
    }

    pub fn norm(&self, e: &FieldElement) -> BigRational {
        rational_det(&self.mult_matrix(e))
    }

    pub fn trace(&self, e: &FieldElement) -> BigRational {
        let m = self.mult_matrix(e);
        (0..self.degree()).map(|i| m[i][i].clone()).sum()
    }

    /// Characteristic polynomial of multiplication by `e` (Faddeev–LeVerrier).
    pub fn char_poly(&self, e: &FieldElement) -> QPoly {
        let n = self.degree();
        let a = self.mult_matrix(e);
        let mut coeffs = vec![rat(0); n + 1];
        coeffs[n] = rat(1);
        let mut m: Vec<Vec<BigRational>> = vec![vec![rat(0); n]; n];
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = crate::intmat::rational_mat_mul(&a, &m);
            for (i, row) in next.iter_mut().enumerate() {
                row[i] += &coeffs[n - k + 1];
            }
            m = next;
            let am = crate::intmat::rational_mat_mul(&a, &m);
            let tr: BigRational = (0..n).map(|i| am[i][i].clone()).sum();
            coeffs[n - k] = -tr / rat(k as i64);
        }
        QPoly::new(coeffs)
    }

    /// Monic minimal polynomial of `e` over Q.
    pub fn min_poly_of(&self, e: &FieldElement) -> QPoly {
        let cp = self.char_poly(e);
        let g = cp.gcd(&cp.derivative());
        cp.div_rem(&g).0.monic()
    }

    /// Evaluates a rational polynomial at a field element.
    pub fn eval_poly(&self, p: &QPoly, e: &FieldElement) -> FieldElement {
        let mut acc = self.zero();
        for c in p.coeffs().iter().rev() {
            acc = self.add(&self.mul(&acc, e), &self.from_rational(c));
        }
        acc
    }

    /// Quadratic data, for degree-two fields only.
    pub fn quadratic(&self) -> Option<QuadraticInfo> {
        if self.degree() != 2 {
            return None;
        }
        let q = self.0.min_poly[0].clone();
        let p = self.0.min_poly[1].clone();
        let delta = &p * &p - &q * 4;
        let (m, k) = squarefree_decomposition(&delta);
        Some(QuadraticInfo { squarefree: m, k, p, q })
    }

    /// Numerical images of the generator under the complex embeddings,
    /// sorted by (re, im).
    pub fn complex_roots(&self) -> Vec<Complex64> {
        QPoly::from_ints(&self.0.min_poly).complex_roots()
    }
}

/// Builds a number field from coefficients, constant term first.
pub fn make_field(coeffs: &[BigInt]) -> Result<NumberField> {
    const OP: &str = "make_field";
    let mut c = coeffs.to_vec();
    while c.len() > 1 && c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    if c.len() < 2 {
        return err(MODULE, OP, ErrorKind::InvalidInput("polynomial must have degree at least 1".into()));
    }
    if !c.last().unwrap().is_one() {
        return err(MODULE, OP, ErrorKind::NotMonic);
    }
    let degree = c.len() - 1;
    if degree == 1 {
        c = vec![BigInt::zero(), BigInt::one()];
    }
    if degree > MAX_DEGREE {
        return err(MODULE, OP, ErrorKind::UnsupportedDegree(degree));
    }
    if let Some(f) = poly::find_factor(&c) {
        return err(MODULE, OP, ErrorKind::Reducible(format!("{} has factor {}", format_poly(&c), format_poly(&f))));
    }
    let qp = QPoly::from_ints(&c);
    let real = qp.real_root_count();
    let signature = (real, (degree - real) / 2);
    let poly_disc = poly::discriminant(&c);
    let mut reduction = Vec::new();
    // x^g = -(c_0 + ... + c_{g-1} x^{g-1})
    let mut cur: Vec<BigRational> = c[..degree].iter().map(|x| rat_int(&-x)).collect();
    for _ in 0..degree.saturating_sub(1) {
        reduction.push(cur.clone());
        // multiply by x
        let top = cur[degree - 1].clone();
        let mut next = vec![rat(0); degree];
        for j in 1..degree {
            next[j] = cur[j - 1].clone();
        }
        for j in 0..degree {
            next[j] += &top * rat_int(&-&c[j]);
        }
        cur = next;
    }
    Ok(NumberField(Arc::new(Inner { min_poly: c, degree, poly_disc, signature, reduction })))
}

pub fn make_field_i64(coeffs: &[i64]) -> Result<NumberField> {
    make_field(&coeffs.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
}

/// The rational field, `Q[x]/(x)`.
pub fn rationals() -> NumberField {
    make_field_i64(&[0, 1]).expect("x is irreducible")
}

pub fn elem_add(f: &NumberField, a: &FieldElement, b: &FieldElement) -> FieldElement {
    f.add(a, b)
}

pub fn elem_mul(f: &NumberField, a: &FieldElement, b: &FieldElement) -> FieldElement {
    f.mul(a, b)
}

pub fn elem_norm(f: &NumberField, e: &FieldElement) -> BigRational {
    f.norm(e)
}

pub fn elem_trace(f: &NumberField, e: &FieldElement) -> BigRational {
    f.trace(e)
}

pub fn elem_min_poly(f: &NumberField, e: &FieldElement) -> QPoly {
    f.min_poly_of(e)
}

pub fn signature(f: &NumberField) -> (usize, usize) {
    f.signature()
}

/// Images in `l` of the generator of `k` under every ring morphism `k -> l`,
/// sorted. Roots of `k`'s polynomial in `l` are located numerically by
/// interpolating over assignments of complex roots, rounded using the fact
/// that algebraic integers of `l` have denominators dividing `disc(p_l)`, and
/// then verified exactly, so every returned element is a true root.
pub fn embeddings(k: &NumberField, l: &NumberField) -> Result<Vec<FieldElement>> {
    const OP: &str = "embedding_count";
    let (gk, gl) = (k.degree(), l.degree());
    if gl % gk != 0 {
        return err(MODULE, OP, ErrorKind::DegreeMismatch(format!("degree {gk} does not divide degree {gl}")));
    }
    if gk == 1 {
        return Ok(vec![l.zero()]);
    }
    let budget = (gk as f64).powi(gl as i32);
    if budget > EMBEDDING_SEARCH_BUDGET as f64 {
        return err(MODULE, OP, ErrorKind::SearchBudgetExceeded(format!("{gk}^{gl} root assignments")));
    }
    let alphas = l.complex_roots();
    let betas = k.complex_roots();
    let pk = QPoly::from_ints(k.min_poly());
    let denom = l.poly_disc().abs();
    let denom_f = denom.to_f64().unwrap_or(f64::INFINITY);

    // Lagrange basis coefficients for the roots of p_l
    let basis: Vec<Vec<Complex64>> = (0..gl)
        .map(|j| {
            let mut coeffs = vec![Complex64::new(1.0, 0.0)];
            let mut scale = Complex64::new(1.0, 0.0);
            for i in 0..gl {
                if i == j {
                    continue;
                }
                let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
                for (t, c) in coeffs.iter().enumerate() {
                    next[t + 1] += c;
                    next[t] -= c * alphas[i];
                }
                coeffs = next;
                scale *= alphas[j] - alphas[i];
            }
            coeffs.into_iter().map(|c| c / scale).collect()
        })
        .collect();

    let mut found = BTreeSet::new();
    let mut assign = vec![0usize; gl];
    loop {
        let mut y = vec![Complex64::new(0.0, 0.0); gl];
        for j in 0..gl {
            for t in 0..gl {
                y[t] += betas[assign[j]] * basis[j][t];
            }
        }
        let plausible = y.iter().all(|c| c.im.abs() < 1e-6 * (1.0 + c.re.abs()));
        if plausible {
            let coords: Vec<BigRational> = y
                .iter()
                .map(|c| {
                    let scaled = (c.re * denom_f).round();
                    BigRational::new(BigInt::from(scaled as i128), denom.clone())
                })
                .collect();
            let cand = FieldElement::new(coords);
            if l.eval_poly(&pk, &cand).is_zero() {
                found.insert(cand);
            }
        }
        let mut pos = 0;
        loop {
            if pos == gl {
                return Ok(found.into_iter().collect());
            }
            assign[pos] += 1;
            if assign[pos] < gk {
                break;
            }
            assign[pos] = 0;
            pos += 1;
        }
    }
}

/// The number `t` of ring morphisms `k -> l`.
pub fn embedding_count(k: &NumberField, l: &NumberField) -> Result<usize> {
    Ok(embeddings(k, l)?.len())
}

/// Degree of a normal closure: exact for degree ≤ 3 (flag `true`), the
/// upper bound `g!` otherwise (flag `false`).
pub fn normal_closure_degree(f: &NumberField) -> (u64, bool) {
    match f.degree() {
        1 => (1, true),
        2 => (2, true),
        3 => {
            if exact_sqrt(f.poly_disc()).is_some() {
                (3, true)
            } else {
                (6, true)
            }
        }
        g => ((1..=g as u64).product(), false),
    }
}
