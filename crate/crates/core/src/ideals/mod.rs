//! Fractional ideals of orders: arithmetic, equivalence, the Picard group,
//! the classes meeting `f ⊆ I ⊆ O_L`, and the class monoid with an
//! independent census of its classes.
//!
//! Ideal classes of quadratic orders are decided exactly. A lattice
//! `α(Z + Zτ)` is moved to a canonical `τ` by reduction (the fundamental
//! domain in the imaginary case, the continued-fraction cycle in the real
//! case), so two ideals are equivalent iff their canonical `τ` agree, and the
//! scalar between them falls out of the reduction. Higher degrees fall back
//! to a bounded search that reports exhaustion instead of non-equivalence.

pub mod forms;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;

use crate::error::{err, Error, ErrorKind, Result};
use crate::intmat::{enumerate_intermediate_lattices, rat, rat_int, Lattice, DEFAULT_SUBGROUP_BUDGET};
use crate::numberfield::{FieldElement, NumberField, QuadraticInfo, Surd};
use crate::orders::{conductor, maximal_order, quadratic_conductor, torsion_units, unit_square_quotient, Order};

pub use forms::{Form, FormKey};

const MODULE: &str = "ideals";

/// Default cap on `(2r+1)^g` candidates in the bounded equivalence search.
pub const DEFAULT_BOX_BUDGET: u64 = 1_000_000;

/// Census index bound is `CENSUS_FACTOR * N(f)^2`.
pub const CENSUS_FACTOR: u64 = 16;

/// A full-rank `Γ`-stable lattice in the field of `Γ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalIdeal {
    order: Order,
    lattice: Lattice,
}

fn is_stable(order: &Order, lattice: &Lattice) -> bool {
    let field = order.field();
    let b = lattice.rational_basis();
    order.basis().iter().all(|g| b.iter().all(|v| lattice.contains_vector(&field.mul_coords(&g.coords, v))))
}

impl FractionalIdeal {
    pub fn new(order: &Order, lattice: Lattice) -> Result<FractionalIdeal> {
        const OP: &str = "fractional_ideal";
        if lattice.ambient_dim() != order.degree() || !lattice.is_full_rank() {
            return err(MODULE, OP, ErrorKind::NotFullRank);
        }
        if !is_stable(order, &lattice) {
            return err(MODULE, OP, ErrorKind::NotClosed("lattice is not stable under the order".into()));
        }
        Ok(FractionalIdeal { order: order.clone(), lattice })
    }

    pub fn from_rows(order: &Order, rows: &[Vec<BigRational>]) -> Result<FractionalIdeal> {
        FractionalIdeal::new(order, Lattice::from_rational_rows(order.degree(), rows))
    }

    /// The order itself, the identity of the class monoid.
    pub fn unit(order: &Order) -> FractionalIdeal {
        FractionalIdeal { order: order.clone(), lattice: order.lattice().clone() }
    }

    /// `xΓ` for nonzero `x`.
    pub fn principal(order: &Order, x: &FieldElement) -> Result<FractionalIdeal> {
        if x.is_zero() {
            return err(MODULE, "principal", ErrorKind::InvalidInput("generator is zero".into()));
        }
        Ok(FractionalIdeal { order: order.clone(), lattice: scale_lattice(order.field(), order.lattice(), x) })
    }

    pub fn order(&self) -> &Order {
        &self.order
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn basis(&self) -> Vec<FieldElement> {
        self.lattice.rational_basis().into_iter().map(FieldElement::new).collect()
    }

    /// `covol(I) / covol(Γ)`, which is `[Γ : I]` for integral ideals.
    pub fn norm(&self) -> BigRational {
        self.lattice.covolume().unwrap() / self.order.lattice().covolume().unwrap()
    }

    pub fn is_integral(&self) -> bool {
        self.order.lattice().contains(&self.lattice)
    }

    pub fn scale(&self, x: &FieldElement) -> FractionalIdeal {
        FractionalIdeal { order: self.order.clone(), lattice: scale_lattice(self.order.field(), &self.lattice, x) }
    }
}

fn scale_lattice(field: &NumberField, lattice: &Lattice, x: &FieldElement) -> Lattice {
    lattice.transform(&field.mult_matrix(x))
}

fn same_order(i: &FractionalIdeal, j: &FractionalIdeal, op: &'static str) -> Result<()> {
    if i.order != j.order {
        return err(MODULE, op, ErrorKind::OrderMismatch);
    }
    Ok(())
}

pub fn ideal_product(i: &FractionalIdeal, j: &FractionalIdeal) -> Result<FractionalIdeal> {
    same_order(i, j, "ideal_product")?;
    let field = i.order.field();
    let a = i.lattice.rational_basis();
    let b = j.lattice.rational_basis();
    let rows: Vec<Vec<BigRational>> = a.iter().flat_map(|x| b.iter().map(move |y| field.mul_coords(x, y))).collect();
    Ok(FractionalIdeal { order: i.order.clone(), lattice: Lattice::from_rational_rows(field.degree(), &rows) })
}

/// `(I : J) = {x : xJ ⊆ I}`, the intersection of `b^{-1} I` over a basis of `J`.
pub fn colon_ideal(i: &FractionalIdeal, j: &FractionalIdeal) -> Result<FractionalIdeal> {
    same_order(i, j, "colon_ideal")?;
    let field = i.order.field();
    let mut out: Option<Lattice> = None;
    for b in j.basis() {
        let inv = field.inverse(&b).expect("basis elements are nonzero");
        let pre = scale_lattice(field, &i.lattice, &inv);
        out = Some(match out {
            None => pre,
            Some(l) => l.intersect(&pre),
        });
    }
    Ok(FractionalIdeal { order: i.order.clone(), lattice: out.unwrap() })
}

pub fn is_invertible(i: &FractionalIdeal) -> bool {
    let unit = FractionalIdeal::unit(&i.order);
    let inv = colon_ideal(&unit, i).expect("same order");
    ideal_product(i, &inv).expect("same order").lattice == *i.order.lattice()
}

/// The multiplier ring `(I : I)`, an order containing `Γ`.
pub fn multiplier_ring(i: &FractionalIdeal) -> Result<Order> {
    let c = colon_ideal(i, i)?;
    crate::orders::is_order(i.order.field(), &c.lattice.rational_basis())
}

// ---------------------------------------------------------------------------
// Class keys

/// A label deciding equivalence: equal keys ⇔ equivalent ideals, except for
/// `Lattice` keys (degree ≥ 3), which only name a representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassKey {
    Rational,
    /// Canonical `τ` with `I ~ Z + Zτ`.
    Quadratic(Surd),
    Lattice(Lattice),
}

impl ClassKey {
    pub fn is_canonical(&self) -> bool {
        !matches!(self, ClassKey::Lattice(_))
    }
}

/// `I = scalar · canonical`, with `canonical` integral and primitive.
#[derive(Clone, Debug)]
struct Normalized {
    key: ClassKey,
    scalar: FieldElement,
    canonical: Lattice,
}

fn quadratic_basis(q: &QuadraticInfo, lattice: &Lattice) -> (Surd, Surd) {
    let b = lattice.rational_basis();
    (q.to_surd(&FieldElement::new(b[0].clone())), q.to_surd(&FieldElement::new(b[1].clone())))
}

/// Canonical `τ` and `s` with `Z α + Z β = s (Z + Z τ)`.
fn reduce_quadratic(q: &QuadraticInfo, alpha: &Surd, beta: &Surd) -> (Surd, Surd) {
    let mut tau = q.div(beta, alpha);
    let mut s = alpha.clone();
    if q.is_real() {
        let (red, mu) = q.reduce_real(&tau);
        let (cycle, _) = q.real_cycle(&red);
        let (t, mu_i) = cycle.into_iter().min_by(|a, b| a.0.cmp(&b.0)).unwrap();
        return (t, q.mul(&q.mul(&s, &mu), &mu_i));
    }
    if tau.b.is_negative() {
        tau = tau.neg();
    }
    let one = rat(1);
    loop {
        let n = q.round_real_part(&tau);
        tau = tau.sub(&Surd::rational(rat_int(&n)));
        let a2 = q.abs2(&tau);
        if a2 < one || (a2 == one && tau.a.is_positive()) {
            // Z + Zτ = τ (Z + Z(-1/τ))
            s = q.mul(&s, &tau);
            tau = q.inv(&tau).neg();
            continue;
        }
        return (tau, s);
    }
}

fn normalize(i: &FractionalIdeal) -> Normalized {
    let field = i.order.field();
    match field.degree() {
        1 => {
            let (canonical, factor) = i.lattice.primitive_integral();
            Normalized { key: ClassKey::Rational, scalar: field.from_rational(&factor.recip()), canonical }
        }
        2 => {
            let q = field.quadratic().unwrap();
            let (alpha, beta) = quadratic_basis(&q, &i.lattice);
            let (tau, s) = reduce_quadratic(&q, &alpha, &beta);
            let rows = [field.one().coords, q.from_surd(&tau).coords];
            let (canonical, factor) = Lattice::from_rational_rows(2, &rows).primitive_integral();
            // I = s (Z + Zτ) = (s / factor) canonical
            let scalar = q.from_surd(&s.scale(&factor.recip()));
            Normalized { key: ClassKey::Quadratic(tau), scalar, canonical }
        }
        _ => {
            let (canonical, factor) = i.lattice.primitive_integral();
            Normalized {
                key: ClassKey::Lattice(canonical.clone()),
                scalar: field.from_rational(&factor.recip()),
                canonical,
            }
        }
    }
}

pub fn class_key(i: &FractionalIdeal) -> ClassKey {
    normalize(i).key
}

/// Returns `x` with `J = xI`, or `None` when the ideals are not equivalent.
///
/// Degrees one and two are decided exactly. In higher degree a bounded
/// search over `(J : I)` either finds `x` or fails with
/// `SearchBudgetExceeded`; "not equivalent" is then only reported when an
/// invariant (invertibility, multiplier ring) separates the ideals.
pub fn is_equivalent(i: &FractionalIdeal, j: &FractionalIdeal) -> Result<Option<FieldElement>> {
    const OP: &str = "is_equivalent";
    same_order(i, j, OP)?;
    let field = i.order.field();
    if field.degree() <= 2 {
        let a = normalize(i);
        let b = normalize(j);
        if a.key != b.key {
            return Ok(None);
        }
        let x = field.div(&b.scalar, &a.scalar).unwrap();
        if i.scale(&x).lattice != j.lattice {
            return err(MODULE, OP, ErrorKind::Internal("reduction scalar does not map I onto J".into()));
        }
        return Ok(Some(x));
    }
    if is_invertible(i) != is_invertible(j) || multiplier_ring(i)? != multiplier_ring(j)? {
        return Ok(None);
    }
    let radius = default_box_radius(i, j);
    match box_equivalence_search(i, j, radius, DEFAULT_BOX_BUDGET)? {
        Some(x) => Ok(Some(x)),
        None => err(
            MODULE,
            OP,
            ErrorKind::SearchBudgetExceeded(format!("no scalar found in the coordinate box of radius {radius}")),
        ),
    }
}

/// Radius `4 ⌈ν^{1/g}⌉`, with `ν` the target norm relative to `(J : I)`.
fn default_box_radius(i: &FractionalIdeal, j: &FractionalIdeal) -> i64 {
    let target = (j.norm() / i.norm()).abs();
    let rel = target / colon_ideal(j, i).unwrap().norm();
    let g = i.order.degree() as f64;
    let r = rel.to_f64().unwrap_or(1.0).abs().powf(1.0 / g).ceil().max(1.0);
    4 * r as i64
}

/// Searches `x ∈ (J : I)` with coordinates in `[-radius, radius]` and
/// `|N(x)| = N(J)/N(I)` such that `xI = J`.
pub fn box_equivalence_search(
    i: &FractionalIdeal,
    j: &FractionalIdeal,
    radius: i64,
    budget: u64,
) -> Result<Option<FieldElement>> {
    const OP: &str = "box_equivalence_search";
    same_order(i, j, OP)?;
    let field = i.order.field();
    let g = field.degree();
    let side = (2 * radius + 1) as u64;
    if side.checked_pow(g as u32).is_none_or(|n| n > budget) {
        return err(MODULE, OP, ErrorKind::SearchBudgetExceeded(format!("box of radius {radius} in degree {g}")));
    }
    let target = (j.norm() / i.norm()).abs();
    let basis = colon_ideal(j, i)?.basis();
    let mut coords = vec![-radius; g];
    loop {
        if coords.iter().any(|&c| c != 0) {
            let mut x = field.zero();
            for (c, b) in coords.iter().zip(&basis) {
                x = field.add(&x, &field.scale(b, &rat(*c)));
            }
            if field.norm(&x).abs() == target && i.scale(&x).lattice == j.lattice {
                return Ok(Some(x));
            }
        }
        let mut k = 0;
        loop {
            if k == g {
                return Ok(None);
            }
            if coords[k] < radius {
                coords[k] += 1;
                break;
            }
            coords[k] = -radius;
            k += 1;
        }
    }
}

/// The primitive binary quadratic form of a quadratic-order lattice
/// `Zα + Zβ`, oriented so that `(αβ' − α'β)/√m > 0`, with its class key.
pub fn lattice_form_key(i: &FractionalIdeal) -> Result<FormKey> {
    const OP: &str = "lattice_form_key";
    let q = i
        .order
        .field()
        .quadratic()
        .ok_or_else(|| Error::new(MODULE, OP, ErrorKind::UnsupportedDegree(i.order.degree())))?;
    let (alpha, mut beta) = quadratic_basis(&q, &i.lattice);
    if (&alpha.a * &beta.b - &alpha.b * &beta.a).is_negative() {
        beta = beta.neg();
    }
    let m = rat_int(&q.squarefree);
    let a = q.norm(&alpha);
    let b = (&alpha.a * &beta.a - &alpha.b * &beta.b * &m) * rat(2);
    let c = q.norm(&beta);
    let den = a.denom().lcm(b.denom()).lcm(c.denom());
    let ints: Vec<BigInt> = [a, b, c].iter().map(|x| (x * rat_int(&den)).to_integer()).collect();
    let content = ints[0].gcd(&ints[1]).gcd(&ints[2]);
    let f: Vec<i64> = ints
        .iter()
        .map(|x| (x / &content).to_i64())
        .collect::<Option<_>>()
        .ok_or_else(|| Error::new(MODULE, OP, ErrorKind::InvalidInput("form coefficients exceed 64 bits".into())))?;
    Ok(forms::class_key((f[0], f[1], f[2])))
}

// ---------------------------------------------------------------------------
// Classes

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealClass {
    /// Integral, primitive representative; canonical for the class when the
    /// key is.
    pub representative: FractionalIdeal,
    pub invertible: bool,
    pub key: ClassKey,
}

impl IdealClass {
    pub fn of(i: &FractionalIdeal) -> IdealClass {
        let n = normalize(i);
        let representative = FractionalIdeal { order: i.order.clone(), lattice: n.canonical };
        IdealClass { invertible: is_invertible(&representative), representative, key: n.key }
    }

    pub fn norm(&self) -> BigRational {
        self.representative.norm()
    }
}

/// Appends `c` unless an equivalent class is present; returns its index.
fn insert_class(classes: &mut Vec<IdealClass>, c: IdealClass) -> Result<usize> {
    if c.key.is_canonical() {
        if let Some(k) = classes.iter().position(|d| d.key == c.key) {
            return Ok(k);
        }
    } else {
        for (k, d) in classes.iter().enumerate() {
            if is_equivalent(&d.representative, &c.representative)?.is_some() {
                return Ok(k);
            }
        }
    }
    classes.push(c);
    Ok(classes.len() - 1)
}

/// The conductor of `Γ` as an ideal of `Γ`.
pub fn conductor_ideal(gamma: &Order, maximal: &Order) -> Result<FractionalIdeal> {
    let c = conductor(gamma, maximal)?;
    Ok(FractionalIdeal { order: gamma.clone(), lattice: c.lattice })
}

/// Classes of the `Γ`-stable lattices `I` with `f ⊆ I ⊆ O_L`, checked
/// against `|𝓘| ≤ N(f)^g`.
pub fn intermediate_classes(gamma: &Order, maximal: &Order) -> Result<Vec<IdealClass>> {
    const OP: &str = "intermediate_classes";
    let c = conductor(gamma, maximal)?;
    let classes = classes_between(gamma, maximal, &c.lattice)?;
    let bound = num_traits::pow(c.norm.clone(), gamma.degree());
    if BigInt::from(classes.len()) > bound {
        return err(MODULE, OP, ErrorKind::BoundViolation(format!("|I| = {} > N(f)^g = {bound}", classes.len())));
    }
    Ok(classes)
}

/// Classes meeting `{I : f' ⊆ I ⊆ O_L}` for an `O_L`-ideal `f' ⊆ Γ` other
/// than the conductor. No bound is asserted for this variant.
pub fn intermediate_classes_for(gamma: &Order, maximal: &Order, f_prime: &Lattice) -> Result<Vec<IdealClass>> {
    const OP: &str = "intermediate_classes_for";
    if !gamma.lattice().contains(f_prime) || !is_stable(maximal, f_prime) {
        return err(MODULE, OP, ErrorKind::InvalidInput("f' must be an ideal of O_L contained in the order".into()));
    }
    classes_between(gamma, maximal, f_prime)
}

fn classes_between(gamma: &Order, maximal: &Order, inner: &Lattice) -> Result<Vec<IdealClass>> {
    let lattices = enumerate_intermediate_lattices(maximal.lattice(), inner, DEFAULT_SUBGROUP_BUDGET)
        .map_err(|e| Error::new(MODULE, "intermediate_classes", e.kind))?;
    let mut classes = Vec::new();
    for l in lattices {
        if is_stable(gamma, &l) {
            let i = FractionalIdeal { order: gamma.clone(), lattice: l };
            insert_class(&mut classes, IdealClass::of(&i))?;
        }
    }
    Ok(classes)
}

/// Integral ideals of `Γ` of index at most `bound`, as HNF lattices in
/// `Γ`-coordinates (upper-triangular, pivots multiplying to the index).
fn integral_ideals_up_to(gamma: &Order, bound: u64) -> Vec<FractionalIdeal> {
    let g = gamma.degree();
    let basis = gamma.lattice().rational_basis();
    let mut out = Vec::new();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    hnf_recurse(g, 0, bound, &mut rows, &mut |rows| {
        let field_rows: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| {
                (0..g)
                    .map(|col| r.iter().zip(&basis).map(|(c, b)| rat(*c) * &b[col]).sum())
                    .collect()
            })
            .collect();
        let lattice = Lattice::from_rational_rows(g, &field_rows);
        if is_stable(gamma, &lattice) {
            out.push(FractionalIdeal { order: gamma.clone(), lattice });
        }
    });
    out
}

/// Enumerates upper-triangular HNF matrices with product of pivots ≤ `bound`,
/// row by row from the bottom.
fn hnf_recurse(g: usize, done: usize, bound: u64, rows: &mut Vec<Vec<i64>>, visit: &mut dyn FnMut(&[Vec<i64>])) {
    if done == g {
        let mut ordered = rows.clone();
        ordered.reverse();
        visit(&ordered);
        return;
    }
    let col = g - 1 - done;
    for pivot in 1..=bound as i64 {
        // entries to the right of the pivot are reduced modulo the pivots below
        let ranges: Vec<i64> = (col + 1..g).map(|c| rows[g - 1 - c][c]).collect();
        let count: i64 = ranges.iter().product();
        for idx in 0..count.max(1) {
            let mut row = vec![0i64; g];
            row[col] = pivot;
            let mut t = idx;
            for (k, r) in ranges.iter().enumerate() {
                row[col + 1 + k] = t % r;
                t /= r;
            }
            rows.push(row);
            hnf_recurse(g, done + 1, bound / pivot as u64, rows, visit);
            rows.pop();
        }
    }
}

/// Minkowski's bound `(g!/g^g)(4/π)^{r2} √|disc Γ|`, rounded up.
pub fn minkowski_bound(gamma: &Order) -> u64 {
    let g = gamma.degree();
    let (_, r2) = gamma.field().signature();
    let fact: f64 = (1..=g).map(|k| k as f64).product();
    let disc = gamma.discriminant().abs().to_f64().unwrap();
    let m = fact / (g as f64).powi(g as i32) * (4.0 / std::f64::consts::PI).powi(r2 as i32) * disc.sqrt();
    (m * (1.0 + 1e-9)).ceil() as u64
}

/// Invertible classes from integral ideals of norm at most the Minkowski
/// bound (every invertible class has one), closed under products.
fn picard_by_enumeration(gamma: &Order) -> Result<Vec<IdealClass>> {
    let mut classes = vec![IdealClass::of(&FractionalIdeal::unit(gamma))];
    for i in integral_ideals_up_to(gamma, minkowski_bound(gamma)) {
        if is_invertible(&i) {
            insert_class(&mut classes, IdealClass::of(&i))?;
        }
    }
    let mut k = 0;
    while k < classes.len() {
        for l in 0..=k {
            let p = ideal_product(&classes[k].representative, &classes[l].representative)?;
            insert_class(&mut classes, IdealClass::of(&p))?;
        }
        k += 1;
    }
    Ok(classes)
}

/// `|Pic(Γ)|` for a quadratic order from `h(O_K)`:
/// `h f / [O_K^× : Γ^×] · Π_{p | f} (1 − (d_K/p)/p)`.
pub fn picard_index_formula(gamma: &Order, maximal: &Order, h: u64) -> Result<BigRational> {
    const OP: &str = "picard_index_formula";
    let (dk, f) = quadratic_conductor(gamma)
        .ok_or_else(|| Error::new(MODULE, OP, ErrorKind::UnsupportedDegree(gamma.degree())))?;
    let dk = dk.to_i64().unwrap();
    let f = f.to_i64().unwrap();
    let mut value = BigRational::from_integer(BigInt::from(h) * f);
    let mut n = f;
    let mut p = 2;
    while n > 1 {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            value *= BigRational::new(BigInt::from(p - forms::kronecker(dk, p)), BigInt::from(p));
        }
        p += 1;
    }
    Ok(value / rat_int(&unit_index(gamma, maximal)?))
}

/// `[O_K^× : Γ^×]` for a quadratic order.
pub fn unit_index(gamma: &Order, maximal: &Order) -> Result<BigInt> {
    let field = gamma.field();
    if field.degree() == 1 {
        return Ok(BigInt::one());
    }
    let roots = torsion_units(field)?;
    let torsion_ratio = roots.len() / roots.iter().filter(|u| gamma.contains(u)).count();
    let mut index = BigInt::from(torsion_ratio);
    if field.quadratic().unwrap().is_real() {
        let k = unit_square_quotient(gamma)?.power_of_maximal.unwrap();
        let k0 = unit_square_quotient(maximal)?.power_of_maximal.unwrap();
        index *= k / k0;
    }
    Ok(index)
}

/// Class number of a field of degree at most two. Real quadratic fields are
/// enumerated and cross-checked against the reduced-form count.
pub fn class_number(field: &NumberField) -> Result<u64> {
    const OP: &str = "class_number";
    match field.degree() {
        1 => Ok(1),
        2 => {
            let q = field.quadratic().unwrap();
            let dk = q.field_discriminant().to_i64().unwrap();
            let by_forms = forms::class_number(dk) as u64;
            if !q.is_real() {
                return Ok(by_forms);
            }
            let maximal = maximal_order(field, None)?;
            let by_ideals = picard_by_enumeration(&maximal)?.len() as u64;
            if by_ideals != by_forms {
                return err(
                    MODULE,
                    OP,
                    ErrorKind::MethodDisagreement(format!("ideal enumeration gives {by_ideals}, forms give {by_forms}")),
                );
            }
            Ok(by_ideals)
        }
        g => err(MODULE, OP, ErrorKind::NeedsUserInput(format!("class number of a degree-{g} field"))),
    }
}

#[derive(Clone, Debug)]
pub struct PicardGroup {
    pub classes: Vec<IdealClass>,
    pub class_number: u64,
    /// Value of the index formula (quadratic orders).
    pub by_formula: Option<BigInt>,
    /// Reduced-form count of the order's discriminant (quadratic orders).
    pub by_forms: Option<u64>,
}

impl PicardGroup {
    pub fn order(&self) -> usize {
        self.classes.len()
    }
}

/// `Pic(Γ)` by enumeration, cross-checked with the index formula and the
/// reduced-form count; any disagreement is a `MethodDisagreement`.
pub fn picard_group(gamma: &Order, maximal: &Order) -> Result<PicardGroup> {
    const OP: &str = "picard_group";
    let g = gamma.degree();
    if g > 2 {
        return err(MODULE, OP, ErrorKind::UnsupportedDegree(g));
    }
    let h = class_number(gamma.field())?;
    let classes = picard_by_enumeration(gamma)?;
    if g == 1 {
        return Ok(PicardGroup { classes, class_number: 1, by_formula: None, by_forms: None });
    }
    let formula = picard_index_formula(gamma, maximal, h)?;
    let disc = gamma.discriminant().to_i64().unwrap();
    let by_forms = forms::class_number(disc) as u64;
    let n = classes.len();
    if !formula.is_integer() || formula.to_integer() != BigInt::from(n) || by_forms != n as u64 {
        return err(
            MODULE,
            OP,
            ErrorKind::MethodDisagreement(format!("enumeration {n}, index formula {formula}, forms {by_forms}")),
        );
    }
    Ok(PicardGroup { classes, class_number: h, by_formula: Some(formula.to_integer()), by_forms: Some(by_forms) })
}

// ---------------------------------------------------------------------------
// Census and class monoid

/// Classes found by the brute-force census of `Γ`-stable sublattices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusReport {
    pub index_bound: u64,
    /// Primitive `Γ`-stable sublattices examined.
    pub lattices: u64,
    pub keys: BTreeSet<FormKey>,
}

/// Every `Γ`-ideal is `c (Za + Z(b + τ))` with `Γ = Z + Zτ`, `0 ≤ b < a` and
/// `a | N(b + τ)`; scaling by `c` does not change the class, so the census
/// runs over these primitive lattices with `a ≤ index_bound` and classifies
/// each through its binary quadratic form.
pub fn class_census(gamma: &Order, index_bound: u64) -> Result<CensusReport> {
    const OP: &str = "class_census";
    let q = gamma.field().quadratic().ok_or_else(|| Error::new(MODULE, OP, ErrorKind::UnsupportedDegree(gamma.degree())))?;
    let (_, f) = quadratic_conductor(gamma).ok_or_else(|| Error::new(MODULE, OP, ErrorKind::NotContained))?;
    let tau = q.omega().scale(&rat_int(&f));
    let t = q.trace(&tau).to_integer().to_i64().unwrap();
    let n = q.norm(&tau).to_integer().to_i64().unwrap();
    let bound = i64::try_from(index_bound)
        .ok()
        .filter(|b| b.checked_mul(*b).and_then(|x| x.checked_add(t.abs() * b + n.abs())).is_some())
        .ok_or_else(|| Error::new(MODULE, OP, ErrorKind::IndexTooLarge(format!("census bound {index_bound}"))))?;
    let (count, keys) = (1..=bound)
        .into_par_iter()
        .map(|a| {
            let mut keys = BTreeSet::new();
            let mut count = 0u64;
            for b in 0..a {
                // N(b + τ) = b² + t b + n
                let nb = b * b + t * b + n;
                if nb % a != 0 {
                    continue;
                }
                count += 1;
                let form = (a, 2 * b + t, nb / a);
                let c = forms::content(form);
                keys.insert(forms::class_key((form.0 / c, form.1 / c, form.2 / c)));
            }
            (count, keys)
        })
        .reduce(
            || (0, BTreeSet::new()),
            |mut x, y| {
                x.0 += y.0;
                x.1.extend(y.1);
                x
            },
        );
    Ok(CensusReport { index_bound, lattices: count, keys })
}

/// Bounds `|𝓘| ≤ N(f)^g`, `|Pic| ≤ N(f) h`, `|C| ≤ N(f)^{g+1} h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidBounds {
    pub intermediate: (usize, BigInt),
    pub picard: (usize, BigInt),
    pub monoid: (usize, BigInt),
}

impl MonoidBounds {
    pub fn hold(&self) -> bool {
        let ok = |(n, b): &(usize, BigInt)| BigInt::from(*n) <= *b;
        ok(&self.intermediate) && ok(&self.picard) && ok(&self.monoid)
    }
}

#[derive(Clone, Debug)]
pub struct ClassMonoid {
    pub order: Order,
    pub classes: Vec<IdealClass>,
    /// `table[i][j]` is the index of the class of `I_i I_j`.
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
    pub picard: Vec<usize>,
    pub intermediate: Vec<usize>,
    pub conductor_norm: BigInt,
    pub class_number: u64,
    pub census: Option<CensusReport>,
}

impl ClassMonoid {
    pub fn size(&self) -> usize {
        self.classes.len()
    }

    pub fn bounds(&self) -> MonoidBounds {
        let g = self.order.degree();
        let nf = &self.conductor_norm;
        let h = BigInt::from(self.class_number);
        MonoidBounds {
            intermediate: (self.intermediate.len(), num_traits::pow(nf.clone(), g)),
            picard: (self.picard.len(), nf * &h),
            monoid: (self.size(), num_traits::pow(nf.clone(), g + 1) * &h),
        }
    }

    /// Re-derives the table from representatives and checks the monoid laws
    /// and that the invertible classes form a group.
    pub fn verify(&self) -> Result<()> {
        const OP: &str = "verify";
        let n = self.size();
        let fail = |msg: String| err(MODULE, OP, ErrorKind::Internal(msg));
        let violation = |msg: String| err(MODULE, OP, ErrorKind::FactorizationViolation(msg));
        if self.table.len() != n || self.table.iter().any(|r| r.len() != n || r.iter().any(|&k| k >= n)) {
            return violation("multiplication table leaves the monoid".into());
        }
        for a in 0..n {
            for b in 0..n {
                let p = ideal_product(&self.classes[a].representative, &self.classes[b].representative)?;
                let k = self.lookup(&p)?;
                if self.table[a][b] != k {
                    return violation(format!("table entry ({a}, {b}) is {} but the product lies in class {k}", self.table[a][b]));
                }
            }
            if self.table[self.identity][a] != a {
                return fail(format!("identity does not fix class {a}"));
            }
        }
        for a in 0..n {
            for b in 0..n {
                if self.table[a][b] != self.table[b][a] {
                    return fail(format!("product of {a} and {b} is not commutative"));
                }
                for c in 0..n {
                    if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]] {
                        return fail(format!("product of {a}, {b}, {c} is not associative"));
                    }
                }
            }
        }
        for &p in &self.picard {
            if !self.picard.iter().any(|&q| self.table[p][q] == self.identity) {
                return fail(format!("invertible class {p} has no inverse"));
            }
        }
        Ok(())
    }

    fn lookup(&self, i: &FractionalIdeal) -> Result<usize> {
        let c = IdealClass::of(i);
        for (k, d) in self.classes.iter().enumerate() {
            let same = if c.key.is_canonical() {
                d.key == c.key
            } else {
                is_equivalent(&d.representative, &c.representative)?.is_some()
            };
            if same {
                return Ok(k);
            }
        }
        err(MODULE, "lookup", ErrorKind::FactorizationViolation("product lies outside the monoid".into()))
    }

    /// Corrupts one table entry (negative control for [`ClassMonoid::verify`]).
    pub fn inject_table_fault(&mut self) {
        let n = self.size();
        self.table[0][0] = if n > 1 { (self.table[0][0] + 1) % n } else { n };
    }
}

/// `C_Γ` assembled as `Pic(Γ) · 𝓘`, with its multiplication table. For
/// quadratic orders the census of `Γ`-stable sublattices of index at most
/// `16 N(f)^2` must find exactly the same classes; any difference is a
/// `FactorizationViolation`.
pub fn class_monoid(gamma: &Order, maximal: &Order) -> Result<ClassMonoid> {
    class_monoid_with(gamma, maximal, true)
}

pub fn class_monoid_with(gamma: &Order, maximal: &Order, run_census: bool) -> Result<ClassMonoid> {
    const OP: &str = "class_monoid";
    // the intermediate enumeration fails fast when the conductor is too large
    let inter = intermediate_classes(gamma, maximal)?;
    let pic = picard_group(gamma, maximal)?;
    let conductor_norm = conductor(gamma, maximal)?.norm;

    let mut classes: Vec<IdealClass> = Vec::new();
    for p in &pic.classes {
        for i in &inter {
            let prod = ideal_product(&p.representative, &i.representative)?;
            insert_class(&mut classes, IdealClass::of(&prod))?;
        }
    }
    let unit_key = IdealClass::of(&FractionalIdeal::unit(gamma)).key;
    let pic_keys: BTreeSet<&ClassKey> = pic.classes.iter().map(|c| &c.key).collect();
    let inter_keys: BTreeSet<&ClassKey> = inter.iter().map(|c| &c.key).collect();
    classes.sort_by(|a, b| {
        let rank = |c: &IdealClass| (c.key != unit_key, !c.invertible);
        rank(a).cmp(&rank(b)).then_with(|| a.norm().cmp(&b.norm())).then_with(|| a.key.cmp(&b.key))
    });
    let n = classes.len();

    let mut monoid = ClassMonoid {
        order: gamma.clone(),
        identity: 0,
        picard: (0..n).filter(|&k| pic_keys.contains(&classes[k].key)).collect(),
        intermediate: (0..n).filter(|&k| inter_keys.contains(&classes[k].key)).collect(),
        classes,
        table: Vec::new(),
        conductor_norm: conductor_norm.clone(),
        class_number: pic.class_number,
        census: None,
    };
    if monoid.classes[0].key != unit_key || monoid.picard.len() != pic.order() || monoid.intermediate.len() != inter.len()
    {
        return err(MODULE, OP, ErrorKind::Internal("class bookkeeping is inconsistent".into()));
    }
    let mut table = vec![vec![0; n]; n];
    for a in 0..n {
        for b in a..n {
            let p = ideal_product(&monoid.classes[a].representative, &monoid.classes[b].representative)?;
            let k = monoid.lookup(&p).map_err(|_| {
                Error::new(MODULE, OP, ErrorKind::FactorizationViolation(format!("class of I_{a} I_{b} is not in Pic·I")))
            })?;
            table[a][b] = k;
            table[b][a] = k;
        }
    }
    monoid.table = table;

    if run_census && gamma.degree() == 2 {
        let nf = conductor_norm.to_u64().unwrap_or(u64::MAX);
        let census = class_census(gamma, CENSUS_FACTOR.saturating_mul(nf.saturating_mul(nf)))?;
        let assembled: BTreeSet<FormKey> =
            monoid.classes.iter().map(|c| lattice_form_key(&c.representative)).collect::<Result<_>>()?;
        if assembled.len() != n {
            return err(MODULE, OP, ErrorKind::Internal("distinct classes share a form key".into()));
        }
        if census.keys != assembled {
            let extra: Vec<_> = census.keys.difference(&assembled).collect();
            let missing: Vec<_> = assembled.difference(&census.keys).collect();
            return err(
                MODULE,
                OP,
                ErrorKind::FactorizationViolation(format!(
                    "census classes outside Pic·I: {extra:?}; assembled classes the census missed: {missing:?}"
                )),
            );
        }
        monoid.census = Some(census);
    }
    Ok(monoid)
}

/// Convenience: the maximal order of a field of degree at most two.
pub fn maximal_of(gamma: &Order) -> Result<Order> {
    maximal_order(gamma.field(), None)
}

/// `Σ_{O' ⊇ Γ} |Pic(O')|` grouped by multiplier ring, for reporting: each
/// class is counted under the conductor of its multiplier ring.
pub fn classes_by_multiplier_ring(monoid: &ClassMonoid) -> Result<BTreeMap<BigInt, usize>> {
    let mut out = BTreeMap::new();
    for c in &monoid.classes {
        let o = multiplier_ring(&c.representative)?;
        let f = quadratic_conductor(&o).map_or_else(BigInt::one, |(_, f)| f);
        *out.entry(f).or_insert(0) += 1;
    }
    Ok(out)
}

impl Order {
    /// Whether a lattice is stable under multiplication by the order.
    pub fn stabilizes(&self, lattice: &Lattice) -> bool {
        is_stable(self, lattice)
    }
}
