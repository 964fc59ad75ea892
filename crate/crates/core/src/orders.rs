//! Orders of number fields: validation, maximal orders of quadratic fields,
//! conductors, the scaled subring `Z[dΓ]`, and unit square classes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{err, ErrorKind, Result};
use crate::intmat::{lattice_index, rat, rational_det, rational_inverse, Lattice};
use crate::numberfield::{exact_sqrt, FieldElement, NumberField, Surd};

const MODULE: &str = "orders";

/// A unital, multiplicatively closed full-rank lattice in a number field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Order {
    field: NumberField,
    lattice: Lattice,
    assumed_maximal: bool,
}

impl Order {
    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    /// True for a maximal order accepted from a user-supplied candidate
    /// rather than computed.
    pub fn assumed_maximal(&self) -> bool {
        self.assumed_maximal
    }

    /// The HNF basis as field elements.
    pub fn basis(&self) -> Vec<FieldElement> {
        self.lattice.rational_basis().into_iter().map(FieldElement::new).collect()
    }

    pub fn contains(&self, e: &FieldElement) -> bool {
        self.lattice.contains_vector(&e.coords)
    }

    /// `[self : inner]` for an order `inner ⊆ self`.
    pub fn index_of(&self, inner: &Order) -> Result<BigInt> {
        lattice_index(&self.lattice, &inner.lattice)
    }

    /// Discriminant `det(Tr(b_i b_j))` of the basis.
    pub fn discriminant(&self) -> BigInt {
        let b = self.basis();
        let g = b.len();
        let gram: Vec<Vec<BigRational>> = (0..g)
            .map(|i| (0..g).map(|j| self.field.trace(&self.field.mul(&b[i], &b[j]))).collect())
            .collect();
        rational_det(&gram).to_integer()
    }
}

/// Validates a basis (rows of power-basis coordinates) as an order.
pub fn is_order(field: &NumberField, basis: &[Vec<BigRational>]) -> Result<Order> {
    const OP: &str = "is_order";
    let g = field.degree();
    if basis.iter().any(|r| r.len() != g) {
        return err(MODULE, OP, ErrorKind::InvalidInput(format!("basis vectors must have {g} coordinates")));
    }
    let lattice = Lattice::from_rational_rows(g, basis);
    if !lattice.is_full_rank() {
        return err(MODULE, OP, ErrorKind::NotFullRank);
    }
    order_from_lattice(field, lattice, OP)
}

fn order_from_lattice(field: &NumberField, lattice: Lattice, op: &'static str) -> Result<Order> {
    if !lattice.contains_vector(&field.one().coords) {
        return err(MODULE, op, ErrorKind::NotUnital);
    }
    let b = lattice.rational_basis();
    for i in 0..b.len() {
        for j in i..b.len() {
            let p = field.mul_coords(&b[i], &b[j]);
            if !lattice.contains_vector(&p) {
                return err(
                    MODULE,
                    op,
                    ErrorKind::NotClosed(format!("product of basis elements {i} and {j} leaves the lattice")),
                );
            }
        }
    }
    Ok(Order { field: field.clone(), lattice, assumed_maximal: false })
}

/// The order `Z + Z f ω` of conductor `f` in a quadratic field.
pub fn quadratic_order(field: &NumberField, f: u64) -> Result<Order> {
    let q = field
        .quadratic()
        .ok_or_else(|| crate::Error::new(MODULE, "quadratic_order", ErrorKind::UnsupportedDegree(field.degree())))?;
    let w = q.from_surd(&q.omega().scale(&rat(f as i64)));
    is_order(field, &[field.one().coords, w.coords])
}

/// The maximal order. Degrees 1 and 2 are computed; higher degrees need a
/// candidate basis, which is validated and flagged as assumed maximal.
pub fn maximal_order(field: &NumberField, candidate: Option<&[Vec<BigRational>]>) -> Result<Order> {
    const OP: &str = "maximal_order";
    match field.degree() {
        1 => is_order(field, &[vec![rat(1)]]),
        2 if candidate.is_none() => quadratic_order(field, 1),
        g => {
            let Some(basis) = candidate else {
                return err(MODULE, OP, ErrorKind::NeedsUserInput(format!("degree {g} needs a candidate maximal-order basis")));
            };
            let mut o = is_order(field, basis)?;
            for e in o.basis() {
                let mp = field.min_poly_of(&e);
                if mp.to_integer_coeffs().is_none() {
                    return err(MODULE, OP, ErrorKind::InvalidInput("candidate contains a non-integral element".into()));
                }
            }
            // disc(Z[x]) = [O : Z[x]]^2 disc(O)
            let d = o.discriminant();
            let ratio = BigRational::new(field.poly_disc().clone(), d.clone());
            if !ratio.is_integer() || exact_sqrt(&ratio.to_integer()).is_none() {
                return err(
                    MODULE,
                    OP,
                    ErrorKind::InvalidInput(format!("poly_disc / disc(candidate) = {ratio} is not a square")),
                );
            }
            o.assumed_maximal = g > 2;
            Ok(o)
        }
    }
}

/// The conductor `f = {x ∈ O_L : x O_L ⊆ Γ}` and its norm `[O_L : f]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConductorData {
    pub lattice: Lattice,
    pub norm: BigInt,
}

pub fn conductor(gamma: &Order, maximal: &Order) -> Result<ConductorData> {
    const OP: &str = "conductor";
    if gamma.field != maximal.field || !maximal.lattice.contains(&gamma.lattice) {
        return err(MODULE, OP, ErrorKind::NotContained);
    }
    let field = &gamma.field;
    let mut f = maximal.lattice.clone();
    for b in maximal.basis() {
        // x b ∈ Γ  <=>  x ∈ b^{-1} Γ
        let inv = field.inverse(&b).expect("basis elements are nonzero");
        let pre = gamma.lattice.transform(&field.mult_matrix(&inv));
        f = f.intersect(&pre);
    }
    let norm = lattice_index(&maximal.lattice, &f).map_err(|e| crate::Error::new(MODULE, OP, e.kind))?;
    Ok(ConductorData { lattice: f, norm })
}

/// `Z[dΓ]`: the smallest order containing `dΓ`, by saturating `Z + dΓ`
/// under products until the lattice stabilizes.
pub fn scaled_subring(gamma: &Order, d: u64) -> Result<Order> {
    const OP: &str = "scaled_subring";
    if d == 0 {
        return err(MODULE, OP, ErrorKind::InvalidInput("d must be positive".into()));
    }
    let field = &gamma.field;
    let g = field.degree();
    let mut rows = vec![field.one().coords];
    rows.extend(gamma.lattice.scale(&rat(d as i64)).rational_basis());
    let mut lat = Lattice::from_rational_rows(g, &rows);
    loop {
        let b = lat.rational_basis();
        let mut rows = b.clone();
        for i in 0..b.len() {
            for j in i..b.len() {
                rows.push(field.mul_coords(&b[i], &b[j]));
            }
        }
        let next = Lattice::from_rational_rows(g, &rows);
        if next == lat {
            break;
        }
        lat = next;
    }
    order_from_lattice(field, lat, OP)
}

/// Outcome of comparing the conductors of `Γ` and `Z[dΓ]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConductorComparison {
    pub d: u64,
    pub norm_f: BigInt,
    pub norm_f_prime: BigInt,
    /// `d f ⊆ f'`
    pub scaled_contained: bool,
    /// `N(f') ≤ d^g N(f)`
    pub norm_bound_holds: bool,
}

impl ConductorComparison {
    pub fn holds(&self) -> bool {
        self.scaled_contained && self.norm_bound_holds
    }
}

pub fn conductor_comparison_check(gamma: &Order, maximal: &Order, d: u64) -> Result<ConductorComparison> {
    let f = conductor(gamma, maximal)?;
    let sub = scaled_subring(gamma, d)?;
    let fp = conductor(&sub, maximal)?;
    let scaled_contained = fp.lattice.contains(&f.lattice.scale(&rat(d as i64)));
    let bound = num_traits::pow(BigInt::from(d), gamma.degree()) * &f.norm;
    Ok(ConductorComparison {
        d,
        norm_bound_holds: fp.norm <= bound,
        norm_f: f.norm,
        norm_f_prime: fp.norm,
        scaled_contained,
    })
}

/// Unit group of an order of degree at most two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitGroupData {
    pub torsion_order: usize,
    /// Fundamental unit of Γ (real quadratic only), `> 1` under `sqrt m > 0`.
    pub fundamental_unit: Option<FieldElement>,
    /// Exponent `k` with `ε_Γ = ε_{O_L}^k`.
    pub power_of_maximal: Option<u64>,
    pub square_class_count: usize,
}

/// `|Γ^× / Γ^{×2}|`, with the unit group it is computed from.
pub fn unit_square_quotient(gamma: &Order) -> Result<UnitGroupData> {
    const OP: &str = "unit_square_quotient";
    let field = &gamma.field;
    match field.degree() {
        1 => Ok(UnitGroupData { torsion_order: 2, fundamental_unit: None, power_of_maximal: None, square_class_count: 2 }),
        2 => {
            let q = field.quadratic().unwrap();
            let torsion = torsion_units(field)?.into_iter().filter(|u| gamma.contains(u)).count();
            if !q.is_real() {
                // cyclic of even order: squares have index 2
                return Ok(UnitGroupData {
                    torsion_order: torsion,
                    fundamental_unit: None,
                    power_of_maximal: None,
                    square_class_count: 2,
                });
            }
            let maximal = maximal_order(field, None)?;
            let index = maximal.index_of(gamma)?;
            let budget = (index * 6u32).to_u64().unwrap_or(u64::MAX);
            let eps = q.fundamental_unit();
            let mut power = eps.clone();
            for k in 1..=budget {
                let e = q.from_surd(&power);
                if gamma.contains(&e) {
                    return Ok(UnitGroupData {
                        torsion_order: torsion,
                        fundamental_unit: Some(e),
                        power_of_maximal: Some(k),
                        square_class_count: 4,
                    });
                }
                power = q.mul(&power, &eps);
            }
            err(MODULE, OP, ErrorKind::SearchBudgetExceeded(format!("no power of the fundamental unit up to {budget} lies in the order")))
        }
        g => err(MODULE, OP, ErrorKind::UnsupportedDegree(g)),
    }
}

/// Roots of unity of a quadratic field (all of them lie in the maximal order).
pub fn torsion_units(field: &NumberField) -> Result<Vec<FieldElement>> {
    let q = field
        .quadratic()
        .ok_or_else(|| crate::Error::new(MODULE, "torsion_units", ErrorKind::UnsupportedDegree(field.degree())))?;
    let w = q.omega();
    let mut out = Vec::new();
    // norm-one elements u + v ω; |u|, |v| ≤ 2 suffices for roots of unity
    for u in -2i64..=2 {
        for v in -2i64..=2 {
            let s = Surd::rational(rat(u)).add(&w.scale(&rat(v)));
            if q.norm(&s).is_one() {
                let e = q.from_surd(&s);
                let is_root = (1..=6).any(|n| field.pow(&e, n) == field.one());
                if is_root {
                    out.push(e);
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Coordinates of `e` in the order's HNF basis, if `e ∈ Γ`.
pub fn order_coordinates(gamma: &Order, e: &FieldElement) -> Option<Vec<BigInt>> {
    gamma.lattice.coordinates(&e.coords)
}

/// Multiplication table of the HNF basis: `table[i][j]` holds the integer
/// coordinates of `b_i b_j`.
pub fn multiplication_table(gamma: &Order) -> Vec<Vec<Vec<BigInt>>> {
    let b = gamma.basis();
    b.iter()
        .map(|x| {
            b.iter()
                .map(|y| order_coordinates(gamma, &gamma.field.mul(x, y)).expect("order is closed"))
                .collect()
        })
        .collect()
}

/// The matrix (row convention) of multiplication by `e` in the basis of a
/// full-rank lattice: row `i` is the coordinate vector of `e b_i`.
pub fn action_matrix(field: &NumberField, lattice: &Lattice, e: &FieldElement) -> Option<Vec<Vec<BigRational>>> {
    let b = lattice.rational_basis();
    let inv = rational_inverse(&b)?;
    Some(
        b.iter()
            .map(|bi| crate::intmat::rational_vec_mat(&field.mul_coords(&e.coords, bi), &inv))
            .collect(),
    )
}

/// `d_K` and the conductor `f` of a quadratic order, from `disc(Γ) = f^2 d_K`.
pub fn quadratic_conductor(gamma: &Order) -> Option<(BigInt, BigInt)> {
    let q = gamma.field.quadratic()?;
    let dk = q.field_discriminant();
    let ratio = BigRational::new(gamma.discriminant(), dk.clone());
    let f = exact_sqrt(&ratio.to_integer())?;
    (ratio.is_integer() && f.is_positive()).then_some((dk, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intmat::enumerate_intermediate_lattices;
    use crate::numberfield::make_field_i64;

    fn field(c: &[i64]) -> NumberField {
        make_field_i64(c).unwrap()
    }

    fn rows(v: &[&[i64]], den: i64) -> Vec<Vec<BigRational>> {
        v.iter().map(|r| r.iter().map(|&x| BigRational::new(x.into(), den.into())).collect()).collect()
    }

    /// Brute-force conductor norm: count x in O_L / (m O_L) with x O_L ⊆ Γ.
    fn conductor_norm_oracle(gamma: &Order, maximal: &Order, m: i64) -> usize {
        let b = maximal.basis();
        let f = gamma.field();
        let mut count = 0;
        for u in 0..m {
            for v in 0..m {
                let x = f.add(&f.scale(&b[0], &rat(u)), &f.scale(&b[1], &rat(v)));
                if b.iter().all(|bi| gamma.contains(&f.mul(&x, bi))) {
                    count += 1;
                }
            }
        }
        // cosets of f in O_L/mO_L number m^2 / |f/mO_L|
        (m * m) as usize / count
    }

    #[test]
    fn validation() {
        let gi = field(&[1, 0, 1]);
        assert!(is_order(&gi, &rows(&[&[1, 0], &[0, 1]], 1)).is_ok());
        assert!(is_order(&gi, &rows(&[&[1, 0], &[0, 2]], 1)).is_ok());
        let r5 = field(&[-5, 0, 1]);
        let e = is_order(&r5, &rows(&[&[3, 0], &[0, 1]], 3)).unwrap_err();
        assert_eq!(e.kind.name(), "NotClosed");
        assert_eq!(is_order(&gi, &rows(&[&[2, 0], &[0, 1]], 1)).unwrap_err().kind, ErrorKind::NotUnital);
        assert_eq!(is_order(&gi, &rows(&[&[1, 0]], 1)).unwrap_err().kind, ErrorKind::NotFullRank);
    }

    #[test]
    fn maximal_orders() {
        let f = field(&[3, 0, 1]);
        let o = maximal_order(&f, None).unwrap();
        assert_eq!(o.lattice(), &Lattice::from_rational_rows(2, &rows(&[&[2, 0], &[1, 1]], 2)));
        assert_eq!(o.discriminant(), BigInt::from(-3));
        assert_eq!(maximal_order(&field(&[1, 0, 1]), None).unwrap().discriminant(), BigInt::from(-4));
        assert_eq!(maximal_order(&field(&[5, 0, 1]), None).unwrap().discriminant(), BigInt::from(-20));
        let cubic = field(&[-2, 0, 0, 1]);
        assert_eq!(maximal_order(&cubic, None).unwrap_err().kind.name(), "NeedsUserInput");
        let o3 = maximal_order(&cubic, Some(&rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], 1))).unwrap();
        assert!(o3.assumed_maximal());
    }

    #[test]
    fn conductors() {
        let gi = field(&[1, 0, 1]);
        let o = maximal_order(&gi, None).unwrap();
        assert_eq!(conductor(&o, &o).unwrap().norm, BigInt::one());
        let z2i = quadratic_order(&gi, 2).unwrap();
        let c = conductor(&z2i, &o).unwrap();
        assert_eq!(c.norm, BigInt::from(4));
        assert_eq!(c.lattice, o.lattice().scale(&rat(2)));
        assert_eq!(conductor_norm_oracle(&z2i, &o, 4), 4);

        let f3 = field(&[3, 0, 1]);
        let o3 = maximal_order(&f3, None).unwrap();
        let g3 = is_order(&f3, &rows(&[&[1, 0], &[0, 1]], 1)).unwrap();
        assert_eq!(conductor(&g3, &o3).unwrap().norm, BigInt::from(4));
        assert_eq!(conductor_norm_oracle(&g3, &o3, 4), 4);
        assert_eq!(conductor(&o3, &g3).unwrap_err().kind, ErrorKind::NotContained);

        for f in 1..=6u64 {
            let g = quadratic_order(&f3, f).unwrap();
            let n = conductor(&g, &o3).unwrap().norm;
            assert_eq!(n, BigInt::from(f * f));
            assert_eq!(conductor_norm_oracle(&g, &o3, (f * f) as i64), (f * f) as usize);
        }
    }

    #[test]
    fn conductor_is_largest() {
        // every x in O_L outside f fails x O_L ⊆ Γ
        let f = field(&[-3, 0, 1]);
        let o = maximal_order(&f, None).unwrap();
        let g = quadratic_order(&f, 3).unwrap();
        let c = conductor(&g, &o).unwrap();
        let b = o.basis();
        for u in 0..9 {
            for v in 0..9 {
                let x = f.add(&f.scale(&b[0], &rat(u)), &f.scale(&b[1], &rat(v)));
                let stable = b.iter().all(|bi| g.contains(&f.mul(&x, bi)));
                assert_eq!(stable, c.lattice.contains_vector(&x.coords));
            }
        }
    }

    #[test]
    fn scaled_subrings() {
        let gi = field(&[1, 0, 1]);
        let o = maximal_order(&gi, None).unwrap();
        assert_eq!(scaled_subring(&o, 1).unwrap(), o);
        assert_eq!(scaled_subring(&o, 2).unwrap(), quadratic_order(&gi, 2).unwrap());
        let r2 = field(&[-2, 0, 1]);
        let o2 = maximal_order(&r2, None).unwrap();
        let s = scaled_subring(&o2, 3).unwrap();
        assert_eq!(s.lattice(), &Lattice::from_rational_rows(2, &rows(&[&[1, 0], &[0, 3]], 1)));
    }

    #[test]
    fn scaled_subring_is_minimal() {
        let f = field(&[-2, 0, 0, 1]);
        let o = maximal_order(&f, Some(&rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], 1))).unwrap();
        for d in [2u64, 3] {
            let s = scaled_subring(&o, d).unwrap();
            let mut base = vec![f.one().coords];
            base.extend(o.lattice().scale(&rat(d as i64)).rational_basis());
            let start = Lattice::from_rational_rows(3, &base);
            assert!(s.lattice().contains(&start));
            let closed: Vec<_> = enumerate_intermediate_lattices(s.lattice(), &start, 100_000)
                .unwrap()
                .into_iter()
                .filter(|l| order_from_lattice(&f, l.clone(), "test").is_ok())
                .collect();
            assert_eq!(closed, vec![s.lattice().clone()]);
        }
    }

    #[test]
    fn comparisons() {
        let gi = field(&[1, 0, 1]);
        let o = maximal_order(&gi, None).unwrap();
        let c = conductor_comparison_check(&o, &o, 2).unwrap();
        assert_eq!((c.norm_f.clone(), c.norm_f_prime.clone()), (BigInt::one(), BigInt::from(4)));
        assert!(c.holds());
        let f3 = field(&[3, 0, 1]);
        let o3 = maximal_order(&f3, None).unwrap();
        let g3 = quadratic_order(&f3, 2).unwrap();
        let c1 = conductor_comparison_check(&g3, &o3, 1).unwrap();
        assert_eq!(c1.norm_f, c1.norm_f_prime);
        assert!(conductor_comparison_check(&g3, &o3, 2).unwrap().scaled_contained);
    }

    #[test]
    fn unit_quotients() {
        let q = crate::numberfield::rationals();
        let z = maximal_order(&q, None).unwrap();
        assert_eq!(unit_square_quotient(&z).unwrap().square_class_count, 2);

        let r2 = field(&[-2, 0, 1]);
        let u = unit_square_quotient(&maximal_order(&r2, None).unwrap()).unwrap();
        assert_eq!(u.fundamental_unit, Some(FieldElement::from_i64(&[1, 1])));
        assert_eq!(u.square_class_count, 4);
        let eps = u.fundamental_unit.unwrap();
        assert_eq!(r2.mul(&eps, &FieldElement::from_i64(&[-1, 1])), r2.one());

        let gi = field(&[1, 0, 1]);
        let ui = unit_square_quotient(&maximal_order(&gi, None).unwrap()).unwrap();
        assert_eq!((ui.torsion_order, ui.square_class_count), (4, 2));
        let u2i = unit_square_quotient(&quadratic_order(&gi, 2).unwrap()).unwrap();
        assert_eq!(u2i.torsion_order, 2);
        let w = field(&[1, 1, 1]);
        assert_eq!(unit_square_quotient(&maximal_order(&w, None).unwrap()).unwrap().torsion_order, 6);

        // Z[sqrt 5]: ε = (1+√5)/2, ε^3 = 2 + √5 is the first power inside
        let r5 = field(&[-5, 0, 1]);
        let u5 = unit_square_quotient(&quadratic_order(&r5, 2).unwrap()).unwrap();
        assert_eq!(u5.power_of_maximal, Some(3));
        assert_eq!(u5.fundamental_unit, Some(FieldElement::from_i64(&[2, 1])));

        let cubic = field(&[-2, 0, 0, 1]);
        let o3 = maximal_order(&cubic, Some(&rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], 1))).unwrap();
        assert_eq!(unit_square_quotient(&o3).unwrap_err().kind, ErrorKind::UnsupportedDegree(3));
    }

    /// The unit of Γ found via powers of ε_{O_L} equals the one found by the
    /// continued fraction of Γ's own lattice.
    #[test]
    fn order_units_two_routes() {
        for m in [2i64, 3, 5, 6, 7, 10, 13, 17] {
            let f = field(&[-m, 0, 1]);
            let q = f.quadratic().unwrap();
            for c in 1..=6u64 {
                let g = quadratic_order(&f, c).unwrap();
                let u = unit_square_quotient(&g).unwrap();
                let direct = q.lattice_fundamental_unit(&q.omega().scale(&rat(c as i64)));
                assert_eq!(u.fundamental_unit.unwrap(), q.from_surd(&direct), "m={m} f={c}");
                assert_eq!(f.norm(&q.from_surd(&direct)).abs(), rat(1));
            }
        }
    }
}
