//! Γ-structures on matrix orders `R = M_n(O_K)`: ring morphisms `Γ → R` up
//! to conjugation by `GL_n(O_K)`.
//!
//! Each morphism is compatible with exactly one embedding `φ: K → L`, and the
//! φ-compatible structures correspond to classes of fractional ideals of `Γ`
//! that are free `O_K`-modules of rank `n` via `φ`. The forward map writes the
//! multiplication action on an `O_K`-basis of an ideal as matrices; the
//! backward map sends `O_K^n` into `L` through a cyclic vector.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{err, Error, ErrorKind, Result};
use crate::ideals::{class_monoid_with, is_equivalent, picard_group, FractionalIdeal, IdealClass};
use crate::intmat::{rat, rational_inverse, rational_kernel, rational_vec_mat, snf, IntMatrix, Lattice};
use crate::numberfield::poly::QPoly;
use crate::numberfield::{embeddings, FieldElement, NumberField};
use crate::orders::{conductor, maximal_order, scaled_subring, torsion_units, Order};

const MODULE: &str = "gamma_structures";

/// Candidates per coordinate when searching an `O_K`-basis of an ideal.
const BASIS_SEARCH_RADIUS: i64 = 2;
const BASIS_SEARCH_BUDGET: u64 = 2_000_000;

/// An `n × n` matrix over `K`, entries as power-basis coordinates.
pub type KMatrix = Vec<Vec<FieldElement>>;

/// `R = M_n(O_K)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixOrder {
    base_field: NumberField,
    base_max_order: Order,
    n: usize,
}

impl MatrixOrder {
    pub fn new(base_field: &NumberField, n: usize) -> Result<MatrixOrder> {
        let o = maximal_order(base_field, None)?;
        MatrixOrder::with_max_order(&o, n)
    }

    pub fn with_max_order(base_max_order: &Order, n: usize) -> Result<MatrixOrder> {
        if n == 0 {
            return err(MODULE, "matrix_order", ErrorKind::InvalidInput("n must be positive".into()));
        }
        Ok(MatrixOrder { base_field: base_max_order.field().clone(), base_max_order: base_max_order.clone(), n })
    }

    pub fn base_field(&self) -> &NumberField {
        &self.base_field
    }

    pub fn base_max_order(&self) -> &Order {
        &self.base_max_order
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `Z`-rank `n^2 [K : Q]`.
    pub fn rank(&self) -> usize {
        self.n * self.n * self.base_field.degree()
    }

    fn k(&self) -> usize {
        self.base_field.degree()
    }

    pub fn identity(&self) -> KMatrix {
        let k = &self.base_field;
        (0..self.n).map(|i| (0..self.n).map(|j| if i == j { k.one() } else { k.zero() }).collect()).collect()
    }

    pub fn zero(&self) -> KMatrix {
        vec![vec![self.base_field.zero(); self.n]; self.n]
    }

    pub fn mul(&self, a: &KMatrix, b: &KMatrix) -> KMatrix {
        let k = &self.base_field;
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| (0..self.n).fold(k.zero(), |acc, t| k.add(&acc, &k.mul(&a[i][t], &b[t][j]))))
                    .collect()
            })
            .collect()
    }

    pub fn sub(&self, a: &KMatrix, b: &KMatrix) -> KMatrix {
        let k = &self.base_field;
        a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| k.sub(x, y)).collect()).collect()
    }

    pub fn scale(&self, a: &KMatrix, q: &BigRational) -> KMatrix {
        let k = &self.base_field;
        a.iter().map(|r| r.iter().map(|x| k.scale(x, q)).collect()).collect()
    }

    pub fn add(&self, a: &KMatrix, b: &KMatrix) -> KMatrix {
        let k = &self.base_field;
        a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| k.add(x, y)).collect()).collect()
    }

    fn scalar(&self, x: &FieldElement) -> KMatrix {
        let k = &self.base_field;
        (0..self.n).map(|i| (0..self.n).map(|j| if i == j { x.clone() } else { k.zero() }).collect()).collect()
    }

    /// Rational coordinates, index `((row n + col) k + l)`.
    fn flatten(&self, a: &KMatrix) -> Vec<BigRational> {
        a.iter().flat_map(|r| r.iter().flat_map(|x| x.coords.iter().cloned())).collect()
    }

    pub fn contains(&self, a: &KMatrix) -> bool {
        a.len() == self.n
            && a.iter().all(|r| r.len() == self.n && r.iter().all(|x| self.base_max_order.contains(x)))
    }

    /// `u a u^{-1}` for an integer unimodular `u`.
    pub fn conjugate(&self, a: &KMatrix, u: &IntMatrix) -> Result<KMatrix> {
        let k = &self.base_field;
        let lift = |m: &IntMatrix| -> KMatrix {
            (0..self.n)
                .map(|i| (0..self.n).map(|j| k.from_rational(&BigRational::from_integer(m.get(i, j).clone()))).collect())
                .collect()
        };
        if u.det().abs() != BigInt::one() {
            return err(MODULE, "conjugate", ErrorKind::InvalidInput("conjugator is not unimodular".into()));
        }
        let inv = rational_inverse(&u.to_rational_rows()).unwrap();
        let inv = IntMatrix::from_rows(inv.iter().map(|r| r.iter().map(|q| q.to_integer()).collect()).collect());
        Ok(self.mul(&self.mul(&lift(u), a), &lift(&inv)))
    }
}

/// A ring morphism `Γ → M_n(O_K)` given by the images of the HNF basis of `Γ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingMorphism {
    source: Order,
    target: MatrixOrder,
    images: Vec<KMatrix>,
}

impl RingMorphism {
    /// Validates integrality, `ρ(1) = 1` and multiplicativity on all basis pairs.
    pub fn new(source: &Order, target: &MatrixOrder, images: Vec<KMatrix>) -> Result<RingMorphism> {
        const OP: &str = "ring_morphism";
        let g = source.degree();
        if g != target.n * target.k() {
            return err(MODULE, OP, ErrorKind::DegreeMismatch(format!("[L:Q] = {g} but n [K:Q] = {}", target.n * target.k())));
        }
        if images.len() != g || !images.iter().all(|m| target.contains(m)) {
            return err(MODULE, OP, ErrorKind::InvalidInput("images must be n×n matrices over O_K, one per basis element".into()));
        }
        let rho = RingMorphism { source: source.clone(), target: target.clone(), images };
        let one = rho.eval(&source.field().one());
        if one != target.identity() {
            return err(MODULE, OP, ErrorKind::NotUnital);
        }
        let basis = source.basis();
        for i in 0..g {
            for j in i..g {
                let lhs = rho.eval(&source.field().mul(&basis[i], &basis[j]));
                let rhs = target.mul(&rho.images[i], &rho.images[j]);
                if lhs != rhs {
                    return err(MODULE, OP, ErrorKind::NotClosed(format!("ρ(b{i} b{j}) ≠ ρ(b{i}) ρ(b{j})")));
                }
            }
        }
        Ok(rho)
    }

    /// A morphism of a quadratic order `Z + Zτ` from the image of `τ`.
    pub fn from_generator(source: &Order, target: &MatrixOrder, tau: &FieldElement, image: &KMatrix) -> Result<RingMorphism> {
        let field = source.field();
        let two = [field.one(), tau.clone()];
        let lat = Lattice::from_rational_rows(2, &[two[0].coords.clone(), two[1].coords.clone()]);
        if lat != *source.lattice() {
            return err(MODULE, "from_generator", ErrorKind::InvalidInput("order is not Z + Z tau".into()));
        }
        let inv = rational_inverse(&[two[0].coords.clone(), two[1].coords.clone()]).unwrap();
        let images = source
            .basis()
            .iter()
            .map(|b| {
                let c = rational_vec_mat(&b.coords, &inv);
                target.add(&target.scale(&target.identity(), &c[0]), &target.scale(image, &c[1]))
            })
            .collect();
        RingMorphism::new(source, target, images)
    }

    pub fn source(&self) -> &Order {
        &self.source
    }

    pub fn target(&self) -> &MatrixOrder {
        &self.target
    }

    pub fn images(&self) -> &[KMatrix] {
        &self.images
    }

    /// `ρ_Q(y)` for any `y ∈ L`.
    pub fn eval(&self, y: &FieldElement) -> KMatrix {
        let t = &self.target;
        let b = self.source.lattice().rational_basis();
        let inv = rational_inverse(&b).unwrap();
        let c = rational_vec_mat(&y.coords, &inv);
        c.iter().zip(&self.images).fold(t.zero(), |acc, (q, m)| t.add(&acc, &t.scale(m, q)))
    }

    /// `u ρ u^{-1}`.
    pub fn conjugate(&self, u: &IntMatrix) -> Result<RingMorphism> {
        let images = self.images.iter().map(|m| self.target.conjugate(m, u)).collect::<Result<_>>()?;
        Ok(RingMorphism { source: self.source.clone(), target: self.target.clone(), images })
    }

    fn power_basis_images(&self) -> Vec<KMatrix> {
        let g = self.source.degree();
        (0..g)
            .map(|i| self.eval(&FieldElement::new((0..g).map(|j| rat((i == j) as i64)).collect())))
            .collect()
    }
}

/// A conjugacy class of morphisms with its embedding index and ideal class.
#[derive(Clone, Debug)]
pub struct GammaStructure {
    pub representative: RingMorphism,
    pub phi: usize,
    pub ideal_class: IdealClass,
    /// Index of the class in the class monoid it was built from, if any.
    pub class_id: Option<usize>,
}

fn embedding_images(rho: &RingMorphism) -> Result<Vec<FieldElement>> {
    embeddings(&rho.target.base_field, rho.source.field())
}

/// Applies `φ: K → L` (given by the image `y` of `K`'s generator).
pub fn apply_embedding(l: &NumberField, y: &FieldElement, a: &FieldElement) -> FieldElement {
    l.eval_poly(&QPoly::new(a.coords.clone()), y)
}

/// Solves `x A = b` for the row vector `x` over `Q`, if solvable.
fn solve_left(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    // columns of the system: rows of a, plus -b
    let rows = a.len();
    let cols = b.len();
    let m: Vec<Vec<BigRational>> =
        (0..cols).map(|c| (0..rows).map(|r| a[r][c].clone()).chain(std::iter::once(-b[c].clone())).collect()).collect();
    let ker = rational_kernel(&m, rows + 1);
    let v = ker.into_iter().find(|v| !v[rows].is_zero())?;
    let last = v[rows].clone();
    Some(v[..rows].iter().map(|x| x / &last).collect())
}

/// Dimension over `Q` of the centralizer of `ρ_Q(L)` in `M_n(K)`, together
/// with whether that centralizer is `ρ_Q(L)` itself.
pub fn centralizer_check(rho: &RingMorphism) -> (usize, bool) {
    let t = &rho.target;
    let (n, k) = (t.n, t.k());
    let gens = rho.power_basis_images();
    let unit = |idx: usize| -> KMatrix {
        let mut m = t.zero();
        let (cell, l) = (idx / k, idx % k);
        let mut coords = vec![rat(0); k];
        coords[l] = rat(1);
        m[cell / n][cell % n] = FieldElement::new(coords);
        m
    };
    let dim = n * n * k;
    // rows: equations; columns: unknown coordinates of X
    let columns: Vec<Vec<BigRational>> = (0..dim)
        .map(|v| {
            let x = unit(v);
            gens.iter().flat_map(|a| t.flatten(&t.sub(&t.mul(&x, a), &t.mul(a, &x)))).collect()
        })
        .collect();
    let eqs = columns[0].len();
    let m: Vec<Vec<BigRational>> = (0..eqs).map(|e| columns.iter().map(|c| c[e].clone()).collect()).collect();
    let ker = rational_kernel(&m, dim);
    let image = Lattice::from_rational_rows(dim, &gens.iter().map(|a| t.flatten(a)).collect::<Vec<_>>());
    let kernel = if ker.is_empty() { None } else { Some(Lattice::from_rational_rows(dim, &ker)) };
    let same = kernel.is_some_and(|kl| {
        kl.rank() == image.rank() && kl.rational_basis().iter().all(|v| solve_left(&image.rational_basis(), v).is_some())
    });
    (ker.len(), same)
}

/// The unique `φ` making `ρ` φ-compatible: the scalar matrices `θ·1` lie in
/// the centralizer `ρ_Q(L)`, and `φ(θ) = ρ_Q^{-1}(θ·1)`.
pub fn compatibility_of(rho: &RingMorphism) -> Result<usize> {
    const OP: &str = "compatibility_of";
    let t = &rho.target;
    let theta = t.base_field.generator();
    let gens: Vec<Vec<BigRational>> = rho.power_basis_images().iter().map(|a| t.flatten(a)).collect();
    let target = t.flatten(&t.scalar(&theta));
    let y = solve_left(&gens, &target)
        .ok_or_else(|| Error::new(MODULE, OP, ErrorKind::Internal("K·1 is not inside ρ(L)".into())))?;
    let y = FieldElement::new(y);
    embedding_images(rho)?
        .iter()
        .position(|e| *e == y)
        .ok_or_else(|| Error::new(MODULE, OP, ErrorKind::Internal(format!("{y:?} is not the image of an embedding"))))
}

/// All `φ` with `ρ_Q(φ(θ)) = θ·1`, by direct evaluation; a valid morphism
/// has exactly one.
pub fn compatible_indices(rho: &RingMorphism) -> Result<Vec<usize>> {
    let t = &rho.target;
    let scalar = t.scalar(&t.base_field.generator());
    Ok(embedding_images(rho)?
        .iter()
        .enumerate()
        .filter(|(_, y)| rho.eval(y) == scalar)
        .map(|(i, _)| i)
        .collect())
}

/// `z` clearing denominators of `φ(O_K)` into `Γ`, so `φ(Z[z O_K]) ⊆ Γ`.
pub fn auxiliary_z(gamma: &Order, target: &MatrixOrder, phi: &FieldElement) -> u64 {
    let l = gamma.field();
    let mut z = 1u64;
    for w in target.base_max_order.basis() {
        let img = apply_embedding(l, phi, &w);
        let mut zw = 1u64;
        while !gamma.contains(&l.scale(&img, &rat(zw as i64))) {
            zw += 1;
        }
        z = z.lcm(&zw);
    }
    z
}

/// Whether `φ(Z[z O_K]) ⊆ Γ`, the hypothesis under which `J_φ` is defined.
pub fn auxiliary_subring_ok(gamma: &Order, target: &MatrixOrder, phi: &FieldElement, z: u64) -> bool {
    let l = gamma.field();
    let zk = rat(z as i64);
    let basis = target.base_max_order.basis();
    let imgs: Vec<FieldElement> = basis.iter().map(|w| l.scale(&apply_embedding(l, phi, w), &zk)).collect();
    imgs.iter().all(|x| gamma.contains(x)) && imgs.iter().all(|x| imgs.iter().all(|y| gamma.contains(&l.mul(x, y))))
}

/// Outcome for one ideal class when building structures.
#[derive(Clone, Debug)]
pub enum ClassOutcome {
    Built(GammaStructure),
    /// The class is not stable under `φ(O_K)` and does not belong to `J_φ`.
    NotInJ,
    /// Stable but no `O_K`-basis was found.
    NotFree(String),
}

#[derive(Clone, Debug)]
pub struct StructureSet {
    pub phi: usize,
    pub z: u64,
    pub structures: Vec<GammaStructure>,
    pub outcomes: Vec<ClassOutcome>,
}

impl StructureSet {
    /// Classes skipped because their module is not free.
    pub fn not_free(&self) -> Vec<&str> {
        self.outcomes
            .iter()
            .filter_map(|o| match o {
                ClassOutcome::NotFree(s) => Some(s.as_str()),
                _ => None,
            })
            .collect()
    }
}

/// `O_K`-basis `v_1..v_n` of the lattice `m` (with `O_K` acting through `φ`).
fn module_basis(gamma: &Order, target: &MatrixOrder, phi: &FieldElement, m: &Lattice) -> Option<Vec<FieldElement>> {
    let l = gamma.field();
    let hnf_basis: Vec<FieldElement> = m.rational_basis().into_iter().map(FieldElement::new).collect();
    if target.k() == 1 {
        return Some(hnf_basis);
    }
    let omegas: Vec<FieldElement> =
        target.base_max_order.basis().iter().map(|w| apply_embedding(l, phi, w)).collect();
    let spans = |vs: &[FieldElement]| -> bool {
        let rows: Vec<Vec<BigRational>> =
            vs.iter().flat_map(|v| omegas.iter().map(move |w| l.mul(w, v).coords)).collect();
        Lattice::from_rational_rows(l.degree(), &rows) == *m
    };
    let g = l.degree();
    let side = (2 * BASIS_SEARCH_RADIUS + 1) as u64;
    let cands: Vec<FieldElement> = {
        let total = side.checked_pow(g as u32)?;
        let mut out = Vec::new();
        for idx in 0..total {
            let mut t = idx;
            let mut x = l.zero();
            for b in &hnf_basis {
                let c = (t % side) as i64 - BASIS_SEARCH_RADIUS;
                t /= side;
                x = l.add(&x, &l.scale(b, &rat(c)));
            }
            if !x.is_zero() {
                out.push(x);
            }
        }
        out
    };
    let n = target.n;
    if (cands.len() as u64).checked_pow(n as u32).is_none_or(|c| c > BASIS_SEARCH_BUDGET) {
        return None;
    }
    let mut pick = vec![0usize; n];
    loop {
        let vs: Vec<FieldElement> = pick.iter().map(|&i| cands[i].clone()).collect();
        if spans(&vs) {
            return Some(vs);
        }
        let mut k = 0;
        loop {
            if k == n {
                return None;
            }
            pick[k] += 1;
            if pick[k] < cands.len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
    }
}

/// The morphism given by the multiplication action of `Γ` on the
/// `O_K`-basis `v` of an ideal (column convention).
fn action_morphism(gamma: &Order, target: &MatrixOrder, phi: &FieldElement, v: &[FieldElement]) -> Result<RingMorphism> {
    let l = gamma.field();
    let kf = &target.base_field;
    let okb = target.base_max_order.basis();
    let omegas: Vec<FieldElement> = okb.iter().map(|w| apply_embedding(l, phi, w)).collect();
    // Z-basis φ(ω_l) v_j, index j * k + l
    let zbasis: Vec<Vec<BigRational>> = v.iter().flat_map(|vj| omegas.iter().map(move |w| l.mul(w, vj).coords)).collect();
    let inv = rational_inverse(&zbasis)
        .ok_or_else(|| Error::new(MODULE, "action_morphism", ErrorKind::Internal("module basis is degenerate".into())))?;
    let n = target.n;
    let k = target.k();
    let images = gamma
        .basis()
        .iter()
        .map(|gb| {
            let mut m = target.zero();
            for (i, vi) in v.iter().enumerate() {
                let c = rational_vec_mat(&l.mul(gb, vi).coords, &inv);
                for j in 0..n {
                    let a = (0..k).fold(kf.zero(), |acc, t| kf.add(&acc, &kf.scale(&okb[t], &c[j * k + t])));
                    m[j][i] = a;
                }
            }
            m
        })
        .collect();
    RingMorphism::new(gamma, target, images)
}

fn check_degrees(gamma: &Order, target: &MatrixOrder, op: &'static str) -> Result<()> {
    let (g, k, n) = (gamma.degree(), target.k(), target.n);
    if g != n * k {
        return err(MODULE, op, ErrorKind::DegreeMismatch(format!("[L:Q] = {g} is not n [K:Q] = {}", n * k)));
    }
    if k > 1 && crate::ideals::class_number(&target.base_field)? != 1 {
        return err(
            MODULE,
            op,
            ErrorKind::HypothesisViolated("h(K) > 1: freeness over O_K is not decided here".into()),
        );
    }
    Ok(())
}

/// φ-compatible structures, one per class of `C_Γ` in `J_φ`.
pub fn structures_from_ideal_classes(gamma: &Order, maximal: &Order, target: &MatrixOrder, phi: usize) -> Result<StructureSet> {
    structures_with_z(gamma, maximal, target, phi, None)
}

/// As [`structures_from_ideal_classes`], with an explicit auxiliary `z`.
pub fn structures_with_z(
    gamma: &Order,
    maximal: &Order,
    target: &MatrixOrder,
    phi: usize,
    z: Option<u64>,
) -> Result<StructureSet> {
    const OP: &str = "structures_from_ideal_classes";
    check_degrees(gamma, target, OP)?;
    let phis = embeddings(&target.base_field, gamma.field())?;
    let y = phis
        .get(phi)
        .ok_or_else(|| Error::new(MODULE, OP, ErrorKind::InvalidInput(format!("no embedding with index {phi}"))))?;
    let z = z.unwrap_or_else(|| auxiliary_z(gamma, target, y));
    if !auxiliary_subring_ok(gamma, target, y, z) {
        return err(MODULE, OP, ErrorKind::HypothesisViolated(format!("φ(Z[{z} O_K]) is not contained in Γ")));
    }
    let monoid = class_monoid_with(gamma, maximal, false)?;
    let l = gamma.field();
    let omegas: Vec<FieldElement> =
        target.base_max_order.basis().iter().map(|w| apply_embedding(l, y, w)).collect();
    let mut structures = Vec::new();
    let mut outcomes = Vec::new();
    for (id, class) in monoid.classes.iter().enumerate() {
        let lat = class.representative.lattice();
        // X|_{O'} ≅ O_K^n|_{O'} forces the O_K-action to extend to X
        let stable = omegas.iter().all(|w| {
            lat.rational_basis().iter().all(|v| lat.contains_vector(&l.mul_coords(&w.coords, v)))
        });
        if !stable {
            outcomes.push(ClassOutcome::NotInJ);
            continue;
        }
        let Some(v) = module_basis(gamma, target, y, lat) else {
            outcomes.push(ClassOutcome::NotFree(format!("class {id}: no O_K-basis within the search box")));
            continue;
        };
        let rho = action_morphism(gamma, target, y, &v)?;
        let s = GammaStructure { phi, ideal_class: structure_to_ideal_class(&rho)?, representative: rho, class_id: Some(id) };
        outcomes.push(ClassOutcome::Built(s.clone()));
        structures.push(s);
    }
    Ok(StructureSet { phi, z, structures, outcomes })
}

/// The class of `μ(O_K^n) ⊆ L`, where `μ(ρ(y) e_1) = y`.
pub fn structure_to_ideal_class(rho: &RingMorphism) -> Result<IdealClass> {
    const OP: &str = "structure_to_ideal_class";
    let t = &rho.target;
    let (n, k) = (t.n, t.k());
    let g = rho.source.degree();
    // w_i = ρ(e_i) e_1, flattened as (row, K-coordinate)
    let w: Vec<Vec<BigRational>> = rho
        .power_basis_images()
        .iter()
        .map(|a| (0..n).flat_map(|r| a[r][0].coords.iter().cloned()).collect())
        .collect();
    let winv = rational_inverse(&w)
        .ok_or_else(|| Error::new(MODULE, OP, ErrorKind::Internal("e_1 is not a cyclic vector".into())))?;
    let okb = t.base_max_order.basis();
    let mut rows = Vec::with_capacity(g);
    for j in 0..n {
        for om in &okb {
            let mut x = vec![rat(0); n * k];
            for (l, c) in om.coords.iter().enumerate() {
                x[j * k + l] = c.clone();
            }
            rows.push(rational_vec_mat(&x, &winv));
        }
    }
    let ideal = FractionalIdeal::from_rows(&rho.source, &rows)?;
    Ok(IdealClass::of(&ideal))
}

/// Same compatibility index and equivalent ideal classes.
pub fn are_conjugate(a: &RingMorphism, b: &RingMorphism) -> Result<bool> {
    if a.source != b.source || a.target != b.target {
        return err(MODULE, "are_conjugate", ErrorKind::InvalidInput("different source or target".into()));
    }
    if compatibility_of(a)? != compatibility_of(b)? {
        return Ok(false);
    }
    let ca = structure_to_ideal_class(a)?;
    let cb = structure_to_ideal_class(b)?;
    Ok(is_equivalent(&ca.representative, &cb.representative)?.is_some())
}

#[derive(Clone, Debug)]
pub struct StructureCount {
    pub count: usize,
    /// `N(f)^g h(Γ) t`.
    pub bound: BigInt,
    pub per_phi: Vec<usize>,
    pub sets: Vec<StructureSet>,
}

pub fn count_structures(gamma: &Order, maximal: &Order, target: &MatrixOrder) -> Result<StructureCount> {
    const OP: &str = "count_structures";
    check_degrees(gamma, target, OP)?;
    let t = embeddings(&target.base_field, gamma.field())?.len();
    let sets: Vec<StructureSet> =
        (0..t).map(|phi| structures_from_ideal_classes(gamma, maximal, target, phi)).collect::<Result<_>>()?;
    let per_phi: Vec<usize> = sets.iter().map(|s| s.structures.len()).collect();
    let count = per_phi.iter().sum();
    let nf = conductor(gamma, maximal)?.norm;
    let h_gamma = picard_group(gamma, maximal)?.order();
    let bound = num_traits::pow(nf, gamma.degree()) * h_gamma * t;
    if BigInt::from(count) > bound {
        return err(MODULE, OP, ErrorKind::BoundViolation(format!("{count} structures exceed N(f)^g h(Γ) t = {bound}")));
    }
    Ok(StructureCount { count, bound, per_phi, sets })
}

/// `|R/dR| = d^m` with `m = n^2 [K:Q]`, cross-checked by the Smith form of
/// multiplication by `d` on `Z^m`.
pub fn quotient_size(target: &MatrixOrder, d: u64) -> Result<BigInt> {
    const OP: &str = "quotient_size";
    if d == 0 {
        return err(MODULE, OP, ErrorKind::InvalidInput("d must be positive".into()));
    }
    let m = target.rank();
    let closed = num_traits::pow(BigInt::from(d), m);
    let (diag, _, _) = snf(&IntMatrix::identity(m).scale(&BigInt::from(d)));
    let by_snf: BigInt = (0..m).map(|i| diag.get(i, i).clone()).product();
    if by_snf != closed {
        return err(MODULE, OP, ErrorKind::MethodDisagreement(format!("d^m = {closed}, Smith form gives {by_snf}")));
    }
    Ok(closed)
}

/// A ring commensurable with another inside a common `Q`-algebra.
#[derive(Clone, Debug)]
pub enum CommensurableRing {
    /// An order of a number field.
    Commutative(Order),
    /// `c M_n(Z) c^{-1}` for an invertible rational `c`, inside `M_n(Q)`.
    MatrixConjugate { n: usize, conjugator: Vec<Vec<BigRational>> },
}

impl CommensurableRing {
    fn lattice(&self) -> Result<Lattice> {
        match self {
            CommensurableRing::Commutative(o) => Ok(o.lattice().clone()),
            CommensurableRing::MatrixConjugate { n, conjugator } => {
                let inv = rational_inverse(conjugator).ok_or_else(|| {
                    Error::new(MODULE, "transfer_inequality_check", ErrorKind::InvalidInput("conjugator is singular".into()))
                })?;
                let mut rows = Vec::new();
                for a in 0..*n {
                    for b in 0..*n {
                        // c E_ab c^{-1}: entry (i, j) = c[i][a] inv[b][j]
                        rows.push(
                            (0..n * n).map(|idx| &conjugator[idx / n][a] * &inv[b][idx % n]).collect::<Vec<_>>(),
                        );
                    }
                }
                Ok(Lattice::from_rational_rows(n * n, &rows))
            }
        }
    }

    fn rank(&self) -> usize {
        match self {
            CommensurableRing::Commutative(o) => o.degree(),
            CommensurableRing::MatrixConjugate { n, .. } => n * n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferReport {
    pub d: u64,
    /// Γ-structures on `R`.
    pub structures_r: usize,
    /// `Z[dΓ]`-structures on `R'`.
    pub structures_r_prime: usize,
    /// `|R'/dR'|`.
    pub quotient_size: BigInt,
    pub inequality_holds: bool,
    /// `(|R^×/R'^×|, |R/dR|)` when `R' ⊆ R` and the unit groups are finite.
    pub unit_index: Option<(usize, BigInt)>,
}

impl TransferReport {
    pub fn holds(&self) -> bool {
        self.inequality_holds && self.unit_index.as_ref().is_none_or(|(u, q)| BigInt::from(*u) <= *q)
    }
}

/// Structures of `Γ` on a commensurable ring: embeddings `σ: L → F` with
/// `σ(Γ) ⊆ R` (conjugation is trivial), or `|C_Γ|` on conjugates of `M_g(Z)`.
fn structures_on(gamma: &Order, ring: &CommensurableRing) -> Result<usize> {
    match ring {
        CommensurableRing::Commutative(r) => {
            let f = r.field();
            let l = gamma.field();
            let sigmas = embeddings(l, f)?;
            Ok(sigmas
                .iter()
                .filter(|s| gamma.basis().iter().all(|b| r.contains(&apply_embedding(f, s, b))))
                .count())
        }
        CommensurableRing::MatrixConjugate { n, .. } => {
            if *n != gamma.degree() {
                return err(
                    MODULE,
                    "transfer_inequality_check",
                    ErrorKind::DegreeMismatch("matrix rings must have n = [L:Q]".into()),
                );
            }
            let maximal = maximal_order(gamma.field(), None)?;
            let target = MatrixOrder::new(&crate::numberfield::rationals(), *n)?;
            Ok(count_structures(gamma, &maximal, &target)?.count)
        }
    }
}

pub fn transfer_inequality_check(gamma: &Order, r: &CommensurableRing, r_prime: &CommensurableRing, d: u64) -> Result<TransferReport> {
    const OP: &str = "transfer_inequality_check";
    if d == 0 {
        return err(MODULE, OP, ErrorKind::InvalidInput("d must be positive".into()));
    }
    let same_kind = match (r, r_prime) {
        (CommensurableRing::Commutative(a), CommensurableRing::Commutative(b)) => a.field() == b.field(),
        (CommensurableRing::MatrixConjugate { n: a, .. }, CommensurableRing::MatrixConjugate { n: b, .. }) => a == b,
        _ => false,
    };
    if !same_kind {
        return err(MODULE, OP, ErrorKind::InvalidInput("R and R' must lie in the same algebra".into()));
    }
    let (lr, lrp) = (r.lattice()?, r_prime.lattice()?);
    let dq = rat(d as i64);
    if !lr.contains(&lrp.scale(&dq)) || !lrp.contains(&lr.scale(&dq)) {
        return err(MODULE, OP, ErrorKind::HypothesisViolated(format!("need {d}R' ⊆ R and {d}R ⊆ R'")));
    }
    let gamma_prime = scaled_subring(gamma, d)?;
    let structures_r = structures_on(gamma, r)?;
    let structures_r_prime = structures_on(&gamma_prime, r_prime)?;
    let m = r_prime.rank();
    let quotient = crate::intmat::lattice_index(&lrp, &lrp.scale(&dq))
        .map_err(|e| Error::new(MODULE, OP, e.kind))?;
    if quotient != num_traits::pow(BigInt::from(d), m) {
        return err(MODULE, OP, ErrorKind::MethodDisagreement(format!("|R'/dR'| = {quotient} ≠ d^{m}")));
    }
    let unit_index = if lr.contains(&lrp) { finite_unit_index(r, r_prime)? } else { None };
    Ok(TransferReport {
        d,
        structures_r,
        structures_r_prime,
        inequality_holds: BigInt::from(structures_r) <= &quotient * structures_r_prime,
        quotient_size: quotient.clone(),
        unit_index: unit_index.map(|u| (u, num_traits::pow(BigInt::from(d), r.rank()))),
    })
}

/// `|R^×/R'^×|` for orders with finite unit groups (rational or imaginary
/// quadratic); `R = R'` gives 1 in all cases.
fn finite_unit_index(r: &CommensurableRing, r_prime: &CommensurableRing) -> Result<Option<usize>> {
    if r.lattice()? == r_prime.lattice()? {
        return Ok(Some(1));
    }
    match (r, r_prime) {
        (CommensurableRing::Commutative(a), CommensurableRing::Commutative(b)) => {
            let f = a.field();
            if f.degree() == 1 {
                return Ok(Some(1));
            }
            if f.degree() == 2 && !f.quadratic().unwrap().is_real() {
                let units = torsion_units(f)?;
                let ua = units.iter().filter(|u| a.contains(u)).count();
                let ub = units.iter().filter(|u| b.contains(u)).count();
                return Ok(Some(ua / ub));
            }
            Ok(None)
        }
        _ => Ok(None),
    }
}

/// A random element of `GL_n(Z)`: a product of elementary moves, signs and
/// swaps drawn from a seeded generator.
pub fn random_unimodular(n: usize, steps: usize, rng: &mut ChaCha8Rng) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    if n == 1 {
        if rng.gen_bool(0.5) {
            u.set(0, 0, BigInt::from(-1));
        }
        return u;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c: i64 = rng.gen_range(-2..=2);
        match rng.gen_range(0..4) {
            0 => {
                // row i += c row j
                for col in 0..n {
                    let v = u.get(i, col) + u.get(j, col) * c;
                    u.set(i, col, v);
                }
            }
            1 => {
                for col in 0..n {
                    let v = -u.get(i, col);
                    u.set(i, col, v);
                }
            }
            _ => {
                for col in 0..n {
                    let (a, b) = (u.get(i, col).clone(), u.get(j, col).clone());
                    u.set(i, col, b);
                    u.set(j, col, a);
                }
            }
        }
    }
    u
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Checks the round trip and conjugation invariance for every structure:
/// the class of each constructed morphism is the class it came from, and
/// `trials` random conjugates keep both the embedding index and the class.
pub fn round_trip_check(set: &StructureSet, classes: &[IdealClass], trials: usize, seed: u64) -> Result<usize> {
    let mut rng = seeded_rng(seed);
    let mut failures = 0;
    for s in &set.structures {
        let rho = &s.representative;
        let original = &classes[s.class_id.unwrap()];
        let back = structure_to_ideal_class(rho)?;
        if is_equivalent(&back.representative, &original.representative)?.is_none() {
            failures += 1;
        }
        let phi = compatibility_of(rho)?;
        for _ in 0..trials {
            let u = random_unimodular(rho.target.n, 6, &mut rng);
            let c = rho.conjugate(&u)?;
            let cls = structure_to_ideal_class(&c)?;
            if compatibility_of(&c)? != phi || is_equivalent(&cls.representative, &back.representative)?.is_none() {
                failures += 1;
            }
        }
    }
    Ok(failures)
}

/// Largest absolute value of a rational entry (for reporting sizes).
pub fn max_entry(m: &KMatrix) -> BigInt {
    m.iter()
        .flat_map(|r| r.iter().flat_map(|x| x.coords.iter()))
        .map(|q| q.abs().ceil().to_integer())
        .max()
        .unwrap_or_else(BigInt::zero)
}

/// Integer entries of a matrix over `Q` (for `K = Q`), if they fit in `i64`.
pub fn to_i64_matrix(m: &KMatrix) -> Option<Vec<Vec<i64>>> {
    m.iter()
        .map(|r| r.iter().map(|x| if x.coords[0].is_integer() { x.coords[0].to_integer().to_i64() } else { None }).collect())
        .collect()
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
}

type M2 = [i64; 4];

fn mul2(a: M2, b: M2) -> M2 {
    [a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]]
}

/// `GL_2(Z)`-conjugacy classes of integer matrices with trace `t` and
/// determinant `n` that have a representative with entries at most `small`.
/// Matrices are joined when a generator of `GL_2(Z)` conjugates one into the
/// other inside the larger box `big`; this is a brute-force check,
/// independent of ideal classes.
pub fn matrix_conjugacy_classes(t: i64, n: i64, small: i64, big: i64) -> usize {
    let mut mats: Vec<M2> = Vec::new();
    for a in -big..=big {
        let d = t - a;
        if d.abs() > big {
            continue;
        }
        let bc = a * d - n;
        for b in (-big..=big).filter(|&b| b != 0) {
            if bc % b == 0 && (bc / b).abs() <= big {
                mats.push([a, b, bc / b, d]);
            }
        }
    }
    let index: HashMap<M2, usize> = mats.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut uf = UnionFind((0..mats.len()).collect());
    let gens: [(M2, M2); 3] =
        [([1, 1, 0, 1], [1, -1, 0, 1]), ([0, -1, 1, 0], [0, 1, -1, 0]), ([1, 0, 0, -1], [1, 0, 0, -1])];
    for (i, m) in mats.iter().enumerate() {
        for (g, gi) in gens {
            if let Some(&j) = index.get(&mul2(mul2(g, *m), gi)) {
                uf.union(i, j);
            }
        }
    }
    let roots: BTreeSet<usize> =
        (0..mats.len()).filter(|&i| mats[i].iter().all(|x| x.abs() <= small)).map(|i| uf.find(i)).collect();
    roots.len()
}

/// `M_2(Z)`.
pub fn m2z() -> MatrixOrder {
    MatrixOrder::new(&crate::numberfield::rationals(), 2).expect("Z is its own maximal order")
}
