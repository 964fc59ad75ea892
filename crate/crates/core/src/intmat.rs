//! Exact integer and rational linear algebra on lattices.
//!
//! Every lattice in the crate is stored as a row-style Hermite normal form
//! over a single positive denominator, so two lattices are equal exactly when
//! their normalized representations are equal.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{err, Error, ErrorKind, Result};

const MODULE: &str = "intmat";

/// Default cap on the number of subgroups visited by lattice enumeration.
pub const DEFAULT_SUBGROUP_BUDGET: usize = 100_000;

/// A dense integer matrix in row-major order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(","))?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        IntMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix::new(rows, cols, vec![BigInt::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Self {
        IntMatrix::new(rows, cols, data.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// Builds a matrix from rows; `cols` is needed when `rows` is empty.
    pub fn from_rows_with_cols(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend(row);
        }
        IntMatrix::new(r, cols, data)
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let c = rows.first().map_or(0, |row| row.len());
        IntMatrix::from_rows_with_cols(rows, c)
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn to_rational_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows).map(|i| self.row(i).iter().map(rat_int).collect()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix::new(self.rows, self.cols, self.data.iter().map(|x| x * k).collect())
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    /// Number of linearly independent rows.
    pub fn rank(&self) -> usize {
        strip_zero_rows(&hnf(self).0).rows
    }
}

fn combine_rows(rows: &mut [Vec<BigInt>], r: usize, i: usize, x: &BigInt, y: &BigInt, p: &BigInt, q: &BigInt) {
    // (row_r, row_i) <- (x*row_r + y*row_i, p*row_r + q*row_i)
    let n = rows[r].len();
    for c in 0..n {
        let a = rows[r][c].clone();
        let b = rows[i][c].clone();
        rows[r][c] = x * &a + y * &b;
        rows[i][c] = p * &a + q * &b;
    }
}

fn sub_multiple(rows: &mut [Vec<BigInt>], target: usize, source: usize, k: &BigInt) {
    if k.is_zero() {
        return;
    }
    let n = rows[target].len();
    for c in 0..n {
        let s = &rows[source][c] * k;
        rows[target][c] -= s;
    }
}

/// Row-style Hermite normal form: returns `(h, u)` with `h = u * m`, `u`
/// unimodular, `h` upper echelon with positive pivots and every entry above a
/// pivot reduced into `[0, pivot)`. Zero rows are collected at the bottom.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let rows = m.rows;
    let cols = m.cols;
    let mut a = m.to_rows();
    let mut u = IntMatrix::identity(rows).to_rows();
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        for i in pivot_row + 1..rows {
            if a[i][col].is_zero() {
                continue;
            }
            let av = a[pivot_row][col].clone();
            let bv = a[i][col].clone();
            let e = av.extended_gcd(&bv);
            let g = e.gcd;
            let p = -(&bv / &g);
            let q = &av / &g;
            combine_rows(&mut a, pivot_row, i, &e.x, &e.y, &p, &q);
            combine_rows(&mut u, pivot_row, i, &e.x, &e.y, &p, &q);
        }
        if a[pivot_row][col].is_zero() {
            continue;
        }
        if a[pivot_row][col].is_negative() {
            for x in a[pivot_row].iter_mut() {
                *x = -&*x;
            }
            for x in u[pivot_row].iter_mut() {
                *x = -&*x;
            }
        }
        let piv = a[pivot_row][col].clone();
        for i in 0..pivot_row {
            let k = a[i][col].div_floor(&piv);
            sub_multiple(&mut a, i, pivot_row, &k);
            sub_multiple(&mut u, i, pivot_row, &k);
        }
        pivot_row += 1;
    }
    (IntMatrix::from_rows_with_cols(a, cols), IntMatrix::from_rows_with_cols(u, rows))
}

/// Smith normal form: returns `(d, u, v)` with `d = u * m * v` diagonal,
/// nonnegative, and each diagonal entry dividing the next.
pub fn snf(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let rows = m.rows;
    let cols = m.cols;
    let mut a = m.to_rows();
    let mut u = IntMatrix::identity(rows).to_rows();
    let mut v = IntMatrix::identity(cols).to_rows();
    let n = rows.min(cols);

    fn col_swap(mat: &mut [Vec<BigInt>], i: usize, j: usize) {
        for row in mat.iter_mut() {
            row.swap(i, j);
        }
    }
    fn col_sub(mat: &mut [Vec<BigInt>], target: usize, source: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for row in mat.iter_mut() {
            let s = &row[source] * k;
            row[target] -= s;
        }
    }

    for t in 0..n {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            a.swap(t, pi);
            u.swap(t, pi);
            col_swap(&mut a, t, pj);
            col_swap(&mut v, t, pj);

            let piv = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..rows {
                let k = a[i][t].div_floor(&piv);
                sub_multiple(&mut a, i, t, &k);
                sub_multiple(&mut u, i, t, &k);
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let k = a[t][j].div_floor(&piv);
                col_sub(&mut a, j, t, &k);
                col_sub(&mut v, j, t, &k);
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // pivot must divide the rest of the block
            let mut offender = None;
            'outer: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !a[i][j].is_multiple_of(&piv) {
                        offender = Some(i);
                        break 'outer;
                    }
                }
            }
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    sub_multiple(&mut a, t, i, &minus_one);
                    sub_multiple(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
    }
    (
        IntMatrix::from_rows_with_cols(a, cols),
        IntMatrix::from_rows_with_cols(u, rows),
        IntMatrix::from_rows_with_cols(v, cols),
    )
}

/// A basis of the left kernel `{x : x * m = 0}` as matrix rows, in HNF.
pub fn left_kernel(m: &IntMatrix) -> IntMatrix {
    let (h, u) = hnf(m);
    let zero_rows: Vec<Vec<BigInt>> = (0..h.rows)
        .filter(|&i| h.row(i).iter().all(|x| x.is_zero()))
        .map(|i| u.row(i).to_vec())
        .collect();
    let k = IntMatrix::from_rows_with_cols(zero_rows, m.rows);
    strip_zero_rows(&hnf(&k).0)
}

fn strip_zero_rows(h: &IntMatrix) -> IntMatrix {
    let kept: Vec<Vec<BigInt>> = (0..h.rows)
        .filter(|&i| h.row(i).iter().any(|x| !x.is_zero()))
        .map(|i| h.row(i).to_vec())
        .collect();
    IntMatrix::from_rows_with_cols(kept, h.cols)
}

// ---------------------------------------------------------------------------
// Rational helpers

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_int(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a, I: IntoIterator<Item = &'a BigRational>>(values: I) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Inverse of a square rational matrix, `None` if singular.
pub fn rational_inverse(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { rat(1) } else { rat(0) }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, p);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..2 * n {
                    let s = &a[col][j] * &f;
                    a[i][j] -= s;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn rational_det(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = rat(1);
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !a[i][col].is_zero()) else {
            return rat(0);
        };
        if p != col {
            a.swap(col, p);
            det = -det;
        }
        det = &det * &a[col][col];
        for i in col + 1..n {
            if a[i][col].is_zero() {
                continue;
            }
            let f = &a[i][col] / &a[col][col];
            for j in col..n {
                let s = &a[col][j] * &f;
                a[i][j] -= s;
            }
        }
    }
    det
}

/// Basis of the rational right kernel `{x : m x = 0}`.
pub fn rational_kernel(m: &[Vec<BigRational>], cols: usize) -> Vec<Vec<BigRational>> {
    let mut a = m.to_vec();
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let s = &a[r][j] * &f;
                    a[i][j] -= s;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![rat(0); cols];
            v[f] = rat(1);
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -a[i][f].clone();
            }
            v
        })
        .collect()
}

/// Row vector times matrix.
pub fn rational_vec_mat(v: &[BigRational], m: &[Vec<BigRational>]) -> Vec<BigRational> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = vec![rat(0); cols];
    for (k, vk) in v.iter().enumerate() {
        if vk.is_zero() {
            continue;
        }
        for j in 0..cols {
            out[j] += vk * &m[k][j];
        }
    }
    out
}

pub fn rational_mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    a.iter().map(|row| rational_vec_mat(row, b)).collect()
}

// ---------------------------------------------------------------------------
// Lattices

/// A lattice in `Q^n` stored as HNF integer rows over one positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lattice {
    ambient_dim: usize,
    basis: IntMatrix,
    denominator: BigInt,
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator.is_one() {
            write!(f, "{:?}", self.basis)
        } else {
            write!(f, "{:?}/{}", self.basis, self.denominator)
        }
    }
}

impl Lattice {
    /// The lattice spanned by the rows of `m / denominator`.
    pub fn from_integer_rows(m: &IntMatrix, denominator: &BigInt) -> Lattice {
        assert!(denominator.is_positive(), "denominator must be positive");
        let h = strip_zero_rows(&hnf(m).0);
        let mut content = denominator.clone();
        for x in &h.data {
            content = content.gcd(x);
        }
        let (basis, denominator) = if content.is_one() {
            (h, denominator.clone())
        } else {
            (
                IntMatrix::new(h.rows, h.cols, h.data.iter().map(|x| x / &content).collect()),
                denominator / &content,
            )
        };
        Lattice { ambient_dim: m.cols, basis, denominator }
    }

    /// The lattice generated by rational row vectors (any number of them).
    pub fn from_rational_rows(ambient_dim: usize, rows: &[Vec<BigRational>]) -> Lattice {
        let d = common_denominator(rows.iter().flatten());
        let dq = rat_int(&d);
        let data: Vec<BigInt> = rows
            .iter()
            .flat_map(|row| {
                assert_eq!(row.len(), ambient_dim, "vector has wrong dimension");
                row.iter().map(|q| (q * &dq).to_integer()).collect::<Vec<_>>()
            })
            .collect();
        Lattice::from_integer_rows(&IntMatrix::new(rows.len(), ambient_dim, data), &d)
    }

    /// The standard lattice `Z^n`.
    pub fn standard(n: usize) -> Lattice {
        Lattice::from_integer_rows(&IntMatrix::identity(n), &BigInt::one())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.rows
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.ambient_dim
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    pub fn rational_basis(&self) -> Vec<Vec<BigRational>> {
        (0..self.basis.rows)
            .map(|i| {
                self.basis
                    .row(i)
                    .iter()
                    .map(|x| BigRational::new(x.clone(), self.denominator.clone()))
                    .collect()
            })
            .collect()
    }

    /// Integer coordinates of `v` in the HNF basis, or `None` if `v` is not in
    /// the lattice.
    pub fn coordinates(&self, v: &[BigRational]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.ambient_dim);
        let dq = rat_int(&self.denominator);
        let mut rem = Vec::with_capacity(v.len());
        for q in v {
            let s = q * &dq;
            if !s.is_integer() {
                return None;
            }
            rem.push(s.to_integer());
        }
        let mut coords = Vec::with_capacity(self.rank());
        let mut col = 0;
        for i in 0..self.rank() {
            let row = self.basis.row(i);
            while row[col].is_zero() {
                if !rem[col].is_zero() {
                    return None;
                }
                col += 1;
            }
            let (c, r) = rem[col].div_rem(&row[col]);
            if !r.is_zero() {
                return None;
            }
            if !c.is_zero() {
                for j in col..self.ambient_dim {
                    rem[j] -= &c * &row[j];
                }
            }
            coords.push(c);
            col += 1;
        }
        if rem.iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(coords)
    }

    pub fn contains_vector(&self, v: &[BigRational]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Whether `other` is a sublattice of `self`.
    pub fn contains(&self, other: &Lattice) -> bool {
        other.rational_basis().iter().all(|v| self.contains_vector(v))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        let mut rows = self.rational_basis();
        rows.extend(other.rational_basis());
        Lattice::from_rational_rows(self.ambient_dim, &rows)
    }

    pub fn scale(&self, q: &BigRational) -> Lattice {
        let rows: Vec<Vec<BigRational>> = self
            .rational_basis()
            .into_iter()
            .map(|row| row.into_iter().map(|x| x * q).collect())
            .collect();
        Lattice::from_rational_rows(self.ambient_dim, &rows)
    }

    /// The image of the lattice under `v -> v * m` for a rational matrix `m`.
    pub fn transform(&self, m: &[Vec<BigRational>]) -> Lattice {
        let rows: Vec<Vec<BigRational>> = self.rational_basis().iter().map(|row| rational_vec_mat(row, m)).collect();
        let dim = m.first().map_or(0, |r| r.len());
        Lattice::from_rational_rows(dim, &rows)
    }

    pub fn intersect(&self, other: &Lattice) -> Lattice {
        let n = self.ambient_dim;
        let d = self.denominator.lcm(&other.denominator);
        let a = self.basis.scale(&(&d / &self.denominator));
        let b = other.basis.scale(&(&d / &other.denominator));
        let mut stacked = a.to_rows();
        stacked.extend(b.to_rows().into_iter().map(|r| r.into_iter().map(|x| -x).collect()));
        let ker = left_kernel(&IntMatrix::from_rows_with_cols(stacked, n));
        let ar = a.rows;
        let rows: Vec<Vec<BigInt>> = (0..ker.rows)
            .map(|i| {
                let coeff = &ker.row(i)[..ar];
                (0..n).map(|j| (0..ar).map(|k| &coeff[k] * a.get(k, j)).sum()).collect()
            })
            .collect();
        Lattice::from_integer_rows(&IntMatrix::from_rows_with_cols(rows, n), &d)
    }

    /// Covolume `|det(basis)| / denominator^n` of a full-rank lattice.
    pub fn covolume(&self) -> Option<BigRational> {
        if !self.is_full_rank() {
            return None;
        }
        let det = self.basis.det().abs();
        Some(BigRational::new(det, num_traits::pow(self.denominator.clone(), self.ambient_dim)))
    }

    pub fn is_integral(&self) -> bool {
        self.denominator.is_one()
    }

    /// The positive rational `c` making `c * self` integral and primitive
    /// (coordinates with gcd 1), together with that scaled lattice.
    pub fn primitive_integral(&self) -> (Lattice, BigRational) {
        let mut content = BigInt::zero();
        for x in &self.basis.data {
            content = content.gcd(x);
        }
        if content.is_zero() {
            return (self.clone(), rat(1));
        }
        let factor = BigRational::new(self.denominator.clone(), content);
        (self.scale(&factor), factor)
    }
}

/// `[outer : inner]` for full-rank lattices with `inner ⊆ outer`.
pub fn lattice_index(outer: &Lattice, inner: &Lattice) -> Result<BigInt> {
    const OP: &str = "lattice_index";
    if !outer.is_full_rank() || !inner.is_full_rank() {
        return err(MODULE, OP, ErrorKind::RankDeficient);
    }
    if outer.ambient_dim != inner.ambient_dim || !outer.contains(inner) {
        return err(MODULE, OP, ErrorKind::NotSublattice);
    }
    let ratio = inner.covolume().unwrap() / outer.covolume().unwrap();
    if !ratio.is_integer() {
        return err(MODULE, OP, ErrorKind::Internal("non-integral index".into()));
    }
    Ok(ratio.to_integer())
}

/// Presentation of `outer / inner` as `⊕ Z/d_i` in an adapted basis.
#[derive(Clone, Debug)]
pub struct QuotientPresentation {
    /// Invariant factors, each dividing the next (ones included).
    pub invariants: Vec<BigInt>,
    /// Rows of an `outer` basis such that `inner` is spanned by
    /// `invariants[i] * adapted[i]`.
    pub adapted: Vec<Vec<BigRational>>,
}

pub fn quotient_presentation(outer: &Lattice, inner: &Lattice) -> Result<QuotientPresentation> {
    lattice_index(outer, inner)?;
    let n = outer.ambient_dim;
    let outer_basis = outer.rational_basis();
    let outer_inv = rational_inverse(&outer_basis)
        .ok_or_else(|| Error::new(MODULE, "quotient_presentation", ErrorKind::RankDeficient))?;
    let coords = rational_mat_mul(&inner.rational_basis(), &outer_inv);
    let c = IntMatrix::from_rows(coords.iter().map(|r| r.iter().map(|q| q.to_integer()).collect()).collect());
    // u C v = D, so inner = rowspan(D v^{-1} B)
    let (d, _u, v) = snf(&c);
    let v_inv = rational_inverse(&v.to_rational_rows()).expect("unimodular");
    let adapted = rational_mat_mul(&v_inv, &outer_basis);
    let invariants = (0..n).map(|i| d.get(i, i).clone()).collect();
    Ok(QuotientPresentation { invariants, adapted })
}

/// Every lattice `M` with `inner ⊆ M ⊆ outer`, each exactly once, ordered from
/// `inner` upwards by index and then by normal form.
pub fn enumerate_intermediate_lattices(outer: &Lattice, inner: &Lattice, budget: usize) -> Result<Vec<Lattice>> {
    const OP: &str = "enumerate_intermediate_lattices";
    let index = lattice_index(outer, inner)?;
    if index > BigInt::from(budget) {
        return err(MODULE, OP, ErrorKind::IndexTooLarge(format!("quotient order {index} exceeds budget {budget}")));
    }
    let pres = quotient_presentation(outer, inner)?;
    let subgroups = enumerate_subgroup_lattices(&pres.invariants, budget).map_err(|e| Error::new(MODULE, OP, e))?;
    let n = outer.ambient_dim;
    let mut out: Vec<(BigInt, Lattice)> = subgroups
        .into_iter()
        .map(|h| {
            let rows: Vec<Vec<BigRational>> =
                h.to_rational_rows().iter().map(|r| rational_vec_mat(r, &pres.adapted)).collect();
            (h.det().abs(), Lattice::from_rational_rows(n, &rows))
        })
        .collect();
    out.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    Ok(out.into_iter().map(|(_, l)| l).collect())
}

/// Subgroups of `⊕ Z/d_i`, each given as the HNF of its preimage in `Z^n`.
///
/// Breadth-first: every subgroup is reached from a smaller one by adjoining a
/// single element, and HNF keys remove duplicates.
pub fn enumerate_subgroup_lattices(invariants: &[BigInt], budget: usize) -> std::result::Result<Vec<IntMatrix>, ErrorKind> {
    let n = invariants.len();
    let start = strip_zero_rows(&hnf(&IntMatrix::diagonal(invariants)).0);
    let elements = group_elements(invariants);
    let mut seen: HashSet<IntMatrix> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    let mut out = Vec::new();
    while let Some(h) = queue.pop_front() {
        let lat = Lattice { ambient_dim: n, basis: h.clone(), denominator: BigInt::one() };
        for x in &elements {
            let xr: Vec<BigRational> = x.iter().map(rat_int).collect();
            if lat.contains_vector(&xr) {
                continue;
            }
            let mut rows = h.to_rows();
            rows.push(x.clone());
            let next = strip_zero_rows(&hnf(&IntMatrix::from_rows(rows)).0);
            if seen.insert(next.clone()) {
                if seen.len() > budget {
                    return Err(ErrorKind::IndexTooLarge(format!("more than {budget} subgroups")));
                }
                queue.push_back(next);
            }
        }
        out.push(h);
    }
    Ok(out)
}

fn group_elements(invariants: &[BigInt]) -> Vec<Vec<BigInt>> {
    let mut out = vec![vec![]];
    for d in invariants {
        let bound = if d.is_zero() { BigInt::one() } else { d.clone() };
        let mut next = Vec::new();
        let mut k = BigInt::zero();
        while k < bound {
            for prefix in &out {
                let mut v = prefix.clone();
                v.push(k.clone());
                next.push(v);
            }
            k += 1;
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: usize, cols: usize, d: &[i64]) -> IntMatrix {
        IntMatrix::from_i64(rows, cols, d)
    }

    /// Cofactor expansion, independent of the Bareiss path.
    fn cofactor_det(a: &[Vec<i64>]) -> i64 {
        let n = a.len();
        if n == 1 {
            return a[0][0];
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = a[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * a[0][j] * cofactor_det(&minor)
            })
            .sum()
    }

    fn is_hnf(h: &IntMatrix) -> bool {
        let mut last_pivot: Option<usize> = None;
        let mut seen_zero = false;
        for i in 0..h.rows() {
            match (0..h.cols()).find(|&j| !h.get(i, j).is_zero()) {
                None => seen_zero = true,
                Some(p) => {
                    if seen_zero || last_pivot.is_some_and(|lp| p <= lp) || !h.get(i, p).is_positive() {
                        return false;
                    }
                    for k in 0..i {
                        let e = h.get(k, p);
                        if e.is_negative() || e >= h.get(i, p) {
                            return false;
                        }
                    }
                    last_pivot = Some(p);
                }
            }
        }
        true
    }

    /// Subgroups of a finite abelian group of order <= 64 by exhaustive
    /// closure of every subset of generators (as bitsets).
    fn brute_subgroup_count(invariants: &[u64]) -> usize {
        let order: u64 = invariants.iter().product();
        let decode = |mut x: u64| -> Vec<u64> {
            invariants
                .iter()
                .map(|&d| {
                    let r = x % d;
                    x /= d;
                    r
                })
                .collect()
        };
        let encode = |v: &[u64]| -> u64 {
            let mut x = 0;
            for (i, &d) in invariants.iter().enumerate().rev() {
                x = x * d + v[i] % d;
            }
            x
        };
        let add = |a: u64, b: u64| -> u64 {
            let (va, vb) = (decode(a), decode(b));
            let s: Vec<u64> = va.iter().zip(&vb).map(|(x, y)| x + y).collect();
            encode(&s)
        };
        let closure = |gens: u128| -> u128 {
            let mut set: u128 = 1; // identity
            loop {
                let mut next = set;
                for a in 0..order {
                    if set >> a & 1 == 1 {
                        for b in 0..order {
                            if gens >> b & 1 == 1 {
                                next |= 1 << add(a, b);
                            }
                        }
                    }
                }
                if next == set {
                    return set;
                }
                set = next;
            }
        };
        let mut found: HashSet<u128> = HashSet::new();
        let mut frontier = vec![1u128];
        found.insert(1);
        while let Some(s) = frontier.pop() {
            for b in 0..order {
                if s >> b & 1 == 0 {
                    let t = closure(s | 1 << b);
                    if found.insert(t) {
                        frontier.push(t);
                    }
                }
            }
        }
        found.len()
    }

    #[test]
    fn hnf_identity_and_zero() {
        let (h, u) = hnf(&IntMatrix::identity(3));
        assert_eq!(h, IntMatrix::identity(3));
        assert_eq!(u, IntMatrix::identity(3));
        let (h, u) = hnf(&IntMatrix::zeros(2, 2));
        assert!(h.is_zero());
        assert_eq!(u, IntMatrix::identity(2));
    }

    #[test]
    fn hnf_preserves_determinant() {
        let a = m(2, 2, &[1, 2, 3, 4]);
        let (h, u) = hnf(&a);
        assert_eq!(u.mul(&a), h);
        assert!(is_hnf(&h));
        assert_eq!(h.det().abs(), BigInt::from(cofactor_det(&[vec![1, 2], vec![3, 4]]).abs()));
        assert_eq!(h.det().abs(), BigInt::from(2));
        assert_eq!(u.det().abs(), BigInt::one());
    }

    #[test]
    fn snf_examples() {
        let a = m(2, 2, &[2, 0, 0, 3]);
        let (d, u, v) = snf(&a);
        assert_eq!(d, m(2, 2, &[1, 0, 0, 6]));
        assert_eq!(u.mul(&a).mul(&v), d);
        assert_eq!(snf(&IntMatrix::identity(4)).0, IntMatrix::identity(4));
        assert_eq!(snf(&m(2, 2, &[2, 0, 0, 2])).0, m(2, 2, &[2, 0, 0, 2]));
    }

    #[test]
    fn snf_rectangular() {
        let a = m(2, 3, &[2, 4, 4, -6, 6, 12]);
        let (d, u, v) = snf(&a);
        assert_eq!(u.mul(&a).mul(&v), d);
        assert_eq!(d.get(0, 0), &BigInt::from(2));
        assert_eq!(d.get(1, 1), &BigInt::from(6));
    }

    #[test]
    fn index_examples() {
        let z2 = Lattice::standard(2);
        assert_eq!(lattice_index(&z2, &z2).unwrap(), BigInt::one());
        let two = z2.scale(&rat(2));
        assert_eq!(lattice_index(&z2, &two).unwrap(), BigInt::from(4));
        assert_eq!(lattice_index(&two, &z2).unwrap_err().kind, ErrorKind::NotSublattice);
        let line = Lattice::from_integer_rows(&m(1, 2, &[1, 0]), &BigInt::one());
        assert_eq!(lattice_index(&z2, &line).unwrap_err().kind, ErrorKind::RankDeficient);
    }

    #[test]
    fn index_matches_coset_count() {
        let z2 = Lattice::standard(2);
        let inner = Lattice::from_integer_rows(&m(2, 2, &[2, 1, 0, 3]), &BigInt::one());
        let mut reps: Vec<Vec<BigRational>> = Vec::new();
        for a in 0..12 {
            for b in 0..12 {
                let v = vec![rat(a), rat(b)];
                if !reps.iter().any(|r| inner.contains_vector(&[&v[0] - &r[0], &v[1] - &r[1]])) {
                    reps.push(v);
                }
            }
        }
        assert_eq!(lattice_index(&z2, &inner).unwrap(), BigInt::from(reps.len()));
    }

    #[test]
    fn intermediate_lattices_small() {
        let z2 = Lattice::standard(2);
        assert_eq!(enumerate_intermediate_lattices(&z2, &z2, 100).unwrap().len(), 1);
        let two = z2.scale(&rat(2));
        assert_eq!(enumerate_intermediate_lattices(&z2, &two, 100).unwrap().len(), 5);
        let z1 = Lattice::standard(1);
        let four = z1.scale(&rat(4));
        let ls = enumerate_intermediate_lattices(&z1, &four, 100).unwrap();
        assert_eq!(ls, vec![four.clone(), z1.scale(&rat(2)), z1.clone()]);
        assert!(matches!(
            enumerate_intermediate_lattices(&z1, &four, 2).unwrap_err().kind,
            ErrorKind::IndexTooLarge(_)
        ));
    }

    #[test]
    fn subgroup_counts_match_brute_force() {
        for inv in [vec![2u64, 2], vec![2, 4], vec![4, 4], vec![2, 2, 2], vec![3, 9], vec![2, 6], vec![8], vec![2, 2, 4]] {
            let big: Vec<BigInt> = inv.iter().map(|&d| BigInt::from(d)).collect();
            let got = enumerate_subgroup_lattices(&big, DEFAULT_SUBGROUP_BUDGET).unwrap().len();
            assert_eq!(got, brute_subgroup_count(&inv), "invariants {inv:?}");
        }
    }

    #[test]
    fn intersection_and_sum() {
        let a = Lattice::from_integer_rows(&m(2, 2, &[2, 0, 0, 1]), &BigInt::one());
        let b = Lattice::from_integer_rows(&m(2, 2, &[1, 0, 0, 3]), &BigInt::one());
        assert_eq!(a.intersect(&b), Lattice::from_integer_rows(&m(2, 2, &[2, 0, 0, 3]), &BigInt::one()));
        assert_eq!(a.sum(&b), Lattice::standard(2));
        let half = Lattice::standard(2).scale(&BigRational::new(1.into(), 2.into()));
        assert_eq!(half.intersect(&a), a);
    }

    #[test]
    fn left_kernel_vectors_annihilate() {
        let a = m(3, 2, &[1, 2, 2, 4, 3, 1]);
        let k = left_kernel(&a);
        assert_eq!(k.rows(), 1);
        assert!(k.mul(&a).is_zero());
    }

    #[test]
    fn normalization_is_canonical() {
        let a = Lattice::from_integer_rows(&m(2, 2, &[4, 2, 0, 6]), &BigInt::from(2));
        let b = Lattice::from_integer_rows(&m(2, 2, &[2, 1, 0, 3]), &BigInt::one());
        assert_eq!(a, b);
    }

    fn small_matrix(n: usize) -> impl Strategy<Value = IntMatrix> {
        proptest::collection::vec(-9i64..=9, n * n).prop_map(move |v| IntMatrix::from_i64(n, n, &v))
    }

    proptest! {
        #[test]
        fn hnf_is_valid_and_unimodular(a in small_matrix(3)) {
            let (h, u) = hnf(&a);
            prop_assert_eq!(u.mul(&a), h.clone());
            prop_assert!(is_hnf(&h));
            prop_assert_eq!(u.det().abs(), BigInt::one());
        }

        #[test]
        fn snf_divisibility(a in small_matrix(3)) {
            let (d, u, v) = snf(&a);
            prop_assert_eq!(u.mul(&a).mul(&v), d.clone());
            for i in 0..3 {
                for j in 0..3 {
                    if i != j { prop_assert!(d.get(i, j).is_zero()); }
                }
                prop_assert!(!d.get(i, i).is_negative());
            }
            for i in 0..2 {
                let (x, y) = (d.get(i, i), d.get(i + 1, i + 1));
                let ok = if x.is_zero() { y.is_zero() } else { y.is_multiple_of(x) };
                prop_assert!(ok);
            }
            prop_assert_eq!(a.det().abs(), d.det());
        }

        #[test]
        fn bareiss_matches_cofactor(v in proptest::collection::vec(-20i64..=20, 16)) {
            let a = IntMatrix::from_i64(4, 4, &v);
            let rows: Vec<Vec<i64>> = v.chunks(4).map(|c| c.to_vec()).collect();
            prop_assert_eq!(a.det(), BigInt::from(cofactor_det(&rows)));
        }

        #[test]
        fn intersection_is_largest_common(a in small_matrix(2), b in small_matrix(2)) {
            prop_assume!(!a.det().is_zero() && !b.det().is_zero());
            let la = Lattice::from_integer_rows(&a, &BigInt::one());
            let lb = Lattice::from_integer_rows(&b, &BigInt::one());
            let i = la.intersect(&lb);
            prop_assert!(la.contains(&i) && lb.contains(&i));
            // [A : A∩B] = [A+B : B]
            let s = la.sum(&lb);
            prop_assert_eq!(lattice_index(&la, &i).unwrap(), lattice_index(&s, &lb).unwrap());
        }
    }
}
