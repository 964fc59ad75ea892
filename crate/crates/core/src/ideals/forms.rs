//! Binary quadratic forms `(a, b, c) = a x^2 + b xy + c y^2` over machine
//! integers: reduction, cycles, class keys and class numbers.
//!
//! This is an independent route to ideal classes of quadratic orders: a
//! lattice with an oriented basis gives a primitive form whose discriminant
//! is that of the lattice's multiplier ring, and lattice classes correspond
//! to form classes (proper equivalence, with `f ~ (-a, b, -c)` added for
//! indefinite forms because scalars of negative norm exist).

use num_integer::{Integer, Roots};

pub type Form = (i64, i64, i64);

/// A canonical class label: the discriminant and a distinguished reduced form.
pub type FormKey = (i64, Form);

pub fn discriminant(f: Form) -> i64 {
    f.1 * f.1 - 4 * f.0 * f.2
}

pub fn content(f: Form) -> i64 {
    f.0.gcd(&f.1).gcd(&f.2)
}

pub fn is_primitive(f: Form) -> bool {
    content(f) == 1
}

/// Reduced representative of a positive definite form: `|b| ≤ a ≤ c`, with
/// `b ≥ 0` when `|b| = a` or `a = c`.
pub fn reduce_definite(f: Form) -> Form {
    let (mut a, mut b, mut c) = f;
    debug_assert!(a > 0 && discriminant(f) < 0);
    loop {
        // translate b into (-a, a]
        let two_a = 2 * a;
        let mut k = Integer::div_floor(&(a - b), &two_a);
        if b + k * two_a <= -a {
            k += 1;
        }
        let nb = b + k * two_a;
        c = (nb * nb - discriminant((a, b, c))) / (4 * a);
        b = nb;
        if a > c {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        if a == c && b < 0 {
            b = -b;
        }
        return (a, b, c);
    }
}

fn isqrt_floor(d: i64) -> i64 {
    (d as u64).sqrt() as i64
}

/// Whether an indefinite form is reduced: `|√D − 2|a|| < b < √D`.
pub fn is_reduced_indefinite(f: Form, s: i64) -> bool {
    let (a, b, _) = f;
    b > 0 && b <= s && b + 2 * a.abs() > s && 2 * a.abs() - b <= s
}

/// Cohen's reduction operator `ρ` for indefinite forms of non-square
/// discriminant `D` with `s = ⌊√D⌋`.
pub fn rho(f: Form, s: i64) -> Form {
    let d = discriminant(f);
    let (_, b, c) = f;
    let ac = c.abs();
    let m = 2 * ac;
    let r = if ac > s {
        // r ≡ -b mod 2|c| in (-|c|, |c|]
        let mut r = (-b).rem_euclid(m);
        if r > ac {
            r -= m;
        }
        r
    } else {
        // r ≡ -b mod 2|c| in (√D − 2|c|, √D), i.e. [s − 2|c| + 1, s]
        s - (s + b).rem_euclid(m)
    };
    (c, r, (r * r - d) / (4 * c))
}

pub fn reduce_indefinite(f: Form) -> Form {
    let s = isqrt_floor(discriminant(f));
    let mut g = f;
    while !is_reduced_indefinite(g, s) {
        g = rho(g, s);
    }
    g
}

/// The ρ-cycle of a reduced indefinite form.
pub fn indefinite_cycle(f: Form) -> Vec<Form> {
    let s = isqrt_floor(discriminant(f));
    let mut out = vec![f];
    let mut g = rho(f, s);
    while g != f {
        out.push(g);
        g = rho(g, s);
    }
    out
}

/// Class key of a primitive form (definite forms must be positive).
pub fn class_key(f: Form) -> FormKey {
    let d = discriminant(f);
    if d < 0 {
        return (d, reduce_definite(f));
    }
    let r = reduce_indefinite(f);
    let partner = reduce_indefinite((-r.0, r.1, -r.2));
    let m1 = *indefinite_cycle(r).iter().min().unwrap();
    let m2 = *indefinite_cycle(partner).iter().min().unwrap();
    (d, m1.min(m2))
}

/// Number of classes of primitive forms of discriminant `d` (positive
/// definite when `d < 0`; `d` non-square when `d > 0`), counted with the same
/// equivalence as [`class_key`].
pub fn class_number(d: i64) -> usize {
    assert!(d % 4 == 0 || d.rem_euclid(4) == 1, "not a discriminant");
    if d < 0 {
        let mut count = 0;
        let mut a = 1;
        while 3 * a * a <= -d {
            for b in -a + 1..=a {
                if (b - d).rem_euclid(2) != 0 {
                    continue;
                }
                let num = b * b - d;
                if num % (4 * a) != 0 {
                    continue;
                }
                let c = num / (4 * a);
                if c < a || (c == a && b < 0) {
                    continue;
                }
                if is_primitive((a, b, c)) {
                    count += 1;
                }
            }
            a += 1;
        }
        return count;
    }
    let s = isqrt_floor(d);
    assert!(s * s != d, "square discriminant");
    let mut keys = std::collections::BTreeSet::new();
    for a in -s..=s {
        if a == 0 {
            continue;
        }
        for b in 1..=s {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let f = (a, b, num / (4 * a));
            if is_reduced_indefinite(f, s) && is_primitive(f) {
                keys.insert(class_key(f));
            }
        }
    }
    keys.len()
}

/// Kronecker symbol `(d / p)` for a prime `p`.
pub fn kronecker(d: i64, p: i64) -> i64 {
    if p == 2 {
        return match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    let r = d.rem_euclid(p);
    if r == 0 {
        return 0;
    }
    // Euler's criterion
    let mut result = 1i64;
    let mut base = r as i128;
    let mut e = (p - 1) / 2;
    let m = p as i128;
    while e > 0 {
        if e & 1 == 1 {
            result = ((result as i128 * base) % m) as i64;
        }
        base = base * base % m;
        e >>= 1;
    }
    if result == 1 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute force: proper equivalence classes of definite forms by applying
    /// all matrices with small entries.
    fn equivalent_by_search(f: Form, g: Form) -> bool {
        let (a, b, c) = f;
        for p in -6i64..=6 {
            for q in -6i64..=6 {
                for r in -6i64..=6 {
                    for t in -6i64..=6 {
                        if p * t - q * r != 1 {
                            continue;
                        }
                        // f(px + qy, rx + ty)
                        let na = a * p * p + b * p * r + c * r * r;
                        let nb = 2 * a * p * q + b * (p * t + q * r) + 2 * c * r * t;
                        let nc = a * q * q + b * q * t + c * t * t;
                        if (na, nb, nc) == g {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    #[test]
    fn definite_reduction() {
        assert_eq!(reduce_definite((2, 2, 3)), (2, 2, 3));
        assert_eq!(reduce_definite((3, 2, 2)), (2, 2, 3));
        assert_eq!(reduce_definite((1, 4, 9)), (1, 0, 5));
        for f in [(3, 5, 7), (6, 7, 9), (5, -3, 2), (11, 9, 2)] {
            let r = reduce_definite(f);
            assert_eq!(discriminant(r), discriminant(f));
            assert!(equivalent_by_search(f, r), "{f:?} -> {r:?}");
        }
    }

    #[test]
    fn class_numbers_imaginary() {
        let known = [(-3, 1), (-4, 1), (-7, 1), (-8, 1), (-15, 2), (-20, 2), (-23, 3), (-47, 5), (-71, 7), (-84, 4), (-12, 1), (-16, 1), (-27, 1), (-36, 2), (-163, 1)];
        for (d, h) in known {
            assert_eq!(class_number(d), h, "D = {d}");
        }
    }

    #[test]
    fn class_numbers_real() {
        // wide class numbers
        let known = [(5, 1), (8, 1), (12, 1), (13, 1), (40, 2), (60, 2), (65, 2), (85, 2), (136, 2), (145, 4), (20, 1), (45, 1), (48, 1), (79 * 4, 3)];
        for (d, h) in known {
            assert_eq!(class_number(d), h, "D = {d}");
        }
    }

    #[test]
    fn rho_preserves_discriminant() {
        let f = (1, 0, -7);
        let r = reduce_indefinite(f);
        assert_eq!(discriminant(r), 28);
        for g in indefinite_cycle(r) {
            assert_eq!(discriminant(g), 28);
            assert!(is_reduced_indefinite(g, 5));
        }
    }

    #[test]
    fn kronecker_symbols() {
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(-7, 2), 1);
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(-4, 5), 1);
        assert_eq!(kronecker(12, 3), 0);
    }
}
