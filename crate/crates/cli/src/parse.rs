//! Text formats for polynomials, order bases and prime lists.

use num_bigint::BigInt;
use num_rational::BigRational;

/// `c0,c1,...,cn`, constant term first.
pub fn polynomial(s: &str) -> Result<Vec<BigInt>, String> {
    let coeffs: Vec<BigInt> = s
        .split(',')
        .map(|t| t.trim().parse::<BigInt>().map_err(|_| format!("bad coefficient {t:?} in {s:?}")))
        .collect::<Result<_, _>>()?;
    if coeffs.len() < 2 {
        return Err(format!("polynomial {s:?} needs at least two coefficients"));
    }
    Ok(coeffs)
}

/// Rows separated by `;`, entries by `,`; a row may end in `/d` to divide
/// every entry by `d`.
pub fn basis(s: &str, degree: usize) -> Result<Vec<Vec<BigRational>>, String> {
    s.split(';')
        .map(|row| {
            let (entries, den) = match row.split_once('/') {
                Some((e, d)) => (e, d.trim().parse::<BigInt>().map_err(|_| format!("bad denominator in {row:?}"))?),
                None => (row, BigInt::from(1)),
            };
            if den == BigInt::from(0) {
                return Err(format!("zero denominator in {row:?}"));
            }
            let v: Vec<BigRational> = entries
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<BigInt>()
                        .map(|n| BigRational::new(n, den.clone()))
                        .map_err(|_| format!("bad entry {t:?} in {row:?}"))
                })
                .collect::<Result<_, _>>()?;
            if v.len() != degree {
                return Err(format!("row {row:?} has {} entries, expected {degree}", v.len()));
            }
            Ok(v)
        })
        .collect()
}

/// Comma-separated primes; the empty string is the empty set.
pub fn primes(s: &str) -> Result<Vec<u64>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u64>().map_err(|_| format!("bad prime {t:?}")))
        .collect()
}

pub fn big(key: &str, s: &str) -> Result<BigInt, String> {
    s.trim().parse::<BigInt>().map_err(|_| format!("--{key}: expected an integer, got {s:?}"))
}

pub fn number<T: std::str::FromStr>(key: &str, s: &str) -> Result<T, String> {
    s.trim().parse::<T>().map_err(|_| format!("--{key}: cannot parse {s:?}"))
}

pub fn flag(key: &str, s: &str) -> Result<bool, String> {
    match s.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(format!("--{key}: expected true or false, got {other:?}")),
    }
}

pub fn rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
