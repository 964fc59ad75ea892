//! Explicit height and counting bounds, evaluated exactly when small enough
//! and otherwise as certified base-10 logarithms.
//!
//! Every bound is a product of integer powers `∏ b_i^{e_i}`. Its `log10` is
//! an interval built from fixed-point natural logarithms with directed
//! rounding, so the digit count is certified even when the value itself is
//! far too large to write down.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{err, Error, ErrorKind, Result};

const MODULE: &str = "bounds";

/// Values with more digits are kept in logarithmic form only.
pub const MAX_EXACT_DIGITS: u64 = 10_000_000;

/// Guard bits carried through the series evaluations.
const GUARD_BITS: u64 = 32;

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, a);
            }
            a = mul(a, a);
            e >>= 1;
        }
        r
    };
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime divisors of `n` by trial division.
pub fn prime_divisors(n: u64) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out.insert(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.insert(m);
    }
    out
}

pub fn radical(n: u64) -> u64 {
    prime_divisors(n).iter().product()
}

/// A finite set of excluded rational primes; its product is `N_S` (or
/// `N_U` when the set is the complement of an open subscheme).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SIntegerSpec {
    excluded_primes: BTreeSet<u64>,
}

impl SIntegerSpec {
    pub fn new<I: IntoIterator<Item = u64>>(primes: I) -> Result<SIntegerSpec> {
        let mut set = BTreeSet::new();
        for p in primes {
            if !is_prime_u64(p) {
                return err(MODULE, "s_integer_spec", ErrorKind::NotPrime(p.to_string()));
            }
            set.insert(p);
        }
        Ok(SIntegerSpec { excluded_primes: set })
    }

    pub fn empty() -> SIntegerSpec {
        SIntegerSpec::default()
    }

    /// The primes dividing `n`.
    pub fn of_radical(n: u64) -> SIntegerSpec {
        SIntegerSpec { excluded_primes: prime_divisors(n) }
    }

    pub fn primes(&self) -> &BTreeSet<u64> {
        &self.excluded_primes
    }

    pub fn union(&self, other: &SIntegerSpec) -> SIntegerSpec {
        SIntegerSpec { excluded_primes: self.excluded_primes.union(&other.excluded_primes).copied().collect() }
    }

    pub fn n_value(&self) -> BigInt {
        self.excluded_primes.iter().map(|&p| BigInt::from(p)).product()
    }
}

pub fn n_value(spec: &SIntegerSpec) -> BigInt {
    spec.n_value()
}

/// `N_U = rad(N_T N_S)`: the set whose product is the radical.
pub fn n_u(t: &SIntegerSpec, s: &SIntegerSpec) -> SIntegerSpec {
    t.union(s)
}

/// A closed interval `[lo, hi] / 2^prec`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogInterval {
    pub lo: BigInt,
    pub hi: BigInt,
    pub prec: u64,
}

impl LogInterval {
    fn zero(prec: u64) -> LogInterval {
        LogInterval { lo: BigInt::zero(), hi: BigInt::zero(), prec }
    }

    fn add(&self, o: &LogInterval) -> LogInterval {
        debug_assert_eq!(self.prec, o.prec);
        LogInterval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi, prec: self.prec }
    }

    fn scale(&self, e: &BigInt) -> LogInterval {
        LogInterval { lo: &self.lo * e, hi: &self.hi * e, prec: self.prec }
    }

    fn at(&self, prec: u64) -> LogInterval {
        match prec.cmp(&self.prec) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let s = prec - self.prec;
                LogInterval { lo: &self.lo << s, hi: &self.hi << s, prec }
            }
            Ordering::Less => {
                let s = self.prec - prec;
                let hi = -((-&self.hi) >> s);
                LogInterval { lo: &self.lo >> s, hi, prec }
            }
        }
    }

    pub fn width(&self) -> f64 {
        fixed_to_f64(&(&self.hi - &self.lo), self.prec)
    }

    pub fn midpoint_f64(&self) -> f64 {
        fixed_to_f64(&(&self.lo + &self.hi), self.prec + 1)
    }

    /// `⌊x⌋` if it is the same for every point of the interval.
    pub fn floor(&self) -> Option<BigInt> {
        let a = self.lo.div_floor(&(BigInt::one() << self.prec));
        let b = self.hi.div_floor(&(BigInt::one() << self.prec));
        (a == b).then_some(a)
    }

    /// Decimal expansion of the midpoint, rounded to `places` digits.
    pub fn decimal(&self, places: usize) -> String {
        let sum = (&self.lo + &self.hi) * num_traits::pow(BigInt::from(10), places);
        let scaled: BigInt = ((sum >> self.prec) + 1) >> 1u32;
        let s = scaled.abs().to_string();
        let s = format!("{s:0>width$}", width = places + 1);
        let (int, frac) = s.split_at(s.len() - places);
        let sign = if scaled.sign() == Sign::Minus { "-" } else { "" };
        format!("{sign}{int}.{frac}")
    }
}

fn fixed_to_f64(x: &BigInt, prec: u64) -> f64 {
    let bits = x.bits();
    if bits <= 60 {
        return x.to_f64().unwrap() / 2f64.powi(prec as i32);
    }
    let shift = bits - 60;
    (x >> shift).to_f64().unwrap() * 2f64.powf(shift as f64 - prec as f64)
}

/// `atanh(p/q)` for `0 ≤ p/q ≤ 1/3`, as `[lo, hi] / 2^prec`.
fn atanh_interval(p: &BigInt, q: &BigInt, prec: u64) -> (BigInt, BigInt) {
    if p.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let w = prec + GUARD_BITS;
    // every step truncates downward, so the partial sum is a lower bound
    let x = (p << w) / q;
    let x2 = (&x * &x) >> w;
    let mut pow = x;
    let mut sum = BigInt::zero();
    let mut terms = 0u64;
    let mut k = 1u64;
    while !pow.is_zero() {
        sum += &pow / k;
        pow = (&pow * &x2) >> w;
        k += 2;
        terms += 1;
    }
    // each term loses at most a few units; the tail is below two units
    let slack = BigInt::from(8 * terms + 8);
    let lo: BigInt = (&sum >> GUARD_BITS) - 1;
    let hi = ((sum + slack) >> GUARD_BITS) + 1;
    (lo.max(BigInt::zero()), hi)
}

struct LogConstants {
    prec: u64,
    ln2: (BigInt, BigInt),
    ln10: (BigInt, BigInt),
}

impl LogConstants {
    fn new(prec: u64) -> LogConstants {
        let (a, b) = atanh_interval(&BigInt::one(), &BigInt::from(3), prec);
        let ln2 = (a * 2, b * 2);
        let (c, d) = atanh_interval(&BigInt::one(), &BigInt::from(9), prec);
        let ln10 = (&ln2.0 * 3 + c * 2, &ln2.1 * 3 + d * 2);
        LogConstants { prec, ln2, ln10 }
    }

    /// `ln m = k ln 2 + 2 atanh((m − 2^k)/(m + 2^k))` with `2^k ≤ m < 2^{k+1}`.
    fn ln(&self, m: &BigInt) -> (BigInt, BigInt) {
        assert!(m.is_positive());
        let k = m.bits() - 1;
        let pk = BigInt::one() << k;
        let (a, b) = atanh_interval(&(m - &pk), &(m + &pk), self.prec);
        (&self.ln2.0 * k + a * 2, &self.ln2.1 * k + b * 2)
    }

    fn log10(&self, m: &BigInt) -> LogInterval {
        if m.is_one() {
            return LogInterval::zero(self.prec);
        }
        let (lo, hi) = self.ln(m);
        let lo = (lo << self.prec) / &self.ln10.1;
        let hi = -((-(hi << self.prec)).div_floor(&self.ln10.0));
        LogInterval { lo, hi, prec: self.prec }
    }
}

/// A positive integer `∏ b_i^{e_i}`, exact when small, always with a
/// certified `log10`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigBound {
    pub factors: Vec<(BigInt, BigInt)>,
    pub exact_value: Option<BigInt>,
    pub log10: LogInterval,
    pub digit_count: BigInt,
    pub exact_flag: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum EvalMode {
    /// Materialize values of at most [`MAX_EXACT_DIGITS`] digits.
    #[default]
    Auto,
    LogOnly,
}

impl BigBound {
    pub fn from_factors(factors: &[(BigInt, BigInt)], mode: EvalMode) -> Result<BigBound> {
        const OP: &str = "evaluate";
        let mut fs: Vec<(BigInt, BigInt)> = Vec::new();
        for (b, e) in factors {
            if !b.is_positive() || e.is_negative() {
                return err(MODULE, OP, ErrorKind::InvalidInput(format!("factor {b}^{e} is not a positive integer power")));
            }
            if b.is_one() || e.is_zero() {
                continue;
            }
            match fs.iter_mut().find(|(c, _)| c == b) {
                Some((_, f)) => *f += e,
                None => fs.push((b.clone(), e.clone())),
            }
        }
        fs.sort();
        let max_bits = fs.iter().map(|(_, e)| e.bits()).max().unwrap_or(0);
        let mut prec = 96 + max_bits + 2 * (fs.len() as u64).max(1).ilog2() as u64;
        for _ in 0..6 {
            let consts = LogConstants::new(prec);
            let log10 = fs.iter().fold(LogInterval::zero(prec), |acc, (b, e)| acc.add(&consts.log10(b).scale(e)));
            let upper_digits = (&log10.hi >> prec) + 1;
            let exact_value = (mode == EvalMode::Auto && upper_digits <= BigInt::from(MAX_EXACT_DIGITS))
                .then(|| fs.iter().map(|(b, e)| num_traits::pow(b.clone(), e.to_usize().unwrap())).product::<BigInt>());
            let floor = match (&exact_value, log10.floor()) {
                (_, Some(f)) => Some(f),
                (Some(v), None) => {
                    let k = &log10.hi >> prec;
                    let p = num_traits::pow(BigInt::from(10), k.to_usize().unwrap());
                    Some(if *v >= p { k } else { k - 1 })
                }
                (None, None) => power_of_ten_exponent(&fs),
            };
            let Some(floor) = floor else {
                prec *= 2;
                continue;
            };
            if let Some(v) = &exact_value {
                // the exact value's own logarithm must agree with the factor sum
                let direct = consts.log10(v);
                if direct.hi < log10.lo || log10.hi < direct.lo {
                    return err(
                        MODULE,
                        OP,
                        ErrorKind::MethodDisagreement(format!(
                            "log10 of exact value {} vs factor sum {}",
                            direct.decimal(15),
                            log10.decimal(15)
                        )),
                    );
                }
            }
            return Ok(BigBound {
                factors: fs,
                exact_flag: exact_value.is_some(),
                exact_value,
                log10,
                digit_count: floor + 1,
            });
        }
        Err(Error::new(MODULE, OP, ErrorKind::Internal("digit count could not be certified".into())))
    }

    pub fn exact(n: &BigInt) -> Result<BigBound> {
        BigBound::from_factors(&[(n.clone(), BigInt::one())], EvalMode::Auto)
    }

    pub fn log10_decimal(&self) -> String {
        self.log10.decimal(15)
    }

    pub fn log10_f64(&self) -> f64 {
        self.log10.midpoint_f64()
    }

    /// Certified comparison; `None` when the intervals overlap and no exact
    /// values settle it.
    pub fn cmp_certified(&self, other: &BigBound) -> Option<Ordering> {
        if let (Some(a), Some(b)) = (&self.exact_value, &other.exact_value) {
            return Some(a.cmp(b));
        }
        if self.factors == other.factors {
            return Some(Ordering::Equal);
        }
        let p = self.log10.prec.max(other.log10.prec);
        let (a, b) = (self.log10.at(p), other.log10.at(p));
        if a.hi < b.lo {
            Some(Ordering::Less)
        } else if b.hi < a.lo {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    /// Not certifiably larger than `other`.
    pub fn not_above(&self, other: &BigBound) -> bool {
        self.cmp_certified(other) != Some(Ordering::Greater)
    }

    /// `log10` values agree to within `10^{-places}`.
    pub fn log10_agrees(&self, other: &LogInterval, places: u32) -> bool {
        let p = self.log10.prec.max(other.prec);
        let (a, b) = (self.log10.at(p), other.at(p));
        let tol = (BigInt::one() << p) / num_traits::pow(BigInt::from(10), places as usize);
        (&a.hi - &b.lo).abs() < tol && (&b.hi - &a.lo).abs() < tol
    }

    /// Multiplies by another bound (factor lists concatenate).
    pub fn times(&self, other: &BigBound, mode: EvalMode) -> Result<BigBound> {
        let fs: Vec<_> = self.factors.iter().chain(&other.factors).cloned().collect();
        BigBound::from_factors(&fs, mode)
    }
}

/// `Some(k)` if the product is exactly `10^k`, i.e. `⌊log10⌋ = k`.
fn power_of_ten_exponent(fs: &[(BigInt, BigInt)]) -> Option<BigInt> {
    let (mut twos, mut fives) = (BigInt::zero(), BigInt::zero());
    for (b, e) in fs {
        let mut m = b.clone();
        while m.is_even() {
            m /= 2;
            twos += e;
        }
        while (&m % 5u32).is_zero() {
            m /= 5;
            fives += e;
        }
        if !m.is_one() {
            return None;
        }
    }
    (twos == fives).then_some(twos)
}

/// A count bound that may be infinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CountBound {
    Finite(BigBound),
    /// The level structure has infinitely many points over `C`.
    Unbounded,
}

/// Inputs shared by the evaluators; `None` for `max_level` means infinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundInputs {
    pub g: u64,
    pub nu: BigInt,
    pub n: BigInt,
    pub pic_o: BigInt,
    pub max_level: Option<BigInt>,
    pub n_f: BigInt,
    pub h: BigInt,
    pub l: BigInt,
    pub d_min: Option<BigInt>,
    pub excluded: SIntegerSpec,
}

impl Default for BoundInputs {
    fn default() -> Self {
        BoundInputs {
            g: 1,
            nu: BigInt::one(),
            n: BigInt::one(),
            pic_o: BigInt::one(),
            max_level: Some(BigInt::one()),
            n_f: BigInt::one(),
            h: BigInt::one(),
            l: BigInt::one(),
            d_min: None,
            excluded: SIntegerSpec::empty(),
        }
    }
}

impl BoundInputs {
    pub fn validate(&self) -> Result<()> {
        let positive = [&self.nu, &self.n, &self.pic_o, &self.n_f, &self.h, &self.l];
        if self.g == 0
            || positive.iter().any(|x| !x.is_positive())
            || self.max_level.as_ref().is_some_and(|x| !x.is_positive())
            || self.d_min.as_ref().is_some_and(|x| !x.is_positive())
        {
            return err(MODULE, "bound_inputs", ErrorKind::InvalidInput("all inputs must be positive".into()));
        }
        Ok(())
    }
}

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

fn check_g(g: u64, op: &'static str) -> Result<()> {
    if g == 0 {
        return err(MODULE, op, ErrorKind::InvalidInput("g must be positive".into()));
    }
    Ok(())
}

/// `e_g = (8g)^8`.
pub fn e_g(g: u64) -> BigInt {
    num_traits::pow(big(8 * g), 8)
}

fn height_factors(g: u64, base: BigInt) -> Vec<(BigInt, BigInt)> {
    vec![(big(3 * g), big(144 * g)), (base, big(24))]
}

/// `(3g)^{144g} N_U^{24}`.
pub fn thm_main_height(g: u64, n_u: &SIntegerSpec, mode: EvalMode) -> Result<BigBound> {
    check_g(g, "thm_main_height")?;
    BigBound::from_factors(&height_factors(g, n_u.n_value()), mode)
}

/// `(3g)^{144g} (ν N_S)^{24}`.
pub fn thm_a_height(g: u64, nu: &BigInt, n_s: &SIntegerSpec, mode: EvalMode) -> Result<BigBound> {
    check_g(g, "thm_a_height")?;
    BigBound::from_factors(&height_factors(g, nu * n_s.n_value()), mode)
}

/// Headline `|Pic| |P| (2N_U)^{e_g}` and sharper `|Pic| |P| (4g)^{(8g)^7} N_U^{(12g)^5}`.
pub fn thm_main_count(
    g: u64,
    n_u: &SIntegerSpec,
    pic_o: &BigInt,
    max_level: Option<&BigInt>,
    mode: EvalMode,
) -> Result<(CountBound, CountBound)> {
    const OP: &str = "thm_main_count";
    check_g(g, OP)?;
    let Some(level) = max_level else {
        return Ok((CountBound::Unbounded, CountBound::Unbounded));
    };
    let nu = n_u.n_value();
    let pre = [(pic_o.clone(), BigInt::one()), (level.clone(), BigInt::one())];
    let headline: Vec<_> = pre.iter().cloned().chain([(2 * &nu, e_g(g))]).collect();
    let sharper: Vec<_> = pre
        .iter()
        .cloned()
        .chain([(big(4 * g), num_traits::pow(big(8 * g), 7)), (nu, num_traits::pow(big(12 * g), 5))])
        .collect();
    let headline = BigBound::from_factors(&headline, mode)?;
    let sharper = BigBound::from_factors(&sharper, mode)?;
    if !sharper.not_above(&headline) {
        return err(MODULE, OP, ErrorKind::Internal("sharper count exceeds the headline count".into()));
    }
    Ok((CountBound::Finite(headline), CountBound::Finite(sharper)))
}

/// `|Pic(O)| (2N_S)^{e_g}`.
pub fn thm_b(g: u64, n_s: &SIntegerSpec, pic_o: &BigInt, mode: EvalMode) -> Result<BigBound> {
    check_g(g, "thm_b")?;
    BigBound::from_factors(&[(pic_o.clone(), BigInt::one()), (2 * n_s.n_value(), e_g(g))], mode)
}

/// Factors of the uniform isogeny degree `(14g)^{(12g)^5} N_S^{(37g)^3}`.
fn isogeny_factors(g: u64, n_s: &SIntegerSpec) -> Vec<(BigInt, BigInt)> {
    vec![(big(14 * g), num_traits::pow(big(12 * g), 5)), (n_s.n_value(), num_traits::pow(big(37 * g), 3))]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EsBounds {
    pub height: BigBound,
    pub count: BigBound,
    pub isogeny: BigBound,
}

/// Height `(3g)^{144g} N_S^{24}`, count `(14g)^{(9g)^6} N_S^{(18g)^4}` and
/// isogeny degree `(14g)^{(12g)^5} N_S^{(37g)^3}`.
pub fn es_gl2_bounds(g: u64, n_s: &SIntegerSpec, mode: EvalMode) -> Result<EsBounds> {
    check_g(g, "es_gl2_bounds")?;
    let ns = n_s.n_value();
    Ok(EsBounds {
        height: BigBound::from_factors(&height_factors(g, ns.clone()), mode)?,
        count: BigBound::from_factors(
            &[(big(14 * g), num_traits::pow(big(9 * g), 6)), (ns, num_traits::pow(big(18 * g), 4))],
            mode,
        )?,
        isogeny: BigBound::from_factors(&isogeny_factors(g, n_s), mode)?,
    })
}

/// `d^{(2g+1)g} N(f)^{g+1} h l`, with `d` the uniform isogeny degree unless
/// a minimal degree is supplied.
pub fn thm_endobound(
    g: u64,
    n_s: &SIntegerSpec,
    n_f: &BigInt,
    h: &BigInt,
    l: &BigInt,
    d_override: Option<&BigInt>,
    mode: EvalMode,
) -> Result<BigBound> {
    check_g(g, "thm_endobound")?;
    let power = big((2 * g + 1) * g);
    let d: Vec<(BigInt, BigInt)> = match d_override {
        Some(d) => vec![(d.clone(), power)],
        None => isogeny_factors(g, n_s).into_iter().map(|(b, e)| (b, e * &power)).collect(),
    };
    let mut fs = d;
    fs.extend([(n_f.clone(), big(g + 1)), (h.clone(), BigInt::one()), (l.clone(), BigInt::one())]);
    BigBound::from_factors(&fs, mode)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct P1nBounds {
    pub height: BigBound,
    pub count: BigBound,
    /// `|P_1(n)|_C ≤ n^{2g}`.
    pub level: BigInt,
}

/// Height `(3g)^{144g} (n N_S)^{24}` and count `|Pic(O)| (2 n N_S)^{e_g}`.
pub fn cor_p1n(g: u64, n: &BigInt, n_s: &SIntegerSpec, pic_o: &BigInt, mode: EvalMode) -> Result<P1nBounds> {
    check_g(g, "cor_p1n")?;
    let base = n * n_s.n_value();
    Ok(P1nBounds {
        height: BigBound::from_factors(&height_factors(g, base.clone()), mode)?,
        count: BigBound::from_factors(&[(pic_o.clone(), BigInt::one()), (2 * base, e_g(g))], mode)?,
        level: level_structure_bound(LevelKind::P1N, n, g),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LevelKind {
    /// Full level-`n` structures: `n^{4g}`.
    PrincipalN,
    /// `n^{2g}`.
    P1N,
    /// The Mordell-equation structure: 24.
    MordellA,
}

pub fn level_structure_bound(kind: LevelKind, n: &BigInt, g: u64) -> BigInt {
    match kind {
        LevelKind::PrincipalN => num_traits::pow(n.clone(), 4 * g as usize),
        LevelKind::P1N => num_traits::pow(n.clone(), 2 * g as usize),
        LevelKind::MordellA => big(24),
    }
}

/// Degree of the polarization map: at most `2^g`.
pub fn pol_degree_bound(g: u64) -> BigInt {
    BigInt::one() << g
}

/// `deg φ ≤ |P|_S · deg φ_φ · deg φ_ι`.
pub fn composite_degree_bound(level: &BigInt, g: u64, deg_iota: &BigInt) -> BigInt {
    level * pol_degree_bound(g) * deg_iota
}

/// Named formulas for command-line evaluation.
pub const FORMULA_IDS: [&str; 11] = [
    "thm-main-height",
    "thm-a-height",
    "thm-main-count",
    "thm-main-count-sharp",
    "thm-b",
    "es-height",
    "es-count",
    "es-isogeny",
    "endo-bound",
    "cor-p1n-height",
    "cor-p1n-count",
];

/// Evaluates a formula by id. Height formulas read the excluded set as
/// `N_S` (or `N_U`); `thm-a-height` and `cor-p1n-*` also use `nu`/`n`.
pub fn evaluate(formula_id: &str, inputs: &BoundInputs, mode: EvalMode) -> Result<CountBound> {
    inputs.validate()?;
    let (g, s) = (inputs.g, &inputs.excluded);
    let fin = |b: Result<BigBound>| b.map(CountBound::Finite);
    match formula_id {
        "thm-main-height" => fin(thm_main_height(g, s, mode)),
        "thm-a-height" => fin(thm_a_height(g, &inputs.nu, s, mode)),
        "thm-main-count" => Ok(thm_main_count(g, s, &inputs.pic_o, inputs.max_level.as_ref(), mode)?.0),
        "thm-main-count-sharp" => Ok(thm_main_count(g, s, &inputs.pic_o, inputs.max_level.as_ref(), mode)?.1),
        "thm-b" => fin(thm_b(g, s, &inputs.pic_o, mode)),
        "es-height" => fin(es_gl2_bounds(g, s, mode).map(|b| b.height)),
        "es-count" => fin(es_gl2_bounds(g, s, mode).map(|b| b.count)),
        "es-isogeny" => fin(es_gl2_bounds(g, s, mode).map(|b| b.isogeny)),
        "endo-bound" => {
            fin(thm_endobound(g, s, &inputs.n_f, &inputs.h, &inputs.l, inputs.d_min.as_ref(), mode))
        }
        "cor-p1n-height" => fin(cor_p1n(g, &inputs.n, s, &inputs.pic_o, mode).map(|b| b.height)),
        "cor-p1n-count" => fin(cor_p1n(g, &inputs.n, s, &inputs.pic_o, mode).map(|b| b.count)),
        other => err(MODULE, "evaluate", ErrorKind::InvalidInput(format!("unknown formula {other:?}"))),
    }
}

#[cfg(test)]
mod tests;
