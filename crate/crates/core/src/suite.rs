//! The verification suite: every structural check of the crate run over the
//! quadratic corpus, plus the fixed instances and bound evaluations.
//!
//! Orders are processed in parallel; results are collected by corpus index,
//! so the report does not depend on scheduling.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rayon::prelude::*;

use crate::bounds::{e_g, thm_a_height, thm_b, thm_main_height, EvalMode, SIntegerSpec};
use crate::corpus::{polynomial_for, quadratic_corpus, CorpusOrder};
use crate::error::{Error, Result};
use crate::gamma_structures::{
    count_structures, m2z, matrix_conjugacy_classes, round_trip_check, structures_from_ideal_classes,
    transfer_inequality_check, CommensurableRing,
};
use crate::ideals::{class_monoid, ClassMonoid};
use crate::numberfield::make_field_i64;
use crate::orders::{conductor_comparison_check, maximal_order, quadratic_order, unit_square_quotient};

pub const CRITERIA: [&str; 8] = [
    "class census equals Pic·I",
    "|I| ≤ N(f)^g, |Pic| ≤ N(f) h, |C| ≤ N(f)^(g+1) h",
    "structure counts for Z[sqrt -5] and Z[i] in M_2(Z)",
    "ideal-class round trip under random conjugation",
    "|units / squares| ≤ 2^g",
    "transfer inequality for Z[i] ⊇ Z[2i]",
    "bound evaluators",
    "conductor comparison for d = 1, 2, 3",
];

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub max_abs_disc: i64,
    pub max_conductor: u64,
    /// Random conjugations per structure in the round trip.
    pub conjugations: usize,
    pub seed: u64,
    /// Corrupt one class-monoid table entry (negative control).
    pub inject_fault: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { max_abs_disc: 200, max_conductor: 6, conjugations: 20, seed: 2024, inject_fault: false }
    }
}

#[derive(Clone, Debug, Default)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
    /// Failures caused only by exhausted search budgets.
    pub budget_failures: usize,
    pub elapsed: Duration,
}

impl CriterionReport {
    fn new(id: usize) -> CriterionReport {
        CriterionReport { id, name: CRITERIA[id - 1], ..Default::default() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn error(&mut self, context: &str, e: &Error) {
        self.checks += 1;
        if e.kind.is_budget() {
            self.budget_failures += 1;
        }
        self.failures.push(format!("{context}: {e}"));
    }

    fn absorb(&mut self, other: CriterionReport) {
        self.checks += other.checks;
        self.failures.extend(other.failures);
        self.budget_failures += other.budget_failures;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderStats {
    pub discriminant: i64,
    pub field_discriminant: i64,
    pub conductor: u64,
    pub monoid_size: usize,
    pub picard: usize,
    pub intermediate: usize,
    pub census_lattices: u64,
    pub structures: usize,
    pub unit_square_classes: usize,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub criteria: Vec<CriterionReport>,
    pub orders: Vec<OrderStats>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed())
    }

    /// All failures come from exhausted budgets.
    pub fn budget_only(&self) -> bool {
        let failures: usize = self.criteria.iter().map(|c| c.failures.len()).sum();
        let budget: usize = self.criteria.iter().map(|c| c.budget_failures).sum();
        failures > 0 && failures == budget
    }
}

/// Per-order results for the corpus criteria (1, 2, 4, 5, 8).
struct OrderOutcome {
    stats: Option<OrderStats>,
    reports: [CriterionReport; 5],
}

fn corpus_order(c: &CorpusOrder, index: usize, cfg: &SuiteConfig) -> OrderOutcome {
    let label = c.label();
    let mut census = CriterionReport::new(1);
    let mut bounds = CriterionReport::new(2);
    let mut round_trip = CriterionReport::new(4);
    let mut units = CriterionReport::new(5);
    let mut conductors = CriterionReport::new(8);

    let monoid: Option<ClassMonoid> = match class_monoid(&c.order, &c.maximal) {
        Ok(mut m) => {
            if cfg.inject_fault && index == 0 {
                m.inject_table_fault();
            }
            match m.verify() {
                Ok(()) => census.check(true, String::new),
                Err(e) => census.error(&label, &e),
            }
            census.check(m.census.is_some(), || format!("{label}: census did not run"));
            Some(m)
        }
        Err(e) => {
            census.error(&label, &e);
            None
        }
    };

    let mut structures = 0;
    if let Some(m) = &monoid {
        let b = m.bounds();
        bounds.check(BigInt::from(b.intermediate.0) <= b.intermediate.1, || {
            format!("{label}: |I| = {} > N(f)^g = {}", b.intermediate.0, b.intermediate.1)
        });
        bounds.check(BigInt::from(b.picard.0) <= b.picard.1, || {
            format!("{label}: |Pic| = {} > N(f) h = {}", b.picard.0, b.picard.1)
        });
        bounds.check(BigInt::from(b.monoid.0) <= b.monoid.1, || {
            format!("{label}: |C| = {} > N(f)^(g+1) h = {}", b.monoid.0, b.monoid.1)
        });
        if c.conductor == 1 {
            bounds.check(m.intermediate.len() == 1, || format!("{label}: maximal order with |I| > 1"));
        }

        match structures_from_ideal_classes(&c.order, &c.maximal, &m2z(), 0) {
            Ok(set) => {
                structures = set.structures.len();
                round_trip.check(structures == m.size(), || {
                    format!("{label}: {structures} structures for {} classes", m.size())
                });
                match round_trip_check(&set, &m.classes, cfg.conjugations, cfg.seed.wrapping_add(index as u64)) {
                    Ok(0) => round_trip.check(true, String::new),
                    Ok(k) => round_trip.check(false, || format!("{label}: {k} round-trip failures")),
                    Err(e) => round_trip.error(&label, &e),
                }
            }
            Err(e) => round_trip.error(&label, &e),
        }
    }

    let mut unit_classes = 0;
    match unit_square_quotient(&c.order) {
        Ok(u) => {
            unit_classes = u.square_class_count;
            let real = c.field_discriminant > 0;
            let expected = if real { 4 } else { 2 };
            units.check(u.square_class_count <= 4 && u.square_class_count == expected, || {
                format!("{label}: |units/squares| = {}, expected {expected}", u.square_class_count)
            });
            if let Some(eps) = &u.fundamental_unit {
                let n = c.field.norm(eps);
                units.check(n.abs().is_one() && c.order.contains(eps), || format!("{label}: N(ε) = {n}"));
            } else {
                units.check(!real, || format!("{label}: real order without a fundamental unit"));
            }
        }
        Err(e) => units.error(&label, &e),
    }

    for d in 1..=3 {
        match conductor_comparison_check(&c.order, &c.maximal, d) {
            Ok(r) => conductors.check(r.holds(), || {
                format!("{label}, d = {d}: N(f') = {}, N(f) = {}, contained = {}", r.norm_f_prime, r.norm_f, r.scaled_contained)
            }),
            Err(e) => conductors.error(&format!("{label}, d = {d}"), &e),
        }
    }

    let stats = monoid.map(|m| OrderStats {
        discriminant: c.discriminant(),
        field_discriminant: c.field_discriminant,
        conductor: c.conductor,
        monoid_size: m.size(),
        picard: m.picard.len(),
        intermediate: m.intermediate.len(),
        census_lattices: m.census.as_ref().map_or(0, |r| r.lattices),
        structures,
        unit_square_classes: unit_classes,
    });
    OrderOutcome { stats, reports: [census, bounds, round_trip, units, conductors] }
}

/// The two fixed structure counts, each cross-checked by matrix search with
/// entries at most 10.
pub fn structure_count_instances() -> CriterionReport {
    let mut r = CriterionReport::new(3);
    // (d_K, expected count, expected bound, trace and norm of the generator)
    for (dk, count, bound, t, n) in [(-20i64, 2usize, 2u64, 0i64, 5i64), (-4, 1, 1, 0, 1)] {
        let label = format!("d_K = {dk}");
        let run = || -> Result<(usize, BigInt)> {
            let field = make_field_i64(&polynomial_for(dk))?;
            let gamma = quadratic_order(&field, 1)?;
            let maximal = maximal_order(&field, None)?;
            let c = count_structures(&gamma, &maximal, &m2z())?;
            Ok((c.count, c.bound))
        };
        match run() {
            Ok((c, b)) => {
                r.check(c == count, || format!("{label}: {c} structures, expected {count}"));
                r.check(b == BigInt::from(bound), || format!("{label}: bound {b}, expected {bound}"));
                let search = matrix_conjugacy_classes(t, n, 10, 60);
                r.check(search == c, || format!("{label}: matrix search finds {search} classes"));
            }
            Err(e) => r.error(&label, &e),
        }
    }
    r
}

/// `Γ = R = Z[i]`, `R' = Z[2i]`, `d = 2`.
pub fn transfer_instance() -> CriterionReport {
    let mut r = CriterionReport::new(6);
    let run = || -> Result<crate::gamma_structures::TransferReport> {
        let field = make_field_i64(&[1, 0, 1])?;
        let maximal = maximal_order(&field, None)?;
        let sub = quadratic_order(&field, 2)?;
        transfer_inequality_check(&maximal, &CommensurableRing::Commutative(maximal.clone()), &CommensurableRing::Commutative(sub), 2)
    };
    match run() {
        Ok(t) => {
            r.check((t.structures_r, t.structures_r_prime) == (2, 2), || {
                format!("counts ({}, {}), expected (2, 2)", t.structures_r, t.structures_r_prime)
            });
            r.check(t.quotient_size == BigInt::from(4), || format!("|R'/2R'| = {}", t.quotient_size));
            r.check(t.inequality_holds, || "2 ≤ 4 · 2 fails".into());
            r.check(t.unit_index == Some((2, BigInt::from(4))), || format!("unit index {:?}", t.unit_index));
            r.check(t.holds(), || "transfer report does not hold".into());
        }
        Err(e) => r.error("Z[i] ⊇ Z[2i]", &e),
    }
    r
}

pub fn bound_instances() -> CriterionReport {
    let mut r = CriterionReport::new(7);
    let empty = SIntegerSpec::empty();
    match thm_main_height(1, &empty, EvalMode::Auto) {
        Ok(b) => r.check(b.digit_count == BigInt::from(69), || format!("3^144 has {} digits", b.digit_count)),
        Err(e) => r.error("3^144", &e),
    }
    match thm_b(1, &empty, &BigInt::one(), EvalMode::LogOnly) {
        Ok(b) => r.check(b.digit_count == BigInt::from(5_050_446), || format!("2^(8^8) has {} digits", b.digit_count)),
        Err(e) => r.error("2^(8^8)", &e),
    }
    r.check(e_g(1) == BigInt::from(16_777_216u64), || format!("e_1 = {}", e_g(1)));
    r.check(e_g(2) == BigInt::from(4_294_967_296u64), || format!("e_2 = {}", e_g(2)));
    match thm_a_height(1, &BigInt::from(6), &empty, EvalMode::Auto) {
        Ok(b) => {
            let mut direct = BigInt::one();
            for _ in 0..144 {
                direct *= 3;
            }
            for _ in 0..24 {
                direct *= 6;
            }
            r.check(b.exact_value.as_ref() == Some(&direct), || "3^144 6^24 differs from repeated multiplication".into());
            r.check(b.digit_count == BigInt::from(direct.to_string().len()), || "digit count of 3^144 6^24".into());
        }
        Err(e) => r.error("3^144 6^24", &e),
    }
    r
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let corpus = quadratic_corpus(cfg.max_abs_disc, cfg.max_conductor)?;
    let start = Instant::now();
    let outcomes: Vec<OrderOutcome> =
        corpus.par_iter().enumerate().map(|(i, c)| corpus_order(c, i, cfg)).collect();
    let corpus_time = start.elapsed();

    let mut per_order: [CriterionReport; 5] =
        [1, 2, 4, 5, 8].map(CriterionReport::new);
    let mut orders = Vec::new();
    for o in outcomes {
        for (acc, r) in per_order.iter_mut().zip(o.reports) {
            acc.absorb(r);
        }
        orders.extend(o.stats);
    }
    for r in per_order.iter_mut() {
        r.elapsed = corpus_time;
    }
    let timed = |f: fn() -> CriterionReport| {
        let t = Instant::now();
        let mut r = f();
        r.elapsed = t.elapsed();
        r
    };
    let [c1, c2, c4, c5, c8] = per_order;
    let criteria =
        vec![c1, c2, timed(structure_count_instances), c4, c5, timed(transfer_instance), timed(bound_instances), c8];
    Ok(SuiteReport { criteria, orders })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_corpus_passes() {
        let cfg = SuiteConfig { max_abs_disc: 40, max_conductor: 3, conjugations: 3, ..SuiteConfig::default() };
        let r = run_suite(&cfg).unwrap();
        for c in &r.criteria {
            assert!(c.passed(), "{}: {:?}", c.name, c.failures);
            assert!(c.checks > 0);
        }
        assert_eq!(r.criteria.iter().map(|c| c.id).collect::<Vec<_>>(), (1..=8).collect::<Vec<_>>());
    }

    #[test]
    fn maximal_orders_have_trivial_intermediate_sets() {
        let cfg = SuiteConfig { max_abs_disc: 60, max_conductor: 1, conjugations: 1, ..SuiteConfig::default() };
        let r = run_suite(&cfg).unwrap();
        assert!(r.passed());
        assert!(r.orders.iter().all(|o| o.intermediate == 1 && o.conductor == 1));
    }

    #[test]
    fn injected_fault_is_reported() {
        let cfg = SuiteConfig { max_abs_disc: 20, max_conductor: 2, conjugations: 1, inject_fault: true, ..SuiteConfig::default() };
        let r = run_suite(&cfg).unwrap();
        assert!(!r.passed());
        assert!(!r.criteria[0].passed());
        assert!(r.criteria[0].failures[0].contains("class monoid factorization violated"));
        assert!(!r.budget_only());
    }
}
