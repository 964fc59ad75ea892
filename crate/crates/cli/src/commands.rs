use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

use orderkit::bounds::{self, BoundInputs, CountBound, EvalMode, SIntegerSpec};
use orderkit::gamma_structures::{count_structures, MatrixOrder};
use orderkit::ideals::{class_monoid_with, class_number, lattice_form_key, picard_group};
use orderkit::numberfield::{embedding_count, make_field, NumberField};
use orderkit::orders::{conductor, is_order, maximal_order, quadratic_order, unit_square_quotient};
use orderkit::suite::{run_suite, SuiteConfig};
use orderkit::{FieldElement, Lattice, Order};

use crate::config::Settings;
use crate::parse;
use crate::CliError;

const DEFAULT_PRINT_DIGITS: u64 = 100_000;

fn get<'a>(s: &'a Settings, key: &str) -> Option<&'a str> {
    s.get(key).map(String::as_str)
}

fn require<'a>(s: &'a Settings, key: &str) -> Result<&'a str, CliError> {
    get(s, key).ok_or_else(|| CliError::Usage(format!("missing --{key}")))
}

fn big_or(s: &Settings, key: &str, default: u64) -> Result<BigInt, CliError> {
    Ok(get(s, key).map(|v| parse::big(key, v)).transpose()?.unwrap_or_else(|| BigInt::from(default)))
}

fn num_or<T: std::str::FromStr>(s: &Settings, key: &str, default: T) -> Result<T, CliError> {
    Ok(get(s, key).map(|v| parse::number(key, v)).transpose()?.unwrap_or(default))
}

fn flag_or(s: &Settings, key: &str, default: bool) -> Result<bool, CliError> {
    Ok(get(s, key).map(|v| parse::flag(key, v)).transpose()?.unwrap_or(default))
}

fn field(s: &Settings, key: &str) -> Result<NumberField, CliError> {
    Ok(make_field(&parse::polynomial(require(s, key)?)?)?)
}

/// The order named by `basis_key` or `conductor_key`, else the maximal order.
fn order(s: &Settings, field_key: &str, basis_key: &str, conductor_key: &str) -> Result<(Order, Order), CliError> {
    let f = field(s, field_key)?;
    let maximal = maximal_order(&f, None)?;
    let o = match (get(s, basis_key), get(s, conductor_key)) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(format!("give either --{basis_key} or --{conductor_key}, not both")))
        }
        (Some(b), None) => is_order(&f, &parse::basis(b, f.degree())?)?,
        (None, Some(c)) => quadratic_order(&f, parse::number(conductor_key, c)?)?,
        (None, None) => maximal.clone(),
    };
    Ok((o, maximal))
}

fn rows(l: &Lattice) -> Value {
    json!(l.rational_basis().iter().map(|r| r.iter().map(parse::rational).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn element(e: &FieldElement) -> Value {
    json!(e.coords.iter().map(parse::rational).collect::<Vec<_>>())
}

fn big_value(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

pub fn bound(s: &Settings) -> Result<Value, CliError> {
    let formula = require(s, "formula")?;
    if !bounds::FORMULA_IDS.contains(&formula) {
        return Err(CliError::Usage(format!("unknown formula {formula:?}; one of {}", bounds::FORMULA_IDS.join(", "))));
    }
    let max_level = match get(s, "max-level") {
        Some("inf") => None,
        Some(v) => Some(parse::big("max-level", v)?),
        None => Some(BigInt::one()),
    };
    let inputs = BoundInputs {
        g: num_or(s, "g", 1u64)?,
        nu: big_or(s, "nu", 1)?,
        n: big_or(s, "n", 1)?,
        pic_o: big_or(s, "pic", 1)?,
        max_level,
        n_f: big_or(s, "n-f", 1)?,
        h: big_or(s, "h", 1)?,
        l: big_or(s, "l", 1)?,
        d_min: get(s, "d-min").map(|v| parse::big("d-min", v)).transpose()?,
        excluded: SIntegerSpec::new(parse::primes(get(s, "excluded-primes").unwrap_or(""))?)?,
    };
    let mode = if flag_or(s, "log-only", false)? { EvalMode::LogOnly } else { EvalMode::Auto };
    let print_digits: u64 = num_or(s, "max-print-digits", DEFAULT_PRINT_DIGITS)?;
    let echo = json!({
        "g": inputs.g,
        "nu": big_value(&inputs.nu),
        "n": big_value(&inputs.n),
        "pic": big_value(&inputs.pic_o),
        "max_level": inputs.max_level.as_ref().map_or(json!("inf"), big_value),
        "n_f": big_value(&inputs.n_f),
        "h": big_value(&inputs.h),
        "l": big_value(&inputs.l),
        "d_min": inputs.d_min.as_ref().map(big_value),
        "excluded_primes": inputs.excluded.primes().iter().collect::<Vec<_>>(),
        "n_s": big_value(&inputs.excluded.n_value()),
    });
    let mut out = json!({ "formula_id": formula, "inputs": echo });
    match bounds::evaluate(formula, &inputs, mode)? {
        CountBound::Unbounded => {
            out["bounded"] = json!(false);
        }
        CountBound::Finite(b) => {
            out["bounded"] = json!(true);
            out["exact_flag"] = json!(b.exact_flag);
            out["digit_count"] = big_value(&b.digit_count);
            out["log10"] = json!(b.log10_decimal());
            out["factors"] = json!(b.factors.iter().map(|(p, e)| json!([p.to_string(), e.to_string()])).collect::<Vec<_>>());
            if let Some(v) = &b.exact_value {
                if b.digit_count <= BigInt::from(print_digits) {
                    out["exact_value"] = json!(v.to_string());
                } else {
                    out["exact_value_omitted"] = json!(true);
                }
            }
        }
    }
    Ok(out)
}

pub fn order_info(s: &Settings) -> Result<Value, CliError> {
    let (o, maximal) = order(s, "field", "order-basis", "conductor")?;
    let f = o.field();
    let (r1, r2) = f.signature();
    let cond = conductor(&o, &maximal)?;
    let mut out = json!({
        "field": {
            "polynomial": f.min_poly().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "degree": f.degree(),
            "signature": [r1, r2],
            "polynomial_discriminant": f.poly_disc().to_string(),
        },
        "order": {
            "basis": rows(o.lattice()),
            "discriminant": o.discriminant().to_string(),
            "index_in_maximal": maximal.index_of(&o)?.to_string(),
            "is_maximal": o.lattice() == maximal.lattice(),
        },
        "maximal_order": { "basis": rows(maximal.lattice()), "discriminant": maximal.discriminant().to_string() },
        "conductor_norm": cond.norm.to_string(),
    });
    if f.degree() <= 2 {
        let h = class_number(f)?;
        let pic = picard_group(&o, &maximal)?;
        let u = unit_square_quotient(&o)?;
        out["class_number"] = json!(h);
        out["picard"] = json!({
            "order": pic.order(),
            "by_formula": pic.by_formula.as_ref().map(|x| x.to_string()),
            "by_forms": pic.by_forms,
        });
        out["units"] = json!({
            "torsion": u.torsion_order,
            "square_classes": u.square_class_count,
            "fundamental_unit": u.fundamental_unit.as_ref().map(element),
            "power_of_maximal_unit": u.power_of_maximal,
        });
    }
    Ok(out)
}

pub fn class_monoid(s: &Settings) -> Result<Value, CliError> {
    let (o, maximal) = order(s, "field", "order-basis", "conductor")?;
    let census = flag_or(s, "census", true)?;
    let m = class_monoid_with(&o, &maximal, census)?;
    m.verify()?;
    let classes: Vec<Value> = m
        .classes
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let key = if o.degree() == 2 {
                lattice_form_key(&c.representative).map(|(d, (a, b, cc))| json!({ "discriminant": d, "form": [a, b, cc] }))
            } else {
                Ok(Value::Null)
            };
            key.map(|k| {
                json!({
                    "index": i,
                    "invertible": c.invertible,
                    "norm": parse::rational(&c.norm()),
                    "basis": rows(c.representative.lattice()),
                    "form_key": k,
                })
            })
        })
        .collect::<Result<_, _>>()?;
    let b = m.bounds();
    let pair = |(n, bound): &(usize, BigInt)| json!([n, bound.to_string()]);
    Ok(json!({
        "size": m.size(),
        "identity": m.identity,
        "picard": m.picard,
        "intermediate": m.intermediate,
        "classes": classes,
        "table": m.table,
        "conductor_norm": m.conductor_norm.to_string(),
        "class_number": m.class_number,
        "bounds": {
            "intermediate": pair(&b.intermediate),
            "picard": pair(&b.picard),
            "monoid": pair(&b.monoid),
            "hold": b.hold(),
        },
        "census": m.census.as_ref().map(|c| json!({
            "index_bound": c.index_bound,
            "lattices": c.lattices,
            "classes": c.keys.len(),
        })),
    }))
}

pub fn gamma_count(s: &Settings) -> Result<Value, CliError> {
    let (gamma, maximal) = order(s, "gamma-field", "gamma-basis", "gamma-conductor")?;
    let n: usize = parse::number("target-n", require(s, "target-n")?)?;
    let k = match get(s, "target-field") {
        Some(p) => make_field(&parse::polynomial(p)?)?,
        None => orderkit::numberfield::rationals(),
    };
    let target = MatrixOrder::new(&k, n)?;
    let c = count_structures(&gamma, &maximal, &target)?;
    let structures: Vec<Value> = c
        .sets
        .iter()
        .flat_map(|set| {
            set.structures.iter().map(|st| {
                json!({
                    "phi": st.phi,
                    "class": st.class_id,
                    "images": st.representative.images().iter().map(|m| {
                        m.iter().map(|r| r.iter().map(element).collect::<Vec<_>>()).collect::<Vec<_>>()
                    }).collect::<Vec<_>>(),
                })
            })
        })
        .collect();
    let not_free: Vec<String> = c.sets.iter().flat_map(|s| s.not_free().into_iter().map(str::to_string)).collect();
    Ok(json!({
        "count": c.count,
        "bound": c.bound.to_string(),
        "per_phi": c.per_phi,
        "embeddings": embedding_count(&k, gamma.field())?,
        "auxiliary_z": c.sets.iter().map(|s| s.z).collect::<Vec<_>>(),
        "structures": structures,
        "not_free": not_free,
    }))
}

pub fn verify_suite(s: &Settings) -> Result<Value, CliError> {
    let d = SuiteConfig::default();
    let cfg = SuiteConfig {
        max_abs_disc: num_or(s, "max-disc", d.max_abs_disc)?,
        max_conductor: num_or(s, "max-conductor", d.max_conductor)?,
        conjugations: num_or(s, "conjugations", d.conjugations)?,
        seed: num_or(s, "seed", d.seed)?,
        inject_fault: flag_or(s, "inject-fault", false)?,
    };
    let r = run_suite(&cfg)?;
    let criteria: Vec<Value> = r
        .criteria
        .iter()
        .map(|c| {
            json!({
                "id": c.id,
                "name": c.name,
                "passed": c.passed(),
                "checks": c.checks,
                "failures": c.failures,
            })
        })
        .collect();
    let orders: Vec<Value> = r
        .orders
        .iter()
        .map(|o| {
            json!({
                "discriminant": o.discriminant,
                "field_discriminant": o.field_discriminant,
                "conductor": o.conductor,
                "monoid_size": o.monoid_size,
                "picard": o.picard,
                "intermediate": o.intermediate,
                "census_lattices": o.census_lattices,
                "structures": o.structures,
                "unit_square_classes": o.unit_square_classes,
            })
        })
        .collect();
    let report = json!({
        "passed": r.passed(),
        "corpus_size": r.orders.len(),
        "criteria": criteria,
        "orders": orders,
    });
    if r.passed() {
        Ok(report)
    } else {
        Err(CliError::Failed { report, budget_only: r.budget_only() })
    }
}
