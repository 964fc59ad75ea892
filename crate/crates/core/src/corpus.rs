//! The desk-scale test corpus: every quadratic order with `|disc| ≤ bound`
//! and conductor at most `max_conductor`.

use num_bigint::BigInt;

use crate::error::Result;
use crate::numberfield::{make_field_i64, squarefree_decomposition, NumberField};
use crate::orders::{maximal_order, quadratic_order, Order};

#[derive(Clone, Debug)]
pub struct CorpusOrder {
    pub field: NumberField,
    pub order: Order,
    pub maximal: Order,
    /// Fundamental discriminant `d_K`.
    pub field_discriminant: i64,
    pub conductor: u64,
}

impl CorpusOrder {
    pub fn discriminant(&self) -> i64 {
        self.field_discriminant * (self.conductor * self.conductor) as i64
    }

    pub fn label(&self) -> String {
        format!("disc {} (d_K = {}, f = {})", self.discriminant(), self.field_discriminant, self.conductor)
    }
}

pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let squarefree = |n: i64| squarefree_decomposition(&BigInt::from(n)).1 == BigInt::from(1);
    match d.rem_euclid(4) {
        1 => squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m)
        }
        _ => false,
    }
}

/// The defining polynomial (constant term first) with maximal order `Z[x]`.
pub fn polynomial_for(d: i64) -> Vec<i64> {
    if d.rem_euclid(4) == 1 {
        vec![(1 - d) / 4, -1, 1]
    } else {
        vec![-d / 4, 0, 1]
    }
}

pub fn quadratic_corpus(max_abs_disc: i64, max_conductor: u64) -> Result<Vec<CorpusOrder>> {
    let mut out = Vec::new();
    let mut dks: Vec<i64> = (-max_abs_disc..=max_abs_disc).filter(|&d| is_fundamental_discriminant(d)).collect();
    dks.sort_by_key(|d| (d.abs(), *d));
    for dk in dks {
        let field = make_field_i64(&polynomial_for(dk))?;
        let maximal = maximal_order(&field, None)?;
        for f in 1..=max_conductor {
            if dk.abs() * (f * f) as i64 > max_abs_disc {
                break;
            }
            out.push(CorpusOrder {
                order: quadratic_order(&field, f)?,
                maximal: maximal.clone(),
                field: field.clone(),
                field_discriminant: dk,
                conductor: f,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fundamental_discriminants() {
        let small: Vec<i64> = (-30..=30).filter(|&d| is_fundamental_discriminant(d)).collect();
        assert_eq!(small, vec![-24, -23, -20, -19, -15, -11, -8, -7, -4, -3, 5, 8, 12, 13, 17, 21, 24, 28, 29]);
    }

    #[test]
    fn corpus_discriminants_match() {
        for c in quadratic_corpus(60, 6).unwrap() {
            assert_eq!(c.order.discriminant(), BigInt::from(c.discriminant()), "{}", c.label());
            assert!(c.discriminant().abs() <= 60);
        }
    }
}
