use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::orbit::orbit_decompose;
use crate::error::{Error, Result};
use crate::io::{parse_sign_table, SignTable};
use crate::lattice::LatticeVector;

/// Dimensions with a bundled reference sign table.
pub const REFERENCE_DIMS: [usize; 5] = [4, 6, 8, 10, 12];

const N4: &str = include_str!("../../fixtures/reference_n4.txt");
const N6: &str = include_str!("../../fixtures/reference_n6.txt");
const N8: &str = include_str!("../../fixtures/reference_n8.txt");
const N10: &str = include_str!("../../fixtures/reference_n10.txt");
const N12: &str = include_str!("../../fixtures/reference_n12.txt");

/// The bundled reference sign table for dimension `n`.
pub fn reference_table(n: usize) -> Result<SignTable> {
    let text = match n {
        4 => N4,
        6 => N6,
        8 => N8,
        10 => N10,
        12 => N12,
        _ => return Err(Error::Input(format!("no bundled sign table for n = {n}"))),
    };
    parse_sign_table(text)
}

pub fn reference_tables() -> Result<Vec<(usize, SignTable)>> {
    REFERENCE_DIMS.iter().map(|&n| Ok((n, reference_table(n)?))).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct FixtureCheck {
    pub n: usize,
    pub rows: usize,
    pub sum: LatticeVector,
    /// 2w when the table carries a `w` note, else 0.
    pub expected: LatticeVector,
    pub w: Option<LatticeVector>,
    pub sum_ok: bool,
    pub antisymmetric: bool,
    /// Rows are exactly the vectors whose rotation orbit contains their negation.
    pub covers_self_negating: bool,
}

impl FixtureCheck {
    pub fn ok(&self) -> bool {
        self.sum_ok && self.antisymmetric && self.covers_self_negating
    }
}

fn parse_w(s: &str, line: usize) -> Result<LatticeVector> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| Error::Parse { line, msg: format!("w: {e}") }))
        .collect::<Result<Vec<_>>>()
        .map(LatticeVector::new)
}

/// Re-adds a sign table and checks its structure against the orbit
/// decomposition of V₀ ∪ -V₀.
pub fn verify_fixture(n: usize, table: &SignTable) -> Result<FixtureCheck> {
    if table.dim() != Some(n) {
        return Err(Error::DimensionMismatch { expected: n, got: table.dim().unwrap_or(0) });
    }
    let sum = table.signed_sum().expect("nonempty table");
    let w = table.note("w").map(|s| parse_w(s, 1)).transpose()?;
    let expected = w.as_ref().map_or_else(|| LatticeVector::zeros(n), |w| w.scale(2));

    let signs: HashMap<&LatticeVector, i64> = table.rows.iter().map(|(s, v)| (v, s.value())).collect();
    let antisymmetric = signs.len() == table.rows.len()
        && signs.iter().all(|(v, s)| signs.get(&-*v) == Some(&-s));

    let self_neg: BTreeSet<LatticeVector> = orbit_decompose(n)?
        .into_iter()
        .filter(|o| o.self_negating)
        .flat_map(|o| o.members)
        .collect();
    let rows: BTreeSet<LatticeVector> = table.rows.iter().map(|(_, v)| v.clone()).collect();
    Ok(FixtureCheck {
        n,
        rows: table.rows.len(),
        sum_ok: sum == expected,
        sum,
        expected,
        w,
        antisymmetric,
        covers_self_negating: rows == self_neg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_tables_verify() {
        for (n, t) in reference_tables().unwrap() {
            let c = verify_fixture(n, &t).unwrap();
            assert!(c.ok(), "{c:?}");
        }
    }

    #[test]
    fn printed_w() {
        let c = verify_fixture(4, &reference_table(4).unwrap()).unwrap();
        assert_eq!(c.sum, LatticeVector::new(vec![6, -2, -2, -2]));
        assert!(reference_table(14).is_err());
    }

    #[test]
    fn tampered_table_fails() {
        let mut t = reference_table(6).unwrap();
        t.rows[0].0 = t.rows[0].0.flip();
        let c = verify_fixture(6, &t).unwrap();
        assert!(!c.sum_ok && !c.antisymmetric);
    }
}
