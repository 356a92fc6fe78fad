//! Red/Blue colorings of the m-subsets of {1, ..., 2m} in which
//! complementary sets get different colors and every element lies in as
//! many Red sets as Blue sets, up to the unavoidable +3/-1 defect when m is
//! a power of two.
//!
//! Sets containing 1 are the representatives; their incidence vectors are
//! the middle layer of dimension 2m, and the middle-layer signs pick the
//! colors.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::balance::balance_middle;
use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::threshold::binomial;

/// Largest m colored without opting in.
pub const DEFAULT_MAX_M: usize = 8;
/// Largest m the middle layer supports at all.
pub const MAX_M: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Color {
    #[serde(rename = "R")]
    Red,
    #[serde(rename = "B")]
    Blue,
}

impl Color {
    pub fn other(self) -> Color {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Red => "R",
            Color::Blue => "B",
        })
    }
}

/// I(A): +1 on members of A, -1 elsewhere. Elements are 1-based.
pub fn incidence_vector(a: &[usize], m: usize) -> Result<LatticeVector> {
    if a.len() != m {
        return Err(Error::Input(format!("set has {} elements, expected {m}", a.len())));
    }
    let mut v = vec![-1i64; 2 * m];
    for &i in a {
        if i == 0 || i > 2 * m {
            return Err(Error::Input(format!("element {i} is outside 1..={}", 2 * m)));
        }
        if v[i - 1] == 1 {
            return Err(Error::Input(format!("element {i} repeated")));
        }
        v[i - 1] = 1;
    }
    Ok(LatticeVector::new(v))
}

fn complement(a: &[usize], m: usize) -> Vec<usize> {
    (1..=2 * m).filter(|i| !a.contains(i)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Coloring {
    pub m: usize,
    /// Every m-subset (sorted, 1-based) with its color.
    pub colors: BTreeMap<Vec<usize>, Color>,
    /// R(i) and B(i), index i-1.
    pub red: Vec<i64>,
    pub blue: Vec<i64>,
}

fn tallies(m: usize, colors: &BTreeMap<Vec<usize>, Color>) -> (Vec<i64>, Vec<i64>) {
    let mut red = vec![0; 2 * m];
    let mut blue = vec![0; 2 * m];
    for (a, c) in colors {
        let t = if *c == Color::Red { &mut red } else { &mut blue };
        for &i in a {
            t[i - 1] += 1;
        }
    }
    (red, blue)
}

pub fn color_msets(m: usize) -> Result<Coloring> {
    color_msets_with(m, false)
}

/// `allow_large` lifts the default cap of m <= 8.
pub fn color_msets_with(m: usize, allow_large: bool) -> Result<Coloring> {
    if m < 2 {
        return Err(Error::Precondition(format!("coloring needs m >= 2, got {m}")));
    }
    let cap = if allow_large { MAX_M } else { DEFAULT_MAX_M };
    if m > cap {
        return Err(Error::BudgetExceeded(format!("m = {m} exceeds the limit {cap}")));
    }
    let mid = balance_middle(2 * m)?;
    let mut colors = BTreeMap::new();
    for (v, s) in mid.family.members().iter().zip(mid.signs.signs()) {
        let a: Vec<usize> = (1..=2 * m).filter(|&i| v[i - 1] == 1).collect();
        let c = if s.value() == 1 { Color::Red } else { Color::Blue };
        colors.insert(complement(&a, m), c.other());
        colors.insert(a, c);
    }
    let (red, blue) = tallies(m, &colors);
    Ok(Coloring { m, colors, red, blue })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DefectClass {
    Balanced,
    #[serde(rename = "power-of-2 pattern")]
    PowerOfTwoPattern,
    Other,
}

impl fmt::Display for DefectClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DefectClass::Balanced => "balanced",
            DefectClass::PowerOfTwoPattern => "power-of-2 pattern",
            DefectClass::Other => "other",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ColoringReport {
    pub m: usize,
    pub sets: usize,
    pub all_sets_present: bool,
    /// Complementary pairs with equal colors (first few).
    pub complement_violations: Vec<Vec<usize>>,
    pub complement_violation_count: usize,
    /// Stored tallies agree with a recount from the color map.
    pub tallies_match: bool,
    /// R(i) + B(i) = C(2m-1, m-1) for every i.
    pub totals_ok: bool,
    /// R(i) - B(i) equals coordinate i of Σ ε_A I(A) over sets containing 1.
    pub signed_sum_matches: bool,
    pub difference: Vec<i64>,
    pub class: DefectClass,
    pub expected_class: DefectClass,
    /// 1-based elements with R(i) - B(i) = +3.
    pub plus_three: Vec<usize>,
    pub mod4_constant: bool,
}

impl ColoringReport {
    pub fn passed(&self) -> bool {
        self.all_sets_present
            && self.complement_violation_count == 0
            && self.tallies_match
            && self.totals_ok
            && self.signed_sum_matches
            && self.class == self.expected_class
            && self.mod4_constant
    }
}

/// Recounts everything from the color map alone.
pub fn verify_coloring(c: &Coloring) -> ColoringReport {
    let m = c.m;
    let n = 2 * m;
    let (red, blue) = tallies(m, &c.colors);
    let tallies_match = red == c.red && blue == c.blue;
    let all_sets_present = c.colors.len() as i128 == binomial(n as u32, m as u32)
        && c.colors.keys().all(|a| a.len() == m && a.iter().all(|&i| (1..=n).contains(&i)));

    let mut violations = Vec::new();
    let mut count = 0;
    for (a, col) in &c.colors {
        if a.first() != Some(&1) {
            continue;
        }
        match c.colors.get(&complement(a, m)) {
            Some(other) if other != col => {}
            _ => {
                count += 1;
                if violations.len() < 10 {
                    violations.push(a.clone());
                }
            }
        }
    }

    let per = binomial(n as u32 - 1, m as u32 - 1) as i64;
    let totals_ok = (0..n).all(|i| red[i] + blue[i] == per);
    let difference: Vec<i64> = (0..n).map(|i| red[i] - blue[i]).collect();

    let mut signed = LatticeVector::zeros(n);
    for (a, col) in c.colors.iter().filter(|(a, _)| a.first() == Some(&1)) {
        if let Ok(v) = incidence_vector(a, m) {
            signed.add_assign_scaled(&v, if *col == Color::Red { 1 } else { -1 });
        }
    }
    let signed_sum_matches = signed.coords() == difference.as_slice();

    let plus_three: Vec<usize> = (0..n).filter(|&i| difference[i] == 3).map(|i| i + 1).collect();
    let minus_one = difference.iter().filter(|&&d| d == -1).count();
    let class = if difference.iter().all(|&d| d == 0) {
        DefectClass::Balanced
    } else if m.is_multiple_of(2) && plus_three.len() == m / 2 && minus_one == 3 * m / 2 {
        DefectClass::PowerOfTwoPattern
    } else {
        DefectClass::Other
    };
    let expected_class =
        if m.is_power_of_two() { DefectClass::PowerOfTwoPattern } else { DefectClass::Balanced };
    let mod4_constant = difference.windows(2).all(|w| (w[0] - w[1]).rem_euclid(4) == 0);

    ColoringReport {
        m,
        sets: c.colors.len(),
        all_sets_present,
        complement_violations: violations,
        complement_violation_count: count,
        tallies_match,
        totals_ok,
        signed_sum_matches,
        difference,
        class,
        expected_class,
        plus_three,
        mod4_constant,
    }
}

/// One line per m-set: `1,2,5 R`.
pub fn write_design(c: &Coloring) -> String {
    let mut out = String::new();
    for (a, col) in &c.colors {
        let elems: Vec<String> = a.iter().map(|i| i.to_string()).collect();
        out.push_str(&format!("{} {col}\n", elems.join(",")));
    }
    out
}

pub fn parse_design(text: &str) -> Result<Coloring> {
    let mut colors = BTreeMap::new();
    let mut m = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let (set, col) = l
            .rsplit_once(char::is_whitespace)
            .ok_or_else(|| Error::Parse { line, msg: format!("expected `<set> R|B`, got {l:?}") })?;
        let col = match col {
            "R" => Color::Red,
            "B" => Color::Blue,
            _ => return Err(Error::Parse { line, msg: format!("bad color {col:?}") }),
        };
        let mut a = set
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Parse { line, msg: format!("{t:?}: {e}") }))
            .collect::<Result<Vec<_>>>()?;
        a.sort_unstable();
        let mm = *m.get_or_insert(a.len());
        if a.len() != mm || a.first() == Some(&0) || a.last().is_some_and(|&x| x > 2 * mm) {
            return Err(Error::Parse { line, msg: format!("not a {mm}-subset of 1..={}", 2 * mm) });
        }
        if colors.insert(a, col).is_some() {
            return Err(Error::Parse { line, msg: "set listed twice".into() });
        }
    }
    let m = m.ok_or(Error::Parse { line: 1, msg: "empty design".into() })?;
    let (red, blue) = tallies(m, &colors);
    Ok(Coloring { m, colors, red, blue })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn incidence() {
        assert_eq!(incidence_vector(&[1, 2], 2).unwrap(), LatticeVector::new(vec![1, 1, -1, -1]));
        let a = incidence_vector(&[1, 3, 4], 3).unwrap();
        let b = incidence_vector(&complement(&[1, 3, 4], 3), 3).unwrap();
        assert!((&a + &b).is_zero());
        assert_eq!(a.coord_sum(), 0);
        assert!(incidence_vector(&[1], 2).is_err());
        assert!(incidence_vector(&[1, 1], 2).is_err());
    }

    #[test]
    fn m3_balanced() {
        let c = color_msets(3).unwrap();
        assert!(c.red.iter().zip(&c.blue).all(|(r, b)| r == b));
        let r = verify_coloring(&c);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.class, DefectClass::Balanced);
    }

    #[test]
    fn m2_pattern() {
        let c = color_msets(2).unwrap();
        let r = verify_coloring(&c);
        assert!(r.passed());
        assert_eq!(r.class.to_string(), "power-of-2 pattern");
        let mut rb: Vec<(i64, i64)> = c.red.iter().zip(&c.blue).map(|(&r, &b)| (r, b)).collect();
        rb.sort();
        assert_eq!(rb, vec![(1, 2), (1, 2), (1, 2), (3, 0)]);
    }

    #[test]
    fn m4_pattern() {
        let r = verify_coloring(&color_msets(4).unwrap());
        assert!(r.passed());
        assert_eq!(r.plus_three.len(), 2);
    }

    #[test]
    fn repainted_pair_is_reported() {
        let mut c = color_msets(3).unwrap();
        let a = vec![1, 2, 3];
        let col = c.colors[&a];
        c.colors.insert(complement(&a, 3), col);
        let r = verify_coloring(&c);
        assert_eq!(r.complement_violation_count, 1);
        assert!(!r.passed());
    }

    #[test]
    fn design_round_trip() {
        let c = color_msets(3).unwrap();
        let back = parse_design(&write_design(&c)).unwrap();
        assert_eq!(back.colors, c.colors);
        assert_eq!(back.red, c.red);
        assert!(parse_design("1,2 X").is_err());
        assert!(parse_design("1,2 R\n1,2 B").is_err());
        assert!(color_msets(1).is_err());
        assert!(matches!(color_msets(9), Err(Error::BudgetExceeded(_))));
    }
}
