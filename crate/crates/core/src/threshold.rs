//! Critical thresholds of the canonical game G(V, K_M).
//!
//! With V the 2^{n-1} vectors of {-1,1}^n whose first coordinate is +1,
//! Chooser wins iff M >= M_crit(n), where
//!
//! * odd n: 2^{n-2} - ½·C(n-1, (n-1)/2)
//! * even n, not a power of two: 2^{n-2} - ½·C(n-1, n/2)
//! * n a power of two: 2^{n-2} - ½·C(n-1, n/2) + ½
//!
//! The Pusher side comes from r = max_{u ∈ P(V)} u·𝟏 and the raw bound
//! M >= 2^{n-2} + (2^{n-2} - r)/n, whose ceiling is M_crit.

use std::fmt;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{self, GameRegion};
use crate::lattice::{canonical_family, LatticeVector, VectorFamily};

/// Largest n handled by the closed forms (i128 headroom).
pub const MAX_THRESHOLD_DIM: u32 = 100;

pub type Q = Ratio<i128>;

/// 2-adic valuation of a positive integer.
pub fn nu2(x: u64) -> Result<u32> {
    if x == 0 {
        return Err(Error::Precondition("nu2 needs x >= 1".into()));
    }
    Ok(x.trailing_zeros())
}

pub fn nu2_big(x: &BigUint) -> Result<u64> {
    x.trailing_zeros().ok_or_else(|| Error::Precondition("nu2 needs x >= 1".into()))
}

/// ν₂(n!) = Σ_k ⌊n / 2^k⌋.
pub fn nu2_factorial(n: u64) -> u64 {
    let mut total = 0;
    let mut p = n / 2;
    while p > 0 {
        total += p;
        p /= 2;
    }
    total
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

/// Parity of ½·C(n, n/2) for even n, from ν₂(C(n, n/2)) = ν₂(n!) - 2ν₂((n/2)!).
pub fn half_central_parity(n: u64) -> Result<Parity> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::Precondition(format!("half_central_parity needs even n >= 2, got {n}")));
    }
    let v = nu2_factorial(n) - 2 * nu2_factorial(n / 2);
    debug_assert!(v >= 1);
    Ok(if v == 1 { Parity::Odd } else { Parity::Even })
}

/// C(n, k) by the multiplicative recurrence, exact in i128.
pub fn binomial(n: u32, k: u32) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step.
        acc = acc
            .checked_mul((n - i) as i128)
            .expect("binomial overflow")
            / (i + 1) as i128;
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParityClass {
    Odd,
    EvenNotPow2,
    Pow2,
}

impl ParityClass {
    pub fn of(n: u32) -> Self {
        if n % 2 == 1 {
            ParityClass::Odd
        } else if n.is_power_of_two() {
            ParityClass::Pow2
        } else {
            ParityClass::EvenNotPow2
        }
    }
}

impl fmt::Display for ParityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParityClass::Odd => "odd",
            ParityClass::EvenNotPow2 => "even",
            ParityClass::Pow2 => "pow2",
        })
    }
}

fn check_dim(n: u32) -> Result<()> {
    if !(2..=MAX_THRESHOLD_DIM).contains(&n) {
        return Err(Error::InvalidDimension(format!(
            "threshold formulas need 2 <= n <= {MAX_THRESHOLD_DIM}, got {n}"
        )));
    }
    Ok(())
}

/// r for the canonical family, closed form.
pub fn r_value(n: u32) -> Result<i128> {
    if n == 0 || n > MAX_THRESHOLD_DIM {
        return Err(Error::InvalidDimension(format!("r_value needs 1 <= n <= {MAX_THRESHOLD_DIM}")));
    }
    if n == 1 {
        return Ok(1);
    }
    let pow = 1i128 << (n - 2);
    let r = if n % 2 == 1 {
        // (n/2)·C(n-1, (n-1)/2): the binomial is even for n >= 3.
        n as i128 * binomial(n - 1, (n - 1) / 2) / 2 + pow
    } else {
        n as i128 * binomial(n, n / 2) / 4 + pow
    };
    Ok(r)
}

/// r = Σ_{v·𝟏 > 0} v·𝟏 for any family.
pub fn r_direct(f: &VectorFamily) -> i64 {
    let ones = LatticeVector::ones(f.dim());
    f.members().iter().map(|v| v.dot(&ones)).filter(|&d| d > 0).sum()
}

fn q_to_string(q: &Q) -> String {
    if q.is_integer() {
        q.to_integer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn ser_q<S: serde::Serializer>(q: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q_to_string(q))
}

#[derive(Clone, Debug, Serialize)]
pub struct ThresholdReport {
    pub n: u32,
    pub class: ParityClass,
    pub r: i128,
    #[serde(serialize_with = "ser_q")]
    pub m_crit_exact: Q,
    pub m_crit: i128,
    #[serde(serialize_with = "ser_q")]
    pub raw_bound: Q,
    pub trace: Vec<(String, String)>,
}

/// M_crit(n) with its formula trace.
#[allow(non_snake_case)]
pub fn critical_M(n: u32) -> Result<ThresholdReport> {
    check_dim(n)?;
    let class = ParityClass::of(n);
    let pow = 1i128 << (n - 2);
    let half = Q::new(1, 2);
    let central = match class {
        ParityClass::Odd => binomial(n - 1, (n - 1) / 2),
        _ => binomial(n - 1, n / 2),
    };
    let mut exact = Q::from_integer(pow) - half * central;
    if class == ParityClass::Pow2 {
        exact += half;
    }
    let r = r_value(n)?;
    let raw = Q::from_integer(pow) + Q::new(pow - r, n as i128);
    if !exact.is_integer() {
        return Err(Error::ConstructionFailed(format!("M_crit({n}) = {exact} is not integral")));
    }
    let m = exact.to_integer();
    if raw.ceil().to_integer() != m {
        return Err(Error::ConstructionFailed(format!(
            "ceil of raw bound {} differs from M_crit {m}",
            q_to_string(&raw)
        )));
    }
    let binom_label = match class {
        ParityClass::Odd => format!("C({}, {})", n - 1, (n - 1) / 2),
        _ => format!("C({}, {})", n - 1, n / 2),
    };
    let mut trace = vec![
        (format!("2^{}", n - 2), pow.to_string()),
        (binom_label, central.to_string()),
        ("r".to_string(), r.to_string()),
        ("raw bound".to_string(), q_to_string(&raw)),
    ];
    if class == ParityClass::Pow2 {
        trace.push(("parity correction".into(), "1/2".into()));
    }
    Ok(ThresholdReport { n, class, r, m_crit_exact: exact, m_crit: m, raw_bound: raw, trace })
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub m: i64,
    pub chooser_wins: bool,
    pub expected_chooser: bool,
    /// The origin lies outside K_M, so Pusher has already won.
    pub trivial: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossValidation {
    pub n: u32,
    pub m_crit: i64,
    pub rows: Vec<SweepRow>,
    pub agrees: bool,
}

/// Largest n swept without opting in.
pub const DEFAULT_SWEEP_MAX_N: u32 = 4;

/// Solves the game by the window fixed point for M around M_crit(n) and
/// checks that the verdict flips exactly at M_crit.
pub fn cross_validate(
    n: u32,
    margin: i64,
    volume_limit: u128,
    allow_large: bool,
) -> Result<CrossValidation> {
    if n > DEFAULT_SWEEP_MAX_N && !allow_large {
        return Err(Error::BudgetExceeded(format!(
            "cross validation above n = {DEFAULT_SWEEP_MAX_N} must be enabled explicitly"
        )));
    }
    let report = critical_M(n)?;
    let m_crit = report.m_crit.to_i64().expect("small threshold");
    let f = canonical_family(n as usize)?;
    let rows = ((m_crit - margin)..=(m_crit + margin))
        .into_par_iter()
        .map(|m| -> Result<SweepRow> {
            let expected_chooser = m >= m_crit;
            if m < 0 {
                return Ok(SweepRow { m, chooser_wins: false, expected_chooser, trivial: true });
            }
            let region = GameRegion::uniform(n as usize, m);
            let v = game::verdict(&region, &f, None, volume_limit)?;
            Ok(SweepRow { m, chooser_wins: v.chooser_wins(), expected_chooser, trivial: false })
        })
        .collect::<Result<Vec<_>>>()?;
    let agrees = rows.iter().all(|r| r.chooser_wins == r.expected_chooser);
    Ok(CrossValidation { n, m_crit, rows, agrees })
}

/// Exact ½·C(n, n/2) parity computed from the binomial itself.
pub fn half_central_parity_by_binomial(n: u64) -> Parity {
    let mut c = BigUint::one();
    for i in 0..n / 2 {
        c = c * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    let half = c >> 1u32;
    if (&half & BigUint::one()).is_zero() {
        Parity::Even
    } else {
        Parity::Odd
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nu2_values() {
        assert_eq!(nu2(12).unwrap(), 2);
        assert_eq!(nu2(6).unwrap(), 1);
        assert_eq!(nu2(20).unwrap(), 2);
        assert!(nu2(0).is_err());
    }

    #[test]
    fn parity_examples() {
        assert_eq!(half_central_parity(4).unwrap(), Parity::Odd);
        assert_eq!(half_central_parity(6).unwrap(), Parity::Even);
        assert_eq!(half_central_parity(1024).unwrap(), Parity::Odd);
        assert!(half_central_parity(5).is_err());
    }

    #[test]
    fn r_examples() {
        assert_eq!(r_value(3).unwrap(), 5);
        assert_eq!(r_value(4).unwrap(), 10);
        assert_eq!(r_direct(&canonical_family(3).unwrap()), 5);
    }

    #[test]
    fn thresholds() {
        let m = |n| critical_M(n).unwrap().m_crit;
        assert_eq!((m(3), m(5), m(7)), (1, 5, 22));
        assert_eq!((m(6), m(10)), (11, 193));
        assert_eq!((m(2), m(4), m(8)), (1, 3, 47));
        assert!(critical_M(1).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(9, 5), 126);
        assert_eq!(binomial(12, 6), 924);
        assert_eq!(binomial(3, 4), 0);
    }

    #[test]
    fn large_sweep_is_opt_in() {
        assert!(matches!(
            cross_validate(5, 1, u128::MAX, false),
            Err(Error::BudgetExceeded(_))
        ));
    }
}
