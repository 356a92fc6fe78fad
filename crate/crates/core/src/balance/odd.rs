use crate::error::{Error, Result};
use crate::lattice::{canonical_family, LatticeVector, VectorFamily};
use crate::sign::{Sign, SignAssignment};
use crate::threshold::binomial;

/// Sign of the coordinate sum, if nonzero.
pub fn majority_sign(v: &LatticeVector) -> Option<Sign> {
    match v.coord_sum().signum() {
        1 => Some(Sign::Plus),
        -1 => Some(Sign::Minus),
        _ => None,
    }
}

#[derive(Clone, Debug)]
pub struct OddSigns {
    pub family: VectorFamily,
    pub signs: SignAssignment,
    pub sum: LatticeVector,
}

/// ε_v = sign(Σ_i v_i) over the canonical family for odd n; the signed sum
/// is C(n-1, (n-1)/2)·𝟏.
pub fn odd_signs(n: usize) -> Result<OddSigns> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::Precondition(format!("odd_signs needs odd n >= 3, got {n}")));
    }
    let family = canonical_family(n)?;
    let signs = family
        .members()
        .iter()
        .map(|v| majority_sign(v).expect("odd n has no zero-sum members"))
        .collect();
    let signs = SignAssignment::new(&family, signs)?;
    let sum = signs.signed_sum(&family);
    let c = binomial(n as u32 - 1, (n as u32 - 1) / 2) as i64;
    if sum != LatticeVector::ones(n).scale(c) {
        return Err(Error::ConstructionFailed(format!("odd signed sum {sum} != {c}·1")));
    }
    Ok(OddSigns { family, signs, sum })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_odd() {
        assert_eq!(odd_signs(3).unwrap().sum, LatticeVector::new(vec![2, 2, 2]));
        assert_eq!(odd_signs(5).unwrap().sum, LatticeVector::ones(5).scale(6));
        assert!(odd_signs(4).is_err());
    }
}
