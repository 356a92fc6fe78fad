use std::collections::HashMap;

use serde::Serialize;

use super::orbit::orbit_decompose;
use super::pairs::{express_in_pairs, greedy_pairs};
use super::partial::partial_color;
use super::search::search_signs;
use super::canonical_form;
use crate::error::{Error, Result};
use crate::lattice::{lattice_member, LatticeVector, VectorFamily, MAX_CANONICAL_DIM};
use crate::sign::{Sign, SignAssignment};

/// V₀: canonical members with coordinate sum 0, in canonical order.
pub fn middle_layer(n: usize) -> Result<VectorFamily> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::Precondition(format!("middle layer needs even n >= 2, got {n}")));
    }
    if n > MAX_CANONICAL_DIM {
        return Err(Error::Range(format!("middle layer dimension {n} exceeds {MAX_CANONICAL_DIM}")));
    }
    let members = (0u64..1 << (n - 1))
        .filter(|k| k.count_ones() as usize == n / 2)
        .map(|k| {
            let mut c = Vec::with_capacity(n);
            c.push(1);
            for i in 0..n - 1 {
                c.push(if (k >> (n - 2 - i)) & 1 == 1 { -1 } else { 1 });
            }
            LatticeVector::new(c)
        })
        .collect();
    Ok(VectorFamily::from_sign_vectors(n, members, format!("middle({n})")))
}

/// The defect Σ_{V₀} ε_v v reached when n is a power of two: +3 on
/// coordinates 1, 5, 9, ... and -1 elsewhere; (-1, 1) for n = 2.
pub fn pow2_defect(n: usize) -> Result<LatticeVector> {
    if !n.is_power_of_two() || n < 2 {
        return Err(Error::Precondition(format!("{n} is not a power of two >= 2")));
    }
    if n == 2 {
        return Ok(LatticeVector::new(vec![-1, 1]));
    }
    Ok(LatticeVector::new((0..n).map(|i| if i % 4 == 0 { 3 } else { -1 }).collect()))
}

fn target_defect(n: usize) -> Result<LatticeVector> {
    if n.is_power_of_two() {
        pow2_defect(n)
    } else {
        Ok(LatticeVector::zeros(n))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BalanceMethod {
    /// Rotation orbits plus a sign search over self-negating orbits.
    Orbits { searched_vectors: usize, search_nodes: u64, used_mitm: bool },
    /// Pair system, partial coloring, exact correction from the pairs.
    Pipeline { r: usize, pair_vectors: usize, partial_norm: i64, kernel_steps: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct MiddleBalance {
    pub n: usize,
    pub family: VectorFamily,
    pub signs: SignAssignment,
    /// Σ_{v∈V₀} ε_v v.
    pub defect: LatticeVector,
    pub method: BalanceMethod,
}

/// Signs on V₀ with Σ ε_v v equal to 0 (n not a power of two) or to
/// [`pow2_defect`] (n a power of two).
pub fn balance_middle(n: usize) -> Result<MiddleBalance> {
    let family = middle_layer(n)?;
    let defect = target_defect(n)?;
    let large = if n.is_power_of_two() { n >= 16 } else { n >= 14 };
    let (signs, method) = if large {
        by_pipeline(&family, &defect)?
    } else {
        by_orbits(&family, &defect)?
    };
    let signs = SignAssignment::new(&family, signs)?;
    let got = signs.signed_sum(&family);
    if got != defect {
        return Err(Error::ConstructionFailed(format!("middle-layer sum {got} differs from {defect}")));
    }
    Ok(MiddleBalance { n, family, signs, defect, method })
}

fn by_orbits(family: &VectorFamily, defect: &LatticeVector) -> Result<(Vec<Sign>, BalanceMethod)> {
    let n = family.dim();
    let mut sign_of: HashMap<LatticeVector, Sign> = HashMap::new();
    let mut searched: Vec<LatticeVector> = Vec::new();
    for orbit in orbit_decompose(n)? {
        if orbit.self_negating {
            searched.extend(orbit.members);
        } else if !sign_of.contains_key(&orbit.representative) {
            // First orbit of its ± pair in orbit order gets +1.
            for m in orbit.members {
                sign_of.insert(-&m, Sign::Minus);
                sign_of.insert(m, Sign::Plus);
            }
        }
    }
    let (found, stats) = search_signs(&searched, &defect.scale(2))?;
    sign_of.extend(searched.iter().cloned().zip(found));
    let signs = family.members().iter().map(|v| sign_of[v]).collect();
    let method = BalanceMethod::Orbits {
        searched_vectors: searched.len(),
        search_nodes: stats.nodes,
        used_mitm: stats.used_mitm,
    };
    Ok((signs, method))
}

fn by_pipeline(family: &VectorFamily, defect: &LatticeVector) -> Result<(Vec<Sign>, BalanceMethod)> {
    let n = family.dim();
    let r = if n.is_power_of_two() { n / 2 + 2 } else { n / 2 };
    let ps = greedy_pairs(n, r)?;
    let index: HashMap<&LatticeVector, usize> =
        family.members().iter().enumerate().map(|(i, v)| (v, i)).collect();
    let u = ps.vectors();
    // u = σ·v with v ∈ V₀.
    let u_slots: Vec<(usize, i64)> = u
        .iter()
        .map(|x| {
            let (v, sigma) = canonical_form(x);
            (index[&v], sigma)
        })
        .collect();
    let mut in_u = vec![false; family.len()];
    for &(i, _) in &u_slots {
        in_u[i] = true;
    }
    let rest: Vec<usize> = (0..family.len()).filter(|&i| !in_u[i]).collect();
    let rest_vs: Vec<LatticeVector> = rest.iter().map(|&i| family.members()[i].clone()).collect();
    let pc = partial_color(&rest_vs)?;

    // Σ_U ε_u u must equal defect - x, i.e. the positively signed part of U
    // sums to g(U) + ½(defect - x).
    let doubled = &(&ps.sum() + defect) - &pc.sum;
    if doubled.coords().iter().any(|c| c % 2 != 0) {
        return Err(Error::ConstructionFailed(format!("correction target {doubled}/2 is not integral")));
    }
    let target = LatticeVector::new(doubled.coords().iter().map(|c| c / 2).collect());
    if !lattice_member(&target) {
        return Err(Error::ConstructionFailed(format!("correction target {target} is not in L")));
    }
    let selected = express_in_pairs(&target, &ps)?;
    let mut chosen = vec![false; u.len()];
    for k in selected {
        chosen[k] = true;
    }

    let mut signs = vec![Sign::Plus; family.len()];
    for (&i, s) in rest.iter().zip(&pc.signs) {
        signs[i] = *s;
    }
    for (k, &(i, sigma)) in u_slots.iter().enumerate() {
        let eps_u = if chosen[k] { 1 } else { -1 };
        signs[i] = Sign::from_value(sigma * eps_u).expect("unit sign");
    }
    let method = BalanceMethod::Pipeline {
        r,
        pair_vectors: u.len(),
        partial_norm: pc.sum.norm_inf(),
        kernel_steps: pc.kernel_steps,
    };
    Ok((signs, method))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::threshold::binomial;

    #[test]
    fn layer_examples() {
        let v4 = middle_layer(4).unwrap();
        let bins: Vec<String> = v4.members().iter().map(|v| v.to_binary().unwrap()).collect();
        assert_eq!(bins, ["1100", "1010", "1001"]);
        assert_eq!(v4.sum(), LatticeVector::new(vec![3, -1, -1, -1]));
        assert_eq!(middle_layer(2).unwrap().members(), &[LatticeVector::new(vec![1, -1])]);
        assert_eq!(middle_layer(6).unwrap().len(), 10);
        for n in [8usize, 10, 12] {
            assert_eq!(middle_layer(n).unwrap().len() as i128, binomial(n as u32 - 1, n as u32 / 2));
        }
        assert!(middle_layer(5).is_err());
    }

    #[test]
    fn defect_pattern() {
        assert_eq!(pow2_defect(4).unwrap(), LatticeVector::new(vec![3, -1, -1, -1]));
        let d8 = pow2_defect(8).unwrap();
        assert_eq!(d8.coords().iter().filter(|&&c| c == 3).count(), 2);
        assert_eq!(d8.coord_sum(), 0);
        assert!(pow2_defect(6).is_err());
    }

    #[test]
    fn small_even_balances() {
        for n in [2usize, 4, 6, 8, 10] {
            let b = balance_middle(n).unwrap();
            assert_eq!(b.signs.signed_sum(&b.family), b.defect);
            assert_eq!(b.defect.is_zero(), !n.is_power_of_two());
            assert!(matches!(b.method, BalanceMethod::Orbits { .. }));
        }
    }
}
