use std::collections::HashSet;

use serde::Serialize;

use super::canonical_form;
use crate::error::{Error, Result};
use crate::lattice::{lattice_member, HalfVector, LatticeVector};
use crate::threshold::binomial;

/// One pair v_i^{(j)±}; `i` is the 1-based coordinate, `j` the 1-based copy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairEntry {
    pub i: usize,
    pub j: usize,
    pub plus: LatticeVector,
    pub minus: LatticeVector,
}

/// R(n-1) pairs with v⁺ - v⁻ = 2(e₁ - e_i), plus one extra vector w, all
/// pairwise distinct up to sign.
#[derive(Clone, Debug, Serialize)]
pub struct PairSystem {
    pub n: usize,
    pub r: usize,
    /// Ordered by i, then j.
    pub pairs: Vec<PairEntry>,
    pub w: LatticeVector,
}

impl PairSystem {
    /// All stored vectors: pairs in order (plus, minus), then w.
    pub fn vectors(&self) -> Vec<LatticeVector> {
        let mut out: Vec<LatticeVector> =
            self.pairs.iter().flat_map(|p| [p.plus.clone(), p.minus.clone()]).collect();
        out.push(self.w.clone());
        out
    }

    pub fn sum(&self) -> LatticeVector {
        let mut s = LatticeVector::zeros(self.n);
        for v in self.vectors() {
            s.add_assign_scaled(&v, 1);
        }
        s
    }

    /// g(U) = ½ Σ U.
    pub fn center(&self) -> HalfVector {
        HalfVector::from_doubled(self.sum())
    }

    pub fn check_invariants(&self) -> Result<(), String> {
        let n = self.n;
        if self.pairs.len() != self.r * (n - 1) {
            return Err(format!("{} pairs, expected {}", self.pairs.len(), self.r * (n - 1)));
        }
        for p in &self.pairs {
            let mut d = LatticeVector::unit(n, 0);
            d.add_assign_scaled(&LatticeVector::unit(n, p.i - 1), -1);
            if &p.plus - &p.minus != d.scale(2) {
                return Err(format!("pair ({}, {}) does not differ by 2(e1 - e{})", p.i, p.j, p.i));
            }
        }
        let mut seen = HashSet::new();
        for v in self.vectors() {
            if v.dim() != n || v.coord_sum() != 0 || v.coords().iter().any(|x| x.abs() != 1) {
                return Err(format!("{v} is not in V0 ∪ -V0"));
            }
            if !seen.insert(canonical_form(&v).0) {
                return Err(format!("{v} repeats a stored vector up to sign"));
            }
        }
        Ok(())
    }
}

/// C(n-2, (n-2)/2) > 4R(n-1).
pub fn pair_bound_holds(n: usize, r: usize) -> bool {
    n >= 4 && n.is_multiple_of(2) && binomial(n as u32 - 2, (n as u32 - 2) / 2) > 4 * (r as i128) * (n as i128 - 1)
}

/// ±1 patterns of length m with `plus` entries equal to +1, ascending
/// (-1 before +1).
fn sign_patterns(m: usize, plus: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << m) {
        if mask.count_ones() as usize == plus {
            // Bit m-1-k set means +1 at position k, so ascending masks give
            // ascending vectors.
            out.push((0..m).map(|k| if mask >> (m - 1 - k) & 1 == 1 { 1 } else { -1 }).collect());
        }
    }
    out
}

/// Builds the pair system greedily: for i = 2..n and j = 1..R, the first
/// balanced pattern on the coordinates other than 1 and i (ascending) whose
/// pair collides with no earlier pick; then w is the first member of V₀
/// (descending, the canonical order) distinct from every pick.
pub fn greedy_pairs(n: usize, r: usize) -> Result<PairSystem> {
    if !pair_bound_holds(n, r) || r == 0 {
        return Err(Error::Precondition(format!(
            "pair construction needs even n >= 4, R >= 1 and C(n-2,(n-2)/2) > 4R(n-1); got n = {n}, R = {r}"
        )));
    }
    let patterns = sign_patterns(n - 2, (n - 2) / 2);
    let mut used: HashSet<LatticeVector> = HashSet::new();
    let mut pairs = Vec::with_capacity(r * (n - 1));
    for i in 2..=n {
        let mut cursor = patterns.iter();
        for j in 1..=r {
            let picked = cursor.by_ref().find_map(|pat| {
                let mut plus = Vec::with_capacity(n);
                plus.push(1);
                let mut rest = pat.iter();
                for k in 2..=n {
                    plus.push(if k == i { -1 } else { *rest.next().unwrap() });
                }
                let plus = LatticeVector::new(plus);
                let mut minus = plus.clone().into_coords();
                minus[0] = -1;
                minus[i - 1] = 1;
                let minus = LatticeVector::new(minus);
                let (cp, cm) = (canonical_form(&plus).0, canonical_form(&minus).0);
                (cp != cm && !used.contains(&cp) && !used.contains(&cm)).then_some((plus, minus, cp, cm))
            });
            let (plus, minus, cp, cm) = picked.ok_or_else(|| {
                Error::ConstructionFailed(format!("no free pair left for i = {i}, j = {j}"))
            })?;
            used.insert(cp);
            used.insert(cm);
            pairs.push(PairEntry { i, j, plus, minus });
        }
    }
    let w = sign_patterns(n - 1, n / 2 - 1)
        .into_iter()
        .rev()
        .map(|pat| {
            let mut c = vec![1];
            c.extend(pat);
            LatticeVector::new(c)
        })
        .find(|v| !used.contains(v))
        .ok_or_else(|| Error::ConstructionFailed("no free vector left for w".into()))?;
    let ps = PairSystem { n, r, pairs, w };
    ps.check_invariants().map_err(Error::ConstructionFailed)?;
    Ok(ps)
}

/// A subset of the pair system's vectors (indices into `vectors()`) summing
/// to `target`.
///
/// Every choice of one vector per pair, plus or minus w, sums to
/// g(U) + Σ a_i(e₁ - e_i) ± ½w with |a_i| <= R and a_i ≡ R (mod 2); the w
/// choice is fixed by parity and each a_i read off coordinate i. Every
/// target in L within R of g(U) in the max norm qualifies.
pub fn express_in_pairs(target: &LatticeVector, ps: &PairSystem) -> Result<Vec<usize>> {
    let n = ps.n;
    let r = ps.r as i64;
    if target.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: target.dim() });
    }
    if !lattice_member(target) {
        return Err(Error::NotExpressible(format!("{target} is not in the lattice L")));
    }
    let diff2 = &target.scale(2) - &ps.sum();
    let mut a: Option<(bool, Vec<i64>)> = None;
    for take_w in [true, false] {
        // 2y = 2·target - ΣU ∓ w, with y = Σ a_i (e₁ - e_i).
        let s = if take_w { 1 } else { -1 };
        let y2 = &diff2 - &ps.w.scale(s);
        if y2.coords().iter().any(|x| x % 2 != 0) {
            continue;
        }
        let ai: Vec<i64> = (1..n).map(|i| -y2[i] / 2).collect();
        if ai.iter().all(|x| (x - r).rem_euclid(2) == 0) {
            a = Some((take_w, ai));
            break;
        }
    }
    let (take_w, ai) =
        a.ok_or_else(|| Error::NotExpressible(format!("{target} fails the parity condition")))?;
    if let Some(bad) = ai.iter().find(|x| x.abs() > r) {
        return Err(Error::NotExpressible(format!("coefficient {bad} exceeds R = {r}")));
    }
    let mut chosen = Vec::with_capacity(ps.pairs.len() + 1);
    for (k, p) in ps.pairs.iter().enumerate() {
        let positive = (r + ai[p.i - 2]) / 2;
        chosen.push(if (p.j as i64) <= positive { 2 * k } else { 2 * k + 1 });
    }
    if take_w {
        chosen.push(2 * ps.pairs.len());
    }
    let vs = ps.vectors();
    let mut got = LatticeVector::zeros(n);
    for &k in &chosen {
        got.add_assign_scaled(&vs[k], 1);
    }
    if &got != target {
        return Err(Error::ConstructionFailed(format!("pair selection sums to {got}, not {target}")));
    }
    Ok(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_examples() {
        assert!(pair_bound_holds(14, 7));
        assert!(!pair_bound_holds(12, 6));
        assert!(pair_bound_holds(16, 10));
        assert!(matches!(greedy_pairs(12, 6), Err(Error::Precondition(_))));
    }

    #[test]
    fn n14_system() {
        let ps = greedy_pairs(14, 7).unwrap();
        assert_eq!(ps.pairs.len() * 2, 182);
        assert_eq!(ps.vectors().len(), 183);
        ps.check_invariants().unwrap();
    }

    #[test]
    fn center_target_round_trips() {
        // R even: a_i = 0 for every i, w taken.
        let ps = greedy_pairs(16, 10).unwrap();
        let target = HalfVector::from_doubled(&ps.sum() + &ps.w).to_lattice().unwrap();
        let sel = express_in_pairs(&target, &ps).unwrap();
        assert_eq!(sel.len(), ps.pairs.len() + 1);
        let plus = sel.iter().filter(|&&k| k < 2 * ps.pairs.len() && k % 2 == 0).count();
        assert_eq!(plus, ps.pairs.len() / 2);
    }

    #[test]
    fn every_orientation_round_trips() {
        let ps = greedy_pairs(14, 7).unwrap();
        let vs = ps.vectors();
        for pattern in 0..16usize {
            let mut sel: Vec<usize> = (0..ps.pairs.len())
                .map(|k| if (k + pattern) % 3 == 0 || pattern & 1 == 1 { 2 * k } else { 2 * k + 1 })
                .collect();
            if pattern & 2 == 2 {
                sel.push(vs.len() - 1);
            }
            let mut target = LatticeVector::zeros(14);
            for &k in &sel {
                target.add_assign_scaled(&vs[k], 1);
            }
            let got = express_in_pairs(&target, &ps).unwrap();
            let mut s = LatticeVector::zeros(14);
            for &k in &got {
                s.add_assign_scaled(&vs[k], 1);
            }
            assert_eq!(s, target);
        }
    }

    #[test]
    fn out_of_range_rejected() {
        let ps = greedy_pairs(16, 10).unwrap();
        let mut t2 = &ps.sum() + &ps.w;
        // Push coordinate 2 by R + 2 and compensate on coordinate 1.
        let shift = 2 * (ps.r as i64 + 2);
        let mut c = t2.clone().into_coords();
        c[1] -= shift;
        c[0] += shift;
        t2 = LatticeVector::new(c);
        let target = HalfVector::from_doubled(t2).to_lattice().unwrap();
        assert!(matches!(express_in_pairs(&target, &ps), Err(Error::NotExpressible(_))));
        let off = LatticeVector::new({
            let mut z = vec![0; 16];
            z[0] = 1;
            z[1] = -1;
            z[2] = 2;
            z[3] = -2;
            z
        });
        assert!(matches!(express_in_pairs(&off, &ps), Err(Error::NotExpressible(_))));
    }
}
