use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::sign::Sign;

/// Node budget for the depth-first phase before meet-in-the-middle.
pub const DFS_NODE_BUDGET: u64 = 1 << 22;
/// Largest number of ± pairs the meet-in-the-middle phase will take on.
const MITM_MAX_VARS: usize = 44;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub used_mitm: bool,
}

/// Antisymmetric signs (ε_{-v} = -ε_v) over a negation-closed list with
/// Σ ε_v v = target.
///
/// Each ± pair contributes 2ε_r r for its representative r (the earlier of
/// the two in list order), so the search solves Σ ε_r r = target / 2 over
/// representatives: depth-first in list order, +1 first, pruning on
/// per-coordinate reach and parity; past the node budget it switches to a
/// meet-in-the-middle pass over the two halves of the variable list.
pub fn search_signs(vs: &[LatticeVector], target: &LatticeVector) -> Result<(Vec<Sign>, SearchStats)> {
    let n = target.dim();
    let index: HashMap<&LatticeVector, usize> = vs.iter().enumerate().map(|(i, v)| (v, i)).collect();
    if index.len() != vs.len() {
        return Err(Error::Precondition("search_signs needs distinct vectors".into()));
    }
    let mut reps: Vec<usize> = Vec::new();
    let mut partner = vec![usize::MAX; vs.len()];
    for (i, v) in vs.iter().enumerate() {
        if v.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: v.dim() });
        }
        if partner[i] != usize::MAX {
            continue;
        }
        let neg = -v;
        let j = *index
            .get(&neg)
            .ok_or_else(|| Error::Precondition(format!("{v} has no negation in the list")))?;
        if j == i {
            return Err(Error::Precondition("zero vector in sign search".into()));
        }
        partner[i] = j;
        partner[j] = i;
        reps.push(i);
    }
    if target.coords().iter().any(|x| x % 2 != 0) {
        return Err(Error::Unsatisfiable);
    }
    let half: Vec<i64> = target.coords().iter().map(|x| x / 2).collect();
    let rep_vecs: Vec<&LatticeVector> = reps.iter().map(|&i| &vs[i]).collect();

    let mut stats = SearchStats::default();
    let rep_signs = match dfs(&rep_vecs, &half, &mut stats) {
        Some(s) => s,
        None if stats.nodes < DFS_NODE_BUDGET => return Err(Error::Unsatisfiable),
        None => {
            stats.used_mitm = true;
            if rep_vecs.len() > MITM_MAX_VARS {
                return Err(Error::BudgetExceeded(format!(
                    "{} sign variables exceed the search budget",
                    rep_vecs.len()
                )));
            }
            meet_in_middle(&rep_vecs, &half).ok_or(Error::Unsatisfiable)?
        }
    };
    let mut signs = vec![Sign::Plus; vs.len()];
    for (k, &i) in reps.iter().enumerate() {
        signs[i] = rep_signs[k];
        signs[partner[i]] = rep_signs[k].flip();
    }
    Ok((signs, stats))
}

/// Returns `None` both when exhausted and when the budget ran out; the
/// caller tells them apart through `stats.nodes`.
fn dfs(vars: &[&LatticeVector], goal: &[i64], stats: &mut SearchStats) -> Option<Vec<Sign>> {
    let n = goal.len();
    let k = vars.len();
    // reach[d][i]: Σ_{j >= d} |vars[j]_i|; parity[d][i]: Σ_{j >= d} vars[j]_i mod 2.
    let mut reach = vec![vec![0i64; n]; k + 1];
    let mut parity = vec![vec![0i64; n]; k + 1];
    for d in (0..k).rev() {
        for i in 0..n {
            reach[d][i] = reach[d + 1][i] + vars[d][i].abs();
            parity[d][i] = (parity[d + 1][i] + vars[d][i]).rem_euclid(2);
        }
    }
    let feasible = |d: usize, residual: &[i64]| {
        (0..n).all(|i| residual[i].abs() <= reach[d][i] && residual[i].rem_euclid(2) == parity[d][i])
    };
    let mut residual = goal.to_vec();
    if !feasible(0, &residual) {
        stats.nodes = 1;
        return None;
    }
    let mut choice: Vec<Sign> = Vec::with_capacity(k);
    // Iterative DFS: choice[d] is the sign currently tried at depth d.
    loop {
        if choice.len() == k {
            return Some(choice);
        }
        if stats.nodes >= DFS_NODE_BUDGET {
            return None;
        }
        stats.nodes += 1;
        let d = choice.len();
        // Try +1 at depth d.
        residual_apply(&mut residual, vars[d], -1);
        if feasible(d + 1, &residual) {
            choice.push(Sign::Plus);
            continue;
        }
        residual_apply(&mut residual, vars[d], 2);
        if feasible(d + 1, &residual) {
            choice.push(Sign::Minus);
            continue;
        }
        residual_apply(&mut residual, vars[d], -1);
        // Backtrack to the deepest + choice and switch it to -.
        loop {
            let Some(last) = choice.pop() else { return None };
            let d = choice.len();
            match last {
                Sign::Plus => {
                    residual_apply(&mut residual, vars[d], 2);
                    if feasible(d + 1, &residual) {
                        choice.push(Sign::Minus);
                        break;
                    }
                    residual_apply(&mut residual, vars[d], -1);
                }
                Sign::Minus => residual_apply(&mut residual, vars[d], -1),
            }
        }
    }
}

// residual -= sign * v, with `scale` folding the undo of a previous choice.
fn residual_apply(residual: &mut [i64], v: &LatticeVector, scale: i64) {
    for (r, x) in residual.iter_mut().zip(v.coords()) {
        *r += scale * x;
    }
}

fn half_sum(vars: &[&LatticeVector], mask: u64, n: usize) -> Vec<i64> {
    let mut s = vec![0; n];
    for (j, v) in vars.iter().enumerate() {
        let e = if mask >> j & 1 == 0 { 1 } else { -1 };
        for i in 0..n {
            s[i] += e * v[i];
        }
    }
    s
}

fn meet_in_middle(vars: &[&LatticeVector], goal: &[i64]) -> Option<Vec<Sign>> {
    let n = goal.len();
    let split = vars.len().div_ceil(2);
    let (left, right) = vars.split_at(split);
    let mut table: HashMap<Vec<i64>, u64> = HashMap::with_capacity(1 << left.len());
    for mask in 0..(1u64 << left.len()) {
        table.entry(half_sum(left, mask, n)).or_insert(mask);
    }
    for rmask in 0..(1u64 << right.len()) {
        let rs = half_sum(right, rmask, n);
        let need: Vec<i64> = goal.iter().zip(&rs).map(|(g, r)| g - r).collect();
        if let Some(&lmask) = table.get(&need) {
            let bit = |m: u64, j: usize| if m >> j & 1 == 0 { Sign::Plus } else { Sign::Minus };
            let mut out: Vec<Sign> = (0..left.len()).map(|j| bit(lmask, j)).collect();
            out.extend((0..right.len()).map(|j| bit(rmask, j)));
            return Some(out);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::new(c.to_vec())
    }

    fn check(vs: &[LatticeVector], signs: &[Sign], target: &LatticeVector) {
        let mut s = LatticeVector::zeros(target.dim());
        for (v, e) in vs.iter().zip(signs) {
            s.add_assign_scaled(v, e.value());
        }
        assert_eq!(&s, target);
    }

    #[test]
    fn forced_pair() {
        let v = lv(&[1, -1]);
        let vs = vec![v.clone(), -&v];
        let (s, _) = search_signs(&vs, &v.scale(2)).unwrap();
        assert_eq!(s, vec![Sign::Plus, Sign::Minus]);
        let (s, _) = search_signs(&vs, &v.scale(-2)).unwrap();
        assert_eq!(s, vec![Sign::Minus, Sign::Plus]);
    }

    #[test]
    fn unsatisfiable_and_preconditions() {
        let v = lv(&[1, -1]);
        let vs = vec![v.clone(), -&v];
        assert_eq!(search_signs(&vs, &lv(&[0, 0])).unwrap_err(), Error::Unsatisfiable);
        assert_eq!(search_signs(&vs, &lv(&[1, -1])).unwrap_err(), Error::Unsatisfiable);
        assert!(matches!(search_signs(&[v], &lv(&[2, -2])), Err(Error::Precondition(_))));
    }

    #[test]
    fn mitm_agrees_with_dfs() {
        let vars_owned = [lv(&[1, 1, -1]), lv(&[1, -1, 1]), lv(&[-1, 1, 1]), lv(&[1, 1, 1]), lv(&[3, 1, -1])];
        let vars: Vec<&LatticeVector> = vars_owned.iter().collect();
        let goal = half_sum(&vars, 0b01011, 3);
        let a = meet_in_middle(&vars, &goal).unwrap();
        let mut st = SearchStats::default();
        let b = dfs(&vars, &goal, &mut st).unwrap();
        for s in [a, b] {
            let got = half_sum(&vars, s.iter().enumerate().fold(0, |m, (j, e)| m | (u64::from(*e == Sign::Minus) << j)), 3);
            assert_eq!(got, goal);
        }
        let vs: Vec<LatticeVector> = vars_owned.iter().flat_map(|v| [v.clone(), -v]).collect();
        let target = LatticeVector::new(goal.iter().map(|g| 2 * g).collect());
        let (signs, _) = search_signs(&vs, &target).unwrap();
        check(&vs, &signs, &target);
    }
}
