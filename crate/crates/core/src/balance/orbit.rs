use std::collections::BTreeSet;

use serde::Serialize;

use super::middle::middle_layer;
use crate::error::Result;
use crate::lattice::LatticeVector;

/// V₀± = V₀ ∪ -V₀: the ±1 vectors with coordinate sum zero.
pub fn v0_pm(n: usize) -> Result<Vec<LatticeVector>> {
    let v0 = middle_layer(n)?;
    let mut all: Vec<LatticeVector> = v0.members().to_vec();
    all.extend(v0.members().iter().map(|v| -v));
    all.sort();
    Ok(all)
}

/// An orbit of V₀± under the coordinate rotation ρ(v) = (v₂, ..., vₙ, v₁).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub representative: LatticeVector,
    /// Ascending order; the representative is the first member.
    pub members: Vec<LatticeVector>,
    pub self_negating: bool,
}

impl Orbit {
    pub fn sum(&self) -> LatticeVector {
        let mut s = LatticeVector::zeros(self.representative.dim());
        for m in &self.members {
            s.add_assign_scaled(m, 1);
        }
        s
    }
}

/// Partitions V₀± into ρ-orbits, ordered by their smallest member.
pub fn orbit_decompose(n: usize) -> Result<Vec<Orbit>> {
    let all = v0_pm(n)?;
    let mut seen: BTreeSet<LatticeVector> = BTreeSet::new();
    let mut orbits = Vec::new();
    for v in &all {
        if seen.contains(v) {
            continue;
        }
        let mut members = BTreeSet::new();
        let mut cur = v.clone();
        while members.insert(cur.clone()) {
            cur = cur.rotate();
        }
        let self_negating = members.contains(&-v);
        seen.extend(members.iter().cloned());
        let members: Vec<LatticeVector> = members.into_iter().collect();
        orbits.push(Orbit { representative: members[0].clone(), members, self_negating });
    }
    Ok(orbits)
}
