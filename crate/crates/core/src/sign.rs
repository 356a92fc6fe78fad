use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{HalfVector, LatticeVector, VectorFamily};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(x: i64) -> Option<Sign> {
        match x {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// One sign per family member, aligned with family order.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SignAssignment {
    signs: Vec<Sign>,
}

impl SignAssignment {
    pub fn new(family: &VectorFamily, signs: Vec<Sign>) -> Result<Self> {
        if signs.len() != family.len() {
            return Err(Error::Input(format!(
                "{} signs for a family of {} members",
                signs.len(),
                family.len()
            )));
        }
        Ok(SignAssignment { signs })
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    /// Σ ε_v v.
    pub fn signed_sum(&self, family: &VectorFamily) -> LatticeVector {
        let mut s = LatticeVector::zeros(family.dim());
        for (v, e) in family.members().iter().zip(&self.signs) {
            s.add_assign_scaled(v, e.value());
        }
        s
    }

    /// Indices of S₀ = {v : ε_v = +1}.
    pub fn positive_indices(&self) -> Vec<usize> {
        self.signs
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == Sign::Plus)
            .map(|(i, _)| i)
            .collect()
    }

    /// Checks Σ_{S₀} v = g(V) + ½ Σ ε_v v.
    pub fn subset_identity_holds(&self, family: &VectorFamily) -> bool {
        let s0 = family.subset_sum(&self.positive_indices());
        let rhs = family
            .center()
            .add(&HalfVector::from_doubled(self.signed_sum(family)));
        HalfVector::from_lattice(&s0) == rhs
    }
}
