use serde::Serialize;

use super::middle::balance_middle;
use super::odd::{majority_sign, odd_signs};
use crate::error::{Error, Result};
use crate::lattice::{canonical_family, HalfVector, LatticeVector, VectorFamily};
use crate::sign::{Sign, SignAssignment};
use crate::threshold::{binomial, critical_M};

/// Chooser's explicit start: t + P(V) ⊆ K_M with 0 = t + Σ_{S₀} v.
#[derive(Clone, Debug, Serialize)]
pub struct ChooserTranslate {
    pub n: usize,
    pub m: i64,
    #[serde(skip)]
    pub family: VectorFamily,
    pub signs: SignAssignment,
    /// Indices of S₀ = {v : ε_v = +1}.
    pub subset: Vec<usize>,
    /// t = -Σ_{S₀} v.
    pub translate: LatticeVector,
    /// t assembled from its closed form -g(V) - ½C·𝟏 (+ ½w').
    pub translate_exact: HalfVector,
    /// w' = -defect in the power-of-two case.
    pub w_shift: Option<LatticeVector>,
    pub defect: Option<LatticeVector>,
    /// max over P(V) of each coordinate of t + u.
    pub coordinate_max: Vec<i64>,
}

impl ChooserTranslate {
    pub fn fits(&self) -> bool {
        self.coordinate_max.iter().all(|&c| c <= self.m)
    }
}

/// Builds the translate for the canonical family and checks it against
/// K_{M_crit}: t + Σ_{S₀} v = 0, t matches its closed form, and for every
/// coordinate i, t_i + #{v : v_i = +1} <= M (the largest value of
/// coordinate i over t + P(V)).
pub fn chooser_translate(n: usize) -> Result<ChooserTranslate> {
    if n < 2 {
        return Err(Error::InvalidDimension(format!("chooser translate needs n >= 2, got {n}")));
    }
    let m = critical_M(n as u32)?.m_crit as i64;
    let (family, signs, c, defect) = if n % 2 == 1 {
        let o = odd_signs(n)?;
        (o.family, o.signs, binomial(n as u32 - 1, (n as u32 - 1) / 2) as i64, None)
    } else {
        let family = canonical_family(n)?;
        let mid = balance_middle(n)?;
        let mut mid_signs = mid.signs.signs().iter();
        let signs: Vec<Sign> = family
            .members()
            .iter()
            .map(|v| majority_sign(v).unwrap_or_else(|| *mid_signs.next().expect("middle layer in canonical order")))
            .collect();
        let signs = SignAssignment::new(&family, signs)?;
        let defect = (n.is_power_of_two()).then_some(mid.defect);
        (family, signs, binomial(n as u32 - 1, n as u32 / 2) as i64, defect)
    };

    let subset = signs.positive_indices();
    let translate = -&family.subset_sum(&subset);
    let w_shift = defect.as_ref().map(|d| -d);
    // 2t = -ΣV - C·𝟏 + w'.
    let mut doubled = -&family.sum();
    doubled.add_assign_scaled(&LatticeVector::ones(n), -c);
    if let Some(w) = &w_shift {
        doubled.add_assign_scaled(w, 1);
    }
    let translate_exact = HalfVector::from_doubled(doubled);
    if translate_exact != HalfVector::from_lattice(&translate) {
        return Err(Error::ConstructionFailed(format!(
            "-Σ S₀ = {translate} differs from the closed form {translate_exact}"
        )));
    }
    let coordinate_max: Vec<i64> = (0..n)
        .map(|i| translate[i] + family.members().iter().filter(|v| v[i] > 0).count() as i64)
        .collect();
    let out = ChooserTranslate {
        n,
        m,
        family,
        signs,
        subset,
        translate,
        translate_exact,
        w_shift,
        defect,
        coordinate_max,
    };
    if !out.fits() {
        return Err(Error::ConstructionFailed(format!(
            "translate reaches {:?}, above M = {m}",
            out.coordinate_max
        )));
    }
    Ok(out)
}
