//! Translate witnesses for finite V-closed sets.
//!
//! For a finite V-closed T, a family with no parallel members, and a vertex
//! x of conv T exposed by a normal a with a·v != 0 for every member, the
//! translate t = x - p(a), where p(a) is the vertex of P(V) maximizing a·u,
//! satisfies x ∈ t + P(V) ⊆ conv T. The certificate records every
//! containment check, each decided by exact rational feasibility.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{feasible_point, rat, Rat};
use crate::game::{is_vclosed, maximal_vclosed_in};
use crate::lattice::{enumerate_psum, zonotope_vertex, LatticeVector, PointSet, RationalVector, VectorFamily};

/// Default cap on |T| for the exact hull computations.
pub const DEFAULT_POINT_LIMIT: usize = 500;
/// Cap on |P(V)| enumerated by a certificate.
pub const PSUM_LIMIT: usize = 1 << 16;

fn check_size(t: &PointSet) -> Result<()> {
    if t.len() > DEFAULT_POINT_LIMIT {
        return Err(Error::SizeLimit { cap: DEFAULT_POINT_LIMIT, member_index: t.len() });
    }
    Ok(())
}

/// Exact test of x ∈ conv(points): λ >= 0, Σλ = 1, Σλ p = x.
pub fn in_hull(points: &[LatticeVector], x: &LatticeVector) -> bool {
    if points.is_empty() {
        return false;
    }
    if points.contains(x) {
        return true;
    }
    let n = x.dim();
    for i in 0..n {
        let lo = points.iter().map(|p| p[i]).min().unwrap();
        let hi = points.iter().map(|p| p[i]).max().unwrap();
        if x[i] < lo || x[i] > hi {
            return false;
        }
    }
    if n == 2 {
        return hull2d::contains(&hull2d::hull(points), x);
    }
    let mut a: Vec<Vec<Rat>> = (0..n).map(|i| points.iter().map(|p| rat(p[i])).collect()).collect();
    a.push(vec![Rat::one(); points.len()]);
    let mut b: Vec<Rat> = x.coords().iter().map(|&c| rat(c)).collect();
    b.push(Rat::one());
    feasible_point(&a, &b).is_some()
}

/// Planar hulls with integer cross products.
pub mod hull2d {
    use crate::lattice::LatticeVector;

    fn cross(o: &LatticeVector, a: &LatticeVector, b: &LatticeVector) -> i128 {
        let (ax, ay) = ((a[0] - o[0]) as i128, (a[1] - o[1]) as i128);
        let (bx, by) = ((b[0] - o[0]) as i128, (b[1] - o[1]) as i128);
        ax * by - ay * bx
    }

    /// Strict hull vertices in counter-clockwise order (monotone chain).
    pub fn hull(points: &[LatticeVector]) -> Vec<LatticeVector> {
        let mut pts: Vec<LatticeVector> = points.to_vec();
        pts.sort();
        pts.dedup();
        if pts.len() <= 2 {
            return pts;
        }
        let mut lower: Vec<LatticeVector> = Vec::new();
        for p in &pts {
            while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
                lower.pop();
            }
            lower.push(p.clone());
        }
        let mut upper: Vec<LatticeVector> = Vec::new();
        for p in pts.iter().rev() {
            while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
                upper.pop();
            }
            upper.push(p.clone());
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        lower
    }

    /// Closed membership in the polygon (or segment, or point) `h`.
    pub fn contains(h: &[LatticeVector], x: &LatticeVector) -> bool {
        match h.len() {
            0 => false,
            1 => &h[0] == x,
            2 => {
                cross(&h[0], &h[1], x) == 0
                    && (0..2).all(|i| x[i] >= h[0][i].min(h[1][i]) && x[i] <= h[0][i].max(h[1][i]))
            }
            k => (0..k).all(|i| cross(&h[i], &h[(i + 1) % k], x) >= 0),
        }
    }
}

/// Points of T that are not convex combinations of the others.
pub fn extreme_points(t: &PointSet) -> Result<Vec<LatticeVector>> {
    check_size(t)?;
    let pts: Vec<LatticeVector> = t.iter().cloned().collect();
    if t.dim() == 2 {
        let h: BTreeSet<LatticeVector> = hull2d::hull(&pts).into_iter().collect();
        return Ok(pts.into_iter().filter(|p| h.contains(p)).collect());
    }
    Ok(extreme_points_lp(&pts))
}

fn extreme_points_lp(pts: &[LatticeVector]) -> Vec<LatticeVector> {
    (0..pts.len())
        .filter(|&k| {
            let others: Vec<LatticeVector> =
                pts.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, p)| p.clone()).collect();
            !in_hull(&others, &pts[k])
        })
        .map(|k| pts[k].clone())
        .collect()
}

/// A direction a with a·x > a·y for every other y ∈ T, normalized so the
/// smallest gap a·(x - y) over the extreme points y is at least 1.
pub fn exposed_normal(t: &PointSet, x: &LatticeVector) -> Result<Option<RationalVector>> {
    if !t.contains(x) {
        return Err(Error::Input(format!("{x} is not a point of the set")));
    }
    let ext = extreme_points(t)?;
    if !ext.contains(x) {
        return Err(Error::NotExtreme(x.clone()));
    }
    Ok(exposing_lp(&ext, x))
}

// Variables a⁺, a⁻ (n each) and one slack per other vertex y:
// (a⁺ - a⁻)·(x - y) - s_y = 1.
fn exposing_lp(ext: &[LatticeVector], x: &LatticeVector) -> Option<RationalVector> {
    let n = x.dim();
    let others: Vec<&LatticeVector> = ext.iter().filter(|y| *y != x).collect();
    if others.is_empty() {
        // A single point is exposed by every direction.
        let mut a = vec![Rat::zero(); n];
        a[0] = Rat::one();
        return Some(RationalVector(a));
    }
    let k = others.len();
    let rows: Vec<Vec<Rat>> = others
        .iter()
        .enumerate()
        .map(|(r, y)| {
            let d = x - *y;
            let mut row = Vec::with_capacity(2 * n + k);
            row.extend(d.coords().iter().map(|&c| rat(c)));
            row.extend(d.coords().iter().map(|&c| rat(-c)));
            row.extend((0..k).map(|j| if j == r { rat(-1) } else { Rat::zero() }));
            row
        })
        .collect();
    let sol = feasible_point(&rows, &vec![Rat::one(); k])?;
    Some(RationalVector((0..n).map(|i| &sol[i] - &sol[n + i]).collect()))
}

fn dot(a: &RationalVector, v: &LatticeVector) -> Rat {
    a.dot_lattice(v)
}

/// Perturbs an exposing normal so that a·v != 0 for every member while
/// keeping every gap a·(x - y) positive.
pub fn admissible_normal(
    a: &RationalVector,
    f: &VectorFamily,
    ext: &[LatticeVector],
    x: &LatticeVector,
) -> Result<RationalVector> {
    let zero_members: Vec<usize> =
        (0..f.len()).filter(|&i| dot(a, &f.members()[i]).is_zero()).collect();
    if zero_members.is_empty() {
        return Ok(a.clone());
    }
    let n = x.dim();
    let diffs: Vec<LatticeVector> = ext.iter().filter(|y| *y != x).map(|y| x - y).collect();
    let min_gap = diffs.iter().map(|d| dot(a, d)).min().unwrap_or_else(Rat::one);
    let min_dot = f
        .members()
        .iter()
        .map(|v| dot(a, v).abs())
        .filter(|d| !d.is_zero())
        .min()
        .unwrap_or_else(Rat::one);
    // d = (1, k, k², ...) is nonzero against a fixed nonzero v for all but
    // n - 1 values of k.
    for k in 1i64..=(2 * n as i64 + 2) {
        let d = LatticeVector::new((0..n as u32).map(|e| k.pow(e)).collect());
        if zero_members.iter().any(|&i| d.dot(&f.members()[i]) == 0) {
            continue;
        }
        let big = diffs
            .iter()
            .chain(f.members())
            .map(|w| d.dot(w).abs())
            .max()
            .unwrap_or(1)
            .max(1);
        let delta = min_gap.clone().min(min_dot.clone()) / Rat::from_integer(BigInt::from(2 * big));
        let b = RationalVector((0..n).map(|i| &a.0[i] + &delta * rat(d[i])).collect());
        let ok_members = f.members().iter().all(|v| !dot(&b, v).is_zero());
        let ok_gaps = diffs.iter().all(|w| dot(&b, w).is_positive());
        if ok_members && ok_gaps {
            return Ok(b);
        }
    }
    Err(Error::DegenerateNormal { members: zero_members })
}

/// A checked witness t + P(V) ⊆ conv T through the exposed point x.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessCertificate {
    pub dim: usize,
    pub family: Vec<LatticeVector>,
    pub set: Vec<LatticeVector>,
    /// FNV-1a over the point dump of T.
    pub digest: String,
    pub x: LatticeVector,
    /// Exact coordinates of the normal, as `p/q` strings.
    pub a: Vec<String>,
    pub p: LatticeVector,
    pub t: LatticeVector,
    /// One character per point of P(V) in enumeration order: `1` inside conv T.
    pub checks: String,
    pub verified: bool,
}

pub fn digest(t: &PointSet) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in crate::io::write_point_set(t).bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    format!("{h:016x}")
}

fn parse_rational(s: &str) -> Result<Rat> {
    let bad = || Error::Input(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(p, q))
        }
        None => Ok(Rat::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

/// Builds and checks the witness at x. Errors when T is not V-closed, the
/// family has parallel members, x is not a vertex, or (never expected) a
/// point of t + P(V) falls outside conv T.
pub fn translate_witness(t: &PointSet, f: &VectorFamily, x: &LatticeVector) -> Result<WitnessCertificate> {
    if t.dim() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), got: t.dim() });
    }
    if let Some((i, j)) = f.first_parallel_pair() {
        return Err(Error::InvalidFamily(format!("members #{i} and #{j} are parallel")));
    }
    is_vclosed(t, f).map_err(|v| Error::NotVClosed { t: v.point, v: v.member })?;
    let ext = extreme_points(t)?;
    if !t.contains(x) || !ext.contains(x) {
        return Err(Error::NotExtreme(x.clone()));
    }
    let a = exposing_lp(&ext, x)
        .ok_or_else(|| Error::Precondition(format!("{x} is extreme but not exposed")))?;
    let a = admissible_normal(&a, f, &ext, x)?;
    let p = zonotope_vertex(f, &a)?;
    let translate = x - &p;
    let psum = enumerate_psum(f, PSUM_LIMIT)?;
    let checks: Vec<bool> = psum
        .iter()
        .map(|u| {
            let y = &translate + u;
            t.contains(&y) || in_hull(&ext, &y)
        })
        .collect();
    if let Some(k) = checks.iter().position(|ok| !ok) {
        let u = psum.iter().nth(k).expect("index in range");
        return Err(Error::TheoremContradiction { point: &translate + u });
    }
    Ok(WitnessCertificate {
        dim: f.dim(),
        family: f.members().to_vec(),
        set: t.iter().cloned().collect(),
        digest: digest(t),
        x: x.clone(),
        a: a.0.iter().map(|q| q.to_string()).collect(),
        p,
        t: translate,
        checks: checks.iter().map(|&b| if b { '1' } else { '0' }).collect(),
        verified: true,
    })
}

impl WitnessCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Input(format!("certificate JSON: {e}")))
    }

    /// Re-derives every claim from the stored fields. Returns the list of
    /// failed checks (empty when the certificate holds).
    pub fn replay(&self) -> Result<Vec<String>> {
        let family = VectorFamily::new(self.dim, self.family.clone(), "certificate")?;
        let set = PointSet::from_points(self.dim, self.set.clone())?;
        let a = RationalVector(self.a.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?);
        let mut failures = Vec::new();
        if digest(&set) != self.digest {
            failures.push("digest mismatch".to_string());
        }
        if family.first_parallel_pair().is_some() {
            failures.push("family has parallel members".into());
        }
        if let Err(v) = is_vclosed(&set, &family) {
            failures.push(format!("set is not V-closed at {} for {}", v.point, v.member));
        }
        if !set.contains(&self.x) {
            failures.push("x is not in the set".into());
        }
        if set.iter().any(|y| y != &self.x && dot(&a, &(&self.x - y)) <= Rat::zero()) {
            failures.push("a does not expose x".into());
        }
        match zonotope_vertex(&family, &a) {
            Ok(p) if p == self.p => {}
            Ok(p) => failures.push(format!("zonotope vertex is {p}, not {}", self.p)),
            Err(_) => failures.push("a is orthogonal to a member".into()),
        }
        if &self.x - &self.p != self.t {
            failures.push("t != x - p".into());
        }
        let pts: Vec<LatticeVector> = set.iter().cloned().collect();
        let psum = enumerate_psum(&family, PSUM_LIMIT)?;
        if psum.len() != self.checks.len() {
            failures.push("check count differs from |P(V)|".into());
        }
        for u in &psum {
            let y = &self.t + u;
            if !(set.contains(&y) || in_hull(&pts, &y)) {
                failures.push(format!("{y} is outside conv T"));
            }
        }
        if !self.verified || self.checks.contains('0') {
            failures.push("certificate is not marked verified".into());
        }
        Ok(failures)
    }
}

/// A random finite V-closed set: the maximal V-closed subset of a few random
/// translates of P(V) plus random points from their bounding box. The
/// translates survive, so the result is never empty.
pub fn random_vclosed(f: &VectorFamily, seed: u64, budget: usize) -> Result<PointSet> {
    let psum = enumerate_psum(f, budget)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let copies = rng.random_range(1..=3usize);
    if psum.len() * (copies + 1) > budget {
        return Err(Error::BudgetExceeded(format!(
            "{copies} translates of {} points exceed the budget {budget}",
            psum.len()
        )));
    }
    let n = f.dim();
    let spread: i64 = (0..n).map(|i| crate::lattice::family_width(f, i)).max().unwrap_or(1).max(1);
    let mut cand = PointSet::new(n);
    for _ in 0..copies {
        let s = LatticeVector::new((0..n).map(|_| rng.random_range(-spread..=spread)).collect());
        for u in &psum {
            cand.insert(&s + u)?;
        }
    }
    let (lo, hi) = cand.bounding_box().expect("nonempty");
    let noise = rng.random_range(0..=psum.len());
    for _ in 0..noise {
        let p = LatticeVector::new((0..n).map(|i| rng.random_range(lo[i]..=hi[i])).collect());
        cand.insert(p)?;
    }
    let mut out = maximal_vclosed_in(&cand, f);
    out.origin = Some(format!("random V-closed set, seed {seed}"));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{canonical_family, DEFAULT_PSUM_CAP};

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::new(c.to_vec())
    }

    fn set(dim: usize, pts: &[&[i64]]) -> PointSet {
        PointSet::from_points(dim, pts.iter().map(|p| lv(p))).unwrap()
    }

    #[test]
    fn extreme_examples() {
        let f = canonical_family(2).unwrap();
        let p = enumerate_psum(&f, DEFAULT_PSUM_CAP).unwrap();
        assert_eq!(extreme_points(&p).unwrap().len(), 4);
        assert_eq!(extreme_points(&set(2, &[&[0, 0]])).unwrap(), vec![lv(&[0, 0])]);
        let line = set(3, &[&[0, 0, 0], &[1, 1, 1], &[2, 2, 2]]);
        assert_eq!(extreme_points(&line).unwrap(), vec![lv(&[0, 0, 0]), lv(&[2, 2, 2])]);
        let line2 = set(2, &[&[0, 0], &[1, 1], &[2, 2]]);
        assert_eq!(extreme_points(&line2).unwrap(), vec![lv(&[0, 0]), lv(&[2, 2])]);
    }

    #[test]
    fn lp_and_planar_agree() {
        let pts: Vec<LatticeVector> =
            [[0, 0], [4, 1], [3, 3], [1, 4], [2, 2], [1, 1], [0, 3]].iter().map(|c| lv(c)).collect();
        let h = hull2d::hull(&pts);
        let lp: BTreeSet<_> = extreme_points_lp(&pts).into_iter().collect();
        assert_eq!(h.iter().cloned().collect::<BTreeSet<_>>(), lp);
        for x in -1..6 {
            for y in -1..6 {
                let q = lv(&[x, y]);
                let mut a: Vec<Vec<Rat>> = (0..2).map(|i| pts.iter().map(|p| rat(p[i])).collect()).collect();
                a.push(vec![Rat::one(); pts.len()]);
                let lp_in = feasible_point(&a, &[rat(x), rat(y), Rat::one()]).is_some();
                assert_eq!(hull2d::contains(&h, &q), lp_in, "{q}");
            }
        }
    }

    #[test]
    fn exposed_examples() {
        let sq = set(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let a = exposed_normal(&sq, &lv(&[1, 1])).unwrap().unwrap();
        assert!(sq.iter().filter(|y| *y != &lv(&[1, 1])).all(|y| dot(&a, &(&lv(&[1, 1]) - y)).is_positive()));

        let f = canonical_family(2).unwrap();
        let p = enumerate_psum(&f, DEFAULT_PSUM_CAP).unwrap();
        let x = lv(&[2, 0]);
        let a = exposed_normal(&p, &x).unwrap().unwrap();
        assert!(p.iter().filter(|y| *y != &x).all(|y| dot(&a, &(&x - y)).is_positive()));

        let seg = set(2, &[&[0, 0], &[1, 0], &[2, 0]]);
        assert_eq!(exposed_normal(&seg, &lv(&[1, 0])).unwrap_err(), Error::NotExtreme(lv(&[1, 0])));
    }

    #[test]
    fn translate_is_its_own_witness() {
        let f = canonical_family(3).unwrap();
        let s = lv(&[5, -2, 1]);
        let t = enumerate_psum(&f, DEFAULT_PSUM_CAP).unwrap().translate(&s);
        for x in extreme_points(&t).unwrap() {
            let c = translate_witness(&t, &f, &x).unwrap();
            assert!(c.verified);
            assert_eq!(c.t, s);
            assert!(c.replay().unwrap().is_empty());
        }
    }

    #[test]
    fn overlapping_translates() {
        let f = canonical_family(2).unwrap();
        let p = enumerate_psum(&f, DEFAULT_PSUM_CAP).unwrap();
        let t = p.union(&p.translate(&lv(&[1, 1])));
        assert!(is_vclosed(&t, &f).is_ok());
        let ext = extreme_points(&t).unwrap();
        assert!(!ext.is_empty());
        for x in ext {
            let c = translate_witness(&t, &f, &x).unwrap();
            let h = hull2d::hull(&t.iter().cloned().collect::<Vec<_>>());
            for u in &p {
                assert!(hull2d::contains(&h, &(&c.t + u)));
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let f = canonical_family(2).unwrap();
        let not_closed = set(2, &[&[0, 0], &[1, 1]]);
        assert!(matches!(translate_witness(&not_closed, &f, &lv(&[0, 0])), Err(Error::NotVClosed { .. })));
        let par = VectorFamily::new(2, vec![lv(&[1, 0]), lv(&[2, 0])], "p").unwrap();
        let t = set(2, &[&[0, 0]]);
        assert!(matches!(translate_witness(&t, &par, &lv(&[0, 0])), Err(Error::InvalidFamily(_))));
    }

    #[test]
    fn degenerate_normal_is_perturbed() {
        // The square's corner (1,1) is exposed by (1,1), which is orthogonal
        // to the member (1,-1).
        let f = canonical_family(2).unwrap();
        let sq = set(2, &[&[0, 0], &[1, 1], &[1, -1], &[2, 0]]);
        let ext = extreme_points(&sq).unwrap();
        let x = lv(&[1, 1]);
        let a = RationalVector(vec![rat(0), rat(1)]);
        let b = admissible_normal(&a, &f, &ext, &x).unwrap();
        assert!(f.members().iter().all(|v| !dot(&b, v).is_zero()));
    }

    #[test]
    fn generator_is_closed_and_deterministic() {
        let f = canonical_family(2).unwrap();
        for seed in 0..100 {
            let t = random_vclosed(&f, seed, 10_000).unwrap();
            assert!(is_vclosed(&t, &f).is_ok());
            assert!(!t.is_empty());
        }
        assert_eq!(random_vclosed(&f, 7, 10_000).unwrap(), random_vclosed(&f, 7, 10_000).unwrap());
        assert!(matches!(random_vclosed(&f, 0, 5), Err(Error::SizeLimit { .. } | Error::BudgetExceeded(_))));
    }

    #[test]
    fn certificate_json_round_trip() {
        let f = canonical_family(2).unwrap();
        let t = enumerate_psum(&f, DEFAULT_PSUM_CAP).unwrap();
        let c = translate_witness(&t, &f, &lv(&[2, 0])).unwrap();
        let back = WitnessCertificate::from_json(&c.to_json()).unwrap();
        assert!(back.replay().unwrap().is_empty());
        let mut bad = back.clone();
        bad.t = lv(&[9, 9]);
        assert!(!bad.replay().unwrap().is_empty());
    }
}
