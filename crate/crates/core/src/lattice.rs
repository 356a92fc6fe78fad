//! Exact integer lattice primitives.
//!
//! Coordinates are `i64`. Inputs are bounded so that every sum the toolkit
//! forms stays exact: member coordinates are at most [`MAX_COORD`] in
//! absolute value and families hold at most [`MAX_FAMILY_LEN`] members, so
//! any subset sum is below 2^54. Canonical families are limited to
//! dimension [`MAX_CANONICAL_DIM`].

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_CANONICAL_DIM: usize = 24;
pub const MAX_COORD: i64 = 1 << 30;
pub const MAX_FAMILY_LEN: usize = 1 << 24;
pub const DEFAULT_PSUM_CAP: usize = 10_000_000;

/// A point or direction of Z^n.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(Vec<i64>);

impl LatticeVector {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticeVector(coords)
    }

    pub fn zeros(n: usize) -> Self {
        LatticeVector(vec![0; n])
    }

    pub fn ones(n: usize) -> Self {
        LatticeVector(vec![1; n])
    }

    /// Standard basis vector e_i with a zero-based index.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut c = vec![0; n];
        c[i] = 1;
        LatticeVector(c)
    }

    /// Parses a ±1 binary string: `1` is +1 and `0` is -1.
    pub fn from_binary(s: &str) -> Option<Self> {
        if s.is_empty() {
            return None;
        }
        s.chars()
            .map(|c| match c {
                '1' => Some(1),
                '0' => Some(-1),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(LatticeVector)
    }

    /// The ±1 binary string of this vector, if every entry is ±1.
    pub fn to_binary(&self) -> Option<String> {
        self.0
            .iter()
            .map(|&x| match x {
                1 => Some('1'),
                -1 => Some('0'),
                _ => None,
            })
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn dot(&self, other: &LatticeVector) -> i64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, k: i64) -> LatticeVector {
        LatticeVector(self.0.iter().map(|x| x * k).collect())
    }

    pub fn coord_sum(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn norm_inf(&self) -> i64 {
        self.0.iter().map(|x| x.abs()).max().unwrap_or(0)
    }

    pub fn add_assign_scaled(&mut self, other: &LatticeVector, k: i64) {
        debug_assert_eq!(self.dim(), other.dim());
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += k * b;
        }
    }

    /// u ∥ v iff u_i v_j = u_j v_i for all i < j.
    pub fn is_parallel(&self, other: &LatticeVector) -> bool {
        let n = self.dim();
        if n != other.dim() {
            return false;
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if self.0[i] as i128 * other.0[j] as i128 != self.0[j] as i128 * other.0[i] as i128
                {
                    return false;
                }
            }
        }
        true
    }

    /// Coordinate rotation (v_2, ..., v_n, v_1).
    pub fn rotate(&self) -> LatticeVector {
        let mut c = self.0.clone();
        c.rotate_left(1);
        LatticeVector(c)
    }

    pub fn to_rational(&self) -> RationalVector {
        RationalVector(self.0.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }
}

impl Index<usize> for LatticeVector {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// A vector with entries in ½Z, stored as its double.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct HalfVector {
    doubled: LatticeVector,
}

impl HalfVector {
    pub fn from_doubled(doubled: LatticeVector) -> Self {
        HalfVector { doubled }
    }

    pub fn from_lattice(v: &LatticeVector) -> Self {
        HalfVector { doubled: v.scale(2) }
    }

    pub fn doubled(&self) -> &LatticeVector {
        &self.doubled
    }

    pub fn dim(&self) -> usize {
        self.doubled.dim()
    }

    /// The integer vector, when every entry is integral.
    pub fn to_lattice(&self) -> Option<LatticeVector> {
        if self.doubled.coords().iter().all(|x| x % 2 == 0) {
            Some(LatticeVector(self.doubled.coords().iter().map(|x| x / 2).collect()))
        } else {
            None
        }
    }

    pub fn add(&self, other: &HalfVector) -> HalfVector {
        HalfVector { doubled: &self.doubled + &other.doubled }
    }

    pub fn sub(&self, other: &HalfVector) -> HalfVector {
        HalfVector { doubled: &self.doubled - &other.doubled }
    }

    pub fn to_rational(&self) -> RationalVector {
        RationalVector(
            self.doubled
                .coords()
                .iter()
                .map(|&x| BigRational::new(x.into(), 2.into()))
                .collect(),
        )
    }
}

impl fmt::Display for HalfVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.doubled.coords().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if x % 2 == 0 {
                write!(f, "{}", x / 2)?;
            } else {
                write!(f, "{x}/2")?;
            }
        }
        write!(f, ")")
    }
}

impl Serialize for HalfVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A vector of exact rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalVector(pub Vec<BigRational>);

impl RationalVector {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn dot_lattice(&self, v: &LatticeVector) -> BigRational {
        self.0
            .iter()
            .zip(v.coords())
            .fold(BigRational::zero(), |acc, (a, &b)| acc + a * BigInt::from(b))
    }

    /// Rescales to the primitive integer vector with the same direction.
    pub fn primitive(&self) -> LatticeVector {
        use num_integer::Integer;
        let lcm = self
            .0
            .iter()
            .fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|x| (x * &lcm).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let g = if g.is_zero() { BigInt::from(1) } else { g };
        LatticeVector(
            ints.iter()
                .map(|x| {
                    let q: BigInt = x / &g;
                    i64::try_from(q).expect("primitive normal exceeds i64")
                })
                .collect(),
        )
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for RationalVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for x in &self.0 {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }
}

/// Anything that can be dotted exactly against a lattice vector.
pub trait Direction {
    fn dot_sign(&self, v: &LatticeVector) -> Ordering;
}

impl Direction for LatticeVector {
    fn dot_sign(&self, v: &LatticeVector) -> Ordering {
        self.dot(v).cmp(&0)
    }
}

impl Direction for RationalVector {
    fn dot_sign(&self, v: &LatticeVector) -> Ordering {
        let d = self.dot_lattice(v);
        if d.is_positive() {
            Ordering::Greater
        } else if d.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}

/// An ordered, duplicate-free list of nonzero lattice vectors.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct VectorFamily {
    dim: usize,
    members: Vec<LatticeVector>,
    label: String,
    strict: bool,
    #[serde(skip)]
    canonical: bool,
}

impl VectorFamily {
    /// Builds a family, rejecting zero members, duplicates, dimension
    /// mismatches and out-of-range coordinates. Parallel members are allowed;
    /// `is_strict` reports whether the family was checked to have none.
    pub fn new(dim: usize, members: Vec<LatticeVector>, label: impl Into<String>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension("dimension must be at least 1".into()));
        }
        if members.len() > MAX_FAMILY_LEN {
            return Err(Error::Range(format!(
                "family has {} members, limit is {MAX_FAMILY_LEN}",
                members.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for (i, m) in members.iter().enumerate() {
            if m.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: m.dim() });
            }
            if m.is_zero() {
                return Err(Error::InvalidFamily(format!("member #{i} is the zero vector")));
            }
            if m.coords().iter().any(|x| x.abs() > MAX_COORD) {
                return Err(Error::Range(format!("member #{i} {m} exceeds |x| <= {MAX_COORD}")));
            }
            if !seen.insert(m) {
                return Err(Error::InvalidFamily(format!("member #{i} {m} is duplicated")));
            }
        }
        let strict = members.len() <= 1;
        Ok(VectorFamily { dim, members, label: label.into(), strict, canonical: false })
    }

    /// Like [`VectorFamily::new`], additionally requiring that no two members are parallel.
    pub fn new_strict(
        dim: usize,
        members: Vec<LatticeVector>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let mut f = Self::new(dim, members, label)?;
        if let Some((i, j)) = f.first_parallel_pair() {
            return Err(Error::InvalidFamily(format!(
                "members #{i} {} and #{j} {} are parallel",
                f.members[i], f.members[j]
            )));
        }
        f.strict = true;
        Ok(f)
    }

    /// Skips validation; for members already known to be distinct, nonzero,
    /// pairwise non-parallel ±1 vectors.
    pub(crate) fn from_sign_vectors(dim: usize, members: Vec<LatticeVector>, label: String) -> Self {
        VectorFamily { dim, members, label, strict: true, canonical: false }
    }

    pub fn first_parallel_pair(&self) -> Option<(usize, usize)> {
        for i in 0..self.members.len() {
            for j in (i + 1)..self.members.len() {
                if self.members[i].is_parallel(&self.members[j]) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn members(&self) -> &[LatticeVector] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn index_of(&self, v: &LatticeVector) -> Option<usize> {
        if v.dim() != self.dim {
            return None;
        }
        if self.canonical {
            // Member k has coordinate i+1 equal to -1 iff bit (n-2-i) of k is set.
            if v[0] != 1 || v.coords().iter().any(|&x| x != 1 && x != -1) {
                return None;
            }
            let k = v.coords()[1..].iter().fold(0usize, |acc, &x| (acc << 1) | usize::from(x == -1));
            return Some(k);
        }
        self.members.iter().position(|m| m == v)
    }

    /// Σ(V), the sum of all members.
    pub fn sum(&self) -> LatticeVector {
        let mut s = LatticeVector::zeros(self.dim);
        for m in &self.members {
            s.add_assign_scaled(m, 1);
        }
        s
    }

    /// g(V) = ½Σ(V), the center of P(V).
    pub fn center(&self) -> HalfVector {
        HalfVector::from_doubled(self.sum())
    }

    /// Sum of the members selected by `indices`.
    pub fn subset_sum<'a>(&self, indices: impl IntoIterator<Item = &'a usize>) -> LatticeVector {
        let mut s = LatticeVector::zeros(self.dim);
        for &i in indices {
            s.add_assign_scaled(&self.members[i], 1);
        }
        s
    }
}

/// All 2^{n-1} vectors with first coordinate +1 and other coordinates ±1.
///
/// Members are listed with +1 before -1 in each position, i.e. member `k`
/// has coordinate `i+1` equal to -1 exactly when bit `n-2-i` of `k` is set.
pub fn canonical_family(n: usize) -> Result<VectorFamily> {
    if n == 0 {
        return Err(Error::InvalidDimension("canonical family needs n >= 1".into()));
    }
    if n > MAX_CANONICAL_DIM {
        return Err(Error::Range(format!(
            "canonical family dimension {n} exceeds {MAX_CANONICAL_DIM}"
        )));
    }
    let count = 1usize << (n - 1);
    let members = (0..count)
        .map(|k| {
            let mut c = Vec::with_capacity(n);
            c.push(1);
            for i in 0..n - 1 {
                c.push(if (k >> (n - 2 - i)) & 1 == 1 { -1 } else { 1 });
            }
            LatticeVector(c)
        })
        .collect();
    Ok(VectorFamily {
        dim: n,
        members,
        label: format!("canonical({n})"),
        strict: true,
        canonical: true,
    })
}

/// Σ(V).
pub fn family_sum(f: &VectorFamily) -> LatticeVector {
    f.sum()
}

/// g(V) = ½Σ(V).
pub fn center(f: &VectorFamily) -> HalfVector {
    f.center()
}

/// A finite set of lattice points of a common dimension.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PointSet {
    dim: usize,
    points: BTreeSet<LatticeVector>,
    pub origin: Option<String>,
}

impl PointSet {
    pub fn new(dim: usize) -> Self {
        PointSet { dim, points: BTreeSet::new(), origin: None }
    }

    pub fn from_points(dim: usize, points: impl IntoIterator<Item = LatticeVector>) -> Result<Self> {
        let mut s = PointSet::new(dim);
        for p in points {
            s.insert(p)?;
        }
        Ok(s)
    }

    pub fn insert(&mut self, p: LatticeVector) -> Result<bool> {
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: p.dim() });
        }
        Ok(self.points.insert(p))
    }

    pub fn remove(&mut self, p: &LatticeVector) -> bool {
        self.points.remove(p)
    }

    pub fn contains(&self, p: &LatticeVector) -> bool {
        self.points.contains(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = &LatticeVector> {
        self.points.iter()
    }

    pub fn translate(&self, t: &LatticeVector) -> PointSet {
        PointSet {
            dim: self.dim,
            points: self.points.iter().map(|p| p + t).collect(),
            origin: self.origin.clone(),
        }
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        PointSet {
            dim: self.dim,
            points: self.points.union(&other.points).cloned().collect(),
            origin: None,
        }
    }

    /// Per-coordinate (min, max), or `None` when empty.
    pub fn bounding_box(&self) -> Option<(Vec<i64>, Vec<i64>)> {
        let first = self.points.iter().next()?;
        let mut lo = first.coords().to_vec();
        let mut hi = lo.clone();
        for p in &self.points {
            for i in 0..self.dim {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        Some((lo, hi))
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a LatticeVector;
    type IntoIter = std::collections::btree_set::Iter<'a, LatticeVector>;
    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// P(V), the set of all subset sums, by set doubling.
pub fn enumerate_psum(f: &VectorFamily, cap: usize) -> Result<PointSet> {
    let mut set: BTreeSet<LatticeVector> = BTreeSet::new();
    set.insert(LatticeVector::zeros(f.dim()));
    for (idx, v) in f.members().iter().enumerate() {
        let shifted: Vec<LatticeVector> = set.iter().map(|u| u + v).collect();
        set.extend(shifted);
        if set.len() > cap {
            return Err(Error::SizeLimit { cap, member_index: idx });
        }
    }
    Ok(PointSet { dim: f.dim(), points: set, origin: Some(format!("P({})", f.label())) })
}

/// The vertex of P(V) maximizing `a·u`: the sum of members with a·v > 0.
pub fn zonotope_vertex<D: Direction + ?Sized>(f: &VectorFamily, a: &D) -> Result<LatticeVector> {
    let mut p = LatticeVector::zeros(f.dim());
    let mut degenerate = Vec::new();
    for (i, v) in f.members().iter().enumerate() {
        match a.dot_sign(v) {
            Ordering::Greater => p.add_assign_scaled(v, 1),
            Ordering::Equal => degenerate.push(i),
            Ordering::Less => {}
        }
    }
    if degenerate.is_empty() {
        Ok(p)
    } else {
        Err(Error::DegenerateNormal { members: degenerate })
    }
}

/// Width of P(V) along coordinate `i` (zero-based): Σ_v |v_i|.
pub fn family_width(f: &VectorFamily, i: usize) -> i64 {
    f.members().iter().map(|v| v[i].abs()).sum()
}

/// Membership in the lattice generated by the middle layer: coordinate sum
/// zero and all coordinates of one parity.
pub fn lattice_member(u: &LatticeVector) -> bool {
    if u.coord_sum() != 0 {
        return false;
    }
    match u.coords().first() {
        None => true,
        Some(&first) => u.coords().iter().all(|x| (x - first) % 2 == 0),
    }
}
