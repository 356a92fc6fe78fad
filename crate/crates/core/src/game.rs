//! The balancing game: V-closed sets, the maximal V-closed subset of a
//! finite window, verdicts, strategy engines and simulation.
//!
//! A window is a finite box of lattice points. Its maximal V-closed subset
//! (the "safe set") is computed as a greatest fixed point by synchronous
//! deletion rounds: in round `k` every surviving point `z` that has a member
//! `v` with both `z + v` and `z - v` already gone (deleted in an earlier
//! round, or outside the window) is deleted and stamped with rank `k` and
//! the smallest such member index. Rounds are order independent, so the
//! per-round scan runs in parallel and still yields a reproducible table.
//!
//! Points below the window's lower bounds count as deleted. A Chooser
//! verdict is therefore sound outright, while a Pusher verdict only holds
//! for play that stays inside the window.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{LatticeVector, PointSet, VectorFamily};
use crate::sign::Sign;

pub const DEFAULT_VOLUME_LIMIT: u128 = 100_000_000;

/// K_M: the points with x_i <= M_i for every coordinate.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct GameRegion {
    upper: Vec<i64>,
}

impl GameRegion {
    pub fn new(upper: Vec<i64>) -> Result<Self> {
        if upper.is_empty() {
            return Err(Error::InvalidDimension("region needs n >= 1".into()));
        }
        Ok(GameRegion { upper })
    }

    pub fn uniform(n: usize, m: i64) -> Self {
        GameRegion { upper: vec![m; n] }
    }

    pub fn dim(&self) -> usize {
        self.upper.len()
    }

    pub fn upper(&self) -> &[i64] {
        &self.upper
    }

    pub fn contains(&self, z: &LatticeVector) -> bool {
        z.coords().iter().zip(&self.upper).all(|(x, m)| x <= m)
    }

    /// M_i - z_i per coordinate; negative entries mean the region was left.
    pub fn slack(&self, z: &LatticeVector) -> Vec<i64> {
        z.coords().iter().zip(&self.upper).map(|(x, m)| m - x).collect()
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Window {
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl Window {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::InvalidWindow(format!(
                "bounds of lengths {} and {}",
                lo.len(),
                hi.len()
            )));
        }
        if let Some(i) = (0..lo.len()).find(|&i| lo[i] > hi[i]) {
            return Err(Error::InvalidWindow(format!(
                "coordinate {i}: lower bound {} exceeds upper bound {}",
                lo[i], hi[i]
            )));
        }
        Ok(Window { lo, hi })
    }

    /// Π[M_i - margin, M_i] when that contains the origin; coordinates with
    /// M_i > margin get [-margin, M_i] instead so the origin keeps the same
    /// margin below it.
    pub fn below(region: &GameRegion, margin: i64) -> Result<Self> {
        let hi = region.upper().to_vec();
        let lo = hi.iter().map(|&m| if m <= margin { m - margin } else { -margin }).collect();
        Window::new(lo, hi)
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    pub fn volume(&self) -> u128 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| (h - l + 1) as u128)
            .fold(1u128, |a, b| a.saturating_mul(b))
    }

    pub fn contains(&self, z: &LatticeVector) -> bool {
        z.dim() == self.dim()
            && z.coords().iter().enumerate().all(|(i, x)| self.lo[i] <= *x && *x <= self.hi[i])
    }
}

/// A pair (t, v) with neither t + v nor t - v in the set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Violation {
    pub point: LatticeVector,
    pub member_index: usize,
    pub member: LatticeVector,
}

/// Checks that every t in `set` has t + v or t - v in `set` for every
/// member v; reports the lexicographically first violation otherwise.
pub fn is_vclosed(set: &PointSet, f: &VectorFamily) -> std::result::Result<(), Violation> {
    for t in set.iter() {
        for (j, v) in f.members().iter().enumerate() {
            if !set.contains(&(t + v)) && !set.contains(&(t - v)) {
                return Err(Violation { point: t.clone(), member_index: j, member: v.clone() });
            }
        }
    }
    Ok(())
}

/// The maximal V-closed subset of an arbitrary finite candidate set.
pub fn maximal_vclosed_in(candidates: &PointSet, f: &VectorFamily) -> PointSet {
    let mut alive: BTreeSet<LatticeVector> = candidates.iter().cloned().collect();
    let mut queue: Vec<LatticeVector> = alive.iter().cloned().collect();
    while let Some(z) = queue.pop() {
        if !alive.contains(&z) {
            continue;
        }
        let stuck = f.members().iter().any(|v| !alive.contains(&(&z + v)) && !alive.contains(&(&z - v)));
        if stuck {
            alive.remove(&z);
            for v in f.members() {
                for nb in [&z + v, &z - v] {
                    if alive.contains(&nb) {
                        queue.push(nb);
                    }
                }
            }
        }
    }
    let mut out = PointSet::new(candidates.dim());
    for p in alive {
        out.insert(p).expect("dimension preserved");
    }
    out
}

/// Dense mixed-radix indexing of a window.
#[derive(Clone, Debug)]
struct Grid {
    lo: Vec<i64>,
    hi: Vec<i64>,
    strides: Vec<usize>,
    len: usize,
}

impl Grid {
    fn new(w: &Window) -> Self {
        let n = w.dim();
        let mut strides = vec![0; n];
        let mut acc = 1usize;
        for i in (0..n).rev() {
            strides[i] = acc;
            acc *= (w.hi[i] - w.lo[i] + 1) as usize;
        }
        Grid { lo: w.lo.clone(), hi: w.hi.clone(), strides, len: acc }
    }

    fn index(&self, z: &LatticeVector) -> Option<usize> {
        let mut idx = 0;
        for i in 0..self.lo.len() {
            let x = z[i];
            if x < self.lo[i] || x > self.hi[i] {
                return None;
            }
            idx += (x - self.lo[i]) as usize * self.strides[i];
        }
        Some(idx)
    }

    fn decode_into(&self, mut idx: usize, out: &mut [i64]) {
        for i in 0..self.lo.len() {
            out[i] = self.lo[i] + (idx / self.strides[i]) as i64;
            idx %= self.strides[i];
        }
    }

    fn point(&self, idx: usize) -> LatticeVector {
        let mut c = vec![0; self.lo.len()];
        self.decode_into(idx, &mut c);
        LatticeVector::new(c)
    }

    /// Index of z + sign * v, if inside the window.
    fn step(&self, z: &[i64], v: &LatticeVector, sign: i64) -> Option<usize> {
        let mut idx = 0;
        for i in 0..self.lo.len() {
            let x = z[i] + sign * v[i];
            if x < self.lo[i] || x > self.hi[i] {
                return None;
            }
            idx += (x - self.lo[i]) as usize * self.strides[i];
        }
        Some(idx)
    }
}

/// The maximal V-closed subset of a window together with its deletion table.
#[derive(Clone, Debug)]
pub struct SafeSetCertificate {
    window: Window,
    family: VectorFamily,
    grid: Grid,
    // 0 for safe points, otherwise the deletion round (>= 1).
    removed: Vec<u32>,
    witness: Vec<u16>,
    rounds: u32,
    safe_count: usize,
}

impl SafeSetCertificate {
    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn family(&self) -> &VectorFamily {
        &self.family
    }

    pub fn rounds(&self) -> u32 {
        self.rounds
    }

    pub fn safe_size(&self) -> usize {
        self.safe_count
    }

    pub fn is_safe(&self, z: &LatticeVector) -> bool {
        self.grid.index(z).is_some_and(|i| self.removed[i] == 0)
    }

    /// Deletion round of a removed window point; `None` for safe or
    /// out-of-window points.
    pub fn rank(&self, z: &LatticeVector) -> Option<u32> {
        self.grid.index(z).and_then(|i| (self.removed[i] != 0).then_some(self.removed[i]))
    }

    /// Index of the member recorded when `z` was removed.
    pub fn witness(&self, z: &LatticeVector) -> Option<usize> {
        self.grid
            .index(z)
            .and_then(|i| (self.removed[i] != 0).then_some(self.witness[i] as usize))
    }

    pub fn safe_set(&self) -> PointSet {
        let mut s = PointSet::new(self.window.dim());
        for (i, &r) in self.removed.iter().enumerate() {
            if r == 0 {
                s.insert(self.grid.point(i)).expect("dimension preserved");
            }
        }
        s.origin = Some(format!("safe({})", self.family.label()));
        s
    }

    /// Removed points in index order (lexicographic), with rank and witness.
    pub fn removed_points(&self) -> impl Iterator<Item = (LatticeVector, u32, usize)> + '_ {
        self.removed
            .iter()
            .enumerate()
            .filter(|(_, r)| **r != 0)
            .map(|(i, &r)| (self.grid.point(i), r, self.witness[i] as usize))
    }

    /// Re-checks the table: the safe set is V-closed within the window and
    /// every removed point has a witness whose two neighbours were removed
    /// strictly earlier or lie outside the window.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let n = self.window.dim();
        let mut buf = vec![0; n];
        for idx in 0..self.grid.len {
            self.grid.decode_into(idx, &mut buf);
            let r = self.removed[idx];
            let gone_before = |j: Option<usize>, bound: u32| match j {
                None => true,
                Some(j) => self.removed[j] != 0 && self.removed[j] < bound,
            };
            if r == 0 {
                for v in self.family.members() {
                    let p = self.grid.step(&buf, v, 1);
                    let m = self.grid.step(&buf, v, -1);
                    let alive = |j: Option<usize>| j.is_some_and(|j| self.removed[j] == 0);
                    if !alive(p) && !alive(m) {
                        return Err(format!("safe point {buf:?} violates closure for {v}"));
                    }
                }
            } else {
                let v = &self.family.members()[self.witness[idx] as usize];
                let p = self.grid.step(&buf, v, 1);
                let m = self.grid.step(&buf, v, -1);
                if !gone_before(p, r) || !gone_before(m, r) {
                    return Err(format!("removed point {buf:?} has a stale witness {v}"));
                }
            }
        }
        Ok(())
    }
}

/// Greatest fixed point of the deletion operator on `w`.
pub fn maximal_vclosed_subset(
    w: &Window,
    f: &VectorFamily,
    volume_limit: u128,
) -> Result<SafeSetCertificate> {
    if w.dim() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), got: w.dim() });
    }
    let volume = w.volume();
    if volume > volume_limit {
        return Err(Error::VolumeLimit { volume, limit: volume_limit });
    }
    if f.len() > u16::MAX as usize {
        return Err(Error::Range(format!("family of {} members is too large to solve", f.len())));
    }
    let grid = Grid::new(w);
    let n = w.dim();
    let members = f.members();
    let mut removed = vec![0u32; grid.len];
    let mut witness = vec![0u16; grid.len];

    let scan = |idx: usize, removed: &[u32]| -> Option<u16> {
        if removed[idx] != 0 {
            return None;
        }
        let mut buf = vec![0; n];
        grid.decode_into(idx, &mut buf);
        let dead = |j: Option<usize>| j.is_none_or(|j| removed[j] != 0);
        members
            .iter()
            .position(|v| dead(grid.step(&buf, v, 1)) && dead(grid.step(&buf, v, -1)))
            .map(|j| j as u16)
    };

    let mut round = 1u32;
    let mut found: Vec<(usize, u16)> = (0..grid.len)
        .into_par_iter()
        .filter_map(|idx| scan(idx, &removed).map(|j| (idx, j)))
        .collect();
    let mut rounds = 0;
    while !found.is_empty() {
        for &(idx, j) in &found {
            removed[idx] = round;
            witness[idx] = j;
        }
        rounds = round;
        let mut next: Vec<usize> = Vec::new();
        let mut buf = vec![0; n];
        for &(idx, _) in &found {
            grid.decode_into(idx, &mut buf);
            for v in members {
                for s in [1, -1] {
                    if let Some(j) = grid.step(&buf, v, s) {
                        if removed[j] == 0 {
                            next.push(j);
                        }
                    }
                }
            }
        }
        next.sort_unstable();
        next.dedup();
        round += 1;
        found = next
            .par_iter()
            .filter_map(|&idx| scan(idx, &removed).map(|j| (idx, j)))
            .collect();
    }
    let safe_count = removed.iter().filter(|&&r| r == 0).count();
    Ok(SafeSetCertificate {
        window: w.clone(),
        family: f.clone(),
        grid,
        removed,
        witness,
        rounds,
        safe_count,
    })
}

/// Default window margin: twice the ℓ∞ width bound Σ‖v‖∞ plus two, which is
/// 2^n + 2 for the canonical family.
pub fn default_margin(f: &VectorFamily) -> i64 {
    2 * f.members().iter().map(|v| v.norm_inf()).sum::<i64>() + 2
}

#[derive(Clone, Debug)]
pub enum Verdict {
    ChooserWins(SafeSetCertificate),
    PusherWinsWithinWindow(SafeSetCertificate),
}

impl Verdict {
    pub fn chooser_wins(&self) -> bool {
        matches!(self, Verdict::ChooserWins(_))
    }

    pub fn certificate(&self) -> &SafeSetCertificate {
        match self {
            Verdict::ChooserWins(c) | Verdict::PusherWinsWithinWindow(c) => c,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::ChooserWins(_) => "chooser",
            Verdict::PusherWinsWithinWindow(_) => "pusher-within-window",
        }
    }
}

/// Decides G(V, K) on a finite window below the region's bounds.
pub fn verdict(
    region: &GameRegion,
    f: &VectorFamily,
    margin: Option<i64>,
    volume_limit: u128,
) -> Result<Verdict> {
    if region.dim() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), got: region.dim() });
    }
    let origin = LatticeVector::zeros(f.dim());
    if !region.contains(&origin) {
        return Err(Error::RegionExcludesOrigin);
    }
    let margin = margin.unwrap_or_else(|| default_margin(f));
    if margin < 0 {
        return Err(Error::InvalidWindow(format!("negative margin {margin}")));
    }
    let window = Window::below(region, margin)?;
    let cert = maximal_vclosed_subset(&window, f, volume_limit)?;
    Ok(if cert.is_safe(&origin) {
        Verdict::ChooserWins(cert)
    } else {
        Verdict::PusherWinsWithinWindow(cert)
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct StrategyStep {
    pub point: LatticeVector,
    pub member: usize,
    pub vector: LatticeVector,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub response: Option<Sign>,
}

/// Summary document for a solved window.
#[derive(Clone, Debug, Serialize)]
pub struct CertificateReport {
    pub family: VectorFamily,
    pub window: Window,
    pub verdict: String,
    pub semantics: String,
    pub safe_size: usize,
    pub rounds: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub origin_rank: Option<u32>,
    pub strategy_sample: Vec<StrategyStep>,
}

impl SafeSetCertificate {
    /// Builds the report. From the origin: if it is safe, one Chooser reply
    /// per member; otherwise the Pusher's offers along a line of play where
    /// Chooser always moves to the neighbour removed latest.
    pub fn report(&self, sample_len: usize) -> CertificateReport {
        let origin = LatticeVector::zeros(self.window.dim());
        let mut sample = Vec::new();
        let verdict;
        if !self.window.contains(&origin) {
            verdict = "origin-outside-window";
        } else if self.is_safe(&origin) {
            verdict = "chooser";
            for (j, v) in self.family.members().iter().enumerate().take(sample_len) {
                let response = if self.is_safe(&(&origin + v)) { Sign::Plus } else { Sign::Minus };
                sample.push(StrategyStep {
                    point: origin.clone(),
                    member: j,
                    vector: v.clone(),
                    rank: None,
                    response: Some(response),
                });
            }
        } else {
            verdict = "pusher-within-window";
            let mut z = origin.clone();
            while sample.len() < sample_len {
                let (Some(j), Some(r)) = (self.witness(&z), self.rank(&z)) else { break };
                let v = self.family.members()[j].clone();
                let plus = &z + &v;
                let minus = &z - &v;
                sample.push(StrategyStep {
                    point: z.clone(),
                    member: j,
                    vector: v,
                    rank: Some(r),
                    response: None,
                });
                let rp = self.rank(&plus).unwrap_or(0);
                let rm = self.rank(&minus).unwrap_or(0);
                z = if rp >= rm { plus } else { minus };
            }
        }
        CertificateReport {
            family: self.family.clone(),
            window: self.window.clone(),
            verdict: verdict.into(),
            semantics: "chooser verdicts are unconditional; pusher verdicts assume play stays inside the window".into(),
            safe_size: self.safe_count,
            rounds: self.rounds,
            origin_rank: self.rank(&origin),
            strategy_sample: sample,
        }
    }

    /// One point per line, comma-separated coordinates, lexicographic order.
    pub fn dump_safe_set(&self) -> String {
        crate::io::write_point_set(&self.safe_set())
    }
}

// ---------------------------------------------------------------------------
// Strategies

pub trait ChooserStrategy {
    /// Sign for the offered member at the current position.
    fn respond(&mut self, position: &LatticeVector, member: usize) -> Result<Sign>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PusherMove {
    Offer(usize),
    GameOver,
}

pub trait PusherStrategy {
    fn offer(&mut self, position: &LatticeVector) -> Result<PusherMove>;
}

/// Chooser's translate strategy: track S with position = t + Σ_S u; an
/// offered member in S is subtracted (and leaves S), otherwise added.
#[derive(Clone, Debug)]
pub struct SubsetChooser<'a> {
    family: &'a VectorFamily,
    translate: LatticeVector,
    in_subset: Vec<bool>,
    position: LatticeVector,
}

impl<'a> SubsetChooser<'a> {
    pub fn new(family: &'a VectorFamily, translate: LatticeVector, subset: &[usize]) -> Result<Self> {
        if translate.dim() != family.dim() {
            return Err(Error::DimensionMismatch { expected: family.dim(), got: translate.dim() });
        }
        let mut in_subset = vec![false; family.len()];
        for &i in subset {
            if i >= family.len() {
                return Err(Error::Input(format!("subset index {i} out of range")));
            }
            in_subset[i] = true;
        }
        let position = &translate + &family.subset_sum(subset);
        Ok(SubsetChooser { family, translate, in_subset, position })
    }

    pub fn position(&self) -> &LatticeVector {
        &self.position
    }

    pub fn translate(&self) -> &LatticeVector {
        &self.translate
    }

    pub fn subset(&self) -> Vec<usize> {
        (0..self.in_subset.len()).filter(|&i| self.in_subset[i]).collect()
    }

    pub fn respond_index(&mut self, member: usize) -> Result<Sign> {
        let v = self
            .family
            .members()
            .get(member)
            .ok_or_else(|| Error::Input(format!("member index {member} out of range")))?;
        let sign = if self.in_subset[member] { Sign::Minus } else { Sign::Plus };
        self.in_subset[member] = !self.in_subset[member];
        self.position.add_assign_scaled(v, sign.value());
        Ok(sign)
    }

    pub fn respond_vector(&mut self, v: &LatticeVector) -> Result<Sign> {
        let idx = self.family.index_of(v).ok_or_else(|| Error::NotInFamily(v.clone()))?;
        self.respond_index(idx)
    }
}

impl ChooserStrategy for SubsetChooser<'_> {
    fn respond(&mut self, _position: &LatticeVector, member: usize) -> Result<Sign> {
        self.respond_index(member)
    }
}

/// Keeps the position inside a safe set (+1 preferred).
pub struct SafeSetChooser<'a> {
    cert: &'a SafeSetCertificate,
}

impl<'a> SafeSetChooser<'a> {
    pub fn new(cert: &'a SafeSetCertificate) -> Self {
        SafeSetChooser { cert }
    }
}

impl ChooserStrategy for SafeSetChooser<'_> {
    fn respond(&mut self, position: &LatticeVector, member: usize) -> Result<Sign> {
        let v = &self.cert.family().members()[member];
        if self.cert.is_safe(&(position + v)) {
            Ok(Sign::Plus)
        } else if self.cert.is_safe(&(position - v)) {
            Ok(Sign::Minus)
        } else {
            // Off the safe set there is no guaranteed reply; stay high on slack.
            Ok(Sign::Minus)
        }
    }
}

/// Picks the sign that maximizes the smallest remaining slack (+1 on ties).
pub struct GreedyChooser<'a> {
    family: &'a VectorFamily,
    region: &'a GameRegion,
}

impl<'a> GreedyChooser<'a> {
    pub fn new(family: &'a VectorFamily, region: &'a GameRegion) -> Self {
        GreedyChooser { family, region }
    }
}

impl ChooserStrategy for GreedyChooser<'_> {
    fn respond(&mut self, position: &LatticeVector, member: usize) -> Result<Sign> {
        let v = &self.family.members()[member];
        let min_slack = |z: LatticeVector| self.region.slack(&z).into_iter().min().unwrap_or(0);
        let plus = min_slack(position + v);
        let minus = min_slack(position - v);
        Ok(if plus >= minus { Sign::Plus } else { Sign::Minus })
    }
}

/// Pusher driven by a deletion table: offers the recorded witness, whose
/// two outcomes both have strictly smaller rank.
pub struct RankPusher<'a> {
    cert: &'a SafeSetCertificate,
    region: &'a GameRegion,
}

impl<'a> RankPusher<'a> {
    pub fn new(cert: &'a SafeSetCertificate, region: &'a GameRegion) -> Self {
        RankPusher { cert, region }
    }
}

impl PusherStrategy for RankPusher<'_> {
    fn offer(&mut self, z: &LatticeVector) -> Result<PusherMove> {
        if !self.region.contains(z) {
            return Ok(PusherMove::GameOver);
        }
        if self.cert.is_safe(z) {
            return Err(Error::NoWinningMove(z.clone()));
        }
        match self.cert.witness(z) {
            Some(j) => Ok(PusherMove::Offer(j)),
            None => Err(Error::OutsideWindow(z.clone())),
        }
    }
}

/// Uniformly random offers from a seeded ChaCha stream.
pub struct RandomPusher {
    rng: ChaCha8Rng,
    members: usize,
}

impl RandomPusher {
    pub fn new(members: usize, seed: u64) -> Self {
        RandomPusher { rng: ChaCha8Rng::seed_from_u64(seed), members }
    }
}

impl PusherStrategy for RandomPusher {
    fn offer(&mut self, _z: &LatticeVector) -> Result<PusherMove> {
        if self.members == 0 {
            return Err(Error::Input("cannot offer from an empty family".into()));
        }
        Ok(PusherMove::Offer(self.rng.random_range(0..self.members)))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Round {
    pub member: usize,
    pub offered: LatticeVector,
    pub sign: Sign,
    pub position: LatticeVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Outcome {
    /// The position left the region after this many rounds.
    Escaped { round: usize },
    Survived { rounds: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct Transcript {
    pub region: GameRegion,
    pub initial: LatticeVector,
    pub rounds: Vec<Round>,
    pub outcome: Outcome,
}

impl Transcript {
    pub fn final_position(&self) -> &LatticeVector {
        self.rounds.last().map_or(&self.initial, |r| &r.position)
    }

    /// Recomputes z_{k+1} = z_k + ε_k v_k for every round.
    pub fn replay_ok(&self) -> bool {
        let mut z = self.initial.clone();
        for r in &self.rounds {
            z.add_assign_scaled(&r.offered, r.sign.value());
            if z != r.position {
                return false;
            }
        }
        true
    }
}

/// Plays up to `rounds` rounds from the origin, stopping early when the
/// position leaves the region.
pub fn simulate(
    region: &GameRegion,
    f: &VectorFamily,
    chooser: &mut dyn ChooserStrategy,
    pusher: &mut dyn PusherStrategy,
    rounds: usize,
) -> Result<Transcript> {
    if region.dim() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), got: region.dim() });
    }
    let initial = LatticeVector::zeros(f.dim());
    let mut z = initial.clone();
    let mut log = Vec::new();
    if !region.contains(&z) {
        return Ok(Transcript {
            region: region.clone(),
            initial,
            rounds: log,
            outcome: Outcome::Escaped { round: 0 },
        });
    }
    for k in 0..rounds {
        let member = match pusher.offer(&z)? {
            PusherMove::Offer(j) => j,
            PusherMove::GameOver => break,
        };
        let v = f
            .members()
            .get(member)
            .ok_or_else(|| Error::Input(format!("offered member index {member} out of range")))?;
        let sign = chooser.respond(&z, member)?;
        z.add_assign_scaled(v, sign.value());
        log.push(Round { member, offered: v.clone(), sign, position: z.clone() });
        if !region.contains(&z) {
            return Ok(Transcript {
                region: region.clone(),
                initial,
                rounds: log,
                outcome: Outcome::Escaped { round: k + 1 },
            });
        }
    }
    let played = log.len();
    Ok(Transcript {
        region: region.clone(),
        initial,
        rounds: log,
        outcome: Outcome::Survived { rounds: played },
    })
}

/// Deletion ranks of a certificate grouped by round, for display.
pub fn rank_histogram(cert: &SafeSetCertificate) -> BTreeMap<u32, usize> {
    let mut h = BTreeMap::new();
    for &r in &cert.removed {
        if r != 0 {
            *h.entry(r).or_insert(0) += 1;
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{canonical_family, enumerate_psum, DEFAULT_PSUM_CAP};

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::new(c.to_vec())
    }

    fn square(lo: i64, hi: i64, n: usize) -> Window {
        Window::new(vec![lo; n], vec![hi; n]).unwrap()
    }

    #[test]
    fn psum_is_vclosed() {
        let f = canonical_family(2).unwrap();
        let p = enumerate_psum(&f, DEFAULT_PSUM_CAP).unwrap();
        assert!(is_vclosed(&p, &f).is_ok());
    }

    #[test]
    fn singleton_violation() {
        let f = canonical_family(2).unwrap();
        let t = PointSet::from_points(2, [LatticeVector::zeros(2)]).unwrap();
        let v = is_vclosed(&t, &f).unwrap_err();
        assert_eq!(v.point, lv(&[0, 0]));
        assert_eq!(v.member, lv(&[1, 1]));
    }

    #[test]
    fn strip_violations_only_at_boundary() {
        let f = VectorFamily::new_strict(2, vec![lv(&[1, 0]), lv(&[0, 1])], "e1,e2").unwrap();
        let mut t = PointSet::new(2);
        for k in -3..=3 {
            t.insert(lv(&[k, k])).unwrap();
            t.insert(lv(&[k, k + 1])).unwrap();
        }
        for p in t.iter() {
            for v in f.members() {
                if !t.contains(&(p + v)) && !t.contains(&(p - v)) {
                    assert!(p[0] == -3 || p[0] == 3, "interior violation at {p}");
                }
            }
        }
        assert!(is_vclosed(&t, &f).is_err());
    }

    #[test]
    fn n2_windows() {
        let f = canonical_family(2).unwrap();
        let c1 = maximal_vclosed_subset(&square(-6, 1, 2), &f, DEFAULT_VOLUME_LIMIT).unwrap();
        assert!(c1.is_safe(&lv(&[0, 0])));
        let c0 = maximal_vclosed_subset(&square(-6, 0, 2), &f, DEFAULT_VOLUME_LIMIT).unwrap();
        assert!(!c0.is_safe(&lv(&[0, 0])));
        c0.validate().unwrap();
        c1.validate().unwrap();
    }

    #[test]
    fn single_point_window_is_empty() {
        let f = canonical_family(3).unwrap();
        let c = maximal_vclosed_subset(&square(0, 0, 3), &f, DEFAULT_VOLUME_LIMIT).unwrap();
        assert_eq!(c.safe_size(), 0);
    }

    #[test]
    fn volume_limit() {
        let f = canonical_family(3).unwrap();
        let e = maximal_vclosed_subset(&square(-10, 10, 3), &f, 100).unwrap_err();
        assert!(matches!(e, Error::VolumeLimit { .. }));
    }

    #[test]
    fn region_must_hold_origin() {
        let f = canonical_family(2).unwrap();
        let e = verdict(&GameRegion::uniform(2, -1), &f, None, DEFAULT_VOLUME_LIMIT).unwrap_err();
        assert_eq!(e, Error::RegionExcludesOrigin);
    }

    #[test]
    fn small_verdicts() {
        let f2 = canonical_family(2).unwrap();
        let v = |f: &VectorFamily, m| {
            verdict(&GameRegion::uniform(f.dim(), m), f, None, DEFAULT_VOLUME_LIMIT)
                .unwrap()
                .chooser_wins()
        };
        assert!(v(&f2, 1));
        assert!(!v(&f2, 0));
        let f3 = canonical_family(3).unwrap();
        assert!(v(&f3, 1));
        assert!(!v(&f3, 0));
    }

    #[test]
    fn rank_pusher_at_origin() {
        let f = canonical_family(2).unwrap();
        let region = GameRegion::uniform(2, 0);
        let vd = verdict(&region, &f, None, DEFAULT_VOLUME_LIMIT).unwrap();
        let cert = vd.certificate();
        let mut p = RankPusher::new(cert, &region);
        let origin = LatticeVector::zeros(2);
        let PusherMove::Offer(j) = p.offer(&origin).unwrap() else { panic!("expected offer") };
        let r0 = cert.rank(&origin).unwrap();
        let v = &f.members()[j];
        for nb in [&origin + v, &origin - v] {
            assert!(cert.rank(&nb).is_none_or(|r| r < r0));
        }
        assert_eq!(p.offer(&lv(&[1, 0])).unwrap(), PusherMove::GameOver);
    }

    #[test]
    fn rank_pusher_refuses_safe_points() {
        let f = canonical_family(2).unwrap();
        let region = GameRegion::uniform(2, 1);
        let vd = verdict(&region, &f, None, DEFAULT_VOLUME_LIMIT).unwrap();
        let mut p = RankPusher::new(vd.certificate(), &region);
        assert!(matches!(p.offer(&LatticeVector::zeros(2)), Err(Error::NoWinningMove(_))));
    }

    #[test]
    fn subset_chooser_toggles() {
        let f = canonical_family(3).unwrap();
        let mut c = SubsetChooser::new(&f, LatticeVector::zeros(3), &[]).unwrap();
        assert_eq!(c.respond_index(2).unwrap(), Sign::Plus);
        assert_eq!(c.subset(), vec![2]);
        assert_eq!(c.respond_index(2).unwrap(), Sign::Minus);
        assert!(c.subset().is_empty());
        assert!(matches!(c.respond_vector(&lv(&[1, 0, 0])), Err(Error::NotInFamily(_))));
    }

    #[test]
    fn zero_rounds() {
        let f = canonical_family(2).unwrap();
        let region = GameRegion::uniform(2, 1);
        let mut c = SubsetChooser::new(&f, lv(&[-1, -1]), &[0]).unwrap();
        let mut p = RandomPusher::new(f.len(), 1);
        let t = simulate(&region, &f, &mut c, &mut p, 0).unwrap();
        assert!(t.rounds.is_empty());
        assert_eq!(t.final_position(), &LatticeVector::zeros(2));
        assert_eq!(t.outcome, Outcome::Survived { rounds: 0 });
    }

    #[test]
    fn window_below_keeps_origin_margin() {
        let w = Window::below(&GameRegion::uniform(2, 50), 18).unwrap();
        assert_eq!(w.lo(), &[-18, -18]);
        let w = Window::below(&GameRegion::uniform(2, 3), 18).unwrap();
        assert_eq!(w.lo(), &[-15, -15]);
    }
}
