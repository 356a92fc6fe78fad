use thiserror::Error;

use crate::lattice::LatticeVector;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("value out of exact range: {0}")]
    Range(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("point set exceeded {cap} points while adding member #{member_index}")]
    SizeLimit { cap: usize, member_index: usize },

    #[error("degenerate normal: zero dot product with members {members:?}")]
    DegenerateNormal { members: Vec<usize> },

    #[error("window volume {volume} exceeds limit {limit}")]
    VolumeLimit { volume: u128, limit: u128 },

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("region excludes the origin")]
    RegionExcludesOrigin,

    #[error("vector {0} is not a member of the family")]
    NotInFamily(LatticeVector),

    #[error("no winning move: position {0} lies in the safe set")]
    NoWinningMove(LatticeVector),

    #[error("position {0} lies outside the solved window")]
    OutsideWindow(LatticeVector),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("target is not expressible: {0}")]
    NotExpressible(String),

    #[error("no sign assignment reaches the target")]
    Unsatisfiable,

    #[error("construction failed: {0}")]
    ConstructionFailed(String),

    #[error("set is not V-closed: t = {t}, v = {v}")]
    NotVClosed { t: LatticeVector, v: LatticeVector },

    #[error("point {0} is not an extreme point of the hull")]
    NotExtreme(LatticeVector),

    #[error("translate containment failed at {point}: contradicts the translate theorem")]
    TheoremContradiction { point: LatticeVector },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("input error: {0}")]
    Input(String),
}
