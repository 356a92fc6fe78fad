//! Balancing games G(V, K) over finite vector families.
//!
//! The crate covers the exact lattice primitives (subset-sum sets P(V),
//! zonotope vertices, the middle-layer lattice), a window solver for the
//! game built on the maximal V-closed subset, the closed-form critical
//! thresholds for the canonical ±1 family, the sign-assignment
//! constructions behind Chooser's strategy, translate witnesses for finite
//! V-closed sets, and balanced colorings of the m-subsets of a 2m-set.

pub mod balance;
pub mod coloring;
pub mod error;
pub mod exact;
pub mod game;
pub mod io;
pub mod lattice;
pub mod sign;
pub mod threshold;
pub mod witness;

pub use error::{Error, Result};
pub use lattice::{
    canonical_family, center, enumerate_psum, family_sum, family_width, lattice_member,
    zonotope_vertex, HalfVector, LatticeVector, PointSet, RationalVector, VectorFamily,
};
pub use sign::{Sign, SignAssignment};
pub use balance::{balance_middle, chooser_translate, middle_layer, odd_signs, ChooserTranslate, MiddleBalance};
pub use coloring::{color_msets, verify_coloring, Coloring, ColoringReport};
pub use game::{maximal_vclosed_subset, verdict, GameRegion, SafeSetCertificate, Verdict, Window};
pub use threshold::{critical_M, r_direct, r_value, ThresholdReport};
pub use witness::{extreme_points, exposed_normal, translate_witness, WitnessCertificate};
