//! Sign assignments over the canonical family and its middle layer.
//!
//! The even case reduces to signing the middle layer V₀ so that its signed
//! sum is a prescribed defect (zero, or the +3/-1 pattern when n is a power
//! of two). Small n go through the rotation-orbit decomposition of V₀ ∪ -V₀
//! and a backtracking search; large n use a pair system for local
//! adjustments, a partial coloring for everything else, and a final exact
//! correction from the pairs.

mod fixtures;
mod middle;
mod odd;
mod orbit;
mod pairs;
mod partial;
mod search;
mod translate;

pub use fixtures::{reference_table, reference_tables, verify_fixture, FixtureCheck, REFERENCE_DIMS};
pub use middle::{balance_middle, middle_layer, pow2_defect, BalanceMethod, MiddleBalance};
pub use odd::{majority_sign, odd_signs, OddSigns};
pub use orbit::{orbit_decompose, v0_pm, Orbit};
pub use pairs::{express_in_pairs, greedy_pairs, pair_bound_holds, PairEntry, PairSystem};
pub use partial::{partial_color, PartialColoring};
pub use search::{search_signs, SearchStats, DFS_NODE_BUDGET};
pub use translate::{chooser_translate, ChooserTranslate};

use crate::lattice::LatticeVector;

/// v or -v, whichever has first nonzero coordinate positive, and the sign
/// relating them (v = sign * canonical).
pub(crate) fn canonical_form(v: &LatticeVector) -> (LatticeVector, i64) {
    let lead = v.coords().iter().find(|&&x| x != 0).copied().unwrap_or(1);
    if lead > 0 {
        (v.clone(), 1)
    } else {
        (-v, -1)
    }
}
