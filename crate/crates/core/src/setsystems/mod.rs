//! Set systems and their algebra: constructors for the classical families,
//! union, product, restriction and canonical (dyadic) decompositions.

mod canonical;
pub mod constructors;
mod maximal_ap;
mod system;

pub use canonical::{anchored_box_decomposition, canonical_decomposition, CanonicalInterval};
pub use constructors::{
    arithmetic_progressions, arithmetic_progressions_with_cap, disjoint_union, grid_anchored,
    initial_segments, k_permutations, power_set, product, restrict, subcubes, union,
    DEFAULT_AP_CAP, DEFAULT_GROUND_CAP,
};
pub use maximal_ap::{maximal_aps, MaximalAps, MAXIMAL_AP_CAP};
pub use system::SetSystem;
