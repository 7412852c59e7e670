//! Exact brute-force references (discrepancy, hereditary discrepancy,
//! `L_p` discrepancy, determinant bounds) for validating γ₂ bounds on small
//! instances.

mod coloring;
mod compose;
mod detlb;
mod report;

pub use coloring::{
    apply, disc_exact, disc_p_exact, herdisc_exact, ColoringResult, HerdiscResult, NormKind, DISC_CAP,
    DISC_P_CAP, HERDISC_CAP,
};
pub use compose::{compose_bounds, ComposedBound, Composition};
pub use detlb::{
    binomial, detlb2_exact, detlb2_term, detlb2_work, detlb_bucketing, detlb_exact, detlb_work,
    BucketingWitness, DetWitness, DETLB_BUDGET,
};
pub use report::{BoundsConfig, BoundsReport};
